//! Multivariate polynomial gcd over the rationals. Inputs must have
//! nonnegative exponents.
//!
//! Coprimality is first tested by specialization, then a heuristic integer
//! gcd (evaluate at a large integer, recurse, rebuild by balanced base-`xi`
//! digits, verify by division) is tried, and recursive primitive
//! pseudo-remainder sequences are the fallback.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::LaurentPoly;
use super::scalar::Rational;
use super::univariate::UniPoly;

fn degree_in(p: &LaurentPoly, v: usize) -> i64 {
    p.terms().map(|(e, _)| e[v]).max().unwrap_or(0)
}

fn uses(p: &LaurentPoly, v: usize) -> bool {
    p.terms().any(|(e, _)| e[v] != 0)
}

/// Coefficients in `x_v`, indexed by power, each free of `x_v`.
fn coeffs_in(p: &LaurentPoly, v: usize) -> Vec<LaurentPoly> {
    let vars = p.vars().to_vec();
    let mut out = vec![LaurentPoly::zero(&vars); degree_in(p, v) as usize + 1];
    for (e, c) in p.terms() {
        let mut f = e.clone();
        f[v] = 0;
        out[e[v] as usize] = &out[e[v] as usize] + &LaurentPoly::monomial(&vars, f, c.clone()).expect("same arity");
    }
    out
}

fn leading_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    coeffs_in(p, v).pop().expect("nonzero")
}

fn power_of(vars: &[String], v: usize, k: i64) -> Vec<i64> {
    let mut e = vec![0; vars.len()];
    e[v] = k;
    e
}

/// Scales so the lexicographically leading coefficient is 1.
fn monic(p: &LaurentPoly) -> LaurentPoly {
    match p.leading_term() {
        Some((_, c)) if !c.is_one() => p.scale(&c.recip()),
        _ => p.clone(),
    }
}

fn content_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let mut g = LaurentPoly::zero(p.vars());
    for c in coeffs_in(p, v) {
        if !c.is_zero() {
            g = poly_gcd(&g, &c);
            if g.as_constant().is_some() {
                break;
            }
        }
    }
    g
}

fn primitive_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

/// Pseudo-remainder of `a` by `b` in `x_v`.
fn pseudo_rem(a: &LaurentPoly, b: &LaurentPoly, v: usize) -> LaurentPoly {
    let db = degree_in(b, v);
    let lb = leading_in(b, v);
    let vars = a.vars().to_vec();
    let mut r = a.clone();
    while !r.is_zero() && degree_in(&r, v) >= db {
        let dr = degree_in(&r, v);
        let lr = leading_in(&r, v);
        r = &(&lb * &r) - &(&lr * &b.shift(&power_of(&vars, v, dr - db)));
    }
    r
}

/// Specializes every variable except `x_v` to `point`.
fn specialize(p: &LaurentPoly, v: usize, point: &[Rational]) -> UniPoly {
    let mut coeffs = vec![Rational::from_integer(0.into()); degree_in(p, v) as usize + 1];
    for (e, c) in p.terms() {
        let mut t = c.clone();
        for (i, &k) in e.iter().enumerate() {
            if i != v && k != 0 {
                t *= num_traits::pow(point[i].clone(), k as usize);
            }
        }
        coeffs[e[v] as usize] += t;
    }
    UniPoly::from_coeffs(coeffs)
}

/// True when some specialization proves `gcd(a, b)` free of `x_v`.
///
/// If `g` divides both and the leading coefficients in `x_v` survive the
/// specialization, so does the leading coefficient of `g`, hence the
/// univariate gcd of the images has degree at least `deg_v g`.
fn free_of(a: &LaurentPoly, b: &LaurentPoly, v: usize) -> bool {
    let n = a.vars().len();
    let (da, db) = (degree_in(a, v), degree_in(b, v));
    for attempt in 0..4i64 {
        let point: Vec<Rational> =
            (0..n as i64).map(|i| Rational::from_integer((2 + 3 * i + 7 * attempt + i * i * attempt).into())).collect();
        let (sa, sb) = (specialize(a, v, &point), specialize(b, v, &point));
        if sa.degree() != Some(da as usize) || sb.degree() != Some(db as usize) {
            continue;
        }
        return sa.gcd(&sb).degree() == Some(0);
    }
    false
}

/// `p` scaled to integer coefficients with content 1.
fn integer_primitive(p: &LaurentPoly) -> LaurentPoly {
    let lcm = p.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
    let scaled = p.scale(&Rational::from_integer(lcm));
    let content = scaled.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()));
    if content.is_zero() {
        return scaled;
    }
    scaled.scale(&Rational::new(BigInt::one(), content))
}

fn max_coeff(p: &LaurentPoly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

/// Substitutes the integer `xi` for `x_v`.
fn eval_at(p: &LaurentPoly, v: usize, xi: &BigInt) -> LaurentPoly {
    let terms = p.terms().map(|(e, c)| {
        let mut f = e.clone();
        f[v] = 0;
        (f, c * Rational::from_integer(num_traits::pow(xi.clone(), e[v] as usize)))
    });
    LaurentPoly::from_terms(p.vars(), terms).expect("same arity")
}

/// Representative of `c mod xi` in `(-xi/2, xi/2]`.
fn balanced_mod(c: &BigInt, xi: &BigInt) -> BigInt {
    let r = c.mod_floor(xi);
    if &r * 2 > *xi {
        r - xi
    } else {
        r
    }
}

/// Rebuilds `sum g_k x_v^k` from its value at `x_v = xi`, coefficientwise.
fn from_digits(gamma: &LaurentPoly, v: usize, xi: &BigInt) -> LaurentPoly {
    let vars = gamma.vars().to_vec();
    let mut rest = gamma.clone();
    let mut out = LaurentPoly::zero(&vars);
    let mut k = 0;
    while !rest.is_zero() {
        let digit = LaurentPoly::from_terms(
            &vars,
            rest.terms().map(|(e, c)| (e.clone(), Rational::from_integer(balanced_mod(c.numer(), xi)))),
        )
        .expect("same arity");
        out = &out + &digit.shift(&power_of(&vars, v, k));
        rest = (&rest - &digit).scale(&Rational::new(BigInt::one(), xi.clone()));
        k += 1;
    }
    out
}

/// Divisibility in the polynomial ring, not the Laurent ring.
fn divides(g: &LaurentPoly, a: &LaurentPoly) -> bool {
    a.div_exact(g).is_some_and(|q| !q.has_negative_exponents())
}

const HEURISTIC_BITS: u64 = 2048;

/// Heuristic gcd of integer-primitive `a`, `b`; `None` when every attempt
/// fails verification.
fn heuristic_gcd(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Some(LaurentPoly::one(a.vars()));
    }
    let Some(v) = (0..a.vars().len()).find(|&i| uses(a, i) || uses(b, i)) else {
        return Some(LaurentPoly::one(a.vars()));
    };
    let mut xi: BigInt = 2 * max_coeff(a).min(max_coeff(b)) + 29;
    for _ in 0..6 {
        // Evaluation sizes compound across variables; past this, the
        // remainder sequence is cheaper.
        if xi.bits() > HEURISTIC_BITS {
            return None;
        }
        let (ea, eb) = (eval_at(a, v, &xi), eval_at(b, v, &xi));
        if !ea.is_zero() && !eb.is_zero() {
            let gamma = heuristic_gcd(&integer_primitive(&ea), &integer_primitive(&eb))?;
            // Scale gamma to the integer gcd of the images' contents.
            let ca = ea.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()));
            let cb = eb.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()));
            let gamma = gamma.scale(&Rational::from_integer(ca.gcd(&cb)));
            let g = integer_primitive(&from_digits(&gamma, v, &xi));
            if !g.is_zero() && divides(&g, a) && divides(&g, b) {
                return Some(g);
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

/// Greatest common divisor with leading coefficient 1; `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let (a, b) = LaurentPoly::aligned(a, b);
    if a.is_zero() {
        return monic(&b);
    }
    if b.is_zero() {
        return monic(&a);
    }
    let one = LaurentPoly::one(a.vars());
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return one;
    }
    let shared: Vec<usize> = (0..a.vars().len()).filter(|&i| uses(&a, i) && uses(&b, i)).collect();
    if shared.iter().all(|&i| free_of(&a, &b, i)) {
        // Free of every shared variable, and trivially of the others.
        return one;
    }
    if let Some(g) = heuristic_gcd(&integer_primitive(&a), &integer_primitive(&b)) {
        return monic(&g);
    }
    prs_gcd(&a, &b)
}

/// Primitive pseudo-remainder sequence in the first used variable, for
/// nonconstant aligned inputs.
fn prs_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let (a, b) = (a.clone(), b.clone());
    let one = LaurentPoly::one(a.vars());
    let v = (0..a.vars().len()).find(|&i| uses(&a, i) || uses(&b, i)).expect("nonconstant");
    if !uses(&a, v) {
        return poly_gcd(&a, &content_in(&b, v));
    }
    if !uses(&b, v) {
        return poly_gcd(&content_in(&a, v), &b);
    }
    let (ca, cb) = (content_in(&a, v), content_in(&b, v));
    let c = poly_gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if degree_in(&p, v) < degree_in(&q, v) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = pseudo_rem(&p, &q, v);
        if r.is_zero() {
            break primitive_in(&q, v);
        }
        if !uses(&r, v) {
            break one.clone();
        }
        p = q;
        q = primitive_in(&r, v);
    };
    monic(&(&c * &g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::int;
    use proptest::prelude::*;

    fn v(name: &str) -> LaurentPoly {
        LaurentPoly::var(&["x", "y", "z"], name).unwrap()
    }

    fn c(k: i64) -> LaurentPoly {
        LaurentPoly::constant(&["x", "y", "z"], int(k))
    }

    #[test]
    fn recovers_common_factor() {
        let f = &(&v("x") * &v("y")) + &c(1);
        let g = &v("x") - &v("z");
        let a = &(&f * &f) * &(&v("y") + &c(2));
        let b = &(&f * &g) * &c(3);
        assert_eq!(poly_gcd(&a, &b), monic(&f));
        assert_eq!(poly_gcd(&(&a * &g), &b), monic(&(&f * &g)));
    }

    #[test]
    fn coprime_inputs() {
        let a = &v("x") + &v("y");
        let b = &v("x") - &v("y");
        assert!(poly_gcd(&a, &b).as_constant().is_some());
        assert_eq!(poly_gcd(&a, &LaurentPoly::zero(&["x", "y", "z"])), a);
    }

    #[test]
    fn four_variable_common_factor() {
        let vars = ["z1", "z2", "w1", "w2"];
        let p = |terms: &[([i64; 4], i64)]| {
            LaurentPoly::from_terms(&vars, terms.iter().map(|(e, c)| (e.to_vec(), int(*c)))).unwrap()
        };
        let a = p(&[([0, 0, 0, 0], 2), ([3, 1, 2, 0], -3), ([1, 3, 0, 2], 4), ([2, 2, 3, 1], 5)]);
        let b = p(&[([0, 0, 0, 0], 1), ([1, 2, 3, 0], 3), ([2, 0, 1, 3], 4), ([3, 3, 0, 1], 5)]);
        let f = p(&[([0, 0, 0, 0], 1), ([1, 0, 1, 0], 1), ([0, 1, 0, 1], 1)]);
        assert!(poly_gcd(&a, &b).as_constant().is_some());
        assert_eq!(poly_gcd(&(&a * &f), &(&(&b * &f) * &f)), f);
        let (af, bf) = (&a * &f, &b * &f);
        let g = poly_gcd(&af, &bf);
        let (ca, cb) = (af.div_exact(&g).unwrap(), bf.div_exact(&g).unwrap());
        assert!(poly_gcd(&ca, &cb).as_constant().is_some());
    }

    fn small_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((0..3i64, 0..3i64, 0..2i64, -4..5i64), 1..4).prop_map(|ts| {
            LaurentPoly::from_terms(&["x", "y", "z"], ts.into_iter().map(|(a, b, c, k)| (vec![a, b, c], int(k))))
                .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn fast_paths_agree_with_prs(a in small_poly(), b in small_poly(), f in small_poly()) {
            let (a, b) = (&a * &f, &b * &f);
            prop_assume!(a.as_constant().is_none() && b.as_constant().is_none());
            let g = poly_gcd(&a, &b);
            prop_assert_eq!(&g, &prs_gcd(&a, &b));
            prop_assert!(divides(&g, &a) && divides(&g, &b));
        }
    }

    #[test]
    fn content_only_common_part() {
        let a = &(&v("y") + &c(1)) * &v("x");
        let b = &(&v("y") + &c(1)) * &(&v("x") + &c(5));
        assert_eq!(poly_gcd(&a, &b), &v("y") + &c(1));
    }
}
