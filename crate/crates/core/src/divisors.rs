//! Divisors on the projective line with rational support.
//!
//! Rational functions are univariate in an affine coordinate `z` on
//! `U_0 = {x0 != 0}`; the point at infinity is `x0 = 0`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::bundle::{homogeneous_vars, MonomialCocycle, UnitMonomial};
use crate::cech::TwistingSheaf;
use crate::error::{Error, Result};
use crate::symbolic::{format_rational, LaurentPoly, Rational, RationalFunc, UniPoly};

/// Name of the affine coordinate used for constructed functions.
pub const AFFINE_VAR: &str = "z";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointP1 {
    Affine(Rational),
    Infinity,
}

impl PointP1 {
    pub fn affine(r: Rational) -> Self {
        PointP1::Affine(r)
    }
}

impl fmt::Display for PointP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointP1::Affine(r) => write!(f, "{}", format_rational(r)),
            PointP1::Infinity => write!(f, "inf"),
        }
    }
}

/// Finite integer combination of points; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivisorP1 {
    support: BTreeMap<PointP1, i64>,
}

impl DivisorP1 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point(p: PointP1) -> Self {
        Self::from_terms([(p, 1)])
    }

    /// Sums repeated points and drops zero totals.
    pub fn from_terms(terms: impl IntoIterator<Item = (PointP1, i64)>) -> Self {
        let mut d = Self::zero();
        for (p, a) in terms {
            d.add_at(p, a);
        }
        d
    }

    fn add_at(&mut self, p: PointP1, a: i64) {
        let v = self.support.entry(p.clone()).or_insert(0);
        *v += a;
        if *v == 0 {
            self.support.remove(&p);
        }
    }

    pub fn coeff(&self, p: &PointP1) -> i64 {
        self.support.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PointP1, i64)> {
        self.support.iter().map(|(p, &a)| (p, a))
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.support.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.support.values().all(|&a| a >= 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut d = self.clone();
        for (p, a) in o.iter() {
            d.add_at(p.clone(), a);
        }
        d
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.iter().map(|(p, a)| (p.clone(), a * k)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }
}

impl fmt::Display for DivisorP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (p, a)) in self.iter().enumerate() {
            let sign = if a < 0 { "-" } else { "+" };
            match (k, a.abs()) {
                (0, 1) if a < 0 => write!(f, "-[{p}]")?,
                (0, 1) => write!(f, "[{p}]")?,
                (0, m) => write!(f, "{}{m}[{p}]", if a < 0 { "-" } else { "" })?,
                (_, 1) => write!(f, " {sign} [{p}]")?,
                (_, m) => write!(f, " {sign} {m}[{p}]")?,
            }
        }
        Ok(())
    }
}

/// `f = z^shift · num / den` with `num(0) != 0` and `den(0) != 0`.
struct Univariate {
    shift: i64,
    num: UniPoly,
    den: UniPoly,
}

fn univariate(f: &RationalFunc) -> Result<Univariate> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let mut used: Vec<usize> = f.num().used_vars();
    used.extend(f.den().used_vars());
    used.sort_unstable();
    used.dedup();
    if used.len() > 1 {
        return Err(Error::InvalidInput(format!("{f} is not univariate")));
    }
    let idx = used.first().copied();
    let split = |p: &LaurentPoly| -> (i64, UniPoly) {
        match idx {
            None => (0, UniPoly::from_coeffs(vec![p.as_constant().expect("constant")])),
            Some(i) => {
                let m = p.min_exponents()[i];
                let mut s = vec![0; p.vars().len()];
                s[i] = -m;
                (m, p.shift(&s).to_univariate(i).expect("no negative exponents after shift"))
            }
        }
    };
    let (mn, num) = split(f.num());
    let (md, den) = split(f.den());
    Ok(Univariate { shift: mn - md, num, den })
}

fn deg(p: &UniPoly) -> i64 {
    p.degree().unwrap_or(0) as i64
}

/// Zero (positive) or pole (negative) multiplicity of `f` at `p`.
pub fn ord_at(f: &RationalFunc, p: &PointP1) -> Result<i64> {
    let u = univariate(f)?;
    Ok(match p {
        PointP1::Affine(r) if r.is_zero() => u.shift,
        PointP1::Affine(r) => u.num.root_multiplicity(r) as i64 - u.den.root_multiplicity(r) as i64,
        PointP1::Infinity => -(u.shift + deg(&u.num) - deg(&u.den)),
    })
}

/// The divisor of zeros minus poles, including the point at infinity.
pub fn principal_divisor(f: &RationalFunc) -> Result<DivisorP1> {
    let u = univariate(f)?;
    let mut terms = vec![(PointP1::Affine(Rational::zero()), u.shift)];
    for (poly, sign) in [(&u.num, 1), (&u.den, -1)] {
        let (roots, rest) = poly.rational_roots();
        if deg(&rest) > 0 {
            return Err(Error::NonSplitPolynomial(format!("factor of degree {} without rational roots", deg(&rest))));
        }
        terms.extend(roots.into_iter().map(|(r, m)| (PointP1::Affine(r), sign * m as i64)));
    }
    terms.push((PointP1::Infinity, -(u.shift + deg(&u.num) - deg(&u.den))));
    Ok(DivisorP1::from_terms(terms))
}

/// `z - p` over `vars`.
fn linear(vars: &[String], name: &str, p: &Rational) -> RationalFunc {
    let z = LaurentPoly::var(vars, name).expect("known variable");
    RationalFunc::from_poly(&z - &LaurentPoly::constant(vars, p.clone()))
}

/// The line bundle of a divisor as an explicit cocycle on the standard cover.
#[derive(Clone, Debug)]
pub struct DivisorBundle {
    pub degree: i64,
    pub witness: MonomialCocycle,
}

/// Builds `[D]` from local defining functions: on `U_0` the function
/// `prod (z - p)^a_p` and on `U_1` the function
/// `w^a_inf prod_{p != 0} (w - 1/p)^a_p` with `w = 1/z`. The transition is
/// their quotient rewritten in homogeneous coordinates, one point at a time.
pub fn bundle_of_divisor(d: &DivisorP1) -> Result<DivisorBundle> {
    let hv = homogeneous_vars(1);
    let x0 = RationalFunc::var(&hv, "x0")?;
    let x1 = RationalFunc::var(&hv, "x1")?;
    let z_vars = [AFFINE_VAR.to_string()];
    let w_vars = ["w".to_string()];
    let to_hom_z: BTreeMap<String, RationalFunc> =
        [(AFFINE_VAR.to_string(), x1.checked_div(&x0)?)].into_iter().collect();
    let to_hom_w: BTreeMap<String, RationalFunc> = [("w".to_string(), x0.checked_div(&x1)?)].into_iter().collect();

    let mut g = UnitMonomial::one(2);
    for (p, a) in d.iter() {
        let (f0, f1) = match p {
            PointP1::Affine(r) if r.is_zero() => (linear(&z_vars, AFFINE_VAR, r), RationalFunc::one(&w_vars)),
            PointP1::Affine(r) => (linear(&z_vars, AFFINE_VAR, r), linear(&w_vars, "w", &r.recip())),
            PointP1::Infinity => (RationalFunc::one(&z_vars), RationalFunc::var(&w_vars, "w")?),
        };
        let ratio = f0.substitute(&to_hom_z)?.checked_div(&f1.substitute(&to_hom_w)?)?;
        g = g.mul(&monomial_quotient(&ratio, &hv)?.pow(a));
    }
    let witness = MonomialCocycle::from_upper(1, [((0, 1), g)].into_iter().collect())?;
    let degree = witness.equivalence_degree()?;
    Ok(DivisorBundle { degree, witness })
}

/// Reads `num / den` as a single monomial via exact Laurent division.
fn monomial_quotient(f: &RationalFunc, vars: &[String]) -> Result<UnitMonomial> {
    let f = f.with_vars(vars)?;
    let q = f
        .num()
        .div_exact(f.den())
        .ok_or_else(|| Error::InvalidCocycle(format!("{f} is not a Laurent monomial")))?;
    let (e, c) = q.as_monomial().ok_or_else(|| Error::InvalidCocycle(format!("{q} is not a monomial")))?;
    UnitMonomial::new(c.clone(), e.clone())
}

/// A basis of `L(D)`.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    pub divisor: DivisorP1,
    pub basis: Vec<RationalFunc>,
}

impl SectionSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Basis `N z^k / Q` for `k = deg D, ..., 0`, where `Q` collects the allowed
/// affine poles and `N` the forced affine zeros.
pub fn section_space(d: &DivisorP1) -> SectionSpace {
    let vars = [AFFINE_VAR.to_string()];
    let mut q = RationalFunc::one(&vars);
    let mut n = RationalFunc::one(&vars);
    for (p, a) in d.iter() {
        if let PointP1::Affine(r) = p {
            let lin = linear(&vars, AFFINE_VAR, r);
            if a > 0 {
                q = &q * &lin.pow(a).expect("nonnegative power");
            } else {
                n = &n * &lin.pow(-a).expect("nonnegative power");
            }
        }
    }
    let base = n.checked_div(&q).expect("nonzero denominator");
    let z = RationalFunc::var(&vars, AFFINE_VAR).expect("known variable");
    let top = d.degree();
    let basis = (0..=top).rev().map(|k| &base * &z.pow(k).expect("power")).collect();
    SectionSpace { divisor: d.clone(), basis }
}

/// `dim H^0(P^1, O(deg D))` computed by the Čech engine.
pub fn cech_section_dim(d: &DivisorP1) -> usize {
    TwistingSheaf::new(1, d.degree()).expect("n = 1").cohomology_dim(0)
}

/// An `f` with `D - D' = (f)`, if one exists.
pub fn equivalence_witness(d: &DivisorP1, other: &DivisorP1) -> Option<RationalFunc> {
    let diff = d.sub(other);
    if diff.degree() != 0 {
        return None;
    }
    let vars = [AFFINE_VAR.to_string()];
    let mut f = RationalFunc::one(&vars);
    for (p, a) in diff.iter() {
        if let PointP1::Affine(r) = p {
            f = &f * &linear(&vars, AFFINE_VAR, r).pow(a).expect("nonzero base");
        }
    }
    match principal_divisor(&f) {
        Ok(div) if div == diff => Some(f),
        _ => None,
    }
}

pub fn linearly_equivalent(d: &DivisorP1, other: &DivisorP1) -> bool {
    equivalence_witness(d, other).is_some()
}

/// `D + (f)` is effective.
pub fn in_section_space(d: &DivisorP1, f: &RationalFunc) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    Ok(d.add(&principal_divisor(f)?).is_effective())
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorTerm {
    pub point: String,
    pub coefficient: i64,
}

impl DivisorP1 {
    pub fn terms(&self) -> Vec<DivisorTerm> {
        self.iter().map(|(p, a)| DivisorTerm { point: p.to_string(), coefficient: a }).collect()
    }
}

/// Parses `"inf"` or a rational `"p/q"`.
pub fn parse_point(s: &str) -> Result<PointP1> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t == "∞" {
        return Ok(PointP1::Infinity);
    }
    crate::symbolic::parse_rational(t).map(PointP1::Affine)
}

impl From<Rational> for PointP1 {
    fn from(r: Rational) -> Self {
        PointP1::Affine(r)
    }
}
