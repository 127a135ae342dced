//! Line bundles on projective n-space presented as multiplicative 1-cocycles
//! of unit monomials on the standard affine cover.
//!
//! Convention: local trivializations satisfy `s_i = g(i,j) · s_j` on
//! `U_i ∩ U_j`, so `O(d)` has `g(i,j) = (x_j / x_i)^d` and a section of
//! `O(d)` given by a degree-`d` form `F` is `s_i = F / x_i^d`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::symbolic::{format_rational, LaurentPoly, Rational, RationalFunc};

/// `coeff · x^exponents` with a nonzero rational coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitMonomial {
    coeff: Rational,
    exponents: Vec<i64>,
}

impl UnitMonomial {
    pub fn new(coeff: Rational, exponents: Vec<i64>) -> Result<Self> {
        if coeff.is_zero() {
            return Err(Error::InvalidCocycle("zero coefficient is not a unit".into()));
        }
        Ok(UnitMonomial { coeff, exponents })
    }

    pub fn one(len: usize) -> Self {
        UnitMonomial { coeff: Rational::one(), exponents: vec![0; len] }
    }

    /// `(x_j / x_i)^d` over `len` homogeneous coordinates.
    pub fn ratio(len: usize, i: usize, j: usize, d: i64) -> Self {
        let mut e = vec![0; len];
        e[i] -= d;
        e[j] += d;
        UnitMonomial { coeff: Rational::one(), exponents: e }
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn degree(&self) -> i64 {
        self.exponents.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.exponents.iter().all(|&e| e == 0)
    }

    /// True when the exponent part is trivial (a constant unit).
    pub fn is_constant(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        UnitMonomial {
            coeff: &self.coeff * &o.coeff,
            exponents: self.exponents.iter().zip(&o.exponents).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inv(&self) -> Self {
        UnitMonomial { coeff: self.coeff.recip(), exponents: self.exponents.iter().map(|e| -e).collect() }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        UnitMonomial {
            coeff: num_traits::pow::Pow::pow(&base.coeff, k.unsigned_abs() as u32),
            exponents: base.exponents.iter().map(|e| e * k.abs()).collect(),
        }
    }

    /// Reads a monomial rational function over `vars`.
    pub fn from_rational_func(f: &RationalFunc, vars: &[String]) -> Result<Self> {
        let f = f.with_vars(vars)?;
        let (ne, nc) = f
            .num()
            .as_monomial()
            .ok_or_else(|| Error::InvalidCocycle(format!("{f} is not a monomial")))?;
        let (de, dc) = f
            .den()
            .as_monomial()
            .ok_or_else(|| Error::InvalidCocycle(format!("{f} is not a monomial")))?;
        Self::new(nc / dc, ne.iter().zip(de).map(|(a, b)| a - b).collect())
    }

    pub fn to_rational_func(&self, vars: &[String]) -> RationalFunc {
        let p = LaurentPoly::monomial(vars, self.exponents.clone(), self.coeff.clone())
            .expect("one exponent per variable");
        RationalFunc::from_poly(p)
    }

    pub fn format_with(&self, vars: &[String]) -> String {
        let mono: Vec<String> = self
            .exponents
            .iter()
            .zip(vars)
            .filter(|(&e, _)| e != 0)
            .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        match (self.coeff.is_one(), mono.is_empty()) {
            (_, true) => format_rational(&self.coeff),
            (true, false) => mono.join("*"),
            (false, false) => format!("{}*{}", format_rational(&self.coeff), mono.join("*")),
        }
    }
}

/// Homogeneous coordinate names `x0..xn`.
pub fn homogeneous_vars(n: usize) -> Vec<String> {
    (0..=n).map(|i| format!("x{i}")).collect()
}

/// Transition functions on every ordered pair of distinct charts of the
/// standard cover of `P^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialCocycle {
    n: usize,
    g: BTreeMap<(usize, usize), UnitMonomial>,
}

impl MonomialCocycle {
    /// Validates shape: every ordered pair present, exponent vectors of
    /// length `n+1`, total degree zero. Does not check the cocycle identities.
    pub fn new(n: usize, g: BTreeMap<(usize, usize), UnitMonomial>) -> Result<Self> {
        for i in 0..=n {
            for j in 0..=n {
                if i == j {
                    continue;
                }
                let m = g
                    .get(&(i, j))
                    .ok_or_else(|| Error::InvalidCocycle(format!("missing transition ({i},{j})")))?;
                if m.exponents.len() != n + 1 {
                    return Err(Error::InvalidCocycle(format!(
                        "transition ({i},{j}) has {} exponents, expected {}",
                        m.exponents.len(),
                        n + 1
                    )));
                }
                if m.degree() != 0 {
                    return Err(Error::InvalidCocycle(format!(
                        "transition ({i},{j}) has degree {}, not a function on the overlap",
                        m.degree()
                    )));
                }
            }
        }
        if let Some(&(i, j)) = g.keys().find(|&&(i, j)| i == j || i > n || j > n) {
            return Err(Error::InvalidCocycle(format!("unexpected chart pair ({i},{j})")));
        }
        Ok(MonomialCocycle { n, g })
    }

    /// Builds from the transitions with `i < j`, filling `g(j,i) = g(i,j)^{-1}`.
    pub fn from_upper(n: usize, upper: BTreeMap<(usize, usize), UnitMonomial>) -> Result<Self> {
        let mut g = BTreeMap::new();
        for ((i, j), m) in upper {
            if i >= j {
                return Err(Error::InvalidCocycle(format!("pair ({i},{j}) is not increasing")));
            }
            g.insert((j, i), m.inv());
            g.insert((i, j), m);
        }
        Self::new(n, g)
    }

    pub fn trivial(n: usize) -> Self {
        Self::standard(n, 0)
    }

    /// `O(d)`: `g(i,j) = (x_j / x_i)^d`.
    pub fn standard(n: usize, d: i64) -> Self {
        let mut g = BTreeMap::new();
        for i in 0..=n {
            for j in 0..=n {
                if i != j {
                    g.insert((i, j), UnitMonomial::ratio(n + 1, i, j, d));
                }
            }
        }
        MonomialCocycle { n, g }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&UnitMonomial> {
        self.g.get(&(i, j))
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&(usize, usize), &UnitMonomial)> {
        self.g.iter()
    }

    /// `g(i,j) g(j,i) = 1` and `g(i,j) g(j,k) g(k,i) = 1`.
    pub fn check_cocycle(&self) -> bool {
        let c = self.n + 1;
        for i in 0..c {
            for j in 0..c {
                if i == j {
                    continue;
                }
                if !self.g[&(i, j)].mul(&self.g[&(j, i)]).is_one() {
                    return false;
                }
                for k in 0..c {
                    if k == i || k == j {
                        continue;
                    }
                    if !self.g[&(i, j)].mul(&self.g[&(j, k)]).mul(&self.g[&(k, i)]).is_one() {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn tensor(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch(format!("cocycles on P^{} and P^{}", self.n, o.n)));
        }
        let g = self.g.iter().map(|(k, m)| (*k, m.mul(&o.g[k]))).collect();
        Ok(MonomialCocycle { n: self.n, g })
    }

    pub fn dual(&self) -> Self {
        MonomialCocycle { n: self.n, g: self.g.iter().map(|(k, m)| (*k, m.inv())).collect() }
    }

    /// `k`-th tensor power (negative `k` uses the dual).
    pub fn power(&self, k: i64) -> Self {
        MonomialCocycle { n: self.n, g: self.g.iter().map(|(key, m)| (*key, m.pow(k))).collect() }
    }

    /// The `d` with this cocycle equivalent to `O(d)`.
    ///
    /// Monomial units on the affine charts are constants, so the cocycle is
    /// equivalent to `O(d)` exactly when `g(i,j) = (c_i / c_j) (x_j/x_i)^d`
    /// for constants `c_i`. `d` is read from `g(0,1)`, the exponent shape is
    /// checked on every pair, and the constants are solved with `c_0 = 1`.
    pub fn equivalence_degree(&self) -> Result<i64> {
        if !self.check_cocycle() {
            return Err(Error::NotEquivalent("cocycle identities fail".into()));
        }
        if self.n == 0 {
            return Ok(0);
        }
        let c = self.n + 1;
        let d = self.g[&(0, 1)].exponents[1];
        for i in 0..c {
            for j in 0..c {
                if i != j && self.g[&(i, j)].exponents != UnitMonomial::ratio(c, i, j, d).exponents {
                    return Err(Error::NotEquivalent(format!(
                        "transition ({i},{j}) is not a constant multiple of (x{j}/x{i})^{d}"
                    )));
                }
            }
        }
        let consts: Vec<Rational> = (0..c)
            .map(|j| if j == 0 { Rational::one() } else { self.g[&(0, j)].coeff.recip() })
            .collect();
        for i in 0..c {
            for j in 0..c {
                if i != j && self.g[&(i, j)].coeff != &consts[i] / &consts[j] {
                    return Err(Error::NotEquivalent(format!("constants at ({i},{j}) are not a coboundary")));
                }
            }
        }
        Ok(d)
    }
}

impl fmt::Display for MonomialCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = homogeneous_vars(self.n);
        for ((i, j), m) in &self.g {
            if i < j {
                writeln!(f, "g({i},{j}) = {}", m.format_with(&vars))?;
            }
        }
        Ok(())
    }
}
