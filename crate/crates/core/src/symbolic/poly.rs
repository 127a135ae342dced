//! Sparse multivariate Laurent polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::scalar::{format_rational, rational_to_f64, Gaussian, Rational};
use super::univariate::UniPoly;
use crate::error::{Error, Result};

pub type Exponents = Vec<i64>;

/// A Laurent polynomial over an ordered list of named variables.
///
/// Terms are kept in a `BTreeMap` keyed by exponent vector, so iteration is
/// in lexicographic order of exponents and the representation is canonical
/// for a fixed variable list. No stored coefficient is zero.
///
/// Binary operations on polynomials over different variable lists first
/// extend both to the union of the lists (left operand's variables first).
#[derive(Clone, Debug)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, Rational>,
}

impl LaurentPoly {
    pub fn zero(vars: &[impl AsRef<str>]) -> Self {
        LaurentPoly {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[impl AsRef<str>], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            let n = p.vars.len();
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    pub fn one(vars: &[impl AsRef<str>]) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(vars: &[impl AsRef<str>], name: &str) -> Result<Self> {
        let mut p = Self::zero(vars);
        let idx = p.var_index(name)?;
        let mut e = vec![0; p.vars.len()];
        e[idx] = 1;
        p.terms.insert(e, Rational::one());
        Ok(p)
    }

    pub fn monomial(vars: &[impl AsRef<str>], exponents: Exponents, c: Rational) -> Result<Self> {
        Self::from_terms(vars, [(exponents, c)])
    }

    pub fn from_terms(
        vars: &[impl AsRef<str>],
        terms: impl IntoIterator<Item = (Exponents, Rational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != p.vars.len() {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of length {} over {} variables",
                    e.len(),
                    p.vars.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Exponents, &Rational)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().unwrap())
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Indices of variables that occur with a nonzero exponent.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] != 0))
            .collect()
    }

    pub fn min_exponents(&self) -> Exponents {
        let mut m = vec![i64::MAX; self.vars.len()];
        for e in self.terms.keys() {
            for (mi, &ei) in m.iter_mut().zip(e) {
                *mi = (*mi).min(ei);
            }
        }
        if self.terms.is_empty() {
            m.iter_mut().for_each(|x| *x = 0);
        }
        m
    }

    pub fn max_exponents(&self) -> Exponents {
        let mut m = vec![i64::MIN; self.vars.len()];
        for e in self.terms.keys() {
            for (mi, &ei) in m.iter_mut().zip(e) {
                *mi = (*mi).max(ei);
            }
        }
        if self.terms.is_empty() {
            m.iter_mut().for_each(|x| *x = 0);
        }
        m
    }

    /// `Some(d)` if every term has total degree `d`; the zero polynomial is
    /// homogeneous of every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<i64>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&x| x < 0))
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable this polynomial actually uses.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self> {
        if vars == self.vars.as_slice() {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match vars.iter().position(|w| w == v) {
                Some(j) => map.push(Some(j)),
                None if self.terms.keys().all(|e| e[i] == 0) => map.push(None),
                None => return Err(Error::UnknownVariable(v.clone())),
            }
        }
        let mut out = Self::zero(vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    ne[j] = x;
                }
            }
            out.terms.insert(ne, c.clone());
        }
        Ok(out)
    }

    /// Union of two variable lists, `a` first.
    pub fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
        let mut v = a.to_vec();
        for x in b {
            if !v.contains(x) {
                v.push(x.clone());
            }
        }
        v
    }

    /// Both operands over a common variable list.
    pub fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        if a.vars == b.vars {
            return (a.clone(), b.clone());
        }
        let vars = Self::union_vars(&a.vars, &b.vars);
        (
            a.with_vars(&vars).expect("superset of variables"),
            b.with_vars(&vars).expect("superset of variables"),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `name`.
    pub fn partial(&self, name: &str) -> Result<Self> {
        let idx = self.var_index(name)?;
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[idx] != 0 {
                let mut ne = e.clone();
                ne[idx] -= 1;
                out.add_term(ne, c * Rational::from_integer(e[idx].into()));
            }
        }
        Ok(out)
    }

    /// Exact quotient `self / d` in the Laurent ring, if one exists.
    ///
    /// Lexicographic long division; the quotient's exponents are confined to
    /// the box forced by per-variable degree bounds, which makes it terminate.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (num, d) = Self::aligned(self, d);
        if num.is_zero() {
            return Some(num);
        }
        let lo: Exponents = num
            .min_exponents()
            .iter()
            .zip(d.min_exponents())
            .map(|(a, b)| a - b)
            .collect();
        let hi: Exponents = num
            .max_exponents()
            .iter()
            .zip(d.max_exponents())
            .map(|(a, b)| a - b)
            .collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return None;
        }
        let (dlead_e, dlead_c) = d.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = num.clone();
        let mut quot = Self::zero(&num.vars);
        while let Some((re, rc)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: Exponents = re.iter().zip(&dlead_e).map(|(a, b)| a - b).collect();
            if qe.iter().zip(lo.iter().zip(&hi)).any(|(x, (l, h))| x < l || x > h) {
                return None;
            }
            let qc = rc / &dlead_c;
            let step = d.shift(&qe).scale(&qc);
            rem = &rem - &step;
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Dense univariate view in variable `idx`, if no other variable occurs
    /// and all exponents are nonnegative.
    pub fn to_univariate(&self, idx: usize) -> Option<UniPoly> {
        let mut coeffs = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &x)| (i != idx && x != 0) || x < 0) {
                return None;
            }
            let k = e[idx] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] = c.clone();
        }
        Some(UniPoly::from_coeffs(coeffs))
    }

    pub fn from_univariate(vars: &[String], idx: usize, p: &UniPoly) -> Self {
        let mut out = Self::zero(vars);
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[idx] = k as i64;
            out.add_term(e, c.clone());
        }
        out
    }

    /// Evaluation at rational values given in variable order. `None` when a
    /// negative power of zero is required.
    pub fn eval(&self, values: &[Rational]) -> Option<Rational> {
        assert_eq!(values.len(), self.vars.len(), "one value per variable");
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in values.iter().zip(e) {
                if k < 0 && v.is_zero() {
                    return None;
                }
                t *= num_traits::pow::Pow::pow(v, k as i32);
            }
            acc += t;
        }
        Some(acc)
    }

    pub fn eval_gaussian(&self, values: &[Gaussian]) -> Option<Gaussian> {
        assert_eq!(values.len(), self.vars.len(), "one value per variable");
        let mut acc = Gaussian::zero();
        for (e, c) in &self.terms {
            let mut t = Gaussian::real(c.clone());
            for (v, &k) in values.iter().zip(e) {
                let p = if k >= 0 { v.pow(k as u64) } else { v.inv()?.pow(k.unsigned_abs()) };
                t = &t * &p;
            }
            acc = &acc + &t;
        }
        Some(acc)
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                values
                    .iter()
                    .zip(e)
                    .fold(rational_to_f64(c), |t, (v, &k)| t * v.powi(k as i32))
            })
            .sum()
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        (self - other).is_zero()
    }
}

impl Eq for LaurentPoly {}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let (mut a, b) = if self.vars == o.vars {
            (self.clone(), std::borrow::Cow::Borrowed(o))
        } else {
            let (a, b) = LaurentPoly::aligned(self, o);
            (a, std::borrow::Cow::Owned(b))
        };
        for (e, c) in b.terms.iter() {
            a.add_term(e.clone(), c.clone());
        }
        a
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &(-o)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let (a, b) = if self.vars == o.vars {
            (std::borrow::Cow::Borrowed(self), std::borrow::Cow::Borrowed(o))
        } else {
            let (a, b) = LaurentPoly::aligned(self, o);
            (std::borrow::Cow::Owned(a), std::borrow::Cow::Owned(b))
        };
        let mut out = LaurentPoly::zero(&a.vars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: LaurentPoly) -> LaurentPoly {
        &self + &o
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: LaurentPoly) -> LaurentPoly {
        &self - &o
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: LaurentPoly) -> LaurentPoly {
        &self * &o
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(&x, _)| x != 0)
                .map(|(&x, v)| if x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if mono.is_empty() {
                write!(f, "{}", fmt_coeff(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_coeff(&abs), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

fn fmt_coeff(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("({})", format_rational(c))
    }
}
