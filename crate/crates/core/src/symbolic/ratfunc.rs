//! Rational functions: quotients of Laurent polynomials kept in a reduced
//! canonical form.
//!
//! Reduction removes monomial content, divides numerator and denominator by
//! their polynomial gcd and scales the denominator to lexicographic leading
//! coefficient 1. Equality is decided by cross-multiplication.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::mgcd::poly_gcd;
use super::poly::LaurentPoly;
use super::scalar::{Gaussian, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RationalFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunc {
    /// `num / den` in canonical form.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        Ok(Self::unreduced(num, den)?.normalize())
    }

    /// `num / den` as given, without reduction.
    pub fn unreduced(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (num, den) = LaurentPoly::aligned(&num, &den);
        Ok(RationalFunc { num, den })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let den = LaurentPoly::one(p.vars());
        RationalFunc { num: p, den }.normalize()
    }

    pub fn constant(vars: &[impl AsRef<str>], c: Rational) -> Self {
        Self::from_poly(LaurentPoly::constant(vars, c))
    }

    pub fn zero(vars: &[impl AsRef<str>]) -> Self {
        Self::constant(vars, Rational::zero())
    }

    pub fn one(vars: &[impl AsRef<str>]) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &[impl AsRef<str>], name: &str) -> Result<Self> {
        Ok(Self::from_poly(LaurentPoly::var(vars, name)?))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn vars(&self) -> &[String] {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value if the function is constant. Only reliable on reduced values.
    pub fn as_constant(&self) -> Option<Rational> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// The canonical representative. Idempotent.
    pub fn normalize(&self) -> Self {
        let vars = self.num.vars().to_vec();
        if self.num.is_zero() {
            return RationalFunc { num: LaurentPoly::zero(&vars), den: LaurentPoly::one(&vars) };
        }
        // monomial content
        let mn = self.num.min_exponents();
        let md = self.den.min_exponents();
        let mut num_shift: Vec<i64> = mn.iter().map(|x| -x).collect();
        let mut den_shift: Vec<i64> = md.iter().map(|x| -x).collect();
        for i in 0..vars.len() {
            let e = mn[i] - md[i];
            if e > 0 {
                num_shift[i] += e;
            } else {
                den_shift[i] -= e;
            }
        }
        let mut num = self.num.shift(&num_shift);
        let mut den = self.den.shift(&den_shift);

        let mut used = num.used_vars();
        for v in den.used_vars() {
            if !used.contains(&v) {
                used.push(v);
            }
        }
        if used.len() == 1 {
            let v = used[0];
            let (un, ud) = (num.to_univariate(v).unwrap(), den.to_univariate(v).unwrap());
            let g = un.gcd(&ud);
            if g.degree().unwrap_or(0) > 0 {
                num = LaurentPoly::from_univariate(&vars, v, &un.div_rem(&g).0);
                den = LaurentPoly::from_univariate(&vars, v, &ud.div_rem(&g).0);
            }
        } else if used.len() > 1 && den.as_constant().is_none() && num.as_constant().is_none() {
            let g = poly_gcd(&num, &den);
            if g.as_constant().is_none() {
                num = num.div_exact(&g).expect("gcd divides");
                den = den.div_exact(&g).expect("gcd divides");
            }
        }
        let lead = den.leading_term().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunc { num, den }
    }

    pub fn with_vars(&self, vars: &[String]) -> Result<Self> {
        Ok(RationalFunc { num: self.num.with_vars(vars)?, den: self.den.with_vars(vars)? })
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = u32::try_from(e.unsigned_abs())
            .map_err(|_| Error::InvalidInput(format!("exponent {e} too large")))?;
        Ok(RationalFunc { num: base.num.pow(k), den: base.den.pow(k) }.normalize())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalFunc { num: self.num.scale(c), den: self.den.clone() }.normalize()
    }

    /// Quotient-rule derivative with respect to `name`.
    pub fn partial(&self, name: &str) -> Result<Self> {
        let dn = self.num.partial(name)?;
        let dd = self.den.partial(name)?;
        if dd.is_zero() {
            return Ok(RationalFunc { num: dn, den: self.den.clone() }.normalize());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        let den = &self.den * &self.den;
        Self::new(num, den)
    }

    /// Composition: every variable occurring in `self` is replaced by its
    /// binding. The result lives over the union of the bindings' variables.
    pub fn substitute(&self, binding: &BTreeMap<String, RationalFunc>) -> Result<Self> {
        let mut out_vars: Vec<String> = Vec::new();
        for v in self.vars() {
            if let Some(b) = binding.get(v) {
                out_vars = LaurentPoly::union_vars(&out_vars, b.vars());
            }
        }
        for b in binding.values() {
            out_vars = LaurentPoly::union_vars(&out_vars, b.vars());
        }
        let mut cache: HashMap<(usize, i64), RationalFunc> = HashMap::new();
        let mut eval_poly = |p: &LaurentPoly| -> Result<RationalFunc> {
            let mut acc = RationalFunc::zero(&out_vars);
            for (e, c) in p.terms() {
                let mut term = RationalFunc::constant(&out_vars, c.clone());
                for (i, &k) in e.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    let name = &p.vars()[i];
                    let factor = match cache.get(&(i, k)) {
                        Some(f) => f.clone(),
                        None => {
                            let b = binding
                                .get(name)
                                .ok_or_else(|| Error::UnboundVariable(name.clone()))?;
                            let f = b.pow(k)?;
                            cache.insert((i, k), f.clone());
                            f
                        }
                    };
                    term = &term * &factor;
                }
                acc = &acc + &term;
            }
            Ok(acc)
        };
        let n = eval_poly(&self.num)?;
        let d = eval_poly(&self.den)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        n.checked_div(&d)
    }

    /// Evaluation at rational values in variable order.
    pub fn eval(&self, values: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(values).ok_or(Error::ZeroDenominator)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.eval(values).ok_or(Error::ZeroDenominator)? / d)
    }

    pub fn eval_gaussian(&self, values: &[Gaussian]) -> Result<Gaussian> {
        let d = self.den.eval_gaussian(values).ok_or(Error::ZeroDenominator)?;
        let inv = d.inv().ok_or(Error::ZeroDenominator)?;
        Ok(&self.num.eval_gaussian(values).ok_or(Error::ZeroDenominator)? * &inv)
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.num.eval_f64(values) / self.den.eval_f64(values)
    }
}

impl PartialEq for RationalFunc {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl Eq for RationalFunc {}

impl<'a> Add<&'a RationalFunc> for &'a RationalFunc {
    type Output = RationalFunc;
    fn add(self, o: &RationalFunc) -> RationalFunc {
        if self.den.vars() == o.den.vars() && self.den == o.den {
            return RationalFunc { num: &self.num + &o.num, den: self.den.clone() }.normalize();
        }
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        RationalFunc::new(num, &self.den * &o.den).expect("product of nonzero denominators")
    }
}

impl<'a> Sub<&'a RationalFunc> for &'a RationalFunc {
    type Output = RationalFunc;
    fn sub(self, o: &RationalFunc) -> RationalFunc {
        self + &(-o)
    }
}

impl Neg for &RationalFunc {
    type Output = RationalFunc;
    fn neg(self) -> RationalFunc {
        RationalFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl<'a> Mul<&'a RationalFunc> for &'a RationalFunc {
    type Output = RationalFunc;
    fn mul(self, o: &RationalFunc) -> RationalFunc {
        RationalFunc::new(&self.num * &o.num, &self.den * &o.den)
            .expect("product of nonzero denominators")
    }
}

impl Add for RationalFunc {
    type Output = RationalFunc;
    fn add(self, o: RationalFunc) -> RationalFunc {
        &self + &o
    }
}

impl Sub for RationalFunc {
    type Output = RationalFunc;
    fn sub(self, o: RationalFunc) -> RationalFunc {
        &self - &o
    }
}

impl Mul for RationalFunc {
    type Output = RationalFunc;
    fn mul(self, o: RationalFunc) -> RationalFunc {
        &self * &o
    }
}

impl From<LaurentPoly> for RationalFunc {
    fn from(p: LaurentPoly) -> Self {
        RationalFunc::from_poly(p)
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
