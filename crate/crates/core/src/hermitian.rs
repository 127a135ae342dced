//! Wirtinger calculus on chart expressions and curvature of Hermitian
//! metrics on line bundles.
//!
//! An expression lives over `z1..zn, w1..wn`, where `w_i` stands for the
//! conjugate of `z_i` and is differentiated independently. Conjugation is
//! only applied when evaluating, by substituting `w = conj(z)`.
//!
//! Curvature coefficients follow `Θ_ij = -∂_i ∂̄_j log h`, so that a
//! positive line bundle has a positive definite coefficient matrix. The
//! logarithm is never formed: `∂_i ∂̄_j log h = (h h_ij - h_i h_j̄) / h^2`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::det_over;
use crate::symbolic::{format_rational, Gaussian, LaurentPoly, Rational, RationalFunc};

/// Sign `c` in `Θ_ij = c · ∂_i ∂̄_j log h`.
pub const CURVATURE_ORIENTATION: i64 = -1;

/// Normalization attached to every coefficient matrix.
pub const FORM_NORMALIZATION: &str = "form = (i/2pi) * sum_ij M_ij dz_i ^ dzbar_j";

/// Variable names `z1..zn` followed by `w1..wn`.
pub fn herm_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).chain((1..=n).map(|i| format!("w{i}"))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermExpr {
    n: usize,
    f: RationalFunc,
}

impl HermExpr {
    /// Reads `f` over the `2n` chart variables; other variables are rejected.
    pub fn new(n: usize, f: &RationalFunc) -> Result<Self> {
        let vars = herm_vars(n);
        for v in f.vars() {
            if !vars.contains(v) {
                let used = f.num().used_vars().into_iter().chain(f.den().used_vars());
                if used.map(|i| &f.vars()[i]).any(|u| u == v) {
                    return Err(Error::UnknownVariable(v.clone()));
                }
            }
        }
        let restricted = restrict_vars(f, &vars)?;
        Ok(HermExpr { n, f: restricted })
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        HermExpr { n, f: RationalFunc::constant(&herm_vars(n), c) }
    }

    pub fn z(n: usize, i: usize) -> Result<Self> {
        Self::named(n, &format!("z{i}"))
    }

    pub fn w(n: usize, i: usize) -> Result<Self> {
        Self::named(n, &format!("w{i}"))
    }

    fn named(n: usize, name: &str) -> Result<Self> {
        Ok(HermExpr { n, f: RationalFunc::var(&herm_vars(n), name)? })
    }

    /// `1 + sum z_i w_i`.
    pub fn fs_potential(n: usize) -> Self {
        let vars = herm_vars(n);
        let mut p = LaurentPoly::one(&vars);
        for i in 1..=n {
            let zi = LaurentPoly::var(&vars, &format!("z{i}")).expect("chart variable");
            let wi = LaurentPoly::var(&vars, &format!("w{i}")).expect("chart variable");
            p = &p + &(&zi * &wi);
        }
        HermExpr { n, f: RationalFunc::from_poly(p) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn func(&self) -> &RationalFunc {
        &self.f
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        HermExpr { n: self.n, f: &self.f + &o.f }
    }

    pub fn sub(&self, o: &Self) -> Self {
        HermExpr { n: self.n, f: &self.f - &o.f }
    }

    pub fn mul(&self, o: &Self) -> Self {
        HermExpr { n: self.n, f: &self.f * &o.f }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        HermExpr { n: self.n, f: self.f.scale(c) }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        Ok(HermExpr { n: self.n, f: self.f.pow(e)? })
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        Ok(HermExpr { n: self.n, f: self.f.checked_div(&o.f)? })
    }

    /// Formal partial in `z_i` (`anti = false`) or `w_i` (`anti = true`),
    /// `1 <= i <= n`.
    pub fn wirtinger(&self, i: usize, anti: bool) -> Result<Self> {
        let name = format!("{}{i}", if anti { "w" } else { "z" });
        if i == 0 || i > self.n {
            return Err(Error::UnknownVariable(name));
        }
        Ok(HermExpr { n: self.n, f: self.f.partial(&name)? })
    }

    /// Exchanges `z_i` and `w_i`; coefficients are rational, so this is
    /// complex conjugation of the expression.
    pub fn conjugate_swap(&self) -> Self {
        let vars = herm_vars(self.n);
        let binding = (1..=self.n)
            .flat_map(|i| {
                let z = RationalFunc::var(&vars, &format!("z{i}")).expect("chart variable");
                let w = RationalFunc::var(&vars, &format!("w{i}")).expect("chart variable");
                [(format!("z{i}"), w), (format!("w{i}"), z)]
            })
            .collect();
        let f = self.f.substitute(&binding).and_then(|g| g.with_vars(&vars)).expect("total binding");
        HermExpr { n: self.n, f }
    }

    /// Fixed by conjugation.
    pub fn is_real(&self) -> bool {
        self.conjugate_swap() == *self
    }

    /// Value at `z` with `w = conj(z)`.
    pub fn eval_at(&self, z: &[Gaussian]) -> Result<Gaussian> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch(format!("{} coordinates for an {}-dimensional chart", z.len(), self.n)));
        }
        let values: Vec<Gaussian> = z.iter().cloned().chain(z.iter().map(Gaussian::conj)).collect();
        self.f.eval_gaussian(&values).map_err(|_| Error::PoleAtSample(format_point(z)))
    }

    /// Value with `z` and `w` given independently, in floating point.
    pub fn eval_f64(&self, z: &[f64], w: &[f64]) -> f64 {
        let values: Vec<f64> = z.iter().chain(w).copied().collect();
        self.f.eval_f64(&values)
    }
}

impl std::fmt::Display for HermExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.f)
    }
}

/// Rewrites `f` over exactly `vars`, dropping variables that do not occur.
fn restrict_vars(f: &RationalFunc, vars: &[String]) -> Result<RationalFunc> {
    let mut all = vars.to_vec();
    for v in f.vars() {
        if !all.contains(v) {
            all.push(v.clone());
        }
    }
    let wide = f.with_vars(&all)?;
    let keep = |p: &LaurentPoly| -> Result<LaurentPoly> {
        let terms = p.terms().map(|(e, c)| (e[..vars.len()].to_vec(), c.clone()));
        LaurentPoly::from_terms(vars, terms)
    };
    RationalFunc::new(keep(wide.num())?, keep(wide.den())?)
}

pub fn format_point(z: &[Gaussian]) -> String {
    let parts: Vec<String> = z.iter().map(|g| g.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// `θ_i = (∂_i h) / h`.
pub fn chern_theta(h: &HermExpr) -> Result<Vec<HermExpr>> {
    if h.is_zero() {
        return Err(Error::ZeroMetric);
    }
    (1..=h.n).map(|i| h.wirtinger(i, false)?.checked_div(h)).collect()
}

/// `∂_i ∂̄_j log h` for all `i, j`, as `∂∂̄ log num - ∂∂̄ log den`.
pub fn ddbar_log(h: &HermExpr) -> Result<FormCoeffMatrix> {
    if h.is_zero() {
        return Err(Error::ZeroMetric);
    }
    let vars = herm_vars(h.n);
    let part = |p: &LaurentPoly| HermExpr { n: h.n, f: RationalFunc::from_poly(p.clone()) };
    let num = ddbar_log_poly(&part(&h.f.num().with_vars(&vars)?))?;
    let den = ddbar_log_poly(&part(&h.f.den().with_vars(&vars)?))?;
    num.sub(&den)
}

/// `(p p_ij - p_i p_j̄) / p^2` for a nonzero polynomial `p`.
fn ddbar_log_poly(p: &HermExpr) -> Result<FormCoeffMatrix> {
    let n = p.n;
    if p.f.as_constant().is_some() {
        return Ok(FormCoeffMatrix::zero(n));
    }
    let p2 = p.mul(p);
    let dz: Vec<HermExpr> = (1..=n).map(|i| p.wirtinger(i, false)).collect::<Result<_>>()?;
    let dw: Vec<HermExpr> = (1..=n).map(|j| p.wirtinger(j, true)).collect::<Result<_>>()?;
    let mut entries = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mixed = dz[i].wirtinger(j + 1, true)?;
            row.push(p.mul(&mixed).sub(&dz[i].mul(&dw[j])).checked_div(&p2)?);
        }
        entries.push(row);
    }
    Ok(FormCoeffMatrix { n, entries })
}

/// Coefficients `Θ_ij` of the curvature form of the metric `h`.
pub fn curvature(h: &HermExpr) -> Result<FormCoeffMatrix> {
    Ok(ddbar_log(h)?.scale(&Rational::from_integer(CURVATURE_ORIENTATION.into())))
}

/// Coefficient matrix of the Fubini–Study form on chart `chart` of `P^n`:
/// `M = ∂∂̄ log(1 + sum z_l w_l)` in that chart's affine coordinates
/// `x_l / x_chart`. It is the curvature of the metric `(1 + |z|^2)^(-1)`.
pub fn fubini_study(n: usize, chart: usize) -> Result<FormCoeffMatrix> {
    if chart > n {
        return Err(Error::InvalidChart(chart));
    }
    ddbar_log(&HermExpr::fs_potential(n))
}

/// Entry `(i, j)` is the coefficient of `dz_i ^ dzbar_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormCoeffMatrix {
    n: usize,
    entries: Vec<Vec<HermExpr>>,
}

impl FormCoeffMatrix {
    pub fn new(n: usize, entries: Vec<Vec<HermExpr>>) -> Result<Self> {
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("coefficient matrix must be {n}x{n}")));
        }
        Ok(FormCoeffMatrix { n, entries })
    }

    pub fn zero(n: usize) -> Self {
        let z = HermExpr::constant(n, Rational::from_integer(0.into()));
        FormCoeffMatrix { n, entries: vec![vec![z; n]; n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &HermExpr {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<HermExpr>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(HermExpr::is_zero)
    }

    fn zip(&self, o: &Self, f: impl Fn(&HermExpr, &HermExpr) -> HermExpr) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch(format!("{}x{} and {}x{}", self.n, self.n, o.n, o.n)));
        }
        let entries = self
            .entries
            .iter()
            .zip(&o.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            .collect();
        Ok(FormCoeffMatrix { n: self.n, entries })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, HermExpr::add)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, HermExpr::sub)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let entries = self.entries.iter().map(|r| r.iter().map(|e| e.scale(c)).collect()).collect();
        FormCoeffMatrix { n: self.n, entries }
    }

    /// `entry(j, i) = conjugate_swap(entry(i, j))` for all `i, j`.
    pub fn is_hermitian_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.entries[j][i] == self.entries[i][j].conjugate_swap()))
    }

    /// The matrix at `z` with `w = conj(z)`.
    pub fn eval_at(&self, z: &[Gaussian]) -> Result<Vec<Vec<Gaussian>>> {
        self.entries.iter().map(|r| r.iter().map(|e| e.eval_at(z)).collect()).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointVerdict {
    pub point: Vec<Gaussian>,
    /// Leading principal minors, real for Hermitian input.
    pub minors: Vec<Gaussian>,
    pub positive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub orientation: i64,
    pub normalization: &'static str,
    pub points: Vec<PointVerdict>,
    pub min_minor: Option<String>,
    pub all_positive: bool,
}

/// Leading principal minors of a square matrix.
pub fn leading_minors(m: &[Vec<Gaussian>]) -> Vec<Gaussian> {
    (1..=m.len()).map(|k| det_over(m[..k].iter().map(|r| r[..k].to_vec()).collect())).collect()
}

fn positive_real(g: &Gaussian) -> bool {
    g.is_real() && g.re > Rational::from_integer(0.into())
}

/// Positive-definiteness of the evaluated coefficient matrix at each point,
/// via leading principal minors.
pub fn positivity_sample(m: &FormCoeffMatrix, points: &[Vec<Gaussian>]) -> Result<PositivityReport> {
    let evaluated: Vec<(Vec<Gaussian>, Vec<Gaussian>)> = points
        .par_iter()
        .map(|p| Ok((p.clone(), leading_minors(&m.eval_at(p)?))))
        .collect::<Result<_>>()?;
    let mut min_minor: Option<Rational> = None;
    let mut all_positive = !evaluated.is_empty();
    let mut verdicts = Vec::with_capacity(evaluated.len());
    for (p, minors) in evaluated {
        let positive = m.n > 0 && minors.iter().all(positive_real);
        all_positive &= positive;
        for g in minors.iter().filter(|g| g.is_real()) {
            if min_minor.as_ref().map_or(true, |cur| &g.re < cur) {
                min_minor = Some(g.re.clone());
            }
        }
        verdicts.push(PointVerdict { point: p, minors, positive });
    }
    Ok(PositivityReport {
        orientation: CURVATURE_ORIENTATION,
        normalization: FORM_NORMALIZATION,
        points: verdicts,
        min_minor: min_minor.as_ref().map(format_rational),
        all_positive,
    })
}

/// Twenty-four affine points in `C^n` with small Gaussian rational
/// coordinates; coordinate `i` of point `k` is entry `k + 7i` of a fixed
/// cyclic list.
pub fn default_sample_points(n: usize) -> Vec<Vec<Gaussian>> {
    let pairs = [
        (0, 1, 0, 1), (1, 1, 0, 1), (-1, 1, 0, 1), (2, 1, 0, 1), (-2, 1, 0, 1), (1, 2, 0, 1),
        (-1, 3, 0, 1), (5, 2, 0, 1), (0, 1, 1, 1), (0, 1, -1, 1), (1, 1, 1, 1), (1, 1, -1, 1),
        (-1, 1, 1, 1), (2, 1, -1, 1), (1, 2, 1, 2), (-3, 1, 2, 1), (0, 1, 1, 3), (3, 1, 0, 1),
        (-5, 4, 1, 1), (1, 3, -2, 1), (4, 1, 1, 1), (-2, 1, -3, 2), (7, 5, 0, 1), (0, 1, -5, 2),
    ];
    let vals: Vec<Gaussian> =
        pairs.iter().map(|&(a, b, c, d)| Gaussian::new(Rational::new(a.into(), b.into()), Rational::new(c.into(), d.into()))).collect();
    (0..vals.len()).map(|k| (0..n).map(|i| vals[(k + 7 * i) % vals.len()].clone()).collect()).collect()
}

/// Smallest `k <= k_max` with `k · positive + other` positive definite at
/// every point.
pub fn min_scaling_k(
    positive: &FormCoeffMatrix,
    other: &FormCoeffMatrix,
    points: &[Vec<Gaussian>],
    k_max: u64,
) -> Result<Option<u64>> {
    for k in 0..=k_max {
        let m = positive.scale(&Rational::from_integer(k.into())).add(other)?;
        if positivity_sample(&m, points)?.all_positive {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
