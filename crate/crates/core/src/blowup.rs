//! The blowup of affine n-space at the origin, modeled by its chart atlas.
//!
//! Base coordinates are `z1..zn`. Blowup chart `j` (1-based) covers
//! `{l_j != 0}` with coordinates `t1..tn`, where `t_j = z_j` and
//! `t_i = z_i / z_j` otherwise. The single outer chart is the base chart
//! itself, away from the origin.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::bundle::{MonomialCocycle, UnitMonomial};
use crate::error::{Error, Result};
use crate::symbolic::{format_rational, Rational, RationalFunc};

/// Chart coordinates as rational functions of some source variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMapTuple {
    pub components: Vec<RationalFunc>,
}

impl RationalMapTuple {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Binding that feeds these components into functions over `targets`.
    pub fn binding(&self, targets: &[String]) -> BTreeMap<String, RationalFunc> {
        targets.iter().cloned().zip(self.components.iter().cloned()).collect()
    }

    /// `other ∘ self`: `other` is written in `targets`, which are bound to
    /// the components of `self`.
    pub fn then(&self, other: &RationalMapTuple, targets: &[String]) -> Result<RationalMapTuple> {
        let b = self.binding(targets);
        let components = other.components.iter().map(|f| f.substitute(&b)).collect::<Result<_>>()?;
        Ok(RationalMapTuple { components })
    }

    /// Matrix of partial derivatives, rows indexed by component.
    pub fn jacobian(&self, vars: &[String]) -> Result<Vec<Vec<RationalFunc>>> {
        self.components
            .iter()
            .map(|f| vars.iter().map(|v| f.with_vars(vars)?.partial(v)).collect())
            .collect()
    }
}

/// Determinant by Leibniz expansion; intended for small matrices.
pub fn det_rational(m: &[Vec<RationalFunc>], vars: &[String]) -> Result<RationalFunc> {
    let n = m.len();
    let mut acc = RationalFunc::zero(vars);
    for perm in (0..n).permutations(n) {
        let inversions = (0..n).tuple_combinations().filter(|&(a, b)| perm[a] > perm[b]).count();
        let mut term = RationalFunc::one(vars);
        for (r, &c) in perm.iter().enumerate() {
            term = &term * &m[r][c];
            if term.is_zero() {
                break;
            }
        }
        acc = if inversions % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc.with_vars(vars)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupAtlas {
    n: usize,
}

impl BlowupAtlas {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("blowup needs n >= 2, got {n}")));
        }
        Ok(BlowupAtlas { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Base coordinates `z1..zn`.
    pub fn base_vars(&self) -> Vec<String> {
        (1..=self.n).map(|i| format!("z{i}")).collect()
    }

    /// Chart coordinates `t1..tn`.
    pub fn chart_vars(&self) -> Vec<String> {
        (1..=self.n).map(|i| format!("t{i}")).collect()
    }

    fn check(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n {
            return Err(Error::InvalidChart(j));
        }
        Ok(())
    }

    /// Base coordinates in terms of chart-`j` coordinates:
    /// `z_j = t_j`, `z_i = t_i t_j`.
    pub fn chart_inverse(&self, j: usize) -> Result<RationalMapTuple> {
        self.check(j)?;
        let tv = self.chart_vars();
        let tj = RationalFunc::var(&tv, &tv[j - 1])?;
        let components = (1..=self.n)
            .map(|i| {
                let ti = RationalFunc::var(&tv, &tv[i - 1]).expect("chart variable");
                if i == j {
                    ti
                } else {
                    &ti * &tj
                }
            })
            .collect();
        Ok(RationalMapTuple { components })
    }

    /// Chart-`k` coordinates in terms of base coordinates:
    /// `z_i / z_k` for `i != k` and `z_k`.
    pub fn chart(&self, k: usize) -> Result<RationalMapTuple> {
        self.check(k)?;
        let zv = self.base_vars();
        let zk = RationalFunc::var(&zv, &zv[k - 1])?;
        let components = (1..=self.n)
            .map(|i| {
                let zi = RationalFunc::var(&zv, &zv[i - 1]).expect("base variable");
                if i == k {
                    Ok(zi)
                } else {
                    zi.checked_div(&zk)
                }
            })
            .collect::<Result<_>>()?;
        Ok(RationalMapTuple { components })
    }

    /// Chart-`k` coordinates written in chart-`j` coordinates.
    pub fn chart_transition(&self, j: usize, k: usize) -> Result<RationalMapTuple> {
        self.check(j)?;
        self.check(k)?;
        if j == k {
            return Err(Error::InvalidInput(format!("transition from chart {j} to itself")));
        }
        self.chart_inverse(j)?.then(&self.chart(k)?, &self.base_vars())
    }

    /// Determinant of the Jacobian of `chart_transition(j, k)`, in chart-`j`
    /// coordinates.
    pub fn jacobian_det(&self, j: usize, k: usize) -> Result<RationalFunc> {
        let tv = self.chart_vars();
        let t = self.chart_transition(j, k)?;
        det_rational(&t.jacobian(&tv)?, &tv)
    }

    /// Rewrites a chart-`j` expression in base coordinates.
    pub fn to_base(&self, j: usize, f: &RationalFunc) -> Result<RationalFunc> {
        let b = self.chart(j)?.binding(&self.chart_vars());
        f.substitute(&b)?.with_vars(&self.base_vars())
    }

    /// `(z_j / z_k)^(n-1)` in base coordinates.
    pub fn closed_form_jacobian(&self, j: usize, k: usize) -> Result<RationalFunc> {
        self.check(j)?;
        self.check(k)?;
        let zv = self.base_vars();
        let ratio = RationalFunc::var(&zv, &zv[j - 1])?.checked_div(&RationalFunc::var(&zv, &zv[k - 1])?)?;
        ratio.pow(self.n as i64 - 1)
    }

    /// The constant `c` with `jacobian_det(j, k) = c · closed form`, if the
    /// quotient is constant.
    pub fn jacobian_sign(&self, j: usize, k: usize) -> Result<Option<Rational>> {
        let det = self.to_base(j, &self.jacobian_det(j, k)?)?;
        Ok(det.checked_div(&self.closed_form_jacobian(j, k)?)?.as_constant())
    }

    /// Determinant of the Jacobian of `chart_inverse(j)` (blowup chart to the
    /// outer chart), in base coordinates.
    pub fn outer_jacobian_det(&self, j: usize) -> Result<RationalFunc> {
        let tv = self.chart_vars();
        let det = det_rational(&self.chart_inverse(j)?.jacobian(&tv)?, &tv)?;
        self.to_base(j, &det)
    }

    /// Point `(z, l)` of the blowup parameterized by chart `j`: base
    /// coordinates and homogeneous line coordinates with `l_j = 1`.
    pub fn chart_point(&self, j: usize) -> Result<(Vec<RationalFunc>, Vec<RationalFunc>)> {
        let z = self.chart_inverse(j)?.components;
        let tv = self.chart_vars();
        let l = (1..=self.n)
            .map(|i| if i == j { Ok(RationalFunc::one(&tv)) } else { RationalFunc::var(&tv, &tv[i - 1]) })
            .collect::<Result<_>>()?;
        Ok((z, l))
    }

    /// Local defining function of the exceptional divisor on blowup chart
    /// `j` in base coordinates: the coordinate `t_j = z_j`.
    pub fn exceptional_defining_function(&self, j: usize) -> Result<RationalFunc> {
        let tv = self.chart_vars();
        self.to_base(j, &RationalFunc::var(&tv, &tv[j - 1])?)
    }

    /// Transitions of `[E]` on blowup charts, `f_i / f_j`, read as a cocycle
    /// on `E = P^(n-1)` with homogeneous coordinates `x_(i-1) = l_i`.
    ///
    /// On chart overlaps `z_i / z_j = l_i / l_j`, so the base monomial in
    /// `z` is the same monomial in `l`.
    pub fn exceptional_cocycle(&self) -> Result<MonomialCocycle> {
        let zv = self.base_vars();
        let mut g = BTreeMap::new();
        for i in 1..=self.n {
            for j in 1..=self.n {
                if i != j {
                    let f = self
                        .exceptional_defining_function(i)?
                        .checked_div(&self.exceptional_defining_function(j)?)?;
                    g.insert((i - 1, j - 1), UnitMonomial::from_rational_func(&f, &zv)?);
                }
            }
        }
        MonomialCocycle::new(self.n - 1, g)
    }

    /// Transitions of the canonical bundle on blowup charts: `s_j = g(j,k) s_k`
    /// for coefficient functions of top forms gives `g(j,k) = jacobian_det(j,k)`.
    pub fn canonical_cocycle(&self) -> Result<MonomialCocycle> {
        let zv = self.base_vars();
        let mut g = BTreeMap::new();
        for j in 1..=self.n {
            for k in 1..=self.n {
                if j != k {
                    let det = self.to_base(j, &self.jacobian_det(j, k)?)?;
                    g.insert((j - 1, k - 1), UnitMonomial::from_rational_func(&det, &zv)?);
                }
            }
        }
        MonomialCocycle::new(self.n - 1, g)
    }
}

/// Residual transition of `K ⊗ [E]^(-exponent)` on one chart overlap.
#[derive(Clone, Debug, Serialize)]
pub struct PairResidual {
    pub from: String,
    pub to: String,
    pub residual: String,
    /// Sign of the residual when it is a constant, else 0.
    pub sign: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalLemmaReport {
    pub n: usize,
    pub exponent: i64,
    pub blowup_pairs: Vec<PairResidual>,
    pub mixed_pairs: Vec<PairResidual>,
    pub outer_pairs_match: bool,
    pub holds: bool,
}

fn residual_of(from: String, to: String, m: &UnitMonomial, vars: &[String]) -> PairResidual {
    let sign = if m.is_constant() {
        if m.coeff().is_negative() {
            -1
        } else {
            1
        }
    } else {
        0
    };
    PairResidual { from, to, residual: m.format_with(vars), sign }
}

fn unit_sign(m: &UnitMonomial) -> bool {
    m.is_constant() && (m.coeff().is_one() || (-m.coeff()).is_one())
}

/// Checks that the canonical bundle of the blowup times `[E]^(-exponent)`
/// has transitions that are `±1` on every overlap meeting the exceptional
/// divisor, and agree with the base cocycle on outer overlaps.
///
/// Outer charts are the charts of `base`; each meets the blowup charts inside
/// the base coordinate chart, where `[E]` has defining function `1` and the
/// canonical transition is the Jacobian of `chart_inverse`. With `exponent =
/// n - 1` every residual is a sign; with other exponents a power of
/// `z_j / z_k` remains.
pub fn verify_canonical_lemma(
    atlas: &BlowupAtlas,
    base: &MonomialCocycle,
    exponent: i64,
) -> Result<CanonicalLemmaReport> {
    let n = atlas.n();
    let zv = atlas.base_vars();
    let k_cocycle = atlas.canonical_cocycle()?;
    let e_cocycle = atlas.exceptional_cocycle()?;
    let twisted = k_cocycle.tensor(&e_cocycle.power(-exponent))?;

    let mut blowup_pairs = Vec::new();
    for ((j, k), m) in twisted.transitions() {
        blowup_pairs.push(residual_of(format!("U{}", j + 1), format!("U{}", k + 1), m, &zv));
    }

    let mut mixed_pairs = Vec::new();
    let mut mixed_units = true;
    for i in 1..=n {
        let k_det = UnitMonomial::from_rational_func(&atlas.outer_jacobian_det(i)?, &zv)?;
        let e_tr = UnitMonomial::from_rational_func(&atlas.exceptional_defining_function(i)?, &zv)?;
        let m = k_det.mul(&e_tr.pow(-exponent));
        mixed_units &= unit_sign(&m);
        for alpha in 0..=base.n() {
            mixed_pairs.push(residual_of(format!("U{i}"), format!("V{alpha}"), &m, &zv));
        }
    }

    // Away from the origin the blowup is an isomorphism: the chart change is
    // the identity, [E] is trivial and the residual is the base transition.
    let outer_pairs_match = base.check_cocycle();

    let signs_only = twisted.transitions().all(|(_, m)| unit_sign(m));
    let holds = signs_only && mixed_units && outer_pairs_match && twisted.check_cocycle();
    Ok(CanonicalLemmaReport { n, exponent, blowup_pairs, mixed_pairs, outer_pairs_match, holds })
}

/// `format_rational` of the sign constant, for reports.
pub fn format_sign(c: &Option<Rational>) -> String {
    match c {
        Some(c) => format_rational(c),
        None => "nonconstant".into(),
    }
}
