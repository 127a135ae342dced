//! The map to projective space defined by a basis of sections, with exact
//! checks for base points, separation of points and separation of tangents.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bundle::homogeneous_vars;
use crate::divisors::{SectionSpace, AFFINE_VAR};
use crate::error::{Error, Result};
use crate::linalg::{rank_over, ExactMatrix};
use crate::symbolic::{int, rat, Gaussian, LaurentPoly, Rational, RationalFunc, UniPoly};

/// Nonzero homogeneous coordinates, scaled so the first nonzero one is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ProjPoint {
    coords: Vec<Gaussian>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Gaussian>) -> Result<Self> {
        let Some(lead) = coords.iter().find(|c| !c.is_zero()).cloned() else {
            return Err(Error::InvalidInput("all homogeneous coordinates are zero".into()));
        };
        let inv = lead.inv().expect("nonzero");
        Ok(ProjPoint { coords: coords.iter().map(|c| c * &inv).collect() })
    }

    pub fn rational(coords: &[Rational]) -> Result<Self> {
        Self::new(coords.iter().cloned().map(Gaussian::real).collect())
    }

    /// `[1 : t]` on the projective line.
    pub fn affine_line(t: Rational) -> Self {
        Self::rational(&[Rational::one(), t]).expect("nonzero")
    }

    pub fn coords(&self) -> &[Gaussian] {
        &self.coords
    }

    /// Index of the first nonzero coordinate, which equals 1.
    pub fn chart(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).expect("nonzero point")
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.coords.iter().map(|c| c.to_string()).join(" : "))
    }
}

/// Linearly independent homogeneous forms of a common degree in `x0..xn`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionBasis {
    n: usize,
    d: i64,
    sections: Vec<LaurentPoly>,
}

impl SectionBasis {
    pub fn new(n: usize, d: i64, sections: Vec<LaurentPoly>) -> Result<Self> {
        if sections.is_empty() {
            return Err(Error::EmptyBasis);
        }
        let vars = homogeneous_vars(n);
        let sections: Vec<LaurentPoly> = sections.iter().map(|s| s.with_vars(&vars)).collect::<Result<_>>()?;
        for s in &sections {
            if s.is_zero() || s.has_negative_exponents() || s.homogeneous_degree() != Some(d) {
                return Err(Error::InvalidInput(format!("{s} is not a nonzero form of degree {d}")));
            }
        }
        let monomials: Vec<Vec<i64>> =
            sections.iter().flat_map(|s| s.terms().map(|(e, _)| e.clone())).sorted().dedup().collect();
        let rows = sections
            .iter()
            .map(|s| {
                let terms: std::collections::BTreeMap<_, _> = s.terms().collect();
                monomials.iter().map(|m| terms.get(m).map_or_else(Rational::zero, |c| (*c).clone())).collect()
            })
            .collect();
        let rank = ExactMatrix::from_rows(monomials.len(), rows)?.rank();
        if rank < sections.len() {
            return Err(Error::InvalidInput("sections are linearly dependent".into()));
        }
        Ok(SectionBasis { n, d, sections })
    }

    /// All monomials of degree `d`, starting from `x0^d` in descending
    /// lexicographic order of exponents.
    pub fn full(n: usize, d: i64) -> Result<Self> {
        if d < 0 {
            return Err(Error::EmptyBasis);
        }
        let vars = homogeneous_vars(n);
        let sections = monomial_exponents(n, d as usize)
            .into_iter()
            .map(|e| LaurentPoly::monomial(&vars, e, Rational::one()))
            .collect::<Result<_>>()?;
        Self::new(n, d, sections)
    }

    /// Sections of `O(deg D)` on the projective line corresponding to
    /// `L(D)`: each `f` is multiplied by the defining function
    /// `prod (z - p)^a_p` and homogenized to degree `deg D`.
    pub fn from_section_space(space: &SectionSpace) -> Result<Self> {
        let d = space.divisor.degree();
        let zv = [AFFINE_VAR.to_string()];
        let mut defining = RationalFunc::one(&zv);
        for (p, a) in space.divisor.iter() {
            if let crate::divisors::PointP1::Affine(r) = p {
                let z = RationalFunc::var(&zv, AFFINE_VAR)?;
                let lin = &z - &RationalFunc::constant(&zv, r.clone());
                defining = &defining * &lin.pow(a)?;
            }
        }
        let vars = homogeneous_vars(1);
        let mut sections = Vec::with_capacity(space.basis.len());
        for f in &space.basis {
            let g = (f * &defining).with_vars(&zv)?;
            let poly = g
                .den()
                .as_constant()
                .and_then(|c| g.num().div_exact(&LaurentPoly::constant(&zv, c)))
                .and_then(|p| p.to_univariate(0))
                .ok_or_else(|| Error::InvalidInput(format!("{f} is not in L(D)")))?;
            sections.push(homogenize(&poly, d, &vars)?);
        }
        Self::new(1, d, sections)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn sections(&self) -> &[LaurentPoly] {
        &self.sections
    }

    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    fn values(&self, p: &ProjPoint) -> Result<Vec<Gaussian>> {
        if p.dim() != self.n {
            return Err(Error::DimensionMismatch(format!("point {p} on P^{} for P^{}", p.dim(), self.n)));
        }
        Ok(self.sections.iter().map(|s| s.eval_gaussian(p.coords()).expect("no negative exponents")).collect())
    }
}

/// `sum c_k z^k` as `sum c_k x1^k x0^(d-k)`.
fn homogenize(p: &UniPoly, d: i64, vars: &[String]) -> Result<LaurentPoly> {
    if p.degree().unwrap_or(0) as i64 > d {
        return Err(Error::DegreeMismatch { expected: d, got: p.degree().unwrap_or(0) as i64 });
    }
    LaurentPoly::from_terms(
        vars,
        p.coeffs().iter().enumerate().map(|(k, c)| (vec![d - k as i64, k as i64], c.clone())),
    )
}

/// Exponent vectors of degree `d` in `n + 1` variables, `x0^d` first.
pub fn monomial_exponents(n: usize, d: usize) -> Vec<Vec<i64>> {
    fn rec(left: usize, slots: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if slots == 1 {
            prefix.push(left as i64);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k as i64);
            rec(left - k, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, n + 1, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct BasePointReport {
    pub points: Vec<ProjPoint>,
    /// True when the listed points are provably all base points.
    pub complete: bool,
}

/// Common zeros of all sections.
///
/// On the projective line this is exact: rational roots of the gcd of the
/// dehomogenized sections on `x0 = 1`, plus a check of `[0:1]`; the flag is
/// false only if the gcd keeps an irrational factor. For `n >= 2` the set is
/// proven empty when every `x_i^d` lies in the span of the sections;
/// otherwise a grid of small rational points is searched.
pub fn base_points(b: &SectionBasis) -> Result<BasePointReport> {
    let mut found = Vec::new();
    let complete;
    if b.n == 1 {
        let mut g = UniPoly::zero();
        for s in &b.sections {
            let shifted = s.with_vars(&homogeneous_vars(1))?;
            let vals: Vec<(usize, Rational)> =
                shifted.terms().map(|(e, c)| (e[1] as usize, c.clone())).collect();
            let len = vals.iter().map(|(k, _)| k + 1).max().unwrap_or(1);
            let mut coeffs = vec![Rational::zero(); len];
            for (k, c) in vals {
                coeffs[k] = c;
            }
            g = g.gcd(&UniPoly::from_coeffs(coeffs));
        }
        let (roots, rest) = g.rational_roots();
        found.extend(roots.into_iter().map(|(r, _)| ProjPoint::affine_line(r)));
        let at_infinity = ProjPoint::rational(&[int(0), int(1)])?;
        if b.values(&at_infinity)?.iter().all(Zero::is_zero) {
            found.push(at_infinity);
        }
        complete = rest.degree().unwrap_or(0) == 0;
    } else if pure_powers_spanned(b)? {
        complete = true;
    } else {
        for p in sample_grid(b.n) {
            if b.values(&p)?.iter().all(Zero::is_zero) {
                found.push(p);
            }
        }
        complete = false;
    }
    Ok(BasePointReport { points: found, complete })
}

fn pure_powers_spanned(b: &SectionBasis) -> Result<bool> {
    let vars = homogeneous_vars(b.n);
    let mut cols: Vec<Vec<i64>> = b.sections.iter().flat_map(|s| s.terms().map(|(e, _)| e.clone())).collect();
    for i in 0..=b.n {
        let mut e = vec![0; b.n + 1];
        e[i] = b.d;
        cols.push(e);
    }
    cols.sort();
    cols.dedup();
    let row_of = |p: &LaurentPoly| -> Vec<Rational> {
        let terms: std::collections::BTreeMap<_, _> = p.terms().collect();
        cols.iter().map(|m| terms.get(m).map_or_else(Rational::zero, |c| (*c).clone())).collect()
    };
    let rows: Vec<Vec<Rational>> = b.sections.iter().map(row_of).collect();
    let base_rank = ExactMatrix::from_rows(cols.len(), rows.clone())?.rank();
    for i in 0..=b.n {
        let mut e = vec![0; b.n + 1];
        e[i] = b.d;
        let power = LaurentPoly::monomial(&vars, e, Rational::one())?;
        let mut with = rows.clone();
        with.push(row_of(&power));
        if ExactMatrix::from_rows(cols.len(), with)?.rank() != base_rank {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Points with coordinates in `{-2, ..., 2}`, deduplicated after scaling.
pub fn sample_grid(n: usize) -> Vec<ProjPoint> {
    let mut pts: Vec<ProjPoint> = (0..=n)
        .map(|_| -2i64..=2)
        .multi_cartesian_product()
        .filter(|v| v.iter().any(|&x| x != 0))
        .map(|v| ProjPoint::rational(&v.into_iter().map(int).collect::<Vec<_>>()).expect("nonzero"))
        .collect();
    let mut seen = std::collections::HashSet::new();
    pts.retain(|p| seen.insert(p.clone()));
    pts
}

/// Canonically scaled image of `p`.
pub fn eval_map(b: &SectionBasis, p: &ProjPoint) -> Result<ProjPoint> {
    let v = b.values(p)?;
    if v.iter().all(Zero::is_zero) {
        return Err(Error::BasePointEvaluation(p.to_string()));
    }
    ProjPoint::new(v)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairVerdict {
    pub p: ProjPoint,
    pub q: ProjPoint,
    pub image_p: ProjPoint,
    pub image_q: ProjPoint,
    pub separated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InjectivityReport {
    pub pairs: Vec<PairVerdict>,
    pub pass: bool,
}

/// Whether distinct points have distinct images.
pub fn check_injective(b: &SectionBasis, pairs: &[(ProjPoint, ProjPoint)]) -> Result<InjectivityReport> {
    let verdicts: Vec<PairVerdict> = pairs
        .par_iter()
        .map(|(p, q)| {
            if p == q {
                return Err(Error::EqualPoints);
            }
            let (ip, iq) = (eval_map(b, p)?, eval_map(b, q)?);
            let separated = ip != iq;
            Ok(PairVerdict { p: p.clone(), q: q.clone(), image_p: ip, image_q: iq, separated })
        })
        .collect::<Result<_>>()?;
    let pass = verdicts.iter().all(|v| v.separated);
    Ok(InjectivityReport { pairs: verdicts, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct ImmersionVerdict {
    pub point: ProjPoint,
    pub chart: usize,
    pub rank: usize,
    pub immersive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ImmersionReport {
    pub samples: Vec<ImmersionVerdict>,
    pub pass: bool,
}

/// Rank of the matrix of section values and their partials in the affine
/// chart of the first nonzero coordinate; an immersion needs rank `n + 1`.
pub fn check_immersion(b: &SectionBasis, samples: &[ProjPoint]) -> Result<ImmersionReport> {
    let vars = homogeneous_vars(b.n);
    let verdicts: Vec<ImmersionVerdict> = samples
        .par_iter()
        .map(|p| {
            let values = b.values(p)?;
            if values.iter().all(Zero::is_zero) {
                return Err(Error::BasePointEvaluation(p.to_string()));
            }
            let chart = p.chart();
            let mut rows = vec![values];
            for (u, name) in vars.iter().enumerate() {
                if u == chart {
                    continue;
                }
                let row = b
                    .sections
                    .iter()
                    .map(|s| s.partial(name).map(|ds| ds.eval_gaussian(p.coords()).expect("polynomial")))
                    .collect::<Result<_>>()?;
                rows.push(row);
            }
            let rank = rank_over(rows);
            Ok(ImmersionVerdict { point: p.clone(), chart, rank, immersive: rank == b.n + 1 })
        })
        .collect::<Result<_>>()?;
    let pass = verdicts.iter().all(|v| v.immersive);
    Ok(ImmersionReport { samples: verdicts, pass })
}

/// Rank 2 of the evaluation matrix of all degree-`d` monomials at `p` and
/// `q`, i.e. surjectivity of restriction to the two points.
pub fn two_point_surjectivity(d: i64, p: &ProjPoint, q: &ProjPoint) -> Result<bool> {
    if p == q {
        return Err(Error::EqualPoints);
    }
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(format!("points {p} and {q}")));
    }
    let b = SectionBasis::full(p.dim(), d)?;
    for x in [p, q] {
        if b.values(x)?.iter().all(Zero::is_zero) {
            return Err(Error::BasePointEvaluation(x.to_string()));
        }
    }
    Ok(rank_over(vec![b.values(p)?, b.values(q)?]) == 2)
}

/// Twelve rational points of the projective line.
pub fn default_samples_p1() -> Vec<ProjPoint> {
    let affine = [int(0), int(1), int(-1), int(2), int(-2), int(3), int(-3), rat(1, 2), rat(-1, 2), rat(1, 3), rat(2, 3)];
    let mut pts: Vec<ProjPoint> = affine.into_iter().map(ProjPoint::affine_line).collect();
    pts.push(ProjPoint::rational(&[int(0), int(1)]).expect("nonzero"));
    pts
}

/// Unordered pairs of distinct points.
pub fn distinct_pairs(points: &[ProjPoint]) -> Vec<(ProjPoint, ProjPoint)> {
    points.iter().tuple_combinations().filter(|(p, q)| p != q).map(|(p, q)| (p.clone(), q.clone())).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeVerdict {
    pub d: i64,
    pub base_point_free: bool,
    pub injective: bool,
    pub immersion: bool,
    pub two_point: bool,
}

impl DegreeVerdict {
    pub fn embeds(&self) -> bool {
        self.base_point_free && self.injective && self.immersion && self.two_point
    }
}

/// All embedding checks for the full basis of `O(d)` on the projective line
/// over the given samples.
pub fn embedding_checks(d: i64, samples: &[ProjPoint]) -> Result<DegreeVerdict> {
    let b = SectionBasis::full(1, d)?;
    let bp = base_points(&b)?;
    let base_point_free = bp.complete && bp.points.is_empty();
    let pairs = distinct_pairs(samples);
    let injective = check_injective(&b, &pairs)?.pass;
    let immersion = check_immersion(&b, samples)?.pass;
    let mut two_point = true;
    for (p, q) in &pairs {
        two_point &= two_point_surjectivity(d, p, q)?;
    }
    Ok(DegreeVerdict { d, base_point_free, injective, immersion, two_point })
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingSearch {
    pub smallest_degree: Option<i64>,
    pub samples: Vec<ProjPoint>,
    pub degrees: Vec<DegreeVerdict>,
}

/// Smallest `d <= d_max` whose full basis passes every check on `samples`.
pub fn smallest_embedding_degree(d_max: i64, samples: &[ProjPoint]) -> Result<EmbeddingSearch> {
    let mut degrees = Vec::new();
    let mut smallest = None;
    for d in 0..=d_max {
        let v = embedding_checks(d, samples)?;
        let ok = v.embeds();
        degrees.push(v);
        if ok {
            smallest = Some(d);
            break;
        }
    }
    Ok(EmbeddingSearch { smallest_degree: smallest, samples: samples.to_vec(), degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::TwistingSheaf;
    use crate::divisors::{section_space, DivisorP1, PointP1};

    fn forms(exps: &[[i64; 2]]) -> SectionBasis {
        let vars = homogeneous_vars(1);
        let d = exps[0][0] + exps[0][1];
        let s = exps.iter().map(|e| LaurentPoly::monomial(&vars, e.to_vec(), int(1)).unwrap()).collect();
        SectionBasis::new(1, d, s).unwrap()
    }

    fn pt(a: i64, b: i64) -> ProjPoint {
        ProjPoint::rational(&[int(a), int(b)]).unwrap()
    }

    #[test]
    fn basis_validation() {
        let vars = homogeneous_vars(1);
        let x = LaurentPoly::var(&vars, "x0").unwrap();
        assert!(SectionBasis::new(1, 1, vec![x.clone(), x.scale(&int(2))]).is_err());
        assert!(SectionBasis::new(1, 2, vec![x.clone()]).is_err());
        assert_eq!(SectionBasis::new(1, 1, vec![]).unwrap_err(), Error::EmptyBasis);
        for d in 0..6 {
            assert_eq!(SectionBasis::full(1, d).unwrap().len(), TwistingSheaf::new(1, d).unwrap().cohomology_dim(0));
        }
        assert_eq!(SectionBasis::full(2, 2).unwrap().len(), 6);
    }

    #[test]
    fn base_point_examples() {
        let r = base_points(&SectionBasis::full(1, 2).unwrap()).unwrap();
        assert!(r.points.is_empty() && r.complete);
        let r = base_points(&forms(&[[2, 0], [1, 1]])).unwrap();
        assert_eq!(r.points, vec![pt(0, 1)]);
        let vars = homogeneous_vars(1);
        let xy = &LaurentPoly::var(&vars, "x0").unwrap() - &LaurentPoly::var(&vars, "x1").unwrap();
        let r = base_points(&SectionBasis::new(1, 1, vec![xy]).unwrap()).unwrap();
        assert_eq!(r.points, vec![pt(1, 1)]);
        let r = base_points(&SectionBasis::full(2, 3).unwrap()).unwrap();
        assert!(r.points.is_empty() && r.complete);
        let vars2 = homogeneous_vars(2);
        let s = ["x0", "x1"].iter().map(|v| LaurentPoly::var(&vars2, v).unwrap()).collect();
        let r = base_points(&SectionBasis::new(2, 1, s).unwrap()).unwrap();
        assert_eq!(r.points, vec![ProjPoint::rational(&[int(0), int(0), int(1)]).unwrap()]);
        assert!(!r.complete);
    }

    #[test]
    fn eval_examples() {
        let v2 = SectionBasis::full(1, 2).unwrap();
        assert_eq!(eval_map(&v2, &pt(1, 1)).unwrap(), ProjPoint::rational(&[int(1), int(1), int(1)]).unwrap());
        assert_eq!(eval_map(&v2, &pt(1, 2)).unwrap(), ProjPoint::rational(&[int(1), int(2), int(4)]).unwrap());
        let v3 = SectionBasis::full(1, 3).unwrap();
        assert_eq!(
            eval_map(&v3, &pt(0, 1)).unwrap(),
            ProjPoint::rational(&[int(0), int(0), int(0), int(1)]).unwrap()
        );
        let b = forms(&[[2, 0], [1, 1]]);
        assert!(matches!(eval_map(&b, &pt(0, 1)), Err(Error::BasePointEvaluation(_))));
        let scaled = ProjPoint::rational(&[int(3), int(6)]).unwrap();
        assert_eq!(eval_map(&v2, &scaled).unwrap(), eval_map(&v2, &pt(1, 2)).unwrap());
    }

    #[test]
    fn injectivity_examples() {
        let pts: Vec<ProjPoint> = (0..4).map(|t| pt(1, t)).collect();
        let pairs = distinct_pairs(&pts);
        assert!(check_injective(&SectionBasis::full(1, 2).unwrap(), &pairs).unwrap().pass);
        assert!(!check_injective(&SectionBasis::full(1, 0).unwrap(), &pairs).unwrap().pass);
        assert!(check_injective(&SectionBasis::full(1, 1).unwrap(), &pairs).unwrap().pass);
        assert_eq!(check_injective(&SectionBasis::full(1, 1).unwrap(), &[(pt(1, 1), pt(2, 2))]).unwrap_err(), Error::EqualPoints);
    }

    #[test]
    fn immersion_examples() {
        let r = check_immersion(&SectionBasis::full(1, 2).unwrap(), &[pt(1, 0)]).unwrap();
        assert_eq!(r.samples[0].rank, 2);
        assert!(check_immersion(&SectionBasis::full(1, 1).unwrap(), &default_samples_p1()).unwrap().pass);
        let degenerate = forms(&[[2, 0], [0, 2]]);
        let r = check_immersion(&degenerate, &[pt(1, 0)]).unwrap();
        assert_eq!(r.samples[0].rank, 1);
        assert!(!r.pass);
        assert!(!check_immersion(&SectionBasis::full(1, 0).unwrap(), &[pt(1, 0)]).unwrap().pass);
    }

    #[test]
    fn two_point_examples() {
        assert!(two_point_surjectivity(1, &pt(1, 0), &pt(0, 1)).unwrap());
        assert!(!two_point_surjectivity(0, &pt(1, 0), &pt(0, 1)).unwrap());
        assert!(two_point_surjectivity(3, &pt(1, 1), &pt(1, 2)).unwrap());
        assert_eq!(two_point_surjectivity(2, &pt(1, 1), &pt(2, 2)).unwrap_err(), Error::EqualPoints);
    }

    #[test]
    fn embedding_search() {
        let s = smallest_embedding_degree(4, &default_samples_p1()).unwrap();
        assert_eq!(s.smallest_degree, Some(1));
        assert!(!s.degrees[0].injective && !s.degrees[0].immersion && !s.degrees[0].two_point);
        assert_eq!(default_samples_p1().len(), 12);
    }

    #[test]
    fn divisor_sections_give_veronese() {
        let d = DivisorP1::from_terms([(PointP1::Affine(int(0)), 3)]);
        let b = SectionBasis::from_section_space(&section_space(&d)).unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(b.d(), 3);
        let d = DivisorP1::from_terms([(PointP1::Affine(int(1)), 1), (PointP1::Infinity, 1)]);
        let b = SectionBasis::from_section_space(&section_space(&d)).unwrap();
        assert!(base_points(&b).unwrap().points.is_empty());
    }
}
