//! Čech cohomology of the twisting sheaves `O(d)` on projective n-space,
//! computed on the standard affine cover.
//!
//! Sections of `O(d)` over `U_I = ∩_{i∈I} {x_i ≠ 0}` are spanned by Laurent
//! monomials `x^a` with `Σa = d` and `a_i ≥ 0` for every `i ∉ I`. The
//! coboundary preserves the exponent vector `a`, so the complex splits into
//! finite graded pieces, one per multidegree, each with 0/1-dimensional
//! summands. Cohomology is the sum of the pieces' cohomology.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::nerve::{nerve_of_size, Simplex};
use crate::symbolic::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwistingSheaf {
    n: usize,
    d: i64,
}

impl TwistingSheaf {
    pub fn new(n: usize, d: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("projective dimension must be at least 1".into()));
        }
        Ok(TwistingSheaf { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Number of charts in the standard cover.
    pub fn charts(&self) -> usize {
        self.n + 1
    }

    fn check_piece(&self, a: &[i64]) -> Result<()> {
        if a.len() != self.charts() {
            return Err(Error::DimensionMismatch(format!(
                "multidegree of length {} on P^{}",
                a.len(),
                self.n
            )));
        }
        let s: i64 = a.iter().sum();
        if s != self.d {
            return Err(Error::DegreeMismatch { expected: self.d, got: s });
        }
        Ok(())
    }

    /// Dimension (0 or 1) of the `x^a` graded part of the sections over `U_I`.
    pub fn section_dim(&self, simplex: &Simplex, a: &[i64]) -> Result<usize> {
        self.check_piece(a)?;
        Ok(self.has_section(simplex, a) as usize)
    }

    fn has_section(&self, simplex: &Simplex, a: &[i64]) -> bool {
        a.iter().enumerate().all(|(i, &ai)| ai >= 0 || simplex.contains(i))
    }

    /// The `p`-simplices carrying a nonzero section in multidegree `a`.
    pub fn cochain_basis(&self, p: usize, a: &[i64]) -> Result<Vec<Simplex>> {
        self.check_piece(a)?;
        Ok(nerve_of_size(self.charts(), p).into_iter().filter(|s| self.has_section(s, a)).collect())
    }

    /// Matrix of `δ^p` on the multidegree-`a` piece: rows indexed by the
    /// `(p+1)`-cochain basis, columns by the `p`-cochain basis, entry
    /// `(-1)^j` when the column simplex is the `j`-th face of the row simplex.
    pub fn coboundary_matrix(&self, p: usize, a: &[i64]) -> Result<ExactMatrix> {
        let cols = self.cochain_basis(p, a)?;
        let rows = self.cochain_basis(p + 1, a)?;
        let mut m = ExactMatrix::zeros(rows.len(), cols.len());
        for (r, s) in rows.iter().enumerate() {
            for j in 0..s.indices().len() {
                let f = s.face(j)?;
                if let Ok(c) = cols.binary_search(&f) {
                    let sign: Rational = int(if j % 2 == 0 { 1 } else { -1 });
                    m.set(r, c, m.get(r, c) + sign);
                }
            }
        }
        Ok(m)
    }

    /// `δ^{p+1} · δ^p == 0` on the multidegree-`a` piece.
    pub fn verify_delta_squared(&self, p: usize, a: &[i64]) -> Result<bool> {
        let first = self.coboundary_matrix(p, a)?;
        let second = self.coboundary_matrix(p + 1, a)?;
        Ok(second.mul(&first)?.is_zero())
    }

    /// Dimension of `H^q` of the multidegree-`a` piece.
    pub fn piece_cohomology(&self, q: usize, a: &[i64]) -> Result<PieceContribution> {
        let delta = self.coboundary_matrix(q, a)?;
        let kernel = delta.kernel_dim();
        let image = match q {
            0 => 0,
            _ => self.coboundary_matrix(q - 1, a)?.rank(),
        };
        Ok(PieceContribution { multidegree: a.to_vec(), kernel, image, dim: kernel - image })
    }

    /// All multidegrees with `Σa = d` and `|a_i| ≤ window`, lexicographically.
    pub fn multidegrees(&self, window: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.charts());
        fill_multidegrees(self.charts(), self.d, window, &mut cur, &mut out);
        out
    }

    /// The default multidegree window `|d| + 1`.
    pub fn default_window(&self) -> i64 {
        self.d.abs() + 1
    }

    pub fn cohomology_dim(&self, q: usize) -> usize {
        self.cohomology(q, self.default_window()).dim
    }

    /// Total dimension of `Ȟ^q(P^n, O(d))`, summed over the graded pieces in
    /// the window. Pieces are evaluated in parallel; the report lists the
    /// nonzero contributions in lexicographic order of multidegree.
    pub fn cohomology(&self, q: usize, window: i64) -> CohomologyReport {
        let pieces: Vec<PieceContribution> = self
            .multidegrees(window)
            .par_iter()
            .map(|a| self.piece_cohomology(q, a).expect("multidegree sums to d"))
            .filter(|p| p.dim > 0)
            .collect();
        CohomologyReport {
            n: self.n,
            d: self.d,
            q,
            window,
            dim: pieces.iter().map(|p| p.dim).sum(),
            graded_pieces: pieces,
        }
    }
}

fn fill_multidegrees(len: usize, remaining: i64, window: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    let left = (len - cur.len()) as i64;
    if left == 1 {
        if remaining.abs() <= window {
            let mut v = cur.clone();
            v.push(remaining);
            out.push(v);
        }
        return;
    }
    for x in -window..=window {
        let rest = remaining - x;
        if rest.abs() > window * (left - 1) {
            continue;
        }
        cur.push(x);
        fill_multidegrees(len, rest, window, cur, out);
        cur.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceContribution {
    pub multidegree: Vec<i64>,
    pub kernel: usize,
    pub image: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub n: usize,
    pub d: i64,
    pub q: usize,
    pub dim: usize,
    pub window: i64,
    pub graded_pieces: Vec<PieceContribution>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::int;
    use proptest::prelude::*;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    fn sheaf(n: usize, d: i64) -> TwistingSheaf {
        TwistingSheaf::new(n, d).unwrap()
    }

    /// Independent oracle: brute-force count of integer vectors of length
    /// `len` with entries in `range` summing to `d`.
    fn count_vectors(len: usize, d: i64, range: std::ops::RangeInclusive<i64>) -> usize {
        fn go(len: usize, d: i64, range: &std::ops::RangeInclusive<i64>) -> usize {
            if len == 0 {
                return (d == 0) as usize;
            }
            range.clone().map(|x| go(len - 1, d - x, range)).sum()
        }
        go(len, d, &range)
    }

    #[test]
    fn section_dim_examples() {
        assert_eq!(sheaf(1, 2).section_dim(&s(&[0]), &[2, 0]).unwrap(), 1);
        assert_eq!(sheaf(1, 2).section_dim(&s(&[0]), &[3, -1]).unwrap(), 0);
        assert_eq!(sheaf(1, -2).section_dim(&s(&[0, 1]), &[-1, -1]).unwrap(), 1);
        assert_eq!(
            sheaf(1, 2).section_dim(&s(&[0]), &[1, 0]).unwrap_err(),
            Error::DegreeMismatch { expected: 2, got: 1 }
        );
    }

    #[test]
    fn coboundary_examples() {
        // δ⁰ on O(0), a = (0,0): row (0,1) gets -σ_0 + σ_1
        let m = sheaf(1, 0).coboundary_matrix(0, &[0, 0]).unwrap();
        assert_eq!(m, ExactMatrix::from_i64(&[&[-1, 1]]));
        // empty nerve above the top degree
        let top = sheaf(1, 0).coboundary_matrix(1, &[0, 0]).unwrap();
        assert_eq!((top.rows(), top.cols()), (0, 1));
        let m = sheaf(1, -2).coboundary_matrix(0, &[-1, -1]).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 0));
    }

    #[test]
    fn cohomology_examples() {
        assert_eq!(sheaf(1, 0).cohomology_dim(0), 1);
        assert_eq!(sheaf(1, 3).cohomology_dim(0), count_vectors(2, 3, 0..=3));
        assert_eq!(sheaf(1, 3).cohomology_dim(0), 4);
        assert_eq!(sheaf(1, -3).cohomology_dim(1), count_vectors(2, -3, -3..=-1));
        assert_eq!(sheaf(1, -3).cohomology_dim(1), 2);
    }

    #[test]
    fn delta_squared_examples() {
        let o1 = sheaf(2, 1);
        for a in o1.multidegrees(o1.default_window()) {
            assert!(o1.verify_delta_squared(0, &a).unwrap());
        }
        for d in -4..=4 {
            let s = sheaf(1, d);
            for a in s.multidegrees(s.default_window()) {
                assert!(s.verify_delta_squared(1, &a).unwrap());
            }
        }
        assert!(sheaf(2, -3).verify_delta_squared(0, &[-1, -1, -1]).unwrap());
    }

    #[test]
    fn full_cochain_matrices_square_to_zero() {
        // with every summand present (all exponents negative) δ¹δ⁰ is the
        // unrestricted 1x3 times 3x3 product on P^2
        let s = sheaf(2, -3);
        let d0 = s.coboundary_matrix(1, &[-1, -1, -1]).unwrap();
        assert_eq!((d0.rows(), d0.cols()), (1, 0));
        let s = sheaf(2, 0);
        let d0 = s.coboundary_matrix(0, &[0, 0, 0]).unwrap();
        let d1 = s.coboundary_matrix(1, &[0, 0, 0]).unwrap();
        assert_eq!((d0.rows(), d0.cols(), d1.rows(), d1.cols()), (3, 3, 1, 3));
        assert!(d1.mul(&d0).unwrap().is_zero());
        assert_eq!(*d1.get(0, 0), int(1));
    }

    #[test]
    fn global_sections_match_monomial_count() {
        for n in 1..=3usize {
            for d in -6..=6i64 {
                let want = if d >= 0 { count_vectors(n + 1, d, 0..=d) } else { 0 };
                assert_eq!(sheaf(n, d).cohomology_dim(0), want, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn top_cohomology_matches_negative_count() {
        for n in 1..=3usize {
            for d in -6..=6i64 {
                let want = if d < 0 { count_vectors(n + 1, d, d..=-1) } else { 0 };
                assert_eq!(sheaf(n, d).cohomology_dim(n), want, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn intermediate_cohomology_vanishes() {
        for d in -6..=6 {
            assert_eq!(sheaf(2, d).cohomology_dim(1), 0, "d={d}");
        }
        for d in -5..=5 {
            let s = sheaf(3, d);
            assert_eq!(s.cohomology_dim(1) + s.cohomology_dim(2), 0, "d={d}");
        }
    }

    #[test]
    fn wider_window_changes_nothing() {
        for n in 1..=2usize {
            for d in -6..=6i64 {
                let s = sheaf(n, d);
                for q in 0..=n {
                    let narrow = s.cohomology(q, s.default_window()).dim;
                    let wide = s.cohomology(q, s.default_window() + 2).dim;
                    assert_eq!(narrow, wide, "n={n} d={d} q={q}");
                }
            }
        }
    }

    #[test]
    fn degrees_beyond_n_vanish() {
        assert_eq!(sheaf(1, -5).cohomology_dim(2), 0);
        assert_eq!(sheaf(2, -5).cohomology_dim(3), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn delta_squares_to_zero(n in 1usize..=3, d in -6i64..=6, p in 0usize..3, pick in any::<prop::sample::Index>()) {
            let s = sheaf(n, d);
            let all = s.multidegrees(s.default_window());
            let a = pick.get(&all);
            prop_assert!(s.verify_delta_squared(p, a).unwrap());
        }
    }
}
