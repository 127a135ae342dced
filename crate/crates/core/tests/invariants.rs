//! Algebraic invariants checked on random inputs.

use std::collections::BTreeMap;

use kodaira_core::cech::TwistingSheaf;
use kodaira_core::divisors::{principal_divisor, section_space, DivisorP1, PointP1};
use kodaira_core::hermitian::{curvature, HermExpr};
use kodaira_core::kodaira::{eval_map, ProjPoint, SectionBasis};
use kodaira_core::linalg::ExactMatrix;
use kodaira_core::symbolic::{int, rat, Gaussian, LaurentPoly, Rational, RationalFunc};
use proptest::prelude::*;

const VARS: [&str; 2] = ["x", "y"];

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((0..3i64, 0..3i64, -5..6i64), 1..4).prop_map(|ts| {
        LaurentPoly::from_terms(&VARS, ts.into_iter().map(|(a, b, c)| (vec![a, b], int(c)))).unwrap()
    })
}

fn ratfunc() -> impl Strategy<Value = RationalFunc> {
    (poly(), poly()).prop_filter_map("zero denominator", |(n, d)| RationalFunc::new(n, d).ok())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..30).prop_map(|(n, d)| rat(n, d))
}

fn matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..4, c), r).prop_map(move |rows| {
            ExactMatrix::from_rows(c, rows.into_iter().map(|row| row.into_iter().map(int).collect()).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalize_is_idempotent(f in ratfunc()) {
        let once = f.normalize();
        let twice = once.normalize();
        prop_assert_eq!(once.num().to_string(), twice.num().to_string());
        prop_assert_eq!(once.den().to_string(), twice.den().to_string());
    }

    #[test]
    fn identity_substitution_normalizes(f in ratfunc()) {
        let binding: BTreeMap<String, RationalFunc> =
            VARS.iter().map(|v| (v.to_string(), RationalFunc::var(&VARS, v).unwrap())).collect();
        let g = f.substitute(&binding).unwrap();
        prop_assert_eq!(g.num().to_string(), f.normalize().num().to_string());
        prop_assert_eq!(g.den().to_string(), f.normalize().den().to_string());
    }

    #[test]
    fn partial_obeys_leibniz(f in ratfunc(), g in ratfunc()) {
        for v in VARS {
            let lhs = (&f * &g).partial(v).unwrap();
            let rhs = &(&f * &g.partial(v).unwrap()) + &(&g * &f.partial(v).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rational_arithmetic_is_exact(a in rational(), c in rational()) {
        prop_assert_eq!((&a + &c) - &c, a);
    }

    #[test]
    fn rank_of_transpose(m in matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.kernel_dim() + m.rank(), m.cols());
    }

    #[test]
    fn composable_zero_product_ranks(n in 2usize..4, d in -3i64..4, p in 0usize..2, a0 in -4i64..5, a1 in -4i64..5) {
        prop_assume!(p + 1 < n);
        let s = TwistingSheaf::new(n, d).unwrap();
        let mut a = vec![a0, a1];
        a.resize(n, 0);
        a.push(d - a.iter().sum::<i64>());
        let first = s.coboundary_matrix(p, &a).unwrap();
        let second = s.coboundary_matrix(p + 1, &a).unwrap();
        prop_assert!(second.mul(&first).unwrap().is_zero());
        prop_assert!(first.rank() + second.rank() <= second.cols());
    }

    #[test]
    fn eval_map_is_scale_invariant(d in 1i64..5, t in rational(), lam in rational(), im in -3i64..4) {
        prop_assume!(!num_traits::Zero::is_zero(&lam) || im != 0);
        let b = SectionBasis::full(1, d).unwrap();
        let p = ProjPoint::affine_line(t.clone());
        let scale = Gaussian::new(lam, int(im));
        let scaled = ProjPoint::new(p.coords().iter().map(|c| c * &scale).collect()).unwrap();
        prop_assert_eq!(eval_map(&b, &p).unwrap(), eval_map(&b, &scaled).unwrap());
    }

    #[test]
    fn section_space_matches_global_sections(a in 0i64..4, b in 0i64..4, c in 0i64..4, p in rational()) {
        let d = DivisorP1::from_terms([
            (PointP1::Affine(p), a),
            (PointP1::Affine(int(7)), b),
            (PointP1::Infinity, c),
        ]);
        let s = section_space(&d);
        let h0 = TwistingSheaf::new(1, d.degree()).unwrap().cohomology_dim(0);
        prop_assert_eq!(s.dim(), h0);
        for f in &s.basis {
            prop_assert!(d.add(&principal_divisor(f).unwrap()).is_effective());
        }
        prop_assert_eq!(SectionBasis::full(1, d.degree()).unwrap().len(), h0);
    }

    #[test]
    fn curvature_of_real_metric_is_hermitian(e1 in -2i64..3, e2 in -2i64..3, c in 1i64..6) {
        let n = 2;
        let zw = HermExpr::z(n, 1).unwrap().mul(&HermExpr::w(n, 1).unwrap());
        let h = HermExpr::constant(n, int(c))
            .add(&zw)
            .pow(e1)
            .unwrap()
            .mul(&HermExpr::fs_potential(n).pow(e2).unwrap());
        prop_assume!(h.is_real());
        prop_assert!(curvature(&h).unwrap().is_hermitian_symmetric());
    }
}
