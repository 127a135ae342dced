//! Deterministic invariant suite exercising every module. Checks run in
//! parallel and are reported in a fixed order.

use rayon::prelude::*;
use serde::Serialize;

use crate::blowup::{verify_canonical_lemma, BlowupAtlas};
use crate::bundle::MonomialCocycle;
use crate::cech::TwistingSheaf;
use crate::divisors::{
    cech_section_dim, in_section_space, ord_at, principal_divisor, section_space, DivisorP1, PointP1, AFFINE_VAR,
};
use crate::error::Result;
use crate::hermitian::{curvature, fubini_study, positivity_sample, HermExpr};
use crate::kodaira::{default_samples_p1, embedding_checks};
use crate::symbolic::{int, rat, Gaussian, RationalFunc};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

type Check = (&'static str, fn() -> Result<(bool, String)>);

const CHECKS: &[Check] = &[
    ("cohomology_p1_table", cohomology_p1_table),
    ("vanishing_above_middle", vanishing_instances),
    ("coboundary_squares_to_zero", delta_squared),
    ("picard_degree_homomorphism", picard_homomorphism),
    ("blowup_canonical_lemma", canonical_lemma),
    ("exceptional_bundle_degree", exceptional_degree),
    ("curvature_additivity", curvature_additivity),
    ("fubini_study_positive", fubini_study_positive),
    ("principal_divisor_degree", principal_degree),
    ("section_space_dimension", section_dimension),
    ("embedding_by_degree", embedding_by_degree),
];

pub fn run() -> SelftestReport {
    let checks: Vec<CheckResult> = CHECKS
        .par_iter()
        .map(|(name, f)| match f() {
            Ok((passed, detail)) => CheckResult { name, passed, detail },
            Err(e) => CheckResult { name, passed: false, detail: format!("error: {e}") },
        })
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    SelftestReport { checks, passed }
}

fn cohomology_p1_table() -> Result<(bool, String)> {
    let mut rows = Vec::new();
    let mut ok = true;
    for d in -6i64..=6 {
        let s = TwistingSheaf::new(1, d)?;
        let (h0, h1) = (s.cohomology_dim(0), s.cohomology_dim(1));
        ok &= h0 as i64 == (d + 1).max(0) && h1 as i64 == (-d - 1).max(0);
        rows.push(format!("{d}:{h0}/{h1}"));
    }
    Ok((ok, rows.join(" ")))
}

fn vanishing_instances() -> Result<(bool, String)> {
    let mut count = 0;
    let mut ok = true;
    for n in 1..=2usize {
        for d in 1..=5i64 {
            let s = TwistingSheaf::new(n, d - n as i64 - 1)?;
            for q in 1..=n {
                ok &= s.cohomology_dim(q) == 0;
                count += 1;
            }
        }
    }
    Ok((ok, format!("{count} groups")))
}

fn delta_squared() -> Result<(bool, String)> {
    let mut count = 0;
    let mut ok = true;
    for n in 1..=3usize {
        for d in -3i64..=3 {
            let s = TwistingSheaf::new(n, d)?;
            for a in s.multidegrees(s.default_window()).into_iter().step_by(7) {
                for p in 0..n.saturating_sub(1) {
                    ok &= s.verify_delta_squared(p, &a)?;
                    count += 1;
                }
            }
        }
    }
    Ok((ok, format!("{count} instances")))
}

fn picard_homomorphism() -> Result<(bool, String)> {
    let mut ok = true;
    for n in 1..=3 {
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let t = MonomialCocycle::standard(n, a).tensor(&MonomialCocycle::standard(n, b))?;
                ok &= t.equivalence_degree()? == a + b;
            }
        }
    }
    Ok((ok, "n=1..3, degrees -3..3".into()))
}

fn canonical_lemma() -> Result<(bool, String)> {
    let mut ok = true;
    let mut signs = Vec::new();
    for n in 2..=4usize {
        let atlas = BlowupAtlas::new(n)?;
        let base = MonomialCocycle::trivial(n);
        let good = verify_canonical_lemma(&atlas, &base, n as i64 - 1)?;
        let bad = verify_canonical_lemma(&atlas, &base, n as i64 - 2)?;
        ok &= good.holds && !bad.holds;
        for j in 1..=n {
            for k in 1..=n {
                if j != k {
                    let s = atlas.jacobian_sign(j, k)?;
                    ok &= s.as_ref().is_some_and(|c| *c == int(1) || *c == int(-1));
                }
            }
        }
        let minus = good.blowup_pairs.iter().filter(|p| p.sign < 0).count();
        signs.push(format!("n={n}:{minus} negative"));
    }
    Ok((ok, signs.join(" ")))
}

fn exceptional_degree() -> Result<(bool, String)> {
    let mut degs = Vec::new();
    let mut ok = true;
    for n in 2..=4 {
        let e = BlowupAtlas::new(n)?.exceptional_cocycle()?;
        let d = e.equivalence_degree()?;
        ok &= d == -1 && e.dual().equivalence_degree()? == 1;
        degs.push(d.to_string());
    }
    Ok((ok, degs.join(" ")))
}

fn curvature_additivity() -> Result<(bool, String)> {
    let mut ok = true;
    let mut count = 0;
    for n in 1..=2usize {
        let base = HermExpr::fs_potential(n);
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                let h1 = base.pow(a)?.scale(&int(a.abs() + 1));
                let h2 = base.pow(b)?;
                let lhs = curvature(&h1.mul(&h2))?;
                let rhs = curvature(&h1)?.add(&curvature(&h2)?)?;
                ok &= lhs.sub(&rhs)?.is_zero() && lhs.is_hermitian_symmetric();
                count += 1;
            }
        }
    }
    Ok((ok, format!("{count} pairs")))
}

fn sample_points(n: usize) -> Vec<Vec<Gaussian>> {
    let vals = [int(0), int(1), int(-2), rat(1, 3), rat(-5, 2)];
    let mut pts = Vec::new();
    for (k, v) in vals.iter().enumerate() {
        let mut p = vec![Gaussian::real(v.clone()); n];
        if n > 1 {
            p[1] = Gaussian::new(vals[(k + 2) % vals.len()].clone(), int(1));
        }
        pts.push(p);
    }
    pts
}

fn fubini_study_positive() -> Result<(bool, String)> {
    let mut ok = true;
    let mut mins = Vec::new();
    for n in 1..=2 {
        for chart in 0..=n {
            let r = positivity_sample(&fubini_study(n, chart)?, &sample_points(n))?;
            ok &= r.all_positive;
            mins.push(format!("n={n},chart={chart}:{}", r.min_minor.unwrap_or_default()));
        }
    }
    Ok((ok, mins.join(" ")))
}

fn split_function(roots: &[(i64, i64)], poles: &[(i64, i64)]) -> Result<RationalFunc> {
    let vars = [AFFINE_VAR];
    let z = RationalFunc::var(&vars, AFFINE_VAR)?;
    let mut f = RationalFunc::constant(&vars, int(3));
    for &(p, q) in roots {
        f = &f * &(&z - &RationalFunc::constant(&vars, rat(p, q)));
    }
    for &(p, q) in poles {
        f = f.checked_div(&(&z - &RationalFunc::constant(&vars, rat(p, q))))?;
    }
    Ok(f)
}

fn principal_degree() -> Result<(bool, String)> {
    let cases: [(&[(i64, i64)], &[(i64, i64)]); 4] = [
        (&[(1, 1), (-1, 1)], &[(2, 1)]),
        (&[(0, 1), (0, 1), (1, 2)], &[(3, 1), (-2, 3)]),
        (&[], &[(5, 1), (5, 1)]),
        (&[(7, 3)], &[]),
    ];
    let mut ok = true;
    for (roots, poles) in cases {
        let f = split_function(roots, poles)?;
        let g = split_function(poles, &[(4, 1)])?;
        ok &= principal_divisor(&f)?.degree() == 0;
        for p in [PointP1::Affine(int(0)), PointP1::Affine(int(5)), PointP1::Infinity] {
            ok &= ord_at(&(&f * &g), &p)? == ord_at(&f, &p)? + ord_at(&g, &p)?;
        }
    }
    Ok((ok, format!("{} functions", cases.len())))
}

fn section_dimension() -> Result<(bool, String)> {
    let mut ok = true;
    let mut dims = Vec::new();
    for k in 0..6i64 {
        let d = DivisorP1::from_terms([
            (PointP1::Affine(int(0)), k),
            (PointP1::Affine(rat(1, 2)), k % 3),
            (PointP1::Infinity, (k + 1) % 2),
        ]);
        let s = section_space(&d);
        ok &= s.dim() as i64 == d.degree() + 1 && s.dim() == cech_section_dim(&d);
        for f in &s.basis {
            ok &= in_section_space(&d, f)?;
        }
        dims.push(s.dim().to_string());
    }
    Ok((ok, dims.join(" ")))
}

fn embedding_by_degree() -> Result<(bool, String)> {
    let samples = default_samples_p1();
    let mut ok = true;
    let mut verdicts = Vec::new();
    for d in 0..=4 {
        let v = embedding_checks(d, &samples)?;
        ok &= if d == 0 { !v.injective && !v.immersion && !v.two_point } else { v.embeds() };
        verdicts.push(format!("{d}:{}", if v.embeds() { "embeds" } else { "fails" }));
    }
    Ok((ok, verdicts.join(" ")))
}
