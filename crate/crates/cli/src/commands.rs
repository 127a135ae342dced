//! Subcommand handlers. Each returns an output document and a verdict.

use kodaira_core::blowup::{format_sign, verify_canonical_lemma, BlowupAtlas};
use kodaira_core::bundle::MonomialCocycle;
use kodaira_core::cech::TwistingSheaf;
use kodaira_core::divisors::{
    bundle_of_divisor, cech_section_dim, equivalence_witness, ord_at, parse_point, principal_divisor, section_space,
};
use kodaira_core::hermitian::{curvature, default_sample_points, fubini_study, positivity_sample, FormCoeffMatrix};
use kodaira_core::kodaira::{
    base_points, check_immersion, check_injective, default_samples_p1, distinct_pairs, eval_map, sample_grid,
    smallest_embedding_degree, two_point_surjectivity, ProjPoint, SectionBasis,
};
use kodaira_core::{selftest, Error};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::docs::{self, object, with, SchemaError};
use crate::{BlowupOp, Command, DivisorOp, KodairaOp, MapArgs, MetricArgs, PicardOp};

pub struct Outcome {
    pub doc: Value,
    pub ok: bool,
}

fn pass(doc: Value) -> Outcome {
    Outcome { doc, ok: true }
}

#[derive(Debug)]
pub enum CliError {
    Schema(String),
    Math(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "invalid input: {m}"),
            CliError::Math(e) => write!(f, "{e}"),
        }
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::Schema(e.0)
    }
}

/// Errors caused by out-of-range arguments count as input errors.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidChart(_)
            | Error::IndexOutOfRange { .. }
            | Error::DimensionMismatch(_)
            | Error::InvalidInput(_)
            | Error::UnknownVariable(_)
            | Error::EmptyBasis
            | Error::EqualPoints => CliError::Schema(e.to_string()),
            _ => CliError::Math(e),
        }
    }
}

type Res = Result<Outcome, CliError>;

pub fn run(cmd: Command) -> Res {
    match cmd {
        Command::Cohomology { n, d, q, window } => cohomology(n, d, q, window),
        Command::Picard { op } => picard(op),
        Command::Divisor { op } => divisor(op),
        Command::Blowup { op } => blowup(op),
        Command::Curvature(m) => Ok(pass(docs::form_matrix_doc(&metric_matrix(&m)?))),
        Command::Positivity { points, metric } => positivity(&points, &metric),
        Command::Kodaira { op } => kodaira(op),
        Command::Selftest => {
            let r = selftest::run();
            Ok(Outcome { ok: r.passed, doc: serde_json::to_value(&r).expect("serializable") })
        }
    }
}

fn cohomology(n: usize, d: i64, q: usize, window: Option<i64>) -> Res {
    let sheaf = TwistingSheaf::new(n, d)?;
    let window = window.unwrap_or_else(|| sheaf.default_window());
    if window < 0 {
        return Err(CliError::Schema("window must be nonnegative".into()));
    }
    Ok(pass(serde_json::to_value(sheaf.cohomology(q, window)).expect("serializable")))
}

fn load_cocycle(arg: &str) -> Result<MonomialCocycle, CliError> {
    Ok(docs::cocycle(&docs::load(arg)?)?)
}

fn picard(op: PicardOp) -> Res {
    match op {
        PicardOp::Check { cocycle } => {
            let c = load_cocycle(&cocycle)?;
            let holds = c.check_cocycle();
            Ok(Outcome { ok: holds, doc: object(&[("n", json!(c.n())), ("cocycle_condition", json!(holds))]) })
        }
        PicardOp::Tensor { a, b } => {
            let t = load_cocycle(&a)?.tensor(&load_cocycle(&b)?)?;
            Ok(pass(docs::cocycle_doc(&t)))
        }
        PicardOp::Degree { cocycle } => {
            let c = load_cocycle(&cocycle)?;
            let d = c.equivalence_degree()?;
            Ok(pass(object(&[("n", json!(c.n())), ("degree", json!(d))])))
        }
        PicardOp::Standard { n, d } => {
            let c = MonomialCocycle::standard(n, d);
            Ok(pass(with(docs::cocycle_doc(&c), &[("degree", json!(d))])))
        }
        PicardOp::Dual { cocycle } => Ok(pass(docs::cocycle_doc(&load_cocycle(&cocycle)?.dual()))),
    }
}

fn divisor(op: DivisorOp) -> Res {
    match op {
        DivisorOp::Ord { function, point } => {
            let f = docs::function_p1(&docs::load(&function)?)?;
            let p = parse_point(&point).map_err(|e| CliError::Schema(e.to_string()))?;
            let k = ord_at(&f, &p)?;
            Ok(pass(object(&[("point", json!(p.to_string())), ("order", json!(k))])))
        }
        DivisorOp::Principal { function } => {
            let f = docs::function_p1(&docs::load(&function)?)?;
            Ok(pass(docs::divisor_doc(&principal_divisor(&f)?)))
        }
        DivisorOp::Bundle { divisor } => {
            let d = docs::divisor(&docs::load(&divisor)?)?;
            let b = bundle_of_divisor(&d)?;
            Ok(pass(with(docs::cocycle_doc(&b.witness), &[("degree", json!(b.degree))])))
        }
        DivisorOp::Sections { divisor } => {
            let d = docs::divisor(&docs::load(&divisor)?)?;
            let s = section_space(&d);
            let mut doc = object(&[
                ("divisor", docs::divisor_doc(&d)),
                ("dim", json!(s.dim())),
                ("cech_dim", json!(cech_section_dim(&d))),
                ("basis", Value::Array(s.basis.iter().map(docs::ratfunc_doc).collect())),
            ]);
            if let Ok(forms) = SectionBasis::from_section_space(&s) {
                doc = with(doc, &[("forms", docs::basis_doc(&forms))]);
            }
            Ok(pass(doc))
        }
        DivisorOp::Equiv { a, b } => {
            let da = docs::divisor(&docs::load(&a)?)?;
            let db = docs::divisor(&docs::load(&b)?)?;
            let w = equivalence_witness(&da, &db);
            let doc = object(&[
                ("equivalent", json!(w.is_some())),
                ("witness", w.as_ref().map_or(Value::Null, docs::ratfunc_doc)),
            ]);
            Ok(Outcome { ok: w.is_some(), doc })
        }
    }
}

fn check_chart(atlas: &BlowupAtlas, j: usize) -> Result<(), CliError> {
    if j == 0 || j > atlas.n() {
        return Err(CliError::Schema(format!("chart index {j} outside 1..={}", atlas.n())));
    }
    Ok(())
}

fn blowup(op: BlowupOp) -> Res {
    match op {
        BlowupOp::Transition { n, j, k } => {
            let atlas = BlowupAtlas::new(n)?;
            check_chart(&atlas, j)?;
            check_chart(&atlas, k)?;
            let t = atlas.chart_transition(j, k)?;
            Ok(pass(object(&[
                ("n", json!(n)),
                ("from", json!(j)),
                ("to", json!(k)),
                ("vars", json!(atlas.chart_vars())),
                ("components", Value::Array(t.components.iter().map(docs::ratfunc_doc).collect())),
            ])))
        }
        BlowupOp::Jacobian { n, j, k } => {
            let atlas = BlowupAtlas::new(n)?;
            check_chart(&atlas, j)?;
            check_chart(&atlas, k)?;
            let det = atlas.jacobian_det(j, k)?;
            let sign = atlas.jacobian_sign(j, k)?;
            let matches = sign.is_some();
            Ok(Outcome {
                ok: matches,
                doc: object(&[
                    ("n", json!(n)),
                    ("from", json!(j)),
                    ("to", json!(k)),
                    ("det", docs::ratfunc_doc(&det)),
                    ("det_base", docs::ratfunc_doc(&atlas.to_base(j, &det)?)),
                    ("closed_form", docs::ratfunc_doc(&atlas.closed_form_jacobian(j, k)?)),
                    ("sign", json!(format_sign(&sign))),
                    ("matches", json!(matches)),
                ]),
            })
        }
        BlowupOp::VerifyCanonical { n, exponent, base } => {
            let atlas = BlowupAtlas::new(n)?;
            let base = match base {
                Some(b) => load_cocycle(&b)?,
                None => MonomialCocycle::trivial(n),
            };
            let r = verify_canonical_lemma(&atlas, &base, exponent.unwrap_or(n as i64 - 1))?;
            Ok(Outcome { ok: r.holds, doc: serde_json::to_value(&r).expect("serializable") })
        }
        BlowupOp::Exceptional { n } => {
            let e = BlowupAtlas::new(n)?.exceptional_cocycle()?;
            let d = e.equivalence_degree()?;
            Ok(pass(with(docs::cocycle_doc(&e), &[("degree", json!(d))])))
        }
    }
}

fn metric_matrix(m: &MetricArgs) -> Result<FormCoeffMatrix, CliError> {
    match (&m.source.metric, m.source.fs) {
        (Some(doc), _) => Ok(curvature(&docs::metric(&docs::load(doc)?)?)?),
        (None, Some(n)) => Ok(fubini_study(n, m.chart)?),
        (None, None) => Err(CliError::Schema("one of --metric or --fs is required".into())),
    }
}

fn positivity(points: &str, m: &MetricArgs) -> Res {
    let matrix = metric_matrix(m)?;
    let pts = if points == "default" {
        default_sample_points(matrix.n())
    } else {
        docs::coordinate_lists(&docs::load(points)?)?
    };
    if let Some(p) = pts.iter().find(|p| p.len() != matrix.n()) {
        return Err(CliError::Schema(format!("point has {} coordinates, expected {}", p.len(), matrix.n())));
    }
    let r = positivity_sample(&matrix, &pts)?;
    Ok(Outcome { ok: r.all_positive, doc: serde_json::to_value(&r).expect("serializable") })
}

fn samples(arg: &str, n: usize) -> Result<Vec<ProjPoint>, CliError> {
    let pts = match arg {
        "default" if n == 1 => default_samples_p1(),
        "default" => sample_grid(n),
        _ => docs::proj_points(&docs::load(arg)?)?,
    };
    if let Some(p) = pts.iter().find(|p| p.dim() != n) {
        return Err(CliError::Schema(format!("point {p} does not lie on P^{n}")));
    }
    Ok(pts)
}

fn section_basis(a: &MapArgs) -> Result<SectionBasis, CliError> {
    let b = match &a.basis {
        Some(doc) => docs::basis(&docs::load(doc)?)?,
        None => SectionBasis::full(a.n, a.d)?,
    };
    if b.n() != a.n || b.d() != a.d {
        return Err(CliError::Schema(format!("basis is on P^{} in degree {}, expected P^{} and {}", b.n(), b.d(), a.n, a.d)));
    }
    Ok(b)
}

fn kodaira(op: KodairaOp) -> Res {
    match op {
        KodairaOp::Basepoints(a) => {
            let b = section_basis(&a)?;
            let r = base_points(&b)?;
            let free = r.complete && r.points.is_empty();
            Ok(Outcome {
                ok: free,
                doc: with(serde_json::to_value(&r).expect("serializable"), &[("base_point_free", json!(free))]),
            })
        }
        KodairaOp::Map(a) => {
            let b = section_basis(&a)?;
            let pts = samples(&a.samples, a.n)?;
            let images: Vec<Value> = pts
                .par_iter()
                .map(|p| Ok(json!({"point": p, "image": eval_map(&b, p)?})))
                .collect::<Result<_, Error>>()?;
            Ok(pass(object(&[("basis", docs::basis_doc(&b)), ("images", Value::Array(images))])))
        }
        KodairaOp::Inject(a) => {
            let b = section_basis(&a)?;
            let r = check_injective(&b, &distinct_pairs(&samples(&a.samples, a.n)?))?;
            Ok(Outcome { ok: r.pass, doc: serde_json::to_value(&r).expect("serializable") })
        }
        KodairaOp::Immerse(a) => {
            let b = section_basis(&a)?;
            let r = check_immersion(&b, &samples(&a.samples, a.n)?)?;
            Ok(Outcome { ok: r.pass, doc: serde_json::to_value(&r).expect("serializable") })
        }
        KodairaOp::TwoPoint { n, d, samples: s } => {
            let pairs = distinct_pairs(&samples(&s, n)?);
            let verdicts: Vec<(ProjPoint, ProjPoint, bool)> = pairs
                .par_iter()
                .map(|(p, q)| Ok((p.clone(), q.clone(), two_point_surjectivity(d, p, q)?)))
                .collect::<Result<_, Error>>()?;
            let ok = verdicts.iter().all(|v| v.2);
            let rows: Vec<Value> =
                verdicts.iter().map(|(p, q, s)| json!({"p": p, "q": q, "surjective": s})).collect();
            Ok(Outcome { ok, doc: object(&[("d", json!(d)), ("pairs", Value::Array(rows)), ("pass", json!(ok))]) })
        }
        KodairaOp::Search { d_max, samples: s } => {
            let r = smallest_embedding_degree(d_max, &samples(&s, 1)?)?;
            Ok(Outcome { ok: r.smallest_degree.is_some(), doc: serde_json::to_value(&r).expect("serializable") })
        }
    }
}
