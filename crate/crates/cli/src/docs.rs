//! JSON documents read and written by the command line.
//!
//! Rationals are strings `"p/q"` (a bare integer string or JSON integer is
//! also accepted on input). Readers ignore fields they do not know, so an
//! output document carrying extra report fields can be fed back in.

use std::collections::BTreeMap;
use std::io::Read;

use kodaira_core::bundle::{homogeneous_vars, MonomialCocycle, UnitMonomial};
use kodaira_core::divisors::{parse_point, DivisorP1, AFFINE_VAR};
use kodaira_core::hermitian::{herm_vars, FormCoeffMatrix, HermExpr};
use kodaira_core::kodaira::{ProjPoint, SectionBasis};
use kodaira_core::symbolic::{format_rational, parse_rational, Gaussian, LaurentPoly, Rational, RationalFunc};
use serde_json::{json, Map, Value};

/// A document that does not match its schema.
#[derive(Debug)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub type DocResult<T> = Result<T, SchemaError>;

fn err<T>(msg: impl Into<String>) -> DocResult<T> {
    Err(SchemaError(msg.into()))
}

fn core<T>(r: kodaira_core::Result<T>) -> DocResult<T> {
    r.map_err(|e| SchemaError(e.to_string()))
}

/// Loads a document given as `-` (stdin), inline JSON, or a file path.
pub fn load(arg: &str) -> DocResult<Value> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| SchemaError(format!("stdin: {e}")))?;
        s
    } else if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| SchemaError(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| SchemaError(format!("invalid JSON: {e}")))
}

fn field<'a>(v: &'a Value, key: &str) -> DocResult<&'a Value> {
    v.get(key).ok_or_else(|| SchemaError(format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, what: &str) -> DocResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| SchemaError(format!("`{what}` must be an array")))
}

fn uint(v: &Value, what: &str) -> DocResult<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| SchemaError(format!("`{what}` must be a nonnegative integer")))
}

fn int(v: &Value, what: &str) -> DocResult<i64> {
    v.as_i64().ok_or_else(|| SchemaError(format!("`{what}` must be an integer")))
}

pub fn rational(v: &Value) -> DocResult<Rational> {
    match v {
        Value::String(s) => core(parse_rational(s)),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        _ => err(format!("expected a rational string \"p/q\", got {v}")),
    }
}

pub fn rational_doc(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

/// A rational string, or `{"re": .., "im": ..}` with either part optional.
pub fn gaussian(v: &Value) -> DocResult<Gaussian> {
    match v {
        Value::Object(m) => {
            let part = |k: &str| m.get(k).map_or_else(|| Ok(Rational::from_integer(0.into())), rational);
            Ok(Gaussian::new(part("re")?, part("im")?))
        }
        _ => Ok(Gaussian::real(rational(v)?)),
    }
}

fn vars_of(v: &Value) -> DocResult<Option<Vec<String>>> {
    match v.get("vars") {
        None => Ok(None),
        Some(vs) => array(vs, "vars")?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| SchemaError("variable names must be strings".into())))
            .collect::<DocResult<Vec<_>>>()
            .map(Some),
    }
}

/// `{"vars": [..], "terms": [{"exponents": [..], "coefficient": "p/q"}]}`;
/// `vars` may be omitted when `default_vars` is given.
pub fn poly(v: &Value, default_vars: Option<&[String]>) -> DocResult<LaurentPoly> {
    let vars = match (vars_of(v)?, default_vars) {
        (Some(vs), _) => vs,
        (None, Some(d)) => d.to_vec(),
        (None, None) => return err("polynomial needs `vars`"),
    };
    let mut terms = Vec::new();
    for t in array(field(v, "terms")?, "terms")? {
        let exps = array(field(t, "exponents")?, "exponents")?
            .iter()
            .map(|e| int(e, "exponents"))
            .collect::<DocResult<Vec<_>>>()?;
        terms.push((exps, rational(field(t, "coefficient")?)?));
    }
    core(LaurentPoly::from_terms(&vars, terms))
}

fn terms_doc(p: &LaurentPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| json!({"exponents": e, "coefficient": rational_doc(c)}))
            .collect(),
    )
}

pub fn poly_doc(p: &LaurentPoly) -> Value {
    json!({"vars": p.vars(), "terms": terms_doc(p), "text": p.to_string()})
}

/// `{"vars": [..], "num": {"terms": ..}, "den": {"terms": ..}}`; `den`
/// defaults to 1.
pub fn ratfunc(v: &Value) -> DocResult<RationalFunc> {
    let vars = vars_of(v)?.ok_or_else(|| SchemaError("rational function needs `vars`".into()))?;
    let num = poly(field(v, "num")?, Some(&vars))?;
    let den = match v.get("den") {
        Some(d) => poly(d, Some(&vars))?,
        None => LaurentPoly::one(&vars),
    };
    core(RationalFunc::new(num, den).and_then(|f| f.with_vars(&vars)))
}

pub fn ratfunc_doc(f: &RationalFunc) -> Value {
    json!({
        "vars": f.vars(),
        "num": {"terms": terms_doc(f.num())},
        "den": {"terms": terms_doc(f.den())},
        "text": f.to_string(),
    })
}

/// A rational function of the affine coordinate `z` on the projective line.
pub fn function_p1(v: &Value) -> DocResult<RationalFunc> {
    let f = ratfunc(v)?;
    core(f.with_vars(&[AFFINE_VAR.to_string()]))
        .map_err(|_| SchemaError(format!("function must only involve `{AFFINE_VAR}`")))
}

/// `{"n": N, "transitions": [{"i", "j", "coefficient", "exponents"}]}`.
/// If every pair has `i < j` the inverses are filled in; otherwise all
/// ordered pairs must be listed.
pub fn cocycle(v: &Value) -> DocResult<MonomialCocycle> {
    let n = uint(field(v, "n")?, "n")?;
    let mut g = BTreeMap::new();
    for t in array(field(v, "transitions")?, "transitions")? {
        let i = uint(field(t, "i")?, "i")?;
        let j = uint(field(t, "j")?, "j")?;
        let exps = array(field(t, "exponents")?, "exponents")?
            .iter()
            .map(|e| int(e, "exponents"))
            .collect::<DocResult<Vec<_>>>()?;
        let m = core(UnitMonomial::new(rational(field(t, "coefficient")?)?, exps))?;
        if g.insert((i, j), m).is_some() {
            return err(format!("transition ({i},{j}) listed twice"));
        }
    }
    if g.keys().all(|&(i, j)| i < j) {
        core(MonomialCocycle::from_upper(n, g))
    } else {
        core(MonomialCocycle::new(n, g))
    }
}

pub fn cocycle_doc(c: &MonomialCocycle) -> Value {
    let vars = homogeneous_vars(c.n());
    let transitions: Vec<Value> = c
        .transitions()
        .filter(|((i, j), _)| i < j)
        .map(|((i, j), m)| {
            json!({
                "i": i,
                "j": j,
                "coefficient": rational_doc(m.coeff()),
                "exponents": m.exponents(),
                "text": m.format_with(&vars),
            })
        })
        .collect();
    json!({"n": c.n(), "transitions": transitions})
}

/// `{"terms": [{"point": "p/q" | "inf", "coefficient": k}]}`.
pub fn divisor(v: &Value) -> DocResult<DivisorP1> {
    let mut terms = Vec::new();
    for t in array(field(v, "terms")?, "terms")? {
        let p = field(t, "point")?.as_str().ok_or_else(|| SchemaError("`point` must be a string".into()))?;
        terms.push((core(parse_point(p))?, int(field(t, "coefficient")?, "coefficient")?));
    }
    Ok(DivisorP1::from_terms(terms))
}

pub fn divisor_doc(d: &DivisorP1) -> Value {
    json!({"terms": d.terms(), "degree": d.degree(), "text": d.to_string()})
}

/// Coordinate arrays, each coordinate a rational string or `{re, im}`.
pub fn coordinate_lists(v: &Value) -> DocResult<Vec<Vec<Gaussian>>> {
    array(v, "points")?
        .iter()
        .map(|p| array(p, "point")?.iter().map(gaussian).collect())
        .collect()
}

pub fn proj_points(v: &Value) -> DocResult<Vec<ProjPoint>> {
    coordinate_lists(v)?.into_iter().map(|c| core(ProjPoint::new(c))).collect()
}

/// `{"n": N, "vars": [z1.., w1..], "num": .., "den": ..}`; `n` may be
/// omitted when the variables determine it.
pub fn metric(v: &Value) -> DocResult<HermExpr> {
    let f = ratfunc(v)?;
    let n = match v.get("n") {
        Some(n) => uint(n, "n")?,
        None => infer_herm_dim(f.vars())?,
    };
    core(HermExpr::new(n, &f))
}

fn infer_herm_dim(vars: &[String]) -> DocResult<usize> {
    let mut n = 0;
    for v in vars {
        let idx = v
            .strip_prefix('z')
            .or_else(|| v.strip_prefix('w'))
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k >= 1)
            .ok_or_else(|| SchemaError(format!("cannot infer `n` from variable `{v}`")))?;
        n = n.max(idx);
    }
    if n == 0 {
        return err("metric needs `n`");
    }
    Ok(n)
}

pub fn metric_doc(h: &HermExpr) -> Value {
    let mut d = ratfunc_doc(h.func());
    d["n"] = json!(h.n());
    d
}

pub fn form_matrix_doc(m: &FormCoeffMatrix) -> Value {
    let entries: Vec<Vec<Value>> = m
        .entries()
        .iter()
        .map(|row| row.iter().map(|e| metric_doc(e)).collect())
        .collect();
    json!({"n": m.n(), "vars": herm_vars(m.n()), "entries": entries})
}

/// `{"n": N, "d": D, "sections": [poly, ..]}`; section `vars` default to
/// `x0..xn`.
pub fn basis(v: &Value) -> DocResult<SectionBasis> {
    let n = uint(field(v, "n")?, "n")?;
    let d = int(field(v, "d")?, "d")?;
    let vars = homogeneous_vars(n);
    let sections = array(field(v, "sections")?, "sections")?
        .iter()
        .map(|s| poly(s, Some(&vars)))
        .collect::<DocResult<Vec<_>>>()?;
    core(SectionBasis::new(n, d, sections))
}

pub fn basis_doc(b: &SectionBasis) -> Value {
    json!({"n": b.n(), "d": b.d(), "sections": b.sections().iter().map(poly_doc).collect::<Vec<_>>()})
}

/// Inserts `extra` fields into an object document.
pub fn with(mut doc: Value, extra: &[(&str, Value)]) -> Value {
    if let Value::Object(m) = &mut doc {
        for (k, v) in extra {
            m.insert(k.to_string(), v.clone());
        }
    }
    doc
}

pub fn object(fields: &[(&str, Value)]) -> Value {
    with(Value::Object(Map::new()), fields)
}
