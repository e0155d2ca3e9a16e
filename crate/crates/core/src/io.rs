//! File formats: model files, trajectory record streams, observables and
//! polynomial term lists. Every discrete quantity is an exact integer,
//! written as a decimal string and read from either a string or a JSON
//! integer. Floats are refused for integer fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::de::{self, DeserializeOwned, Deserializer, Visitor};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::automaton::{validate_spec, AutomatonSpec, RawSpec};
use crate::dynamics::{StatePair, TickState, Trajectory};
use crate::error::{Error, Result};
use crate::hermitian::HermitianIntMatrix;
use crate::observables::QuadraticObservable;
use crate::polynomial::{Monomial, Polynomial, Var, VarKind};

/// Exact integer field: JSON integer or decimal string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<JsonInt, E> {
                Err(E::custom(format!("float {v} given where an exact integer is required")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonInt, E> {
                parse_decimal(v).map(JsonInt).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// Integer field that must also fit in 64 bits (matrix entries).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JsonI64(pub i64);

impl<'de> Deserialize<'de> for JsonI64 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let JsonInt(v) = JsonInt::deserialize(d)?;
        v.to_i64()
            .map(JsonI64)
            .ok_or_else(|| de::Error::custom(format!("{v} does not fit in 64 bits")))
    }
}

fn parse_decimal(s: &str) -> std::result::Result<BigInt, String> {
    let t = s.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{s:?} is not a decimal integer"));
    }
    BigInt::from_str(t).map_err(|e| format!("{s:?}: {e}"))
}

/// Parses JSON into `T`, reporting the failing field path and position.
pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let v = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse(format!(
            "line {} column {}, field {}: {}",
            inner.line(),
            inner.column(),
            if path.is_empty() { "." } else { &path },
            strip_position(&inner.to_string())
        ))
    })?;
    de.end().map_err(|e| Error::Parse(format!("trailing data: {e}")))?;
    Ok(v)
}

fn strip_position(msg: &str) -> &str {
    msg.rsplit_once(" at line ").map_or(msg, |(head, _)| head)
}

fn ints(v: &[JsonInt]) -> Vec<BigInt> {
    v.iter().map(|j| j.0.clone()).collect()
}

fn matrix(rows: &[Vec<JsonI64>]) -> Vec<Vec<i64>> {
    rows.iter().map(|r| r.iter().map(|v| v.0).collect()).collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CField {
    One(JsonI64),
    List(Vec<JsonI64>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InitialFile {
    x_prev: Vec<JsonInt>,
    p_prev: Vec<JsonInt>,
    x_curr: Vec<JsonInt>,
    p_curr: Vec<JsonInt>,
    tau_prev: Option<JsonInt>,
    tau_curr: Option<JsonInt>,
    pi2_prev: Option<JsonInt>,
    pi2_curr: Option<JsonInt>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    dim: usize,
    #[serde(rename = "S", alias = "s")]
    s: Vec<Vec<JsonI64>>,
    #[serde(rename = "A", alias = "a")]
    a: Option<Vec<Vec<JsonI64>>>,
    c: Option<CField>,
    scale_l: Option<f64>,
    initial: Option<InitialFile>,
    tick: Option<i64>,
}

/// A parsed model: the automaton plus its initial pair, if given.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub spec: AutomatonSpec,
    pub initial: Option<StatePair>,
}

impl Model {
    pub fn initial(&self) -> Result<&StatePair> {
        self.initial
            .as_ref()
            .ok_or_else(|| Error::InvalidSpec("model has no initial state".into()))
    }
}

pub fn parse_model(text: &str) -> Result<Model> {
    let f: ModelFile = from_json_str(text)?;
    let dim = f.dim;
    let s = matrix(&f.s);
    let a = f.a.as_deref().map(matrix).unwrap_or_else(|| vec![vec![0; s.len()]; s.len()]);
    let c = match f.c {
        None => vec![1],
        Some(CField::One(v)) => vec![v.0],
        Some(CField::List(v)) => v.into_iter().map(|x| x.0).collect(),
    };
    let spec = validate_spec(RawSpec {
        s,
        a,
        c,
        scale_l: f.scale_l.unwrap_or(1.0),
    })?;
    if spec.dim() != dim {
        return Err(Error::InvalidSpec(format!(
            "dim is {dim} but S is {0}x{0}",
            spec.dim()
        )));
    }
    let initial = match f.initial {
        None => None,
        Some(i) => {
            for (name, v) in [
                ("x_prev", &i.x_prev),
                ("p_prev", &i.p_prev),
                ("x_curr", &i.x_curr),
                ("p_curr", &i.p_curr),
            ] {
                if v.len() != dim {
                    return Err(Error::InvalidSpec(format!(
                        "initial.{name} has length {} but dim is {dim}",
                        v.len()
                    )));
                }
            }
            let or_zero = |v: &Option<JsonInt>| v.as_ref().map(|j| j.0.clone()).unwrap_or_default();
            Some(StatePair {
                x_prev: ints(&i.x_prev),
                p_prev: ints(&i.p_prev),
                x_curr: ints(&i.x_curr),
                p_curr: ints(&i.p_curr),
                tau_prev: or_zero(&i.tau_prev),
                tau_curr: or_zero(&i.tau_curr),
                pi2_prev: or_zero(&i.pi2_prev),
                pi2_curr: or_zero(&i.pi2_curr),
                tick: f.tick.unwrap_or(0),
            })
        }
    };
    Ok(Model { spec, initial })
}

/// Model file text for a spec and initial pair.
pub fn model_to_json(spec: &AutomatonSpec, s: &StatePair) -> String {
    let strs = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    json!({
        "dim": spec.dim(),
        "S": spec.s(),
        "A": spec.a(),
        "c": spec.c(),
        "scale_l": spec.scale_l(),
        "tick": s.tick,
        "initial": {
            "x_prev": strs(&s.x_prev),
            "p_prev": strs(&s.p_prev),
            "x_curr": strs(&s.x_curr),
            "p_curr": strs(&s.p_curr),
            "tau_prev": s.tau_prev.to_string(),
            "tau_curr": s.tau_curr.to_string(),
            "pi2_prev": s.pi2_prev.to_string(),
            "pi2_curr": s.pi2_curr.to_string(),
        }
    })
    .to_string()
}

#[derive(Serialize)]
struct RecordOut {
    n: i64,
    x: Vec<String>,
    p: Vec<String>,
    tau: String,
    pi2: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordIn {
    n: i64,
    x: Vec<JsonInt>,
    p: Vec<JsonInt>,
    tau: JsonInt,
    pi2: JsonInt,
}

/// One JSON line `{n, x[], p[], tau, pi2}`.
pub fn tick_record(t: &TickState) -> String {
    serde_json::to_string(&RecordOut {
        n: t.tick,
        x: t.x.iter().map(ToString::to_string).collect(),
        p: t.p.iter().map(ToString::to_string).collect(),
        tau: t.tau.to_string(),
        pi2: t.pi2.to_string(),
    })
    .expect("records serialize")
}

pub fn parse_tick_record(line: &str) -> Result<TickState> {
    let r: RecordIn = from_json_str(line)?;
    if r.x.len() != r.p.len() {
        return Err(Error::DimensionMismatch {
            expected: r.x.len(),
            got: r.p.len(),
        });
    }
    Ok(TickState {
        tick: r.n,
        x: ints(&r.x),
        p: ints(&r.p),
        tau: r.tau.0,
        pi2: r.pi2.0,
    })
}

/// Parses a record stream, skipping blank lines. Errors name the line.
pub fn parse_records(text: &str) -> Result<Trajectory> {
    let mut states = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let t = parse_tick_record(line).map_err(|e| Error::Parse(format!("record on line {}: {e}", k + 1)))?;
        states.push(t);
    }
    Ok(Trajectory { states })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ObservableFile {
    re: Vec<Vec<JsonI64>>,
    im: Option<Vec<Vec<JsonI64>>>,
    tick: Option<i64>,
}

/// `{re, im, tick?}` with `im` defaulting to zero.
pub fn parse_observable(text: &str) -> Result<QuadraticObservable> {
    let f: ObservableFile = from_json_str(text)?;
    observable_from(f)
}

fn observable_from(f: ObservableFile) -> Result<QuadraticObservable> {
    let re = matrix(&f.re);
    let n = re.len();
    let im = f.im.as_deref().map(matrix).unwrap_or_else(|| vec![vec![0; n]; n]);
    Ok(QuadraticObservable::new(
        HermitianIntMatrix::from_parts(&re, &im)?,
        f.tick.unwrap_or(0),
    ))
}

pub fn observable_to_json(o: &QuadraticObservable) -> Value {
    let n = o.dim();
    let part = |f: fn(&crate::hermitian::GaussianInt) -> &BigInt| -> Vec<Vec<String>> {
        (0..n)
            .map(|i| (0..n).map(|j| f(o.g.get(i, j)).to_string()).collect())
            .collect()
    };
    json!({ "re": part(|z| &z.re), "im": part(|z| &z.im), "tick": o.tick })
}

/// Rational coefficient: integer, decimal string, or `"a/b"` string.
#[derive(Debug, Clone, PartialEq)]
struct JsonRational(BigRational);

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        let bad = || de::Error::custom("coefficient must be an integer or an \"a/b\" string");
        match v {
            Value::Number(n) => {
                let i = n.as_i64().ok_or_else(bad)?;
                Ok(JsonRational(BigRational::from_integer(i.into())))
            }
            Value::String(s) => {
                let (num, den) = s.split_once('/').unwrap_or((&s, "1"));
                let num = parse_decimal(num).map_err(de::Error::custom)?;
                let den = parse_decimal(den).map_err(de::Error::custom)?;
                if den == BigInt::from(0) {
                    return Err(de::Error::custom("zero denominator"));
                }
                Ok(JsonRational(BigRational::new(num, den)))
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct FactorJson {
    kind: String,
    #[serde(default)]
    index: u32,
    tick: i64,
    #[serde(default = "one")]
    power: u32,
}

fn one() -> u32 {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    coeff: JsonRational,
    #[serde(default)]
    vars: Vec<FactorJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialFile {
    terms: Vec<TermJson>,
}

/// Term list `{terms: [{coeff, vars: [{kind, index, tick, power}]}]}`.
pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let f: PolynomialFile = from_json_str(text)?;
    polynomial_from(f)
}

fn polynomial_from(f: PolynomialFile) -> Result<Polynomial> {
    let mut out = Polynomial::zero();
    for t in f.terms {
        let mut factors = Vec::new();
        for v in t.vars {
            let kind = VarKind::parse(&v.kind)
                .ok_or_else(|| Error::Parse(format!("unknown variable kind {:?}", v.kind)))?;
            if matches!(kind, VarKind::Tau | VarKind::Pi) && v.index != 0 {
                return Err(Error::Parse("tau and pi take no index".into()));
            }
            let var = match kind {
                VarKind::X => Var::x(v.index, v.tick),
                VarKind::P => Var::p(v.index, v.tick),
                VarKind::Tau => Var::tau(v.tick),
                VarKind::Pi => Var::pi(v.tick),
            };
            factors.push((var, v.power));
        }
        out.add_term(Monomial::new(factors), t.coeff.0);
    }
    out.check_degree()?;
    Ok(out)
}

fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn polynomial_to_json(p: &Polynomial) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            let vars: Vec<FactorJson> = m
                .factors()
                .iter()
                .map(|(v, e)| FactorJson {
                    kind: v.kind.as_str().to_string(),
                    index: v.index,
                    tick: v.tick,
                    power: *e,
                })
                .collect();
            json!({ "coeff": rational_string(c), "vars": vars })
        })
        .collect();
    json!({ "terms": terms })
}

/// Either input of a bracket: a quadratic observable or a term list.
#[derive(Debug, Clone, PartialEq)]
pub enum BracketOperand {
    Observable(QuadraticObservable),
    Polynomial(Polynomial),
}

impl BracketOperand {
    pub fn polynomial(&self) -> Polynomial {
        match self {
            BracketOperand::Observable(o) => o.to_polynomial(),
            BracketOperand::Polynomial(p) => p.clone(),
        }
    }
}

pub fn parse_operand(text: &str) -> Result<BracketOperand> {
    let v: Value = from_json_str(text)?;
    if v.get("terms").is_some() {
        parse_polynomial(text).map(BracketOperand::Polynomial)
    } else if v.get("re").is_some() {
        parse_observable(text).map(BracketOperand::Observable)
    } else {
        Err(Error::Parse("operand needs either \"terms\" or \"re\"".into()))
    }
}
