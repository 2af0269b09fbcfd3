//! Deterministic JSON and TSV rendering.  Object fields appear in a fixed
//! order and floats are rounded to twelve decimals before serialization.

use entrofunc_core::bridge::{BridgeVerdict, CheckMode, Status};
use entrofunc_core::logvalue::{Base, LogValue};
use entrofunc_core::semigroup::laws::LawStatus;
use entrofunc_core::semigroup::{Classification, EntropyConfig, EntropyEstimate, ExactRule, Scope};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::run::{Computed, LawOutcome};
use crate::CliError;

pub const FLOAT_DIGITS: usize = 12;

pub fn float(x: f64) -> Value {
    if x.is_finite() {
        let r: f64 = format!("{x:.FLOAT_DIGITS$}").parse().expect("formatted float parses");
        serde_json::Number::from_f64(if r == 0.0 { 0.0 } else { r }).map(Value::Number).unwrap_or(Value::Null)
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

pub fn float_text(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.FLOAT_DIGITS$}")
    } else {
        format!("{x}")
    }
}

/// JSON integer when it fits, else a string `"n/d"`.
pub fn rational(r: &BigRational) -> Value {
    if r.is_integer() {
        if let Some(n) = r.to_integer().to_i64() {
            return json!(n);
        }
        return Value::String(r.numer().to_string());
    }
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

/// `{"q", "m", "float"}` for `q·ln m`, `{"count", "float"}` for counts,
/// `"inf"`, or a bare float for approximations.  Mixed sums list their
/// terms.
pub fn value_json(v: &LogValue) -> Value {
    match v {
        LogValue::Infinite => Value::String("inf".into()),
        LogValue::Approx(x) => float(*x),
        LogValue::Exact(s) => {
            let f = float(v.to_f64());
            if s.is_zero() {
                return json!({ "q": 0, "m": 1, "float": f });
            }
            if let Some(c) = s.as_count() {
                return json!({ "count": rational(&c), "float": f });
            }
            if let Some((q, m)) = s.as_q_log_m() {
                return json!({ "q": rational(&q), "m": rational(&m), "float": f });
            }
            let terms: Vec<Value> = s
                .terms()
                .iter()
                .map(|(b, c)| match b {
                    Base::Unit => json!({ "count": rational(c) }),
                    Base::Log(n) => json!({ "q": rational(c), "m": rational(&BigRational::from_integer(BigInt::from(n.clone()))) }),
                })
                .collect();
            json!({ "terms": terms, "float": f })
        }
    }
}

fn opt_value(v: &Option<LogValue>) -> Value {
    v.as_ref().map(value_json).unwrap_or(Value::Null)
}

pub fn rule_json(c: &Classification) -> Value {
    match c {
        Classification::Exact { rule, .. } | Classification::ExactHeuristic { rule, .. } => match rule {
            ExactRule::ConstantDifference { from } => json!({ "type": "constant_difference", "from": from }),
            ExactRule::EventuallyConstant { from } => json!({ "type": "eventually_constant", "from": from }),
            ExactRule::AffineRecurrence { a, b, from } => {
                json!({ "type": "affine_recurrence", "a": rational(a), "b": rational(b), "from": from })
            }
            ExactRule::QuasiPeriodic { k, m } => json!({ "type": "quasi_periodic", "k": k, "m": m }),
            ExactRule::InfiniteNorm => json!({ "type": "infinite_norm" }),
            ExactRule::Certified(reason) => json!({ "type": "certified", "reason": reason }),
        },
        Classification::FeketeUpperBound { at, .. } => json!({ "type": "fekete", "at": at }),
        Classification::Numeric { window_slope, residual, .. } => {
            json!({ "type": "numeric", "window_slope": float(*window_slope), "residual": float(*residual) })
        }
    }
}

fn scope_json(s: &Scope) -> Value {
    match s {
        Scope::WitnessRestricted => json!({ "type": "witness_restricted" }),
        Scope::Certified(r) => json!({ "type": "certified", "reason": r }),
        Scope::Unbounded(r) => json!({ "type": "unbounded", "reason": r }),
    }
}

fn certificate(label: &str, e: &EntropyEstimate) -> Value {
    json!({
        "witness": label,
        "classification": e.classification.tag(),
        "rule": rule_json(&e.classification),
        "value": value_json(&e.value()),
        "c": e.c.iter().map(value_json).collect::<Vec<_>>(),
    })
}

pub fn entropy_json(name: Option<&str>, kind: &str, c: &Computed, cfg: &EntropyConfig) -> Value {
    let r = &c.report;
    let mut m = Map::new();
    m.insert("spec".into(), name.map(|s| Value::String(s.into())).unwrap_or(Value::Null));
    m.insert("kind".into(), json!(kind));
    m.insert("quantity".into(), json!(c.quantity));
    m.insert("c".into(), Value::Array(r.estimate.c.iter().map(value_json).collect()));
    m.insert("classification".into(), json!(r.estimate.classification.tag()));
    m.insert("rule".into(), rule_json(&r.estimate.classification));
    m.insert("value".into(), value_json(&r.value()));
    m.insert("witness_restricted".into(), json!(r.witness_restricted()));
    m.insert("scope".into(), scope_json(&r.scope));
    m.insert(
        "certificates".into(),
        Value::Array(c.labels.iter().zip(&r.per_witness).map(|(l, e)| certificate(l, e)).collect()),
    );
    m.insert("params".into(), json!({ "n_max": cfg.n_max, "window": cfg.window }));
    Value::Object(m)
}

pub fn entropy_tsv(c: &Computed) -> String {
    let r = &c.report;
    let v = r.value();
    let mut out = String::new();
    out.push_str(&format!("quantity\t{}\n", c.quantity));
    out.push_str(&format!("classification\t{}\n", r.estimate.classification.tag()));
    out.push_str(&format!("value\t{}\t{}\n", v, float_text(v.to_f64())));
    out.push_str(&format!("witness_restricted\t{}\n", r.witness_restricted()));
    for (l, e) in c.labels.iter().zip(&r.per_witness) {
        let ev = e.value();
        out.push_str(&format!("witness\t{}\t{}\t{}\t{}\n", l, e.classification.tag(), ev, float_text(ev.to_f64())));
    }
    out
}

/// One row per witness and step: `n`, exact `c_n`, float `c_n/n`.
pub fn trace_rows(c: &Computed) -> Vec<(String, usize, LogValue)> {
    let mut rows = Vec::new();
    for (l, e) in c.labels.iter().zip(&c.report.per_witness) {
        for (i, v) in e.c.iter().enumerate() {
            rows.push((l.clone(), i + 1, v.clone()));
        }
    }
    rows
}

pub fn trace_tsv(c: &Computed) -> Result<String, CliError> {
    let rows = trace_rows(c);
    if rows.is_empty() {
        return Err(CliError::spec("no trajectory data for this spec"));
    }
    let mut out = String::from("witness\tn\tc_n\tc_n/n\n");
    for (l, n, v) in rows {
        out.push_str(&format!("{}\t{}\t{}\t{}\n", l, n, v, float_text(v.to_f64() / n as f64)));
    }
    Ok(out)
}

pub fn trace_json(c: &Computed) -> Result<Value, CliError> {
    let rows = trace_rows(c);
    if rows.is_empty() {
        return Err(CliError::spec("no trajectory data for this spec"));
    }
    Ok(Value::Array(
        rows.into_iter()
            .map(|(l, n, v)| json!({ "witness": l, "n": n, "c_n": value_json(&v), "c_n_over_n": float(v.to_f64() / n as f64) }))
            .collect(),
    ))
}

fn status_tag(s: &LawStatus) -> (&'static str, Value) {
    match s {
        LawStatus::Holds => ("holds", Value::Null),
        LawStatus::Fails => ("fails", Value::Null),
        LawStatus::Inconclusive => ("inconclusive", Value::Null),
        LawStatus::Inapplicable(why) => ("inapplicable", Value::String(why.clone())),
    }
}

pub fn law_json(o: &LawOutcome) -> Value {
    let (tag, why) = status_tag(&o.status);
    json!({
        "law": o.law,
        "status": tag,
        "holds": o.holds(),
        "reason": why,
        "lhs": opt_value(&o.lhs),
        "rhs": opt_value(&o.rhs),
        "details": o.details,
    })
}

pub fn law_tsv(o: &LawOutcome) -> String {
    let (tag, _) = status_tag(&o.status);
    let show = |v: &Option<LogValue>| v.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "-".into());
    format!("{}\t{}\t{}\t{}\n", o.law, tag, show(&o.lhs), show(&o.rhs))
}

/// Per-step verdict for per-step cases, the limit verdict for limit cases,
/// `None` for open ones.
pub fn verdict_pass(v: &BridgeVerdict) -> Option<bool> {
    match (&v.status, v.mode) {
        (Status::Open, _) => None,
        (_, CheckMode::PerStep) => v.per_step_pass(),
        (s, CheckMode::Limit) => Some(*s == Status::Pass),
    }
}

pub fn verdict_json(v: &BridgeVerdict) -> Result<Value, CliError> {
    let lhs = v.lhs()?;
    Ok(json!({
        "case": v.case,
        "kind": v.kind,
        "mode": v.mode.tag(),
        "coefficient": v.coefficient.render(),
        "n": v.n(),
        "lhs": lhs.iter().map(value_json).collect::<Vec<_>>(),
        "rhs": v.target.iter().map(value_json).collect::<Vec<_>>(),
        "pass": verdict_pass(v),
        "status": v.status.tag(),
        "first_mismatch": v.first_mismatch,
        "source_limit": opt_value(&v.source_limit),
        "target_limit": opt_value(&v.target_limit),
        "limit_pass": v.limit_pass()?,
        "note": v.note,
    }))
}

pub fn verdict_tsv(v: &BridgeVerdict) -> Result<String, CliError> {
    let lhs = v.lhs()?;
    let mut out = format!("# {} [{}] {} {}\n", v.case, v.kind, v.mode.tag(), v.status.tag());
    out.push_str("n\tlhs\trhs\n");
    for (i, (a, b)) in lhs.iter().zip(&v.target).enumerate() {
        out.push_str(&format!("{}\t{}\t{}\n", i + 1, a, b));
    }
    Ok(out)
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}
