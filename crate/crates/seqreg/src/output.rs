//! JSON and CSV encodings of core results.
//!
//! Extended reals and rationals are written as strings (`"inf"`, `"-inf"`, `"p/q"`); JSON
//! objects keep their keys sorted.

use serde_json::{json, Map, Value};

use seqreg_core::num::format_rational;
use seqreg_core::oracle::OracleReport;
use seqreg_core::{ExtReal, PiecewiseLinearFn, Rational, Regime, StepFunction};

pub fn ext(v: &ExtReal) -> Value {
    Value::String(match v {
        ExtReal::PosInf => "inf".into(),
        ExtReal::NegInf => "-inf".into(),
        ExtReal::Finite(r) => format_rational(r),
    })
}

pub fn ext_list(vs: &[ExtReal]) -> Value {
    Value::Array(vs.iter().map(ext).collect())
}

pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// Floats for plotting; non-finite values become strings.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        Value::Null
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn regime(r: &Regime) -> Value {
    let (name, a_iota) = match r {
        Regime::Standard => ("standard", Value::Null),
        Regime::Case1 => ("case1", Value::Null),
        Regime::Case2 { a_iota } => ("case2", rational(a_iota)),
        Regime::Indeterminate => ("indeterminate", Value::Null),
    };
    json!({ "name": name, "a_iota": a_iota, "description": r.to_string() })
}

pub fn pwl(f: &PiecewiseLinearFn) -> Value {
    let pieces: Vec<Value> = f
        .pieces()
        .iter()
        .map(|p| json!({ "start": ext(&p.start), "slope": rational(&p.slope), "intercept": rational(&p.intercept) }))
        .collect();
    let breakpoints: Vec<Value> = f
        .breakpoints()
        .iter()
        .map(|b| {
            json!({
                "x": rational(&b.x),
                "left_value": rational(&b.left_value),
                "right_value": rational(&b.right_value),
                "slope_right": rational(&b.slope_right),
            })
        })
        .collect();
    json!({
        "at_neg_inf": ext(f.at_neg_inf()),
        "pieces": pieces,
        "breakpoints": breakpoints,
        "right": ext(f.right()),
        "right_closed": f.right_closed(),
    })
}

pub fn step(f: &StepFunction) -> Value {
    let jumps: Vec<Value> = f
        .jumps()
        .iter()
        .map(|(x, count)| json!({ "at": rational(x), "value": count }))
        .collect();
    json!({ "jumps": jumps, "right": ext(f.right()) })
}

/// Splits window values into the stable entries and a provisional sidecar.
pub fn split_values(
    key: &str,
    values: &[ExtReal],
    provisional_from: Option<usize>,
    out: &mut Map<String, Value>,
    sidecar: &mut Map<String, Value>,
) {
    let cut = provisional_from.unwrap_or(values.len()).min(values.len());
    out.insert(key.into(), ext_list(&values[..cut]));
    if cut < values.len() {
        sidecar.insert(key.into(), ext_list(&values[cut..]));
    }
}

pub fn oracle_report(report: &OracleReport, tolerance: f64) -> Value {
    json!({
        "quantity": report.quantity,
        "main": report.main.iter().map(|&x| float(x)).collect::<Vec<_>>(),
        "oracle": report.oracle.iter().map(|&x| float(x)).collect::<Vec<_>>(),
        "max_abs": float(report.max_abs),
        "max_rel": float(report.max_rel),
        "witness": report.witness,
        "tolerance": tolerance,
        "within_tolerance": report.max_rel <= tolerance,
    })
}

/// Comma separated rows with a header line.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn cell(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_nan() => String::new(),
        Some(v) if v == f64::INFINITY => "inf".into(),
        Some(v) if v == f64::NEG_INFINITY => "-inf".into(),
        Some(v) => format!("{v}"),
        None => String::new(),
    }
}
