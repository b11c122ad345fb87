//! Sequence files: `{"kind", "prefix", "tail", "declared_regime"}`.

use std::fmt;

use serde_json::{Map, Value};

use seqreg_core::num::parse_ext;
use seqreg_core::sequence::{ExprTail, Scale, TailRule};
use seqreg_core::{ExtReal, Rational, Regime, SequenceSpec};

use crate::expr::Expr;

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub source: String,
    /// Line and column of a JSON syntax error.
    pub location: Option<(usize, usize)>,
    /// Path of the offending field, such as `prefix[3]`.
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.source)?;
        if let Some((line, column)) = self.location {
            write!(f, ":{line}:{column}")?;
        }
        if let Some(field) = &self.field {
            write!(f, ": field `{field}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ParseError {}

struct Ctx<'a> {
    source: &'a str,
}

impl Ctx<'_> {
    fn err(&self, field: &str, message: impl Into<String>) -> ParseError {
        ParseError {
            source: self.source.to_string(),
            location: None,
            field: Some(field.to_string()),
            message: message.into(),
        }
    }

    fn number(&self, field: &str, value: &Value) -> Result<ExtReal, ParseError> {
        let text = match value {
            Value::Number(n) => n.to_string(),
            Value::String(s) => s.clone(),
            other => return Err(self.err(field, format!("expected a number, found {other}"))),
        };
        parse_ext(&text).map_err(|e| self.err(field, e.to_string()))
    }

    fn finite(&self, field: &str, value: &Value) -> Result<Rational, ParseError> {
        match self.number(field, value)? {
            ExtReal::Finite(r) => Ok(r),
            other => Err(self.err(field, format!("expected a finite number, found {other}"))),
        }
    }

    fn check_keys(&self, obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<(), ParseError> {
        for key in obj.keys() {
            if !allowed.contains(&key.as_str()) {
                let field = if path.is_empty() {
                    key.clone()
                } else {
                    format!("{path}.{key}")
                };
                return Err(self.err(&field, format!("unknown key (expected one of {})", allowed.join(", "))));
            }
        }
        Ok(())
    }
}

/// Reads a sequence file; `source` names the input in diagnostics.
pub fn parse_sequence(text: &str, source: &str) -> Result<SequenceSpec, ParseError> {
    let ctx = Ctx { source };
    let root: Value = serde_json::from_str(text).map_err(|e| ParseError {
        source: source.to_string(),
        location: Some((e.line(), e.column())),
        field: None,
        message: e.to_string(),
    })?;
    let obj = root
        .as_object()
        .ok_or_else(|| ctx.err("$", "expected a JSON object"))?;
    ctx.check_keys(obj, "", &["kind", "prefix", "tail", "declared_regime"])?;

    let scale = match obj.get("kind").and_then(Value::as_str) {
        Some("weight") => Scale::Weight,
        Some("log") => Scale::Log,
        Some(other) => return Err(ctx.err("kind", format!("expected \"weight\" or \"log\", found \"{other}\""))),
        None => return Err(ctx.err("kind", "missing or not a string")),
    };

    let prefix = match obj.get("prefix") {
        None => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| ctx.number(&format!("prefix[{i}]"), v))
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(ctx.err("prefix", "expected an array")),
    };

    let tail = match obj.get("tail") {
        None | Some(Value::Null) => TailRule::ExplicitOnly,
        Some(v) => parse_tail(&ctx, v, scale)?,
    };

    let mut spec = SequenceSpec::new(scale, prefix, tail).map_err(|e| ctx.err("prefix", e.to_string()))?;
    if let Some(v) = obj.get("declared_regime") {
        if !v.is_null() {
            spec = spec.with_declared(parse_regime(&ctx, v)?);
        }
    }
    Ok(spec)
}

fn parse_tail(ctx: &Ctx<'_>, value: &Value, scale: Scale) -> Result<TailRule, ParseError> {
    let obj = value
        .as_object()
        .ok_or_else(|| ctx.err("tail", "expected an object"))?;
    let kind = obj
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| ctx.err("tail.type", "missing or not a string"))?;
    let param = |name: &str| -> Result<Option<Rational>, ParseError> {
        obj.get(name)
            .map(|v| ctx.finite(&format!("tail.{name}"), v))
            .transpose()
    };
    let required = |name: &str| -> Result<Rational, ParseError> {
        param(name)?.ok_or_else(|| ctx.err(&format!("tail.{name}"), "missing"))
    };
    let one = Rational::from_integer(1.into());
    let rule = match kind {
        "explicit_only" => {
            ctx.check_keys(obj, "tail", &["type"])?;
            TailRule::ExplicitOnly
        }
        "factorial_power" => {
            ctx.check_keys(obj, "tail", &["type", "s", "c"])?;
            TailRule::FactorialPower {
                s: param("s")?.unwrap_or_else(|| one.clone()),
                c: param("c")?.unwrap_or(one),
            }
        }
        "geometric" => {
            ctx.check_keys(obj, "tail", &["type", "d"])?;
            TailRule::Geometric { d: required("d")? }
        }
        "affine_log" => {
            ctx.check_keys(obj, "tail", &["type", "c"])?;
            TailRule::AffineLog { c: required("c")? }
        }
        "expression" => {
            ctx.check_keys(obj, "tail", &["type", "expr", "scale"])?;
            let source = obj
                .get("expr")
                .and_then(Value::as_str)
                .ok_or_else(|| ctx.err("tail.expr", "missing or not a string"))?;
            let expr = Expr::parse(source).map_err(|e| ctx.err("tail.expr", e.to_string()))?;
            let expr_scale = match obj.get("scale").and_then(Value::as_str) {
                None => scale,
                Some("weight") => Scale::Weight,
                Some("log") => Scale::Log,
                Some(other) => return Err(ctx.err("tail.scale", format!("unknown scale \"{other}\""))),
            };
            let exact = expr.is_exact();
            TailRule::Expression(ExprTail::new(source, expr_scale, exact, move |p| expr.eval(p)))
        }
        other => return Err(ctx.err("tail.type", format!("unknown tail type \"{other}\""))),
    };
    Ok(rule)
}

fn parse_regime(ctx: &Ctx<'_>, value: &Value) -> Result<Regime, ParseError> {
    let field = "declared_regime";
    match value {
        Value::String(s) => {
            let lower = s.to_ascii_lowercase();
            match lower.as_str() {
                "standard" => Ok(Regime::Standard),
                "case1" | "case 1" => Ok(Regime::Case1),
                "indeterminate" => Ok(Regime::Indeterminate),
                _ => match lower.strip_prefix("case2:") {
                    Some(rest) => Ok(Regime::Case2 {
                        a_iota: ctx.finite(field, &Value::String(rest.trim().into()))?,
                    }),
                    None => Err(ctx.err(
                        field,
                        format!("expected standard, case1, case2:<a_iota> or {{\"case2\": <a_iota>}}, found \"{s}\""),
                    )),
                },
            }
        }
        Value::Object(obj) => {
            ctx.check_keys(obj, field, &["case2"])?;
            let a_iota = obj
                .get("case2")
                .ok_or_else(|| ctx.err(field, "expected a \"case2\" key"))?;
            Ok(Regime::Case2 {
                a_iota: ctx.finite("declared_regime.case2", a_iota)?,
            })
        }
        _ => Err(ctx.err(field, "expected a string or an object")),
    }
}
