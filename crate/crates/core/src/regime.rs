//! Asymptotic regime of `a_p / p`.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::num::{int, lift, ln_rational, to_f64, ExtReal, Rational};
use crate::sequence::{probe_indices, tail_indices, SequenceSpec, TailRule, Window};

#[derive(Clone, Debug, PartialEq)]
pub enum Regime {
    /// `a_p / p → +∞`.
    Standard,
    /// `liminf a_p / p = −∞`.
    Case1,
    /// `liminf a_p / p = a_iota` finite.
    Case2 { a_iota: Rational },
    /// The data do not settle the question.
    Indeterminate,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Standard => f.write_str("Standard (lim a_p/p = +∞)"),
            Regime::Case1 => f.write_str("Case 1 (liminf a_p/p = −∞)"),
            Regime::Case2 { a_iota } => write!(f, "Case 2 (liminf a_p/p = {})", to_f64(a_iota)),
            Regime::Indeterminate => f.write_str("Indeterminate"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegimeClassification {
    pub regime: Regime,
    /// Half-open index range whose entries supported the verdict.
    pub evidence_window: (usize, usize),
}

enum Trend {
    Diverging,
    Falling,
    Unclear,
}

/// Reads a trend from slopes sampled at increasing indices: divergence requires increments
/// of one sign that do not die out geometrically.
fn trend(slopes: &[f64]) -> Trend {
    if slopes.len() < 3 || slopes.iter().any(|s| !s.is_finite()) {
        return Trend::Unclear;
    }
    let steps: Vec<f64> = slopes.windows(2).map(|w| w[1] - w[0]).collect();
    let sustained = |sign: f64| {
        steps.iter().all(|d| d * sign > 0.0)
            && steps.windows(2).all(|w| (w[1] * sign) >= 0.6 * (w[0] * sign))
    };
    if sustained(1.0) {
        Trend::Diverging
    } else if sustained(-1.0) {
        Trend::Falling
    } else {
        Trend::Unclear
    }
}

fn slope(value: &ExtReal, p: usize) -> f64 {
    match value {
        ExtReal::Finite(r) => to_f64(&(r / int(p as i64))),
        other => other.to_f64(),
    }
}

fn evidence(a: &SequenceSpec, window: &Window) -> RegimeClassification {
    let n = a.len_in(window);
    let whole = (0, n);
    let regime = match a.tail() {
        TailRule::FactorialPower { .. } => Regime::Standard,
        TailRule::Geometric { d } => Regime::Case2 {
            a_iota: lift(ln_rational(d)),
        },
        TailRule::AffineLog { c } => Regime::Case2 { a_iota: c.clone() },
        TailRule::Expression(_) => {
            let probes = probe_indices(n);
            let slopes: Vec<f64> = probes
                .iter()
                .map(|&p| a.log_value_at(p).map_or(f64::NAN, |v| slope(&v, p)))
                .collect();
            let range = (probes[0], probes[probes.len() - 1] + 1);
            let regime = match trend(&slopes) {
                Trend::Diverging => Regime::Standard,
                Trend::Falling => Regime::Case1,
                Trend::Unclear => Regime::Indeterminate,
            };
            return RegimeClassification {
                regime,
                evidence_window: range,
            };
        }
        TailRule::ExplicitOnly => {
            let values = a.log_values(window);
            let range = tail_indices(n);
            let slopes: Vec<f64> = range.clone().map(|p| slope(&values[p], p)).collect();
            let regime = match trend(&slopes) {
                Trend::Diverging => Regime::Standard,
                Trend::Falling => Regime::Case1,
                Trend::Unclear => Regime::Indeterminate,
            };
            return RegimeClassification {
                regime,
                evidence_window: (range.start, range.end),
            };
        }
    };
    RegimeClassification {
        regime,
        evidence_window: whole,
    }
}

/// Evidence read off sampled slopes rather than a closed form.
fn trend_based(a: &SequenceSpec) -> bool {
    matches!(a.tail(), TailRule::ExplicitOnly | TailRule::Expression(_))
}

fn consistent(declared: &Regime, found: &Regime, tolerance: f64, trend: bool) -> bool {
    match (declared, found) {
        (_, Regime::Indeterminate) => true,
        // A monotone trend of `a_p/p` may still converge.
        (Regime::Case2 { .. }, _) if trend => true,
        (Regime::Case2 { a_iota: x }, Regime::Case2 { a_iota: y }) => {
            let (x, y) = (to_f64(x), to_f64(y));
            (x - y).abs() <= tolerance * x.abs().max(1.0)
        }
        (x, y) => x == y,
    }
}

/// Classifies the growth of `a_p / p`; a declared regime wins when the evidence does not contradict it.
pub fn classify_regime(
    a: &SequenceSpec,
    window: &Window,
    declared: Option<&Regime>,
) -> Result<RegimeClassification> {
    let found = evidence(a, window);
    match declared {
        None | Some(Regime::Indeterminate) => Ok(found),
        Some(d) if consistent(d, &found.regime, window.tolerance, trend_based(a)) => Ok(RegimeClassification {
            regime: d.clone(),
            evidence_window: found.evidence_window,
        }),
        Some(d) => Err(Error::InconsistentDeclaration {
            declared: Box::new(d.clone()),
            found: Box::new(found.regime),
        }),
    }
}

/// Regime using the declaration stored on the sequence.
pub fn regime_of(a: &SequenceSpec, window: &Window) -> Result<Regime> {
    classify_regime(a, window, a.declared()).map(|c| c.regime)
}
