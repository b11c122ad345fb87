//! Convex minorant of a log-scale sequence by supporting lines, and its degenerate variants.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::num::{exp_ext, int, lift, to_f64, ExtReal, Rational};
use crate::pwl::{Piece, PiecewiseLinearFn};
use crate::regime::{classify_regime, regime_of, Regime};
use crate::sequence::{Scale, SequenceSpec, TailRule, Window};

/// Line `y = slope·x + intercept` lying below every finite point and touching some of them.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportLine {
    pub slope: ExtReal,
    pub intercept: ExtReal,
    pub touching: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinorantResult {
    /// Scale of `regularized`.
    pub scale: Scale,
    pub regularized: Vec<ExtReal>,
    pub log_regularized: Vec<ExtReal>,
    pub principal_indices: Vec<usize>,
    /// One line per hull edge slope.
    pub support_lines: Vec<SupportLine>,
    pub trace: PiecewiseLinearFn,
    pub regime: Regime,
    /// Largest index whose value cannot change when the window grows.
    pub stable_prefix: usize,
    pub provisional_from: Option<usize>,
    /// Whether the window exhibits a last principal index followed by the capped line.
    pub finite_principal: bool,
}

fn fin(v: &ExtReal) -> &Rational {
    v.finite().expect("finite entry")
}

/// Lower convex hull of the finite points `(p, a_p)`, keeping points on hull edges.
fn lower_hull(a: &[ExtReal], tolerance: Option<&Rational>) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::new();
    for (k, v) in a.iter().enumerate() {
        let Some(ak) = v.finite() else { continue };
        while hull.len() >= 2 {
            let (i, j) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let (ai, aj) = (fin(&a[i]), fin(&a[j]));
            let lhs = (aj - ai) * int((k - i) as i64);
            let rhs = (ak - ai) * int((j - i) as i64);
            let excess = &lhs - &rhs;
            let above = match tolerance {
                None => excess.is_positive(),
                Some(eps) => {
                    let size = (lhs.abs() + rhs.abs()).max(Rational::one());
                    excess > size * eps
                }
            };
            if above {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

fn edge_slope(a: &[ExtReal], u: usize, v: usize) -> Rational {
    (fin(&a[v]) - fin(&a[u])) / int((v - u) as i64)
}

struct Assembled {
    values: Vec<ExtReal>,
    lines: Vec<SupportLine>,
    trace: PiecewiseLinearFn,
}

fn assemble(a: &[ExtReal], principal: &[usize], cap: Option<&Rational>) -> Assembled {
    let n = a.len();
    let mut values = vec![ExtReal::PosInf; n];
    let mut lines: Vec<SupportLine> = Vec::new();
    let mut pieces = vec![Piece {
        start: ExtReal::NegInf,
        slope: int(0),
        intercept: -fin(&a[0]),
    }];
    values[0] = a[0].clone();
    for w in principal.windows(2) {
        let (u, v) = (w[0], w[1]);
        let k = edge_slope(a, u, v);
        let d = fin(&a[u]) - &k * int(u as i64);
        for (p, slot) in values.iter_mut().enumerate().take(v + 1).skip(u + 1) {
            *slot = ExtReal::Finite(&k * int(p as i64) + &d);
        }
        values[v] = a[v].clone();
        let start = ExtReal::Finite(k.clone());
        match lines.last_mut() {
            Some(line) if line.slope == start => line.touching.push(v),
            _ => lines.push(SupportLine {
                slope: start.clone(),
                intercept: ExtReal::Finite(d),
                touching: vec![u, v],
            }),
        }
        let piece = Piece {
            start,
            slope: int(v as i64),
            intercept: -fin(&a[v]),
        };
        let last = pieces.last_mut().expect("non-empty");
        if piece.start <= last.start {
            last.slope = piece.slope;
            last.intercept = piece.intercept;
        } else {
            pieces.push(piece);
        }
    }
    let last = *principal.last().expect("index 0 is principal");
    if let Some(cap) = cap {
        let base = fin(&a[last]);
        for (p, slot) in values.iter_mut().enumerate().skip(last + 1) {
            *slot = ExtReal::Finite(base + cap * int((p - last) as i64));
        }
    }
    let trace = match cap {
        Some(cap) => PiecewiseLinearFn::new(pieces, ExtReal::Finite(cap.clone()), false),
        None => PiecewiseLinearFn::new(pieces, ExtReal::PosInf, false),
    };
    Assembled {
        values,
        lines,
        trace,
    }
}

/// Largest index guaranteed not to move when more entries become known.
pub(crate) fn stable_bound(seq: &SequenceSpec, n: usize, principal: &[usize]) -> usize {
    let last = n - 1;
    let tail_in_window = n >= seq.prefix().len() + 2;
    let proven = match seq.tail() {
        TailRule::Geometric { .. } | TailRule::AffineLog { .. } => tail_in_window,
        TailRule::FactorialPower { .. } => {
            tail_in_window
                && principal.contains(&(last - 1))
                && principal.contains(&last)
        }
        _ => false,
    };
    if proven {
        last
    } else {
        principal.iter().copied().filter(|&p| p < last).max().unwrap_or(0)
    }
}

fn log_window(a: &SequenceSpec, window: &Window) -> Result<Vec<ExtReal>> {
    let values = a.log_values(window);
    if values.is_empty() {
        return Err(Error::WindowTooShort("empty window".into()));
    }
    if !values[0].is_finite() {
        return Err(Error::InfinityAtZero);
    }
    Ok(values)
}

fn finish(
    a: &SequenceSpec,
    values: &[ExtReal],
    principal: Vec<usize>,
    cap: Option<&Rational>,
    regime: Regime,
    finite_principal: bool,
) -> MinorantResult {
    let n = values.len();
    let built = assemble(values, &principal, cap);
    let stable_prefix = stable_bound(a, n, &principal);
    MinorantResult {
        scale: Scale::Log,
        regularized: built.values.clone(),
        log_regularized: built.values,
        principal_indices: principal,
        support_lines: built.lines,
        trace: built.trace,
        regime,
        stable_prefix,
        provisional_from: (stable_prefix + 1 < n).then_some(stable_prefix + 1),
        finite_principal,
    }
}

/// Largest convex sequence below `a` on the window (standard regime).
pub fn convex_minorant(a: &SequenceSpec, window: &Window) -> Result<MinorantResult> {
    let regime = regime_of(a, window)?;
    match regime {
        Regime::Case1 => {
            return Err(Error::RegimeMismatch {
                regime,
                detail: "minorant degenerates".into(),
            })
        }
        Regime::Case2 { .. } => {
            return Err(Error::RegimeMismatch {
                regime,
                detail: "slopes must be capped at a_iota".into(),
            })
        }
        _ => {}
    }
    let values = log_window(a, window)?;
    let tolerance = a.log_tolerance(window).map(lift);
    let principal = lower_hull(&values, tolerance.as_ref());
    Ok(finish(a, &values, principal, None, regime, false))
}

/// Convex minorant when `liminf a_p/p = −∞`: only `ã_0 = a_0` survives.
pub fn case1_regularize(a: &SequenceSpec, window: &Window) -> Result<MinorantResult> {
    let regime = regime_of(a, window)?;
    if regime != Regime::Case1 {
        return Err(Error::RegimeMismatch {
            regime,
            detail: "expected liminf a_p/p = -inf".into(),
        });
    }
    let values = log_window(a, window)?;
    let n = values.len();
    let mut out = vec![ExtReal::NegInf; n];
    out[0] = values[0].clone();
    Ok(MinorantResult {
        scale: Scale::Log,
        regularized: out.clone(),
        log_regularized: out,
        principal_indices: vec![0],
        support_lines: Vec::new(),
        trace: PiecewiseLinearFn::degenerate(values[0].neg()),
        regime,
        stable_prefix: n - 1,
        provisional_from: None,
        finite_principal: true,
    })
}

/// Convex minorant with supporting slopes restricted to `(−∞, a_iota)`.
pub fn case2_regularize(
    a: &SequenceSpec,
    a_iota: &Rational,
    window: &Window,
) -> Result<MinorantResult> {
    let claimed = Regime::Case2 {
        a_iota: a_iota.clone(),
    };
    let regime = match classify_regime(a, window, Some(&claimed)) {
        Ok(c) => c.regime,
        Err(Error::InconsistentDeclaration { found, .. }) => {
            return Err(Error::RegimeMismatch {
                regime: *found,
                detail: format!("expected liminf a_p/p = {}", to_f64(a_iota)),
            })
        }
        Err(e) => return Err(e),
    };
    let values = log_window(a, window)?;
    let tolerance = a.log_tolerance(window).map(lift);
    let hull = lower_hull(&values, tolerance.as_ref());
    let mut principal = vec![hull[0]];
    for w in hull.windows(2) {
        if &edge_slope(&values, w[0], w[1]) >= a_iota {
            break;
        }
        principal.push(w[1]);
    }
    let finite_principal = principal.len() < hull.len();
    Ok(finish(a, &values, principal, Some(a_iota), regime, finite_principal))
}

/// `a_iota` from the tail rule or the declaration.
pub fn resolve_a_iota(a: &SequenceSpec, window: &Window) -> Result<Rational> {
    match regime_of(a, window)? {
        Regime::Case2 { a_iota } => Ok(a_iota),
        Regime::Indeterminate => Err(Error::UnknownAIota),
        regime => Err(Error::RegimeMismatch {
            regime,
            detail: "expected a finite liminf a_p/p".into(),
        }),
    }
}

/// Dispatches on the regime and returns the log-scale minorant.
pub fn regularize_by_regime(a: &SequenceSpec, window: &Window) -> Result<MinorantResult> {
    match regime_of(a, window)? {
        Regime::Case1 => case1_regularize(a, window),
        Regime::Case2 { a_iota } => case2_regularize(a, &a_iota, window),
        _ => convex_minorant(a, window),
    }
}

/// `M^lc = exp(ã)` on the weight scale.
pub fn log_convex_minorant(m: &SequenceSpec, window: &Window) -> Result<MinorantResult> {
    let mut result = regularize_by_regime(m, window)?;
    let weights = m.weight_values(window);
    let mut out: Vec<ExtReal> = result.log_regularized.iter().map(exp_ext).collect();
    for &p in &result.principal_indices {
        out[p] = weights[p].clone();
    }
    result.scale = Scale::Weight;
    result.regularized = out;
    Ok(result)
}

/// `A(k) = sup_p {pk − a_p}` on `ℝ` (standard) or `(−∞, a_iota)` (Case 2).
pub fn trace_function(a: &SequenceSpec, window: &Window) -> Result<PiecewiseLinearFn> {
    match regime_of(a, window)? {
        Regime::Case1 => Err(Error::RegimeMismatch {
            regime: Regime::Case1,
            detail: "the trace is only defined at -inf".into(),
        }),
        Regime::Case2 { a_iota } => Ok(case2_regularize(a, &a_iota, window)?.trace),
        _ => Ok(convex_minorant(a, window)?.trace),
    }
}

/// `sup_k {kp − A(k)}` over the domain of `A`, with the `−∞` limit included.
pub fn reconstruct_from_trace(trace: &PiecewiseLinearFn, p: usize) -> ExtReal {
    trace.sup_linear_minus(&int(p as i64), None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Case2LimitCheck {
    /// `(M^lc_p)^{1/p}` at the last window index.
    pub lim_root_lc: ExtReal,
    pub m_iota: ExtReal,
    pub agree: bool,
    /// Index and value of the largest `(M_p / M^lc_p)^{1/p}` when it exceeds the threshold.
    pub witness: Option<(usize, f64)>,
}

/// Compares `(M^lc_p)^{1/p}` at the window end with `M_ι`, and looks for a large `(M_p/M^lc_p)^{1/p}`.
pub fn case2_limit_check(
    m: &SequenceSpec,
    window: &Window,
    tolerance: f64,
    threshold: f64,
) -> Result<Case2LimitCheck> {
    let a_iota = resolve_a_iota(m, window)?;
    let result = case2_regularize(m, &a_iota, window)?;
    let original = m.log_values(window);
    let n = result.log_regularized.len();
    if n < 2 {
        return Err(Error::WindowTooShort("need an index p >= 1".into()));
    }
    let p = n - 1;
    let root = libm::exp(result.log_regularized[p].to_f64() / p as f64);
    let m_iota = match m.tail() {
        TailRule::Geometric { d } => ExtReal::Finite(d.clone()),
        _ => exp_ext(&ExtReal::Finite(a_iota)),
    };
    let agree = (root - m_iota.to_f64()).abs() <= tolerance;
    let mut witness: Option<(usize, f64)> = None;
    for q in 1..n {
        let gap = match (&original[q], &result.log_regularized[q]) {
            (ExtReal::Finite(x), ExtReal::Finite(y)) => libm::exp(to_f64(&(x - y)) / q as f64),
            (ExtReal::PosInf, _) => f64::INFINITY,
            _ => continue,
        };
        if gap > threshold && witness.is_none_or(|(_, g)| gap > g) {
            witness = Some((q, gap));
        }
    }
    Ok(Case2LimitCheck {
        lim_root_lc: ExtReal::from_f64(root),
        m_iota,
        agree,
        witness,
    })
}
