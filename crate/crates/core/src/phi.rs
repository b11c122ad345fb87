//! Regularization with respect to a regularizing function `φ`.
//!
//! The slope sweep is event driven: between events the touching index stays fixed, and events
//! are either an index entering the stripe (`t = θ_q`, the first slope with `φ(t) ≥ q`) or a
//! point of the stripe reaching the current supporting line.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Axiom, Error, Result};
use crate::minorant::{regularize_by_regime, stable_bound};
use crate::num::{exp_to_rational, format_rational, int, lift, ln_rational, to_f64, ExtReal, Rational};
use crate::pwl::{Piece, PiecewiseLinearFn, StepFunction};
use crate::regime::{regime_of, Regime};
use crate::sequence::{Scale, SequenceSpec, Window};

#[derive(Clone, Debug, PartialEq)]
pub enum PhiKind {
    /// `φ(t) = e^t`.
    Exp,
    /// `φ(t) = e^{αt + β}`.
    ExpAffine { alpha: Rational, beta: Rational },
    /// `φ(t) = −1/(t − T)` for `t < T`, `+∞` from `T` on.
    BlowupReciprocal { t: Rational },
    /// Linear interpolation through `(x, y)` points, 0 before the first one and continued
    /// with the last slope after the last one.
    Piecewise(Vec<(Rational, Rational)>),
    /// `φ ≡ +∞`.
    Infinite,
}

impl fmt::Display for PhiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiKind::Exp => f.write_str("exp"),
            PhiKind::ExpAffine { alpha, beta } => {
                write!(f, "expaffine:{},{}", format_rational(alpha), format_rational(beta))
            }
            PhiKind::BlowupReciprocal { t } => write!(f, "blowup:{}", format_rational(t)),
            PhiKind::Piecewise(points) => write!(f, "piecewise({} points)", points.len()),
            PhiKind::Infinite => f.write_str("infinite"),
        }
    }
}

/// A validated regularizing function.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularizingFunction {
    kind: PhiKind,
}

fn violation(axiom: Axiom, witness: &Rational) -> Error {
    Error::AxiomViolation {
        axiom,
        witness: to_f64(witness),
    }
}

fn validate_points(points: &[(Rational, Rational)]) -> Result<()> {
    let Some((x0, y0)) = points.first() else {
        return Err(Error::AxiomViolation {
            axiom: Axiom::BlowsUp,
            witness: f64::NAN,
        });
    };
    if !y0.is_zero() {
        return Err(violation(Axiom::VanishesAtMinusInfinity, x0));
    }
    for w in points.windows(2) {
        let ((xa, ya), (xb, yb)) = (&w[0], &w[1]);
        if yb < ya {
            return Err(violation(Axiom::Monotone, xb));
        }
        if xb <= xa {
            return Err(violation(Axiom::Continuous, xb));
        }
    }
    let last_rises = points.len() >= 2 && {
        let ((_, ya), (_, yb)) = (&points[points.len() - 2], &points[points.len() - 1]);
        yb > ya
    };
    if !last_rises {
        return Err(violation(Axiom::BlowsUp, &points[points.len() - 1].0));
    }
    Ok(())
}

/// Builds `φ` and checks the axioms: analytically for the parametric kinds, on a probe grid for all.
pub fn make_phi(kind: PhiKind) -> Result<RegularizingFunction> {
    match &kind {
        PhiKind::ExpAffine { alpha, .. } => {
            if alpha.is_negative() {
                return Err(violation(Axiom::Monotone, &Rational::zero()));
            }
            if alpha.is_zero() {
                return Err(violation(Axiom::BlowsUp, &Rational::zero()));
            }
        }
        PhiKind::Piecewise(points) => validate_points(points)?,
        _ => {}
    }
    let phi = RegularizingFunction { kind };
    phi.probe()?;
    Ok(phi)
}

impl RegularizingFunction {
    pub fn kind(&self) -> &PhiKind {
        &self.kind
    }

    pub fn is_infinite(&self) -> bool {
        self.kind == PhiKind::Infinite
    }

    pub fn blowup(&self) -> Option<&Rational> {
        match &self.kind {
            PhiKind::BlowupReciprocal { t } => Some(t),
            _ => None,
        }
    }

    fn probe(&self) -> Result<()> {
        let upper = self.blowup().map_or(60.0, |t| to_f64(t) - 1e-3);
        let mut previous = self.eval_f64(-60.0);
        let mut t = -60.0;
        while t < upper {
            t = (t + 0.25_f64).min(upper);
            let v = self.eval_f64(t);
            if v < previous {
                return Err(Error::AxiomViolation {
                    axiom: Axiom::Monotone,
                    witness: t,
                });
            }
            previous = v;
        }
        if !self.is_infinite() && self.eval_f64(-1e9) > 1e-6 {
            return Err(Error::AxiomViolation {
                axiom: Axiom::VanishesAtMinusInfinity,
                witness: -1e9,
            });
        }
        Ok(())
    }

    /// `φ(t)`, exact except for the exponential kinds.
    pub fn eval(&self, t: &Rational) -> ExtReal {
        match &self.kind {
            PhiKind::Exp => ExtReal::Finite(exp_to_rational(to_f64(t))),
            PhiKind::ExpAffine { alpha, beta } => {
                ExtReal::Finite(exp_to_rational(to_f64(&(alpha * t + beta))))
            }
            PhiKind::BlowupReciprocal { t: big_t } => {
                if t >= big_t {
                    ExtReal::PosInf
                } else {
                    ExtReal::Finite((big_t - t).recip())
                }
            }
            PhiKind::Piecewise(points) => ExtReal::Finite(piecewise_at(points, t)),
            PhiKind::Infinite => ExtReal::PosInf,
        }
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        match &self.kind {
            PhiKind::Exp => libm::exp(t),
            PhiKind::ExpAffine { alpha, beta } => libm::exp(to_f64(alpha) * t + to_f64(beta)),
            PhiKind::BlowupReciprocal { t: big_t } => {
                let big_t = to_f64(big_t);
                if t >= big_t {
                    f64::INFINITY
                } else {
                    1.0 / (big_t - t)
                }
            }
            PhiKind::Piecewise(points) => {
                if t.is_finite() {
                    to_f64(&piecewise_at(points, &lift(t)))
                } else if t > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            PhiKind::Infinite => f64::INFINITY,
        }
    }

    /// `θ_p = inf {t : φ(t) ≥ p}`; `−∞` for `p = 0` and for `φ ≡ +∞`.
    pub fn threshold(&self, p: usize) -> ExtReal {
        if p == 0 {
            return ExtReal::NegInf;
        }
        let p_r = int(p as i64);
        let log_p = || lift(ln_rational(&p_r));
        ExtReal::Finite(match &self.kind {
            PhiKind::Infinite => return ExtReal::NegInf,
            PhiKind::Exp => log_p(),
            PhiKind::ExpAffine { alpha, beta } => (log_p() - beta) / alpha,
            PhiKind::BlowupReciprocal { t } => t - p_r.recip(),
            PhiKind::Piecewise(points) => {
                let hit = points.windows(2).find(|w| w[1].1 >= p_r);
                let ((xa, ya), (xb, yb)) = match hit {
                    Some(w) => (&w[0], &w[1]),
                    None => (&points[points.len() - 2], &points[points.len() - 1]),
                };
                xa + (&p_r - ya) * (xb - xa) / (yb - ya)
            }
        })
    }
}

fn piecewise_at(points: &[(Rational, Rational)], t: &Rational) -> Rational {
    if t <= &points[0].0 {
        return points[0].1.clone();
    }
    let i = points.partition_point(|(x, _)| x <= t);
    let ((xa, ya), (xb, yb)) = if i < points.len() {
        (&points[i - 1], &points[i])
    } else {
        (&points[points.len() - 2], &points[points.len() - 1])
    };
    ya + (t - xa) * (yb - ya) / (xb - xa)
}

/// `I_i`: slopes for which the principal point of `index` lies on the supporting segment.
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalInterval {
    pub index: usize,
    pub start: ExtReal,
    pub end: ExtReal,
    pub closed_right: bool,
}

/// `L_i`: line of slope `slope` through the principal point `anchor`, used on `[anchor, until)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub slope: Rational,
    pub anchor: usize,
    /// Exclusive end; `None` when the segment continues to infinity.
    pub until: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhiRegResult {
    pub regularized: Vec<ExtReal>,
    pub principal_indices: Vec<usize>,
    pub discontinuity_indices: Vec<usize>,
    pub intervals: Vec<PrincipalInterval>,
    pub segments: Vec<Segment>,
    pub counting: StepFunction,
    pub trace: PiecewiseLinearFn,
    /// Right end of `J^φ`; `None` when `J^φ` is empty.
    pub j_right: Option<ExtReal>,
    /// The sweep stopped at the slope bound with indices left above the last segment.
    pub finite_principal: bool,
    /// Regime used to dispatch `φ ≡ +∞`.
    pub regime: Option<Regime>,
    pub stable_prefix: usize,
    pub provisional_from: Option<usize>,
}

fn degenerate_result(a0: &Rational, n: usize) -> PhiRegResult {
    let mut regularized = vec![ExtReal::NegInf; n];
    regularized[0] = ExtReal::Finite(a0.clone());
    PhiRegResult {
        regularized,
        principal_indices: vec![0],
        discontinuity_indices: Vec::new(),
        intervals: vec![PrincipalInterval {
            index: 0,
            start: ExtReal::NegInf,
            end: ExtReal::NegInf,
            closed_right: true,
        }],
        segments: Vec::new(),
        counting: StepFunction::empty(),
        trace: PiecewiseLinearFn::degenerate(ExtReal::Finite(-a0)),
        j_right: None,
        finite_principal: true,
        regime: Some(Regime::Case1),
        stable_prefix: n - 1,
        provisional_from: None,
    }
}

struct Sweep {
    /// `(index, slope at which it joined)`.
    principal: Vec<(usize, ExtReal)>,
    discontinuities: Vec<usize>,
    stopped_by_cap: bool,
}

fn sweep(a: &[ExtReal], thresholds: &[ExtReal], cap: Option<&Rational>) -> Sweep {
    let n = a.len();
    let value = |p: usize| a[p].finite();
    let mut active = thresholds.iter().take_while(|t| **t == ExtReal::NegInf).count();
    let mut m = 0;
    let mut out = Sweep {
        principal: vec![(0, ExtReal::NegInf)],
        discontinuities: Vec::new(),
        stopped_by_cap: false,
    };
    loop {
        let am = value(m).expect("touching points are finite");
        let mut next: Option<Rational> = thresholds.get(active).and_then(|t| t.finite().cloned());
        for q in m + 1..active {
            if let Some(aq) = value(q) {
                let cross = (aq - am) / int((q - m) as i64);
                if next.as_ref().is_none_or(|t| &cross < t) {
                    next = Some(cross);
                }
            }
        }
        let Some(t) = next else { break };
        if cap.is_some_and(|c| &t >= c) {
            out.stopped_by_cap = true;
            break;
        }
        let t_ext = ExtReal::Finite(t.clone());
        while active < n && thresholds[active] <= t_ext {
            active += 1;
        }
        let heights: Vec<(usize, Rational)> = (m..active)
            .filter_map(|p| value(p).map(|ap| (p, ap - &t * int(p as i64))))
            .collect();
        let lowest = heights.iter().map(|(_, h)| h).min().expect("m is finite").clone();
        let touching: Vec<usize> = heights
            .iter()
            .filter(|(_, h)| *h == lowest)
            .map(|(p, _)| *p)
            .collect();
        if touching[0] != m {
            out.discontinuities.push(touching[0]);
        }
        for &r in touching.iter().filter(|&&r| r > m) {
            out.principal.push((r, t_ext.clone()));
        }
        m = *touching.last().expect("non-empty");
    }
    out
}

/// Window indices whose value cannot change when the window grows.
fn phi_stable(phi: &RegularizingFunction, seq: &SequenceSpec, n: usize, principal: &[(usize, ExtReal)]) -> usize {
    if phi.is_infinite() {
        let indices: Vec<usize> = principal.iter().map(|(p, _)| *p).collect();
        return stable_bound(seq, n, &indices);
    }
    let horizon = phi.threshold(n);
    principal
        .iter()
        .filter(|(_, t)| *t < horizon)
        .map(|(p, _)| *p)
        .max()
        .unwrap_or(0)
}

/// Regularizes `a` (log scale of the input) with respect to `φ`.
pub fn regularize_with_phi(
    a: &SequenceSpec,
    phi: &RegularizingFunction,
    window: &Window,
) -> Result<PhiRegResult> {
    let values = a.log_values(window);
    let n = values.len();
    if n == 0 {
        return Err(Error::WindowTooShort("empty window".into()));
    }
    let a0 = values[0].finite().ok_or(Error::InfinityAtZero)?.clone();
    let (cap, regime) = if phi.is_infinite() {
        match regime_of(a, window)? {
            Regime::Case1 => return Ok(degenerate_result(&a0, n)),
            Regime::Case2 { a_iota } => (Some(a_iota.clone()), Some(Regime::Case2 { a_iota })),
            other => (None, Some(other)),
        }
    } else {
        (phi.blowup().cloned(), None)
    };
    if cap.is_none() && !values[n - 1].is_finite() {
        return Err(Error::InfiniteEntryUnsupported(format!(
            "the window ends with +inf at {} but {phi_kind} has no slope bound",
            n - 1,
            phi_kind = phi.kind()
        )));
    }
    let thresholds: Vec<ExtReal> = (0..n).map(|p| phi.threshold(p)).collect();
    let run = sweep(&values, &thresholds, cap.as_ref());
    let principal_indices: Vec<usize> = run.principal.iter().map(|(p, _)| *p).collect();
    let last = *principal_indices.last().expect("index 0");
    let fin = |p: usize| values[p].finite().expect("principal points are finite").clone();

    let mut regularized = vec![ExtReal::PosInf; n];
    let mut segments = Vec::new();
    for w in run.principal.windows(2) {
        let ((pi, _), (pj, tj)) = (&w[0], &w[1]);
        let slope = tj.finite().expect("finite join slope").clone();
        let base = fin(*pi);
        for (p, slot) in regularized.iter_mut().enumerate().take(*pj).skip(*pi) {
            *slot = ExtReal::Finite(&base + &slope * int((p - pi) as i64));
        }
        segments.push(Segment {
            slope,
            anchor: *pi,
            until: Some(*pj),
        });
    }
    regularized[last] = values[last].clone();
    if let Some(c) = &cap {
        let base = fin(last);
        for (p, slot) in regularized.iter_mut().enumerate().skip(last + 1) {
            *slot = ExtReal::Finite(&base + c * int((p - last) as i64));
        }
        segments.push(Segment {
            slope: c.clone(),
            anchor: last,
            until: None,
        });
    }

    let j_right = cap.clone().map_or(ExtReal::PosInf, ExtReal::Finite);
    let mut intervals = Vec::with_capacity(run.principal.len());
    let mut pieces: Vec<Piece> = Vec::new();
    let mut jumps: Vec<(Rational, usize)> = Vec::new();
    for (i, (p, t)) in run.principal.iter().enumerate() {
        let (end, closed_right) = match run.principal.get(i + 1) {
            Some((q, next_t)) => (next_t.clone(), !run.discontinuities.contains(q)),
            None => (j_right.clone(), false),
        };
        intervals.push(PrincipalInterval {
            index: *p,
            start: t.clone(),
            end: end.clone(),
            closed_right,
        });
        if *t < end || i + 1 == run.principal.len() {
            pieces.push(Piece {
                start: t.clone(),
                slope: int(*p as i64),
                intercept: -fin(*p),
            });
            if let ExtReal::Finite(x) = t {
                jumps.push((x.clone(), *p));
            }
        }
    }
    let trace = PiecewiseLinearFn::new(pieces, j_right.clone(), false);
    let counting = StepFunction::new(jumps, j_right.clone(), false);
    let stable_prefix = phi_stable(phi, a, n, &run.principal);
    Ok(PhiRegResult {
        regularized,
        principal_indices,
        discontinuity_indices: run.discontinuities,
        intervals,
        segments,
        counting,
        trace,
        j_right: Some(j_right),
        finite_principal: cap.is_some() && run.stopped_by_cap,
        regime,
        stable_prefix,
        provisional_from: (stable_prefix + 1 < n).then_some(stable_prefix + 1),
    })
}

fn out_of_domain(result: &PhiRegResult, t: &ExtReal) -> Error {
    let right = result
        .j_right
        .as_ref()
        .map_or(String::from("J is empty"), |r| format!("J ends at {r}"));
    Error::OutOfDomain(format!("t = {t}; {right}"))
}

/// `m^φ(t)`, the largest index on the supporting segment of slope `t`.
pub fn counting_m_phi(result: &PhiRegResult, t: &ExtReal) -> Result<usize> {
    result
        .counting
        .eval_ext(t)
        .filter(|_| !matches!(t, ExtReal::Finite(_)) || !result.trace.is_empty_domain())
        .ok_or_else(|| out_of_domain(result, t))
}

/// `A^φ(t)`; with `extended`, `+∞` outside `J^φ`.
pub fn trace_a_phi(result: &PhiRegResult, t: &ExtReal, extended: bool) -> Result<ExtReal> {
    match result.trace.eval_ext(t) {
        Some(v) => Ok(v),
        None if extended => Ok(ExtReal::PosInf),
        None => Err(out_of_domain(result, t)),
    }
}

/// `a^φ_p = sup {p·t − A^φ(t) : t ∈ J^φ, φ(t) ≥ p}`.
pub fn recover_sequence(trace: &PiecewiseLinearFn, phi: &RegularizingFunction, p: usize) -> ExtReal {
    let p_r = int(p as i64);
    match phi.threshold(p) {
        ExtReal::Finite(theta) => trace.sup_linear_minus(&p_r, Some(&theta)),
        _ => trace.sup_linear_minus(&p_r, None),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderingViolation {
    pub index: usize,
    pub relation: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderingReport {
    /// Whether `φ₁ ≤ φ₂` on the probe grid (otherwise `φ₂ ≤ φ₁`).
    pub first_is_smaller: bool,
    pub first: Vec<ExtReal>,
    pub second: Vec<ExtReal>,
    pub minorant: Vec<ExtReal>,
    /// `a^{larger φ} ≤ a^{smaller φ}`.
    pub monotone: bool,
    /// `a^φ ≤ a` for both.
    pub below_original: bool,
    /// `a^c ≤ a^φ` for both.
    pub above_minorant: bool,
    pub violations: Vec<OrderingViolation>,
}

fn probe_order(phi1: &RegularizingFunction, phi2: &RegularizingFunction) -> Option<bool> {
    let (mut le, mut ge) = (true, true);
    let mut t = -40.0;
    while t <= 40.0 {
        let (x, y) = (phi1.eval_f64(t), phi2.eval_f64(t));
        le &= x <= y;
        ge &= x >= y;
        t += 0.125;
    }
    if le {
        Some(true)
    } else if ge {
        Some(false)
    } else {
        None
    }
}

/// Checks `a^{φ₂} ≤ a^{φ₁} ≤ a` for `φ₁ ≤ φ₂` and `a^c ≤ a^φ ≤ a` against the convex minorant.
pub fn compare_regularizations(
    a: &SequenceSpec,
    phi1: &RegularizingFunction,
    phi2: &RegularizingFunction,
    window: &Window,
) -> Result<OrderingReport> {
    let first_is_smaller = probe_order(phi1, phi2).ok_or(Error::NotComparable)?;
    let first = regularize_with_phi(a, phi1, window)?.regularized;
    let second = regularize_with_phi(a, phi2, window)?.regularized;
    let minorant = regularize_by_regime(a, window)?.log_regularized;
    let original = a.log_values(window);
    let (small, large) = if first_is_smaller {
        (&first, &second)
    } else {
        (&second, &first)
    };
    let mut violations = Vec::new();
    for p in 0..original.len() {
        if large[p] > small[p] {
            violations.push(OrderingViolation {
                index: p,
                relation: "a^(larger phi) <= a^(smaller phi)",
            });
        }
        if first[p] > original[p] || second[p] > original[p] {
            violations.push(OrderingViolation {
                index: p,
                relation: "a^phi <= a",
            });
        }
        if minorant[p] > first[p] || minorant[p] > second[p] {
            violations.push(OrderingViolation {
                index: p,
                relation: "a^c <= a^phi",
            });
        }
    }
    let holds = |r: &str| !violations.iter().any(|v| v.relation == r);
    Ok(OrderingReport {
        first_is_smaller,
        monotone: holds("a^(larger phi) <= a^(smaller phi)"),
        below_original: holds("a^phi <= a"),
        above_minorant: holds("a^c <= a^phi"),
        first,
        second,
        minorant,
        violations,
    })
}

/// Slopes at which two traces are compared: every breakpoint of either, both one-sided values,
/// and `samples` interior points.
fn probe_slopes(f: &PiecewiseLinearFn, g: &PiecewiseLinearFn, samples: usize) -> Vec<Rational> {
    let mut xs: Vec<Rational> = f
        .breakpoints()
        .into_iter()
        .chain(g.breakpoints())
        .map(|b| b.x)
        .collect();
    xs.sort();
    xs.dedup();
    let lo = xs.first().cloned().unwrap_or_else(|| int(-4)) - int(2);
    let hi = match f.right() {
        ExtReal::Finite(r) => r.clone(),
        _ => xs.last().cloned().unwrap_or_else(|| int(4)) + int(2),
    };
    let span = &hi - &lo;
    let mut out = xs;
    for k in 0..samples {
        // Odd numerators keep the samples off the grid of breakpoints most of the time.
        let frac = Rational::new(int(2 * k as i64 + 1).to_integer(), int(2 * samples as i64).to_integer());
        out.push(&lo + &span * frac);
    }
    out
}

/// `A^φ` computed from `a` equals `A^φ` computed from `a^φ`.
pub fn trace_invariance_check(
    a: &SequenceSpec,
    phi: &RegularizingFunction,
    window: &Window,
) -> Result<bool> {
    let original = regularize_with_phi(a, phi, window)?;
    if original.j_right.is_none() {
        // Only `−∞` is in the domain, where both traces equal `−a_0`.
        return Ok(original.trace.at_neg_inf() == &original.regularized[0].neg());
    }
    let mut reg = SequenceSpec::explicit(Scale::Log, original.regularized.clone())?;
    if let Some(regime) = a.declared().cloned().or_else(|| original.regime.clone()) {
        reg = reg.with_declared(regime);
    }
    let again = regularize_with_phi(&reg, phi, window)?;
    let (f, g) = (&original.trace, &again.trace);
    if f.at_neg_inf() != g.at_neg_inf() || f.right() != g.right() {
        return Ok(false);
    }
    if f.is_empty_domain() || g.is_empty_domain() {
        return Ok(f.is_empty_domain() && g.is_empty_domain());
    }
    Ok(probe_slopes(f, g, 100).iter().all(|x| {
        f.eval(x) == g.eval(x) && f.left_limit(x) == g.left_limit(x)
    }))
}
