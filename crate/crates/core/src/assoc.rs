//! Associated function `ω_M`, its variants, the Young conjugate and the associated sequence.
//!
//! Every route works on the same lifted log values, so the direct, piecewise and integral
//! forms agree exactly rather than approximately.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::num::{exp_ext, exp_to_rational, int, lift, ln_rational, ExtReal, Rational};
use crate::pwl::{Piece, PiecewiseLinearFn, StepFunction};
use crate::regime::{regime_of, Regime};
use crate::sequence::{is_log_convex, quotients, Scale, SequenceSpec, TailRule, Window};

#[derive(Clone, Debug, PartialEq)]
pub struct OmegaValue {
    pub value: ExtReal,
    /// Largest index attaining the supremum within the window.
    pub argmax: usize,
    /// The maximum sits at the window end and the tail gives no closed form beyond it.
    pub boundary_attained: bool,
}

fn log_of(t: &Rational) -> Result<Option<Rational>> {
    if t.is_negative() {
        return Err(Error::OutOfDomain(format!("t = {t} is negative")));
    }
    Ok((!t.is_zero()).then(|| lift(ln_rational(t))))
}

/// Closed-form tails whose terms grow without bound once `t` exceeds `M_ι`.
fn tail_diverges(m: &SequenceSpec, t: &Rational, log_t: &Rational) -> bool {
    match m.tail() {
        TailRule::Geometric { d } => t > d,
        TailRule::AffineLog { c } => log_t > c,
        _ => false,
    }
}

fn has_closed_tail(m: &SequenceSpec) -> bool {
    matches!(m.tail(), TailRule::Geometric { .. } | TailRule::AffineLog { .. })
}

fn finite_logs(m: &SequenceSpec, window: &Window) -> Result<Vec<ExtReal>> {
    let a = m.log_values(window);
    match a.first() {
        None => Err(Error::WindowTooShort("empty window".into())),
        Some(ExtReal::Finite(_)) => Ok(a),
        Some(_) => Err(Error::InfinityAtZero),
    }
}

/// `max_{p ≥ from} (shift + p·log t − a_p)`, ties resolved to the largest index.
fn best_term(a: &[ExtReal], log_t: &Rational, from: usize, shift: &Rational) -> (ExtReal, usize) {
    let mut best = (ExtReal::NegInf, from);
    for (p, v) in a.iter().enumerate().skip(from) {
        if let ExtReal::Finite(ap) = v {
            let term = ExtReal::Finite(shift + log_t * int(p as i64) - ap);
            if term >= best.0 {
                best = (term, p);
            }
        }
    }
    best
}

/// `ω_M(t) = sup_p log(M_0 t^p / M_p)` over the window.
pub fn omega_direct(m: &SequenceSpec, t: &Rational, window: &Window) -> Result<OmegaValue> {
    let a = finite_logs(m, window)?;
    let Some(log_t) = log_of(t)? else {
        return Ok(OmegaValue {
            value: ExtReal::zero(),
            argmax: 0,
            boundary_attained: false,
        });
    };
    if tail_diverges(m, t, &log_t) {
        return Ok(OmegaValue {
            value: ExtReal::PosInf,
            argmax: a.len() - 1,
            boundary_attained: false,
        });
    }
    let a0 = a[0].finite().expect("checked").clone();
    let (value, argmax) = best_term(&a, &log_t, 0, &a0);
    Ok(OmegaValue {
        value,
        argmax,
        boundary_attained: argmax + 1 == a.len() && !has_closed_tail(m),
    })
}

/// `ω̃_M(t) = sup_p log(t^p / M_p)`, with `−log M_0` at `t = 0`.
pub fn omega_tilde(m: &SequenceSpec, t: &Rational, window: &Window) -> Result<ExtReal> {
    let a = finite_logs(m, window)?;
    let Some(log_t) = log_of(t)? else {
        return Ok(a[0].neg());
    };
    if tail_diverges(m, t, &log_t) {
        return Ok(ExtReal::PosInf);
    }
    Ok(best_term(&a, &log_t, 0, &Rational::zero()).0)
}

/// `ω̃̃_M(t) = sup_{p ≥ 1} log(t^p / M_p)` for `t > 0`.
pub fn omega_double_tilde(m: &SequenceSpec, t: &Rational, window: &Window) -> Result<ExtReal> {
    let a = finite_logs(m, window)?;
    let Some(log_t) = log_of(t)? else {
        return Err(Error::OutOfDomain("t = 0 (the limit is -inf)".into()));
    };
    if a.len() < 2 {
        return Err(Error::WindowTooShort("need an index p >= 1".into()));
    }
    if tail_diverges(m, t, &log_t) {
        return Ok(ExtReal::PosInf);
    }
    Ok(best_term(&a, &log_t, 1, &Rational::zero()).0)
}

/// Log-convex input on the window plus the regime restriction `t < M_ι` for Case 2.
fn checked_logs(m: &SequenceSpec, t: &Rational, window: &Window) -> Result<(Vec<ExtReal>, Option<Rational>)> {
    let lc = is_log_convex(m, window);
    if let Some(index) = lc.violation {
        return Err(Error::NotLogConvex { index });
    }
    let a = finite_logs(m, window)?;
    let log_t = log_of(t)?;
    match regime_of(m, window)? {
        Regime::Case2 { a_iota } => {
            let beyond = match (m.tail(), &log_t) {
                (TailRule::Geometric { d }, _) => t >= d,
                (_, Some(l)) => l >= &a_iota,
                (_, None) => false,
            };
            if beyond {
                return Err(Error::OutOfDomain(format!("t = {t} is not below M_iota")));
            }
        }
        Regime::Case1 => {
            return Err(Error::RegimeMismatch {
                regime: Regime::Case1,
                detail: "omega is +inf for every t > 0".into(),
            })
        }
        _ => {}
    }
    Ok((a, log_t))
}

/// `ln μ_p = a_p − a_{p−1}`; `None` past the first infinite entry.
fn log_quotients(a: &[ExtReal]) -> Vec<Option<Rational>> {
    let mut out = vec![None];
    for w in a.windows(2) {
        out.push(match (&w[0], &w[1]) {
            (ExtReal::Finite(x), ExtReal::Finite(y)) => Some(y - x),
            _ => None,
        });
    }
    out
}

/// Index `p` with `μ_p ≤ t < μ_{p+1}`, or 0 when `t < μ_1`.
fn knot_index(log_mu: &[Option<Rational>], log_t: &Rational) -> usize {
    let mut p = 0;
    for (q, mu) in log_mu.iter().enumerate().skip(1) {
        match mu {
            Some(mu) if mu <= log_t => p = q,
            _ => break,
        }
    }
    p
}

/// `ω_M(t) = log(M_0 t^p / M_p)` on `[μ_p, μ_{p+1}]` and 0 on `[0, μ_1]`.
pub fn omega_piecewise(m: &SequenceSpec, t: &Rational, window: &Window) -> Result<ExtReal> {
    let (a, log_t) = checked_logs(m, t, window)?;
    let Some(log_t) = log_t else {
        return Ok(ExtReal::zero());
    };
    let p = knot_index(&log_quotients(&a), &log_t);
    if p == 0 {
        return Ok(ExtReal::zero());
    }
    let (a0, ap) = (a[0].finite().expect("finite"), a[p].finite().expect("finite"));
    Ok(ExtReal::Finite(a0 + &log_t * int(p as i64) - ap))
}

/// `∫_0^t Σ_M(s)/s ds` in telescoped closed form.
pub fn omega_integral(m: &SequenceSpec, t: &Rational, window: &Window) -> Result<ExtReal> {
    let (a, log_t) = checked_logs(m, t, window)?;
    let Some(log_t) = log_t else {
        return Ok(ExtReal::zero());
    };
    let log_mu = log_quotients(&a);
    let p = knot_index(&log_mu, &log_t);
    if p == 0 {
        return Ok(ExtReal::zero());
    }
    let mu = |q: usize| log_mu[q].as_ref().expect("finite quotient");
    let mut total = Rational::zero();
    for q in 1..p {
        total += int(q as i64) * (mu(q + 1) - mu(q));
    }
    total += int(p as i64) * (log_t - mu(p));
    Ok(ExtReal::Finite(total))
}

/// `Σ_M(t) = #{p ≥ 1 : μ_p ≤ t}`, restricted to `[0, M_ι)` in Case 2.
pub fn counting_function(m: &SequenceSpec, window: &Window) -> Result<StepFunction> {
    let lc = is_log_convex(m, window);
    if let Some(index) = lc.violation {
        return Err(Error::NotLogConvex { index });
    }
    let mu: Vec<Rational> = match m.scale() {
        Scale::Weight if m.exact_on(Scale::Weight, window) => quotients(m, window)?
            .into_iter()
            .skip(1)
            .map(|q| q.finite().expect("finite quotient").clone())
            .collect(),
        _ => log_quotients(&finite_logs(m, window)?)
            .into_iter()
            .skip(1)
            .map_while(|l| l.map(|l| exp_to_rational(crate::num::to_f64(&l))))
            .collect(),
    };
    let mut jumps: Vec<(Rational, usize)> = Vec::new();
    for (i, x) in mu.into_iter().enumerate() {
        match jumps.last_mut() {
            Some((loc, level)) if *loc == x => *level = i + 1,
            _ => jumps.push((x, i + 1)),
        }
    }
    let right = match (regime_of(m, window), m.tail()) {
        (_, TailRule::Geometric { d }) => ExtReal::Finite(d.clone()),
        (Ok(Regime::Case2 { a_iota }), _) => exp_ext(&ExtReal::Finite(a_iota)),
        _ => ExtReal::PosInf,
    };
    if let ExtReal::Finite(r) = &right {
        jumps.retain(|(loc, _)| loc < r);
    }
    Ok(StepFunction::new(jumps, right, false))
}

/// `φ_ω(s) = ω_M(e^s)` as the upper envelope of the lines `q·s − (a_q − a_0)`.
///
/// The domain is `(−∞, log M_ι)` in Case 2 and `ℝ` otherwise.
pub fn phi_omega(m: &SequenceSpec, window: &Window) -> Result<PiecewiseLinearFn> {
    let regime = regime_of(m, window)?;
    let right = match &regime {
        Regime::Case1 => {
            return Err(Error::Unbounded(
                "omega is +inf for every t > 0 when liminf a_p/p = -inf".into(),
            ))
        }
        Regime::Case2 { a_iota } => ExtReal::Finite(a_iota.clone()),
        _ => ExtReal::PosInf,
    };
    let a = finite_logs(m, window)?;
    let a0 = a[0].finite().expect("finite").clone();
    // (slope, offset, start of the range where the line is on top)
    let mut hull: Vec<(usize, Rational, Rational)> = Vec::new();
    for (q, v) in a.iter().enumerate() {
        let ExtReal::Finite(aq) = v else { continue };
        let b = aq - &a0;
        let mut start = Rational::zero();
        while let Some((top_q, top_b, top_start)) = hull.last() {
            let cross = (&b - top_b) / int((q - top_q) as i64);
            if hull.len() > 1 && &cross <= top_start {
                hull.pop();
            } else {
                start = cross;
                break;
            }
        }
        hull.push((q, b, start));
    }
    let mut pieces = Vec::with_capacity(hull.len());
    for (i, (q, b, start)) in hull.into_iter().enumerate() {
        let start = if i == 0 {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(start)
        };
        if let ExtReal::Finite(r) = &right {
            if matches!(&start, ExtReal::Finite(s) if s >= r) {
                break;
            }
        }
        pieces.push(Piece {
            start,
            slope: int(q as i64),
            intercept: -b,
        });
    }
    Ok(PiecewiseLinearFn::new(pieces, right, false))
}

/// `φ*_ω(p) = sup_s {p·s − φ_ω(s)}` over the domain of `φ_ω`.
pub fn young_conjugate(m: &SequenceSpec, p: usize, window: &Window) -> Result<ExtReal> {
    let phi = phi_omega(m, window)?;
    Ok(phi.sup_linear_minus(&int(p as i64), None))
}

/// `log underline-M_p = log M_0 + φ*_ω(p)` on the window.
pub fn underline_log_values(m: &SequenceSpec, window: &Window) -> Result<Vec<ExtReal>> {
    let phi = phi_omega(m, window)?;
    let a = finite_logs(m, window)?;
    let a0 = a[0].clone();
    Ok((0..a.len())
        .map(|p| {
            let conj = phi.sup_linear_minus(&int(p as i64), None);
            conj.checked_add(&a0).unwrap_or(ExtReal::PosInf)
        })
        .collect())
}

/// `underline-M_p = M_0 · sup_t t^p / exp(ω_M(t))` on the scale of `m`.
pub fn underline_sequence(m: &SequenceSpec, window: &Window) -> Result<SequenceSpec> {
    let logs = underline_log_values(m, window)?;
    let regime = regime_of(m, window)?;
    let spec = match m.scale() {
        Scale::Log => SequenceSpec::explicit(Scale::Log, logs)?,
        Scale::Weight => {
            let mut weights: Vec<ExtReal> = logs.iter().map(exp_ext).collect();
            weights[0] = m.weight_values(window)[0].clone();
            SequenceSpec::explicit(Scale::Weight, weights)?.inexact()
        }
    };
    Ok(spec.with_declared(regime))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{ratio, to_f64};

    fn factorial() -> SequenceSpec {
        SequenceSpec::weight(vec![], TailRule::FactorialPower { s: int(1), c: int(1) }).unwrap()
    }

    fn close(v: &ExtReal, x: f64) -> bool {
        (v.to_f64() - x).abs() < 1e-12
    }

    #[test]
    fn factorial_at_three() {
        let w = Window::default();
        let d = omega_direct(&factorial(), &int(3), &w).unwrap();
        assert!(close(&d.value, libm::log(4.5)));
        assert_eq!(d.argmax, 3);
        assert!(!d.boundary_attained);
        assert_eq!(omega_piecewise(&factorial(), &int(3), &w).unwrap(), d.value);
        assert_eq!(omega_integral(&factorial(), &int(3), &w).unwrap(), d.value);
    }

    #[test]
    fn factorial_between_knots() {
        let w = Window::default();
        let t = ratio(5, 2);
        let v = omega_piecewise(&factorial(), &t, &w).unwrap();
        assert!(close(&v, libm::log(6.25 / 2.0)));
        assert_eq!(omega_direct(&factorial(), &t, &w).unwrap().value, v);
        assert_eq!(omega_piecewise(&factorial(), &ratio(1, 2), &w).unwrap(), ExtReal::zero());
        assert_eq!(omega_direct(&factorial(), &int(0), &w).unwrap().value, ExtReal::zero());
    }

    #[test]
    fn geometric_extreme_example() {
        let m = SequenceSpec::weight(vec![], TailRule::Geometric { d: int(2) }).unwrap();
        let w = Window::default();
        assert_eq!(omega_direct(&m, &int(2), &w).unwrap().value, ExtReal::zero());
        assert_eq!(omega_direct(&m, &int(1), &w).unwrap().value, ExtReal::zero());
        assert_eq!(omega_direct(&m, &int(3), &w).unwrap().value, ExtReal::PosInf);
        assert!(matches!(omega_piecewise(&m, &int(2), &w), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn tilde_variants() {
        let w = Window::default();
        let m = SequenceSpec::weight(
            vec![ExtReal::from(1), ExtReal::ratio(1, 2)],
            TailRule::FactorialPower { s: int(1), c: int(1) },
        )
        .unwrap();
        let t = ratio(2, 5);
        let tilde = omega_tilde(&m, &t, &w).unwrap();
        let dtilde = omega_double_tilde(&m, &t, &w).unwrap();
        assert_eq!(tilde, ExtReal::zero());
        assert!(dtilde < tilde);
        assert!(matches!(omega_double_tilde(&m, &int(0), &w), Err(Error::OutOfDomain(_))));
        let shifted = SequenceSpec::weight(vec![ExtReal::from(7)], TailRule::FactorialPower { s: int(1), c: int(7) }).unwrap();
        let gap = omega_direct(&shifted, &int(2), &w).unwrap().value.to_f64()
            - omega_tilde(&shifted, &int(2), &w).unwrap().to_f64();
        assert!((gap - libm::log(7.0)).abs() < 1e-12);
    }

    #[test]
    fn counting_multiplicities() {
        let m = SequenceSpec::explicit(
            Scale::Weight,
            [1, 1, 1, 2, 4, 20].iter().map(|&x| ExtReal::from(x)).collect(),
        )
        .unwrap();
        let s = counting_function(&m, &Window::default()).unwrap();
        assert_eq!(s.jumps(), &[(int(1), 2), (int(2), 4), (int(5), 5)]);
        assert_eq!(s.eval(&ratio(1, 2)), Some(0));
        let f = counting_function(&factorial(), &Window::new(10)).unwrap();
        assert_eq!(f.eval(&ratio(7, 2)), Some(3));
    }

    #[test]
    fn conjugate_recovers_log_convex_sequence() {
        let w = Window::new(20);
        let m = factorial();
        let under = underline_log_values(&m, &w).unwrap();
        assert_eq!(under, m.log_values(&w));
        assert_eq!(young_conjugate(&m, 0, &w).unwrap(), ExtReal::zero());
    }

    #[test]
    fn conjugate_bridges_a_dip() {
        let a = SequenceSpec::explicit(
            Scale::Log,
            [0, 5, 1, 3, 9, 20, 40].iter().map(|&x| ExtReal::from(x)).collect(),
        )
        .unwrap()
        .with_declared(Regime::Standard);
        let under = underline_log_values(&a, &Window::default()).unwrap();
        assert_eq!(under[1], ExtReal::ratio(1, 2));
        assert_eq!(under[2], ExtReal::from(1));
    }

    #[test]
    fn conjugate_in_case_two() {
        let a = SequenceSpec::log(
            vec![ExtReal::from(0), ExtReal::from(-1)],
            TailRule::AffineLog { c: int(1) },
        )
        .unwrap();
        let w = Window::new(10);
        let under = underline_log_values(&a, &w).unwrap();
        for (p, v) in under.iter().enumerate().skip(1) {
            assert_eq!(*v, ExtReal::from(p as i64 - 2));
        }
        let phi = phi_omega(&a, &w).unwrap();
        assert_eq!(phi.right(), &ExtReal::from(1));
        assert!(to_f64(&phi.left_limit(&int(1)).unwrap()) == 2.0);
    }

    #[test]
    fn case_one_conjugate_is_unbounded() {
        let m = SequenceSpec::explicit(Scale::Log, vec![ExtReal::zero(), ExtReal::from(-1)])
            .unwrap()
            .with_declared(Regime::Case1);
        assert!(matches!(young_conjugate(&m, 1, &Window::default()), Err(Error::Unbounded(_))));
    }
}
