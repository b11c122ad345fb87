//! Brute-force reference implementations, kept deliberately simple and independent of the
//! hull, conjugate and sweep code.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::num::{int, to_f64, ExtReal, Rational};
use crate::phi::RegularizingFunction;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub quantity: String,
    pub main: Vec<f64>,
    pub oracle: Vec<f64>,
    pub max_abs: f64,
    pub max_rel: f64,
    /// Index of the largest absolute deviation.
    pub witness: Option<usize>,
}

impl OracleReport {
    /// Elementwise comparison; matching infinities count as zero deviation.
    pub fn compare(quantity: &str, main: &[ExtReal], oracle: &[ExtReal]) -> Self {
        let main_f: Vec<f64> = main.iter().map(ExtReal::to_f64).collect();
        let oracle_f: Vec<f64> = oracle.iter().map(ExtReal::to_f64).collect();
        let mut report = OracleReport {
            quantity: quantity.into(),
            main: main_f,
            oracle: oracle_f,
            max_abs: 0.0,
            max_rel: 0.0,
            witness: None,
        };
        for (i, (x, y)) in main.iter().zip(oracle).enumerate() {
            let abs = match (x, y) {
                (ExtReal::Finite(x), ExtReal::Finite(y)) => to_f64(&(x - y)).abs(),
                _ if x == y => 0.0,
                _ => f64::INFINITY,
            };
            let rel = if abs.is_finite() {
                abs / y.to_f64().abs().max(1.0)
            } else {
                abs
            };
            if abs > report.max_abs || report.witness.is_none() && abs > 0.0 {
                report.max_abs = abs;
                report.witness = Some(i);
            }
            report.max_rel = report.max_rel.max(rel);
        }
        if main.len() != oracle.len() {
            report.max_abs = f64::INFINITY;
            report.max_rel = f64::INFINITY;
        }
        report
    }

    /// Relative deviation `|main − oracle| / max(1, |oracle|)` at most `tolerance` everywhere.
    pub fn within(&self, tolerance: f64) -> bool {
        self.max_rel <= tolerance
    }
}

fn finite_points(a: &[ExtReal]) -> Vec<(usize, &Rational)> {
    a.iter()
        .enumerate()
        .filter_map(|(p, v)| v.finite().map(|r| (p, r)))
        .collect()
}

/// Largest convex minorant by enumerating every admissible line through two points, plus the
/// lines of slope `slope_cap` resting on the points when a cap is given.
pub fn brute_minorant(a: &[ExtReal], slope_cap: Option<&Rational>) -> Vec<ExtReal> {
    let pts = finite_points(a);
    let below_all = |k: &Rational, d: &Rational| {
        pts.iter()
            .all(|(q, aq)| k * int(*q as i64) + d <= **aq)
    };
    let mut lines: Vec<(Rational, Rational)> = Vec::new();
    for (i, (pi, ai)) in pts.iter().enumerate() {
        for (pj, aj) in &pts[i + 1..] {
            let k = (*aj - *ai) / int((pj - pi) as i64);
            if slope_cap.is_some_and(|c| &k >= c) {
                continue;
            }
            let d = *ai - &k * int(*pi as i64);
            if below_all(&k, &d) {
                lines.push((k, d));
            }
        }
    }
    if let Some(c) = slope_cap {
        for (pi, ai) in &pts {
            let d = *ai - c * int(*pi as i64);
            if below_all(c, &d) {
                lines.push((c.clone(), d));
            }
        }
    }
    let last_finite = pts.last().map_or(0, |(p, _)| *p);
    (0..a.len())
        .map(|p| {
            if p == 0 {
                return a[0].clone();
            }
            if slope_cap.is_none() && p > last_finite {
                return ExtReal::PosInf;
            }
            lines
                .iter()
                .map(|(k, d)| ExtReal::Finite(k * int(p as i64) + d))
                .max()
                .unwrap_or(ExtReal::NegInf)
        })
        .collect()
}

/// `sup_k {k·p − max_q (q·k − a_q)}` over the candidate slopes, the cap limit and `±∞`.
pub fn double_conjugate(a: &[ExtReal], slope_cap: Option<&Rational>) -> Vec<ExtReal> {
    let pts = finite_points(a);
    let trace = |k: &Rational| {
        pts.iter()
            .map(|(q, aq)| k * int(*q as i64) - *aq)
            .max()
            .expect("a_0 is finite")
    };
    let mut slopes: Vec<Rational> = Vec::new();
    for (i, (pi, ai)) in pts.iter().enumerate() {
        for (pj, aj) in &pts[i + 1..] {
            let k = (*aj - *ai) / int((pj - pi) as i64);
            if slope_cap.is_none_or(|c| &k < c) {
                slopes.push(k);
            }
        }
    }
    if let Some(c) = slope_cap {
        slopes.push(c.clone());
    }
    let last_finite = pts.last().map_or(0, |(p, _)| *p);
    (0..a.len())
        .map(|p| {
            let p_r = int(p as i64);
            let mut best = if p == 0 { a[0].clone() } else { ExtReal::NegInf };
            for k in &slopes {
                best = best.max(ExtReal::Finite(&p_r * k - trace(k)));
            }
            if slope_cap.is_none() && p > last_finite {
                best = ExtReal::PosInf;
            }
            best
        })
        .collect()
}

/// `max_{p ≤ p_max} log(M_0 t^p / M_p)` by a plain floating-point loop over weights.
pub fn brute_omega(m: &[ExtReal], t: f64, p_max: usize) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let log = |v: &ExtReal| match v {
        ExtReal::Finite(r) => crate::num::ln_rational(r),
        other => other.to_f64(),
    };
    let log_m0 = log(&m[0]);
    let log_t = libm::log(t);
    (0..=p_max.min(m.len() - 1))
        .map(|p| log_m0 + p as f64 * log_t - log(&m[p]))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `max_p (p·k − a_p)` by a plain floating-point loop.
pub fn brute_trace(a: &[ExtReal], k: f64) -> f64 {
    a.iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .map(|(p, v)| p as f64 * k - v.to_f64())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Both minorant formulations, or `None` when they disagree.
pub fn checked_minorant(a: &[ExtReal], slope_cap: Option<&Rational>) -> Option<Vec<ExtReal>> {
    let lines = brute_minorant(a, slope_cap);
    (lines == double_conjugate(a, slope_cap)).then_some(lines)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepApprox {
    pub principal: Vec<usize>,
    pub discontinuities: Vec<usize>,
    pub regularized: Vec<f64>,
    /// Grid slopes with the trace value and the largest touching index there.
    pub samples: Vec<(f64, f64, usize)>,
    /// Deviation bound implied by the grid step.
    pub resolution: f64,
}

/// Simulates the slope sweep on the grid `lo, lo + step, …, hi` in floating point.
///
/// At each slope the lowest line through the points inside the stripe is found directly; points
/// within the grid resolution of that line count as touching.
pub fn brute_phi_sweep(
    a: &[ExtReal],
    phi: &RegularizingFunction,
    lo: f64,
    hi: f64,
    step: f64,
) -> SweepApprox {
    let n = a.len();
    let values: Vec<f64> = a.iter().map(ExtReal::to_f64).collect();
    let cap = phi.blowup().map(to_f64);
    let hi = cap.map_or(hi, |c| hi.min(c - step / 2.0));
    let resolution = n as f64 * step + 1e-9;
    let mut samples = Vec::new();
    let mut touching_at: Vec<Option<f64>> = vec![None; n];
    touching_at[0] = Some(f64::NEG_INFINITY);
    let mut discontinuities = Vec::new();
    let mut previous: Option<(f64, usize)> = None;
    let steps = ((hi - lo) / step).floor() as usize;
    for j in 0..=steps {
        let t = lo + j as f64 * step;
        let width = phi.eval_f64(t);
        let stripe: Vec<usize> = (0..n)
            .filter(|&p| (p as f64) <= width && values[p].is_finite())
            .collect();
        let trace = stripe
            .iter()
            .map(|&p| p as f64 * t - values[p])
            .fold(f64::NEG_INFINITY, f64::max);
        let mut top = 0;
        for &p in &stripe {
            if p as f64 * t - values[p] >= trace - resolution {
                if touching_at[p].is_none() {
                    touching_at[p] = Some(t);
                }
                if p as f64 * t - values[p] >= trace - 1e-12 {
                    top = p;
                }
            }
        }
        if let Some((_, m)) = previous {
            let old_line = m as f64 * t - values[m];
            if top > m && trace - old_line > (top - m) as f64 * step + resolution {
                let first = stripe
                    .iter()
                    .copied()
                    .find(|&p| p > m && p as f64 * t - values[p] >= trace - resolution)
                    .unwrap_or(top);
                if !discontinuities.contains(&first) {
                    discontinuities.push(first);
                }
            }
        }
        samples.push((t, trace, top));
        previous = Some((t, top));
    }
    let principal: Vec<usize> = (0..n).filter(|&p| touching_at[p].is_some()).collect();
    let mut regularized = vec![f64::INFINITY; n];
    for w in principal.windows(2) {
        let (pi, pj) = (w[0], w[1]);
        let slope = touching_at[pj].expect("principal");
        for (p, slot) in regularized.iter_mut().enumerate().take(pj).skip(pi) {
            *slot = values[pi] + slope * (p - pi) as f64;
        }
    }
    let last = *principal.last().expect("index 0");
    regularized[last] = values[last];
    if let Some(c) = cap {
        for (p, slot) in regularized.iter_mut().enumerate().skip(last + 1) {
            *slot = values[last] + c * (p - last) as f64;
        }
    }
    SweepApprox {
        principal,
        discontinuities,
        regularized,
        samples,
        resolution,
    }
}
