//! One function per subcommand: core call, JSON result, CSV table and oracle checks.

use serde_json::{json, Map, Value};

use seqreg_core::num::{lift, to_f64};
use seqreg_core::oracle::{brute_minorant, brute_omega, brute_phi_sweep, brute_trace, double_conjugate, OracleReport};
use seqreg_core::sequence::{growth_indicators, is_log_convex};
use seqreg_core::{
    classify_regime, compare_regularizations, counting_m_phi, log_convex_minorant, make_phi, omega_direct,
    omega_double_tilde, omega_integral, omega_piecewise, omega_tilde, regularize_by_regime, regularize_with_phi,
    trace_a_phi, trace_function, Error, ExtReal, MinorantResult, PhiKind, PhiRegResult, Regime,
    RegularizingFunction, Scale, SequenceSpec, Window,
};

use crate::config::{Command, Grid, RunConfig};
use crate::output::{self, cell, ext, ext_list, float, rational};

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Check {
    pub report: OracleReport,
    pub tolerance: f64,
    pub notes: Map<String, Value>,
}

impl Check {
    fn new(report: OracleReport, tolerance: f64) -> Self {
        Check {
            report,
            tolerance,
            notes: Map::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.report.within(self.tolerance)
    }

    pub fn to_json(&self) -> Value {
        let mut v = output::oracle_report(&self.report, self.tolerance);
        let obj = v.as_object_mut().expect("object");
        obj.insert("within_tolerance".into(), json!(self.passed()));
        for (k, note) in &self.notes {
            obj.insert(k.clone(), note.clone());
        }
        v
    }
}

/// Result of one command on one input.
pub struct Computed {
    pub result: Value,
    pub table: Table,
    pub checks: Vec<Check>,
    /// A regime condition reported alongside a valid result.
    pub warning: Option<String>,
}

pub fn execute(config: &RunConfig, spec: &SequenceSpec) -> Result<Computed, Error> {
    let window = Window::new(config.window).with_tolerance(config.tolerance);
    match config.command {
        Command::Classify => classify(config, spec, &window),
        Command::Minorant => minorant(config, spec, &window),
        Command::Assoc => assoc(config, spec, &window),
        Command::Trace => trace(config, spec, &window),
        Command::Phireg => phireg(config, spec, &window),
        Command::Compare => compare(config, spec, &window),
    }
}

fn f64_cell(v: &ExtReal) -> String {
    cell(Some(v.to_f64()))
}

fn scale_name(scale: Scale) -> &'static str {
    match scale {
        Scale::Weight => "weight",
        Scale::Log => "log",
    }
}

fn regime_text(r: &Regime) -> Option<String> {
    match r {
        Regime::Standard => Some("standard".into()),
        Regime::Case1 => Some("case1".into()),
        Regime::Case2 { a_iota } => Some(format!("case2:{}", seqreg_core::num::format_rational(a_iota))),
        Regime::Indeterminate => None,
    }
}

fn classify(config: &RunConfig, spec: &SequenceSpec, window: &Window) -> Result<Computed, Error> {
    let found = classify_regime(spec, window, spec.declared())?;
    let growth = growth_indicators(spec, window);
    let convexity = is_log_convex(spec, window);
    let log = spec.log_values(window);
    let result = json!({
        "scale": scale_name(spec.scale()),
        "window_len": log.len(),
        "regime": output::regime(&found.regime),
        "declared_regime": spec.declared().map(output::regime),
        "evidence_window": [found.evidence_window.0, found.evidence_window.1],
        "growth": {
            "m_inf": ext(&growth.m_inf),
            "m_iota": ext(&growth.m_iota),
            "m_sigma": ext(&growth.m_sigma),
            "boundary_attained": growth.boundary_attained,
        },
        "log_convex": { "convex": convexity.convex, "violation": convexity.violation },
    });
    let rows = vec![
        vec!["regime".into(), regime_text(&found.regime).unwrap_or_else(|| "indeterminate".into())],
        vec!["evidence_start".into(), found.evidence_window.0.to_string()],
        vec!["evidence_end".into(), found.evidence_window.1.to_string()],
        vec!["m_inf".into(), f64_cell(&growth.m_inf)],
        vec!["m_iota".into(), f64_cell(&growth.m_iota)],
        vec!["m_sigma".into(), f64_cell(&growth.m_sigma)],
        vec!["boundary_attained".into(), growth.boundary_attained.to_string()],
        vec!["log_convex".into(), convexity.convex.to_string()],
    ];
    let mut checks = Vec::new();
    if config.verify && log.len() > 1 {
        // M_inf = inf_p exp((a_p − a_0)/p) recomputed by a float loop.
        let a0 = log[0].to_f64();
        let brute = (1..log.len())
            .map(|p| ((log[p].to_f64() - a0) / p as f64).exp())
            .fold(f64::INFINITY, f64::min);
        let report = OracleReport::compare("m_inf", std::slice::from_ref(&growth.m_inf), &[ExtReal::from_f64(brute)]);
        checks.push(Check::new(report, config.tolerance.max(1e-12)));
    }
    Ok(Computed {
        result,
        table: Table {
            header: vec!["key", "value"],
            rows,
        },
        checks,
        warning: None,
    })
}

/// A sequence file that re-reads as the stable part of the regularization.
fn round_trip(result: &MinorantResult, stable: usize) -> Value {
    let values = &result.regularized[..stable];
    let degenerate = values.iter().any(|v| match v {
        ExtReal::NegInf => true,
        ExtReal::Finite(r) => result.scale == Scale::Weight && num_traits::Zero::is_zero(r),
        ExtReal::PosInf => false,
    });
    if degenerate {
        return Value::Null;
    }
    json!({
        "kind": scale_name(result.scale),
        "prefix": ext_list(values),
        "tail": { "type": "explicit_only" },
        "declared_regime": regime_text(&result.regime),
    })
}

fn minorant(config: &RunConfig, spec: &SequenceSpec, window: &Window) -> Result<Computed, Error> {
    let r = match spec.scale() {
        Scale::Weight => log_convex_minorant(spec, window)?,
        Scale::Log => regularize_by_regime(spec, window)?,
    };
    let n = r.regularized.len();
    let stable = (r.stable_prefix + 1).min(n);
    let mut out = Map::new();
    let mut sidecar = Map::new();
    output::split_values("regularized", &r.regularized, Some(stable), &mut out, &mut sidecar);
    output::split_values("log_regularized", &r.log_regularized, Some(stable), &mut out, &mut sidecar);
    let provisional = if sidecar.is_empty() {
        Value::Null
    } else {
        sidecar.insert("from".into(), json!(stable));
        Value::Object(sidecar)
    };
    let slopes: Vec<Value> = r.support_lines.iter().map(|l| ext(&l.slope)).collect();
    let lines: Vec<Value> = r
        .support_lines
        .iter()
        .map(|l| json!({ "slope": ext(&l.slope), "intercept": ext(&l.intercept), "touching": l.touching }))
        .collect();
    let breakpoints = output::pwl(&r.trace)["breakpoints"].clone();
    out.insert("provisional".into(), provisional);
    out.insert("principal_indices".into(), json!(r.principal_indices));
    out.insert("slopes".into(), Value::Array(slopes));
    out.insert("support_lines".into(), Value::Array(lines));
    out.insert("trace_breakpoints".into(), breakpoints);
    out.insert("regime".into(), output::regime(&r.regime));
    out.insert("scale".into(), json!(scale_name(r.scale)));
    out.insert("stable_prefix".into(), json!(r.stable_prefix));
    out.insert("provisional_from".into(), json!(r.provisional_from));
    out.insert("finite_principal".into(), json!(r.finite_principal));
    out.insert("sequence".into(), round_trip(&r, stable));

    let original = match spec.scale() {
        Scale::Weight => spec.weight_values(window),
        Scale::Log => spec.log_values(window),
    };
    let log = spec.log_values(window);
    let rows = (0..n)
        .map(|p| {
            vec![
                p.to_string(),
                f64_cell(&original[p]),
                f64_cell(&r.regularized[p]),
                f64_cell(&log[p]),
                f64_cell(&r.log_regularized[p]),
                r.principal_indices.contains(&p).to_string(),
                (p < stable).to_string(),
            ]
        })
        .collect();

    let mut checks = Vec::new();
    if config.verify {
        let main = &r.log_regularized[..stable];
        let (hull, conj) = match &r.regime {
            Regime::Case1 => {
                let mut expected = vec![ExtReal::NegInf; n];
                expected[0] = log[0].clone();
                (expected.clone(), expected)
            }
            Regime::Case2 { a_iota } => (brute_minorant(&log, Some(a_iota)), double_conjugate(&log, Some(a_iota))),
            _ => (brute_minorant(&log, None), double_conjugate(&log, None)),
        };
        for (name, oracle) in [("log_regularized vs pairwise lines", hull), ("log_regularized vs double conjugate", conj)] {
            let report = OracleReport::compare(name, main, &oracle[..stable]);
            checks.push(Check::new(report, config.tolerance));
        }
    }
    let warning = (r.regime == Regime::Case1).then(|| format!("{}: minorant degenerates", r.regime));
    Ok(Computed {
        result: Value::Object(out),
        table: Table {
            header: vec!["p", "value", "regularized", "log_value", "log_regularized", "principal", "stable"],
            rows,
        },
        checks,
        warning,
    })
}

fn assoc(config: &RunConfig, spec: &SequenceSpec, window: &Window) -> Result<Computed, Error> {
    let grid = config
        .grid
        .clone()
        .unwrap_or(Grid::Linear {
            start: 0.0,
            stop: 10.0,
            step: 0.1,
        })
        .points();
    let columns = ["omega_direct", "omega_piecewise", "omega_integral", "omega_tilde", "omega_double_tilde"];
    let mut values: Vec<Vec<Option<ExtReal>>> = vec![Vec::with_capacity(grid.len()); columns.len()];
    let mut boundary = Vec::with_capacity(grid.len());
    let mut first_error = None;
    for &t in &grid {
        let tr = lift(t);
        let direct = match omega_direct(spec, &tr, window) {
            Ok(v) => {
                boundary.push(json!(v.boundary_attained));
                Some(v.value)
            }
            Err(e) => {
                boundary.push(Value::Null);
                first_error.get_or_insert(e);
                None
            }
        };
        values[0].push(direct);
        values[1].push(omega_piecewise(spec, &tr, window).ok());
        values[2].push(omega_integral(spec, &tr, window).ok());
        values[3].push(omega_tilde(spec, &tr, window).ok());
        values[4].push(omega_double_tilde(spec, &tr, window).ok());
    }
    if let Some(e) = first_error.filter(|_| values[0].iter().all(Option::is_none)) {
        return Err(e);
    }

    let mut out = Map::new();
    out.insert("t".into(), json!(grid.iter().map(|&t| float(t)).collect::<Vec<_>>()));
    for (name, column) in columns.iter().zip(&values) {
        let encoded: Vec<Value> = column.iter().map(|v| v.as_ref().map_or(Value::Null, ext)).collect();
        out.insert((*name).into(), Value::Array(encoded));
    }
    out.insert("boundary_attained".into(), Value::Array(boundary));
    let rows = grid
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut row = vec![cell(Some(t))];
            row.extend(values.iter().map(|c| cell(c[i].as_ref().map(ExtReal::to_f64))));
            row
        })
        .collect();

    let mut checks = Vec::new();
    if config.verify {
        let weights = spec.weight_values(window);
        let (mut main, mut brute) = (Vec::new(), Vec::new());
        for (i, &t) in grid.iter().enumerate() {
            if let Some(v) = &values[0][i] {
                main.push(v.clone());
                brute.push(ExtReal::from_f64(brute_omega(&weights, t, weights.len() - 1)));
            }
        }
        checks.push(Check::new(
            OracleReport::compare("omega_direct vs float loop", &main, &brute),
            config.tolerance,
        ));
        for (k, name) in [(1, "omega_piecewise vs omega_direct"), (2, "omega_integral vs omega_direct")] {
            let (mut route, mut direct) = (Vec::new(), Vec::new());
            for (direct_at, route_at) in values[0].iter().zip(&values[k]) {
                if let (Some(d @ ExtReal::Finite(_)), Some(v)) = (direct_at, route_at) {
                    route.push(v.clone());
                    direct.push(d.clone());
                }
            }
            if !route.is_empty() {
                checks.push(Check::new(OracleReport::compare(name, &route, &direct), config.tolerance));
            }
        }
    }
    Ok(Computed {
        result: Value::Object(out),
        table: Table {
            header: [&["t"][..], &columns[..]].concat(),
            rows,
        },
        checks,
        warning: None,
    })
}

/// Grid points, or a spread around the breakpoints when no grid was given.
fn sample_points(grid: &Option<Grid>, breakpoints: &[f64]) -> Vec<f64> {
    if let Some(g) = grid {
        return g.points();
    }
    let lo = breakpoints.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = breakpoints.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if lo.is_finite() { (lo - 1.0, hi + 1.0) } else { (-1.0, 1.0) };
    Grid::Linear {
        start: lo,
        stop: hi,
        step: (hi - lo) / 40.0,
    }
    .points()
}

fn merged(breakpoints: &[f64], grid: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = breakpoints.iter().chain(grid).copied().collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    all
}

fn trace(config: &RunConfig, spec: &SequenceSpec, window: &Window) -> Result<Computed, Error> {
    let a = trace_function(spec, window)?;
    let cap = match a.right() {
        ExtReal::Finite(r) => Some(to_f64(r)),
        _ => None,
    };
    let xs: Vec<f64> = a.breakpoints().iter().map(|b| to_f64(&b.x)).collect();
    let grid: Vec<f64> = sample_points(&config.grid, &xs);
    let points = merged(&xs, &grid);
    let values: Vec<Option<f64>> = points.iter().map(|&k| a.eval_f64(k)).collect();
    let mut out = Map::new();
    out.insert("trace".into(), output::pwl(&a));
    out.insert(
        "samples".into(),
        Value::Array(
            points
                .iter()
                .zip(&values)
                .map(|(&k, v)| json!({ "k": float(k), "value": v.map_or(Value::Null, float) }))
                .collect(),
        ),
    );
    let rows = points
        .iter()
        .zip(&values)
        .map(|(&k, &v)| vec![cell(Some(k)), cell(v)])
        .collect();

    let mut checks = Vec::new();
    if config.verify {
        let log = spec.log_values(window);
        let (mut main, mut brute) = (Vec::new(), Vec::new());
        for (&k, v) in grid.iter().zip(grid.iter().map(|&k| a.eval(&lift(k)))) {
            if let (Some(v), true) = (v, cap.is_none_or(|c| k < c)) {
                main.push(ExtReal::Finite(v));
                brute.push(ExtReal::from_f64(brute_trace(&log, k)));
            }
        }
        checks.push(Check::new(
            OracleReport::compare("trace vs float loop", &main, &brute),
            config.tolerance,
        ));
    }
    Ok(Computed {
        result: Value::Object(out),
        table: Table {
            header: vec!["k", "trace"],
            rows,
        },
        checks,
        warning: None,
    })
}

fn phi_result_json(r: &PhiRegResult) -> Value {
    let stable = (r.stable_prefix + 1).min(r.regularized.len());
    let mut out = Map::new();
    let mut sidecar = Map::new();
    output::split_values("regularized", &r.regularized, Some(stable), &mut out, &mut sidecar);
    let provisional = if sidecar.is_empty() {
        Value::Null
    } else {
        sidecar.insert("from".into(), json!(stable));
        Value::Object(sidecar)
    };
    let intervals: Vec<Value> = r
        .intervals
        .iter()
        .map(|i| json!({ "index": i.index, "start": ext(&i.start), "end": ext(&i.end), "closed_right": i.closed_right }))
        .collect();
    let segments: Vec<Value> = r
        .segments
        .iter()
        .map(|s| json!({ "slope": rational(&s.slope), "anchor": s.anchor, "until": s.until }))
        .collect();
    out.insert("provisional".into(), provisional);
    out.insert("principal_indices".into(), json!(r.principal_indices));
    out.insert("discontinuity_indices".into(), json!(r.discontinuity_indices));
    out.insert("intervals".into(), Value::Array(intervals));
    out.insert("segments".into(), Value::Array(segments));
    out.insert("counting".into(), output::step(&r.counting));
    out.insert("trace".into(), output::pwl(&r.trace));
    out.insert("j_right".into(), r.j_right.as_ref().map_or(Value::Null, ext));
    out.insert("finite_principal".into(), json!(r.finite_principal));
    out.insert("regime".into(), r.regime.as_ref().map_or(Value::Null, output::regime));
    out.insert("stable_prefix".into(), json!(r.stable_prefix));
    out.insert("provisional_from".into(), json!(r.provisional_from));
    Value::Object(out)
}

fn phi_kind_json(kind: &PhiKind) -> Value {
    match kind {
        PhiKind::Exp => json!({ "type": "exp" }),
        PhiKind::ExpAffine { alpha, beta } => json!({ "type": "expaffine", "alpha": rational(alpha), "beta": rational(beta) }),
        PhiKind::BlowupReciprocal { t } => json!({ "type": "blowup", "t": rational(t) }),
        PhiKind::Piecewise(points) => json!({
            "type": "piecewise",
            "points": points.iter().map(|(x, y)| json!([rational(x), rational(y)])).collect::<Vec<_>>(),
        }),
        PhiKind::Infinite => json!({ "type": "infinite" }),
    }
}

/// Sweep simulation for finite φ, the capped minorant for `φ ≡ +∞`.
fn phi_check(
    label: &str,
    log: &[ExtReal],
    phi: &RegularizingFunction,
    r: &PhiRegResult,
    tolerance: f64,
) -> Check {
    let stable = (r.stable_prefix + 1).min(r.regularized.len());
    let main = &r.regularized[..stable];
    if phi.is_infinite() {
        let cap = match &r.regime {
            Some(Regime::Case2 { a_iota }) => Some(a_iota.clone()),
            _ => None,
        };
        let oracle = match r.regime {
            Some(Regime::Case1) => {
                let mut v = vec![ExtReal::NegInf; log.len()];
                v[0] = log[0].clone();
                v
            }
            _ => brute_minorant(log, cap.as_ref()),
        };
        let name = format!("{label} vs pairwise lines");
        return Check::new(OracleReport::compare(&name, main, &oracle[..stable]), tolerance);
    }
    let diffs: Vec<f64> = log
        .windows(2)
        .filter_map(|w| match (&w[0], &w[1]) {
            (ExtReal::Finite(x), ExtReal::Finite(y)) => Some(to_f64(&(y - x))),
            _ => None,
        })
        .collect();
    let thresholds: Vec<f64> = (1..log.len())
        .filter_map(|p| phi.threshold(p).finite().map(to_f64))
        .collect();
    let lo = diffs.iter().chain(&thresholds).copied().fold(0.0, f64::min) - 1.0;
    let hi = diffs.iter().chain(&thresholds).copied().fold(0.0, f64::max) + 1.0;
    let step = ((hi - lo) / 200_000.0).max(1e-3);
    let sweep = brute_phi_sweep(log, phi, lo, hi, step);
    let oracle: Vec<ExtReal> = sweep.regularized.iter().map(|&x| ExtReal::from_f64(x)).collect();
    let name = format!("{label} vs slope sweep");
    let mut check = Check::new(
        OracleReport::compare(&name, main, &oracle[..stable.min(oracle.len())]),
        tolerance.max(2.0 * sweep.resolution),
    );
    check.notes.insert("sweep_step".into(), json!(step));
    check.notes.insert("sweep_principal".into(), json!(sweep.principal));
    check.notes.insert("sweep_discontinuities".into(), json!(sweep.discontinuities));
    check
}

fn phireg(config: &RunConfig, spec: &SequenceSpec, window: &Window) -> Result<Computed, Error> {
    let kind = config.phi.clone().unwrap_or(PhiKind::Exp);
    let phi = make_phi(kind.clone())?;
    let r = regularize_with_phi(spec, &phi, window)?;
    let mut result = phi_result_json(&r);
    result["phi"] = phi_kind_json(&kind);

    let xs: Vec<f64> = r.trace.breakpoints().iter().map(|b| to_f64(&b.x)).collect();
    let points = merged(&xs, &sample_points(&config.grid, &xs));
    let rows = points
        .iter()
        .map(|&t| {
            let te = ExtReal::from_f64(t);
            let m = counting_m_phi(&r, &te).ok();
            let a = trace_a_phi(&r, &te, config.extended).ok();
            vec![
                cell(Some(t)),
                m.map(|m| m.to_string()).unwrap_or_default(),
                cell(a.as_ref().map(ExtReal::to_f64)),
            ]
        })
        .collect();

    let mut checks = Vec::new();
    if config.verify {
        let log = spec.log_values(window);
        checks.push(phi_check("regularized", &log, &phi, &r, config.tolerance));
    }
    Ok(Computed {
        result,
        table: Table {
            header: vec!["t", "m_phi", "trace_phi"],
            rows,
        },
        checks,
        warning: None,
    })
}

fn compare(config: &RunConfig, spec: &SequenceSpec, window: &Window) -> Result<Computed, Error> {
    let (k1, k2) = (config.phi.clone().expect("validated"), config.phi2.clone().expect("validated"));
    let (phi1, phi2) = (make_phi(k1.clone())?, make_phi(k2.clone())?);
    let report = compare_regularizations(spec, &phi1, &phi2, window)?;
    let log = spec.log_values(window);
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| json!({ "index": v.index, "relation": v.relation }))
        .collect();
    let result = json!({
        "phi1": phi_kind_json(&k1),
        "phi2": phi_kind_json(&k2),
        "first_is_smaller": report.first_is_smaller,
        "first": ext_list(&report.first),
        "second": ext_list(&report.second),
        "minorant": ext_list(&report.minorant),
        "original": ext_list(&log),
        "monotone": report.monotone,
        "below_original": report.below_original,
        "above_minorant": report.above_minorant,
        "violations": violations,
    });
    let rows = (0..log.len())
        .map(|p| {
            let at = |v: &[ExtReal]| v.get(p).map_or(String::new(), f64_cell);
            vec![p.to_string(), at(&log), at(&report.minorant), at(&report.first), at(&report.second)]
        })
        .collect();

    let mut checks = Vec::new();
    if config.verify {
        for (label, phi) in [("first", &phi1), ("second", &phi2)] {
            let r = regularize_with_phi(spec, phi, window)?;
            checks.push(phi_check(label, &log, phi, &r, config.tolerance));
        }
    }
    Ok(Computed {
        result,
        table: Table {
            header: vec!["p", "original", "minorant", "first", "second"],
            rows,
        },
        checks,
        warning: None,
    })
}
