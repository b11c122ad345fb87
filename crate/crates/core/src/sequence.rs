//! Sequences given by an explicit prefix and a rule for the remaining indices.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::num::{exp_ext, exp_to_rational, int, lift, ln_rational, to_f64, ExtReal, Rational};
use crate::regime::{classify_regime, Regime};

/// Which scale the entries of a sequence live on: weights `M_p` or logarithms `a_p = log M_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scale {
    Weight,
    Log,
}

pub type Evaluator = Arc<dyn Fn(usize) -> ExtReal + Send + Sync>;

/// A user supplied closed form `p ↦ value` on a given scale.
#[derive(Clone)]
pub struct ExprTail {
    pub label: String,
    pub scale: Scale,
    /// Whether the evaluator returns exact values.
    pub exact: bool,
    eval: Evaluator,
}

impl ExprTail {
    pub fn new(
        label: impl Into<String>,
        scale: Scale,
        exact: bool,
        eval: impl Fn(usize) -> ExtReal + Send + Sync + 'static,
    ) -> Self {
        ExprTail {
            label: label.into(),
            scale,
            exact,
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, p: usize) -> ExtReal {
        (self.eval)(p)
    }
}

impl fmt::Debug for ExprTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExprTail")
            .field("label", &self.label)
            .field("scale", &self.scale)
            .field("exact", &self.exact)
            .finish()
    }
}

/// How entries past the explicit prefix are produced.
#[derive(Clone, Debug)]
pub enum TailRule {
    /// Nothing is known beyond the prefix.
    ExplicitOnly,
    /// `M_p = c·(p!)^s`.
    FactorialPower { s: Rational, c: Rational },
    /// `M_p = d^p`.
    Geometric { d: Rational },
    /// `a_p = c·p`.
    AffineLog { c: Rational },
    Expression(ExprTail),
}

fn log_lift(k: usize) -> Rational {
    if k <= 1 {
        Rational::zero()
    } else {
        lift(libm::log(k as f64))
    }
}

impl TailRule {
    fn validate(&self) -> Result<()> {
        let positive = |r: &Rational, what: &str| {
            if r.is_positive() {
                Ok(())
            } else {
                Err(Error::InvalidSequence(format!("{what} must be positive")))
            }
        };
        match self {
            TailRule::FactorialPower { s, c } => {
                positive(s, "factorial exponent")?;
                positive(c, "factorial scale")
            }
            TailRule::Geometric { d } => positive(d, "geometric base"),
            _ => Ok(()),
        }
    }

    pub fn is_explicit_only(&self) -> bool {
        matches!(self, TailRule::ExplicitOnly)
    }

    /// Value of the rule on the weight scale.
    pub fn weight_at(&self, p: usize) -> Option<ExtReal> {
        match self {
            TailRule::ExplicitOnly => None,
            TailRule::FactorialPower { s, c } => {
                if s.is_integer() && s.to_u32().is_some_and(|e| e <= 64) {
                    let fact: BigInt = (1..=p).map(BigInt::from).product();
                    let power = num_traits::pow(fact, s.to_usize().unwrap());
                    Some(ExtReal::Finite(c * Rational::from_integer(power)))
                } else {
                    let log = ln_rational(c) + to_f64(s) * libm::lgamma(p as f64 + 1.0);
                    Some(ExtReal::Finite(exp_to_rational(log)))
                }
            }
            TailRule::Geometric { d } => Some(ExtReal::Finite(num_traits::pow(d.clone(), p))),
            TailRule::AffineLog { c } => Some(exp_ext(&ExtReal::Finite(c * int(p as i64)))),
            TailRule::Expression(e) => Some(match e.scale {
                Scale::Weight => e.eval(p),
                Scale::Log => exp_ext(&e.eval(p)),
            }),
        }
    }

    /// Value of the rule on the log scale.
    pub fn log_at(&self, p: usize) -> Option<ExtReal> {
        match self {
            TailRule::ExplicitOnly => None,
            TailRule::FactorialPower { s, c } => {
                let mut sum = Rational::zero();
                for k in 2..=p {
                    sum += log_lift(k);
                }
                Some(ExtReal::Finite(lift(ln_rational(c)) + s * sum))
            }
            TailRule::Geometric { d } => {
                Some(ExtReal::Finite(lift(ln_rational(d)) * int(p as i64)))
            }
            TailRule::AffineLog { c } => Some(ExtReal::Finite(c * int(p as i64))),
            TailRule::Expression(e) => Some(match e.scale {
                Scale::Log => e.eval(p),
                Scale::Weight => crate::num::ln_ext(&e.eval(p)),
            }),
        }
    }

    /// Log-scale values on `from..to`, sharing partial sums across indices.
    fn log_run(&self, from: usize, to: usize) -> Vec<ExtReal> {
        match self {
            TailRule::FactorialPower { s, c } => {
                let base = lift(ln_rational(c));
                let mut sum = Rational::zero();
                for k in 2..from {
                    sum += log_lift(k);
                }
                (from..to)
                    .map(|p| {
                        sum += log_lift(p);
                        ExtReal::Finite(&base + s * &sum)
                    })
                    .collect()
            }
            _ => (from..to)
                .map(|p| self.log_at(p).expect("tail rule covers the window"))
                .collect(),
        }
    }

    /// Weight-scale values on `from..to`, sharing partial products across indices.
    fn weight_run(&self, from: usize, to: usize) -> Vec<ExtReal> {
        match self {
            TailRule::FactorialPower { s, c }
                if s.is_integer() && s.to_u32().is_some_and(|e| e <= 64) =>
            {
                let e = s.to_usize().expect("small exponent");
                let mut fact: BigInt = (1..from).map(BigInt::from).product();
                (from..to)
                    .map(|p| {
                        fact *= BigInt::from(p.max(1));
                        let power = num_traits::pow(fact.clone(), e);
                        ExtReal::Finite(c * Rational::from_integer(power))
                    })
                    .collect()
            }
            _ => (from..to)
                .map(|p| self.weight_at(p).expect("tail rule covers the window"))
                .collect(),
        }
    }

    fn exact_on(&self, scale: Scale) -> bool {
        match (self, scale) {
            (TailRule::ExplicitOnly, _) => true,
            (TailRule::FactorialPower { s, .. }, Scale::Weight) => s.is_integer(),
            (TailRule::FactorialPower { .. }, Scale::Log) => false,
            (TailRule::Geometric { .. }, Scale::Weight) => true,
            (TailRule::Geometric { d }, Scale::Log) => d.is_one(),
            (TailRule::AffineLog { c }, Scale::Weight) => c.is_zero(),
            (TailRule::AffineLog { .. }, Scale::Log) => true,
            (TailRule::Expression(e), s) => e.exact && e.scale == s,
        }
    }
}

/// Evaluation window `0..len` together with the relative tolerance used for inexact data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub len: usize,
    pub tolerance: f64,
}

impl Window {
    pub const DEFAULT_LEN: usize = 64;
    pub const DEFAULT_TOLERANCE: f64 = 1e-9;

    pub fn new(len: usize) -> Self {
        Window {
            len,
            tolerance: Self::DEFAULT_TOLERANCE,
        }
    }

    pub fn with_tolerance(self, tolerance: f64) -> Self {
        Window { tolerance, ..self }
    }
}

impl Default for Window {
    fn default() -> Self {
        Window::new(Self::DEFAULT_LEN)
    }
}

/// A sequence `(M_p)` or `(a_p)` indexed by `p ≥ 0`.
#[derive(Clone, Debug)]
pub struct SequenceSpec {
    scale: Scale,
    prefix: Vec<ExtReal>,
    tail: TailRule,
    declared: Option<Regime>,
    exact_prefix: bool,
}

impl SequenceSpec {
    pub fn new(scale: Scale, prefix: Vec<ExtReal>, tail: TailRule) -> Result<Self> {
        tail.validate()?;
        for (p, v) in prefix.iter().enumerate() {
            let bad = match (scale, v) {
                (_, ExtReal::NegInf) => true,
                (Scale::Weight, ExtReal::Finite(r)) => !r.is_positive(),
                _ => false,
            };
            if bad {
                return Err(Error::InvalidSequence(format!(
                    "entry {p} = {v} is outside the admissible range"
                )));
            }
        }
        let spec = SequenceSpec {
            scale,
            prefix,
            tail,
            declared: None,
            exact_prefix: true,
        };
        match spec.value(0) {
            None => Err(Error::InvalidSequence("no entry at index 0".into())),
            Some(ExtReal::Finite(_)) => Ok(spec),
            Some(_) => Err(Error::InfinityAtZero),
        }
    }

    pub fn weight(prefix: Vec<ExtReal>, tail: TailRule) -> Result<Self> {
        Self::new(Scale::Weight, prefix, tail)
    }

    pub fn log(prefix: Vec<ExtReal>, tail: TailRule) -> Result<Self> {
        Self::new(Scale::Log, prefix, tail)
    }

    /// Sequence known only through the given entries.
    pub fn explicit(scale: Scale, prefix: Vec<ExtReal>) -> Result<Self> {
        Self::new(scale, prefix, TailRule::ExplicitOnly)
    }

    /// Builds a sequence from floats; the entries are marked inexact.
    pub fn from_f64(scale: Scale, values: &[f64], tail: TailRule) -> Result<Self> {
        let prefix = values.iter().map(|&x| ExtReal::from_f64(x)).collect();
        Ok(Self::new(scale, prefix, tail)?.inexact())
    }

    pub fn with_declared(mut self, regime: Regime) -> Self {
        self.declared = Some(regime);
        self
    }

    /// Marks the prefix as carrying rounding error.
    pub fn inexact(mut self) -> Self {
        self.exact_prefix = false;
        self
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn prefix(&self) -> &[ExtReal] {
        &self.prefix
    }

    pub fn tail(&self) -> &TailRule {
        &self.tail
    }

    pub fn declared(&self) -> Option<&Regime> {
        self.declared.as_ref()
    }

    /// Number of indices actually available in `window`.
    pub fn len_in(&self, window: &Window) -> usize {
        if self.tail.is_explicit_only() {
            window.len.min(self.prefix.len())
        } else {
            window.len
        }
    }

    /// Entry on the native scale.
    pub fn value(&self, p: usize) -> Option<ExtReal> {
        if let Some(v) = self.prefix.get(p) {
            return Some(v.clone());
        }
        match self.scale {
            Scale::Weight => self.tail.weight_at(p),
            Scale::Log => self.tail.log_at(p),
        }
    }

    /// Log-scale entry at a single index, possibly beyond any window.
    pub fn log_value_at(&self, p: usize) -> Option<ExtReal> {
        match self.prefix.get(p) {
            Some(v) => Some(match self.scale {
                Scale::Log => v.clone(),
                Scale::Weight => crate::num::ln_ext(v),
            }),
            None => self.tail.log_at(p),
        }
    }

    /// Log-scale entries on the window.
    ///
    /// Weight prefixes are converted through logarithms of consecutive quotients, so that a
    /// log-convex weight prefix yields an exactly convex log prefix.
    pub fn log_values(&self, window: &Window) -> Vec<ExtReal> {
        let n = self.len_in(window);
        let mut out: Vec<ExtReal> = Vec::with_capacity(n);
        let explicit = n.min(self.prefix.len());
        for p in 0..explicit {
            let v = {
                match self.scale {
                    Scale::Log => self.prefix[p].clone(),
                    Scale::Weight => match &self.prefix[p] {
                        ExtReal::Finite(m) => {
                            let previous = p
                                .checked_sub(1)
                                .and_then(|q| Some((self.prefix[q].finite()?, out[q].finite()?)));
                            match previous {
                                Some((prev, a_prev)) => {
                                    let quotient = Rational::new_raw(
                                        m.numer() * prev.denom(),
                                        m.denom() * prev.numer(),
                                    );
                                    ExtReal::Finite(a_prev + lift(ln_rational(&quotient)))
                                }
                                None => ExtReal::Finite(lift(ln_rational(m))),
                            }
                        }
                        other => other.clone(),
                    },
                }
            };
            out.push(v);
        }
        out.extend(self.tail.log_run(explicit, n));
        out
    }

    /// Weight-scale entries on the window.
    pub fn weight_values(&self, window: &Window) -> Vec<ExtReal> {
        let n = self.len_in(window);
        let explicit = n.min(self.prefix.len());
        let mut out: Vec<ExtReal> = self.prefix[..explicit]
            .iter()
            .map(|v| match self.scale {
                Scale::Weight => v.clone(),
                Scale::Log => exp_ext(v),
            })
            .collect();
        out.extend(self.tail.weight_run(explicit, n));
        out
    }

    /// Whether the window entries on `scale` are exact.
    pub fn exact_on(&self, scale: Scale, window: &Window) -> bool {
        let n = self.len_in(window);
        let prefix_exact = self.exact_prefix
            && (self.scale == scale
                || self.prefix.iter().take(n).all(|v| match v {
                    ExtReal::Finite(r) => match self.scale {
                        Scale::Weight => r.is_one(),
                        Scale::Log => r.is_zero(),
                    },
                    _ => true,
                }));
        prefix_exact && (n <= self.prefix.len() || self.tail.exact_on(scale))
    }

    /// Tolerance to use for predicates on log-scale data of this sequence.
    pub(crate) fn log_tolerance(&self, window: &Window) -> Option<f64> {
        if self.exact_on(Scale::Log, window) {
            None
        } else {
            Some(window.tolerance)
        }
    }
}

/// `μ_0 = 1` and `μ_p = M_p / M_{p−1}` on the window.
pub fn quotients(m: &SequenceSpec, window: &Window) -> Result<Vec<ExtReal>> {
    let values = m.weight_values(window);
    let mut out = Vec::with_capacity(values.len());
    for (p, v) in values.iter().enumerate() {
        let v = v.finite().ok_or(Error::NonFiniteEntry { index: p })?;
        if p == 0 {
            out.push(ExtReal::Finite(Rational::one()));
        } else {
            let prev = values[p - 1].finite().expect("checked above");
            out.push(ExtReal::Finite(v / prev));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogConvexity {
    pub convex: bool,
    pub violation: Option<usize>,
}

/// Checks `M_p² ≤ M_{p−1} M_{p+1}` at every interior index of the window.
pub fn is_log_convex(m: &SequenceSpec, window: &Window) -> LogConvexity {
    let scale = m.scale();
    let values = match scale {
        Scale::Weight => m.weight_values(window),
        Scale::Log => m.log_values(window),
    };
    let slack = if m.exact_on(scale, window) {
        None
    } else {
        Some(lift(window.tolerance))
    };
    for p in 1..values.len().saturating_sub(1) {
        let (l, c, r) = (&values[p - 1], &values[p], &values[p + 1]);
        let ok = match (l, c, r) {
            (_, ExtReal::PosInf, _) => !l.is_finite() || !r.is_finite(),
            (ExtReal::Finite(l), ExtReal::Finite(c), ExtReal::Finite(r)) => match scale {
                Scale::Weight => match &slack {
                    Some(eps) => {
                        let rhs = l * r;
                        c * c <= &rhs + &rhs * eps
                    }
                    None => {
                        let lhs = c.numer() * c.numer() * l.denom() * r.denom();
                        lhs <= l.numer() * r.numer() * c.denom() * c.denom()
                    }
                },
                Scale::Log => {
                    let lhs = c + c;
                    let rhs = l + r;
                    let rhs = match &slack {
                        Some(eps) => {
                            let size = lhs.abs().max(Rational::one());
                            rhs + size * eps
                        }
                        None => rhs,
                    };
                    lhs <= rhs
                }
            },
            _ => true,
        };
        if !ok {
            return LogConvexity {
                convex: false,
                violation: Some(p),
            };
        }
    }
    LogConvexity {
        convex: true,
        violation: None,
    }
}

fn convert_prefix(m: &SequenceSpec, target: Scale) -> Vec<ExtReal> {
    if m.scale == target {
        return m.prefix.clone();
    }
    let window = Window::new(m.prefix.len());
    match target {
        Scale::Log => {
            let explicit = SequenceSpec {
                tail: TailRule::ExplicitOnly,
                ..m.clone()
            };
            explicit.log_values(&window)
        }
        Scale::Weight => m.prefix.iter().map(exp_ext).collect(),
    }
}

fn rescaled(m: &SequenceSpec, target: Scale) -> SequenceSpec {
    let prefix = convert_prefix(m, target);
    let window = Window::new(m.prefix.len());
    let exact = m.exact_on(target, &window);
    SequenceSpec {
        scale: target,
        prefix,
        tail: m.tail.clone(),
        declared: m.declared.clone(),
        exact_prefix: exact,
    }
}

/// `a_p = log M_p` with `log(+∞) = +∞`.
pub fn to_log_scale(m: &SequenceSpec) -> SequenceSpec {
    rescaled(m, Scale::Log)
}

/// `M_p = exp(a_p)`.
pub fn to_weight_scale(a: &SequenceSpec) -> SequenceSpec {
    rescaled(a, Scale::Weight)
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub sequence: SequenceSpec,
    pub q0: usize,
    /// Constant `C` with `M^n_p / C ≤ M_p ≤ C·M^n_p`.
    pub constant: ExtReal,
}

/// Replaces the entries below the first index from which `M_p ≥ 1` holds by 1.
pub fn normalize_sequence(m: &SequenceSpec, window: &Window) -> Result<Normalized> {
    let class = classify_regime(m, window, m.declared())?;
    if matches!(class.regime, Regime::Case1 | Regime::Case2 { .. }) {
        return Err(Error::RegimeMismatch {
            regime: class.regime,
            detail: "normalization needs (M_p)^(1/p) -> +inf".into(),
        });
    }
    let values = m.weight_values(window);
    let n = values.len();
    if n < 3 {
        return Err(Error::WindowTooShort("need at least three entries".into()));
    }
    let one = ExtReal::Finite(Rational::one());
    let mut q0 = n;
    while q0 > 0 && values[q0 - 1] >= one {
        q0 -= 1;
    }
    if q0 == n {
        return Err(Error::WindowTooShort(format!(
            "entry {} is below 1, so no index q0 is visible in the window",
            n - 1
        )));
    }
    let q0 = q0.max(2);
    if q0 >= n {
        return Err(Error::WindowTooShort("q0 falls outside the window".into()));
    }
    let mut constant = one.clone();
    for v in &values[..q0] {
        let factor = match v {
            ExtReal::Finite(r) => {
                let inv = r.recip();
                ExtReal::Finite(if &inv > r { inv } else { r.clone() })
            }
            _ => ExtReal::PosInf,
        };
        constant = constant.max(factor);
    }
    let keep = m.prefix.len().max(q0);
    let prefix: Vec<ExtReal> = (0..keep)
        .map(|p| {
            if p < q0 {
                one.clone()
            } else if p < n {
                values[p].clone()
            } else {
                m.tail.weight_at(p).unwrap_or(ExtReal::PosInf)
            }
        })
        .collect();
    let exact = m.exact_on(Scale::Weight, window);
    let sequence = SequenceSpec {
        scale: Scale::Weight,
        prefix,
        tail: m.tail.clone(),
        declared: m.declared.clone(),
        exact_prefix: exact,
    };
    Ok(Normalized {
        sequence,
        q0,
        constant,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthIndicators {
    pub m_inf: ExtReal,
    pub m_iota: ExtReal,
    pub m_sigma: ExtReal,
    pub boundary_attained: bool,
}

/// Indices used to estimate `liminf`/`limsup` on a window of length `n`.
pub(crate) fn tail_indices(n: usize) -> core::ops::Range<usize> {
    let q = n.div_ceil(4).max(1);
    n.saturating_sub(q).max(1)..n
}

/// Probe indices for closed-form tails that cannot be analysed symbolically.
pub(crate) fn probe_indices(n: usize) -> Vec<usize> {
    let base = n.max(8);
    (0..5).map(|k| base << k).collect()
}

fn exp_of_log(log: &Rational) -> ExtReal {
    exp_ext(&ExtReal::Finite(log.clone()))
}

/// `M_inf = inf_p (M_p/M_0)^{1/p}`, `M_ι = liminf M_p^{1/p}`, `M_σ = limsup M_p^{1/p}`.
pub fn growth_indicators(m: &SequenceSpec, window: &Window) -> GrowthIndicators {
    let a = m.log_values(window);
    let n = a.len();
    let a0 = a[0].finite().cloned().unwrap_or_else(Rational::zero);
    let mut inf_log = ExtReal::PosInf;
    let mut inf_at = None;
    for (p, v) in a.iter().enumerate().skip(1) {
        let root = match v {
            ExtReal::Finite(r) => ExtReal::Finite((r - &a0) / int(p as i64)),
            other => other.clone(),
        };
        if root < inf_log {
            inf_log = root;
            inf_at = Some(p);
        }
    }
    let mut boundary = false;
    let (iota, sigma): (ExtReal, ExtReal) = match m.tail() {
        TailRule::FactorialPower { .. } => (ExtReal::PosInf, ExtReal::PosInf),
        TailRule::Geometric { d } => (ExtReal::Finite(d.clone()), ExtReal::Finite(d.clone())),
        TailRule::AffineLog { c } => (exp_of_log(c), exp_of_log(c)),
        rule => {
            let roots: Vec<(usize, ExtReal)> = match rule {
                TailRule::Expression(_) => probe_indices(n)
                    .into_iter()
                    .filter_map(|p| Some((p, m.log_value_at(p)?)))
                    .collect(),
                _ => tail_indices(n).map(|p| (p, a[p].clone())).collect(),
            };
            let scaled: Vec<(usize, ExtReal)> = roots
                .into_iter()
                .map(|(p, v)| match v {
                    ExtReal::Finite(r) => (p, ExtReal::Finite(r / int(p as i64))),
                    other => (p, other),
                })
                .collect();
            let lo = scaled.iter().min_by(|x, y| x.1.cmp(&y.1)).cloned();
            let hi = scaled.iter().max_by(|x, y| x.1.cmp(&y.1)).cloned();
            if rule.is_explicit_only() {
                boundary |= lo.as_ref().is_some_and(|(p, _)| *p + 1 == n)
                    || hi.as_ref().is_some_and(|(p, _)| *p + 1 == n);
            }
            let to_weight = |v: Option<(usize, ExtReal)>| match v {
                Some((_, ExtReal::Finite(r))) => exp_of_log(&r),
                Some((_, other)) => other,
                None => ExtReal::PosInf,
            };
            (to_weight(lo), to_weight(hi))
        }
    };
    let mut m_inf = match &inf_log {
        ExtReal::Finite(r) => exp_of_log(r),
        other => other.clone(),
    };
    if matches!(m.tail(), TailRule::Geometric { .. } | TailRule::AffineLog { .. }) && iota < m_inf
    {
        m_inf = iota.clone();
    }
    if m.tail().is_explicit_only() && inf_at.is_some_and(|p| p + 1 == n) {
        boundary = true;
    }
    GrowthIndicators {
        m_inf,
        m_iota: iota,
        m_sigma: sigma,
        boundary_attained: boundary,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitComparison {
    pub lim_quotient: ExtReal,
    pub lim_root: ExtReal,
    pub agree: bool,
}

/// Estimates `lim μ_p` and `lim M_p^{1/p}` for a log-convex sequence.
pub fn limit_comparison(m: &SequenceSpec, window: &Window) -> Result<LimitComparison> {
    let check = is_log_convex(m, window);
    if let Some(index) = check.violation {
        return Err(Error::NotLogConvex { index });
    }
    let closed = |v: ExtReal| LimitComparison {
        lim_quotient: v.clone(),
        lim_root: v,
        agree: true,
    };
    match m.tail() {
        TailRule::FactorialPower { .. } => return Ok(closed(ExtReal::PosInf)),
        TailRule::Geometric { d } => return Ok(closed(ExtReal::Finite(d.clone()))),
        TailRule::AffineLog { c } => return Ok(closed(exp_of_log(c))),
        _ => {}
    }
    let n = m.len_in(window);
    let p = match m.tail() {
        TailRule::Expression(_) => *probe_indices(n).last().unwrap(),
        _ => n.saturating_sub(1),
    };
    if p < 1 {
        return Err(Error::WindowTooShort("need at least two entries".into()));
    }
    let (last, before) = (m.log_value_at(p), m.log_value_at(p - 1));
    let (lim_quotient, lim_root) = match (last, before) {
        (Some(ExtReal::Finite(x)), Some(ExtReal::Finite(y))) => {
            (exp_of_log(&(&x - &y)), exp_of_log(&(x / int(p as i64))))
        }
        _ => (ExtReal::PosInf, ExtReal::PosInf),
    };
    let agree = match (&lim_quotient, &lim_root) {
        (ExtReal::Finite(q), ExtReal::Finite(r)) => {
            let (q, r) = (to_f64(q), to_f64(r));
            (q - r).abs() <= window.tolerance * q.abs().max(1.0)
        }
        (x, y) => x == y,
    };
    Ok(LimitComparison {
        lim_quotient,
        lim_root,
        agree,
    })
}
