#![no_std]
extern crate alloc;

pub mod assoc;
pub mod error;
pub mod minorant;
pub mod num;
pub mod oracle;
pub mod phi;
pub mod pwl;
pub mod regime;
pub mod sequence;

pub use assoc::{
    counting_function, omega_direct, omega_double_tilde, omega_integral, omega_piecewise,
    omega_tilde, phi_omega, underline_log_values, underline_sequence, young_conjugate, OmegaValue,
};
pub use error::{Axiom, Error, Result};
pub use minorant::{
    case1_regularize, case2_limit_check, case2_regularize, convex_minorant, log_convex_minorant,
    reconstruct_from_trace, regularize_by_regime, resolve_a_iota, trace_function,
    Case2LimitCheck, MinorantResult, SupportLine,
};
pub use num::{ExtReal, Rational};
pub use phi::{
    compare_regularizations, counting_m_phi, make_phi, recover_sequence, regularize_with_phi,
    trace_a_phi, trace_invariance_check, OrderingReport, OrderingViolation, PhiKind, PhiRegResult,
    PrincipalInterval, RegularizingFunction, Segment,
};
pub use pwl::{Breakpoint, Piece, PiecewiseLinearFn, StepFunction};
pub use regime::{classify_regime, regime_of, Regime, RegimeClassification};
pub use sequence::{ExprTail, Scale, SequenceSpec, TailRule, Window};
