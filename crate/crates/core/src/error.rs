use alloc::boxed::Box;
use alloc::string::String;

use crate::regime::Regime;

/// Axioms a regularizing function must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    /// Non-decreasing.
    Monotone,
    /// Tends to 0 at `−∞`.
    VanishesAtMinusInfinity,
    /// Tends to `+∞` at the blow-up point or at `+∞`.
    BlowsUp,
    /// Continuous left of the blow-up point.
    Continuous,
}

impl core::fmt::Display for Axiom {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Axiom::Monotone => "(I) non-decreasing",
            Axiom::VanishesAtMinusInfinity => "(II) limit 0 at -inf",
            Axiom::BlowsUp => "(III) unbounded growth",
            Axiom::Continuous => "(IV) continuity",
        })
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("entry {index} is +inf inside the window")]
    NonFiniteEntry { index: usize },
    #[error("entry 0 must be finite")]
    InfinityAtZero,
    #[error("window too short: {0}")]
    WindowTooShort(String),
    #[error("{regime}: {detail}")]
    RegimeMismatch { regime: Regime, detail: String },
    #[error("declared regime {declared} contradicts window evidence {found}")]
    InconsistentDeclaration { declared: Box<Regime>, found: Box<Regime> },
    #[error("sequence is not log-convex at index {index}")]
    NotLogConvex { index: usize },
    #[error("argument outside the domain: {0}")]
    OutOfDomain(String),
    #[error("supremum is unbounded: {0}")]
    Unbounded(String),
    #[error("liminf a_p/p cannot be determined from the data; declare it")]
    UnknownAIota,
    #[error("axiom {axiom} violated at t = {witness}")]
    AxiomViolation { axiom: Axiom, witness: f64 },
    #[error("+inf entries not supported here: {0}")]
    InfiniteEntryUnsupported(String),
    #[error("regularizing functions are not comparable on the probe grid")]
    NotComparable,
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
}

pub type Result<T> = core::result::Result<T, Error>;
