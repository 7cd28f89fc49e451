//! Stage-indexed approximations of oracles and of sets of strings, the
//! hat-trick, and true-stage instrumentation.

mod hat;
mod operator;
mod oracle;
mod script;
mod set;

pub use hat::{hat_trick, true_stages};
pub use operator::{Axiom, CeOperator};
pub use oracle::{decode_program, halting_time, HaltingStandIn, Instr, OracleApprox, OracleKind};
pub use script::{Event, EventKind, EventScript};
pub use set::{upward_closure_at, KnownLimit, Semantics, StageSource, StagewiseSet};

/// The single global stage counter shared by every construction.
pub type Stage = u32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StagewiseError {
    #[error("true stages need a known-limit oracle")]
    NoKnownLimit,
    #[error("declared limit {declared} differs from the script's final state {computed}")]
    LimitMismatch { declared: String, computed: String },
    #[error("axiom {index} mentions oracle element {element}, which is not below its use {use_bound}")]
    AxiomOutsideUse {
        index: usize,
        element: u64,
        use_bound: u64,
    },
}
