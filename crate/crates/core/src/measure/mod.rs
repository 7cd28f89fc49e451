//! Outcome classes, measure bounds at finite truncations, convergence traces,
//! the total/eventually-ones decomposition, and Martin-Löf test construction.

mod bounds;
mod classes;
mod decomposition;
mod interval;
mod mltest;
mod trace;

pub use bounds::{class_bounds, class_bounds_jobs, classify, Judgement, MeasureBound, Truncation, MAX_DEPTH};
pub use classes::{ClassTag, MachineKind, UnknownTag, Verdict};
pub use decomposition::{cof_total_decomposition, Decomposition};
pub use interval::union_measure;
pub use mltest::{
    adversarial_instance, delta, ml_test_build, ml_test_verify, pow2_neg, sub_enumeration,
    MlComponent, MlError, MlInput, MlReport, MlRow, MlTest,
};
pub use trace::{trace, trace_violations, TraceViolation, CSV_HEADER};

use crate::machines::{MachineError, Nat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error("{tag} does not apply to {kind:?} machines")]
    Inapplicable { tag: ClassTag, kind: MachineKind },
    #[error("depth {0} exceeds the supported maximum")]
    DepthTooLarge(usize),
    #[error("horizon {0} is too large")]
    HorizonTooLarge(Nat),
    #[error("schedule is not monotone at row {index}")]
    NonMonotoneSchedule { index: usize },
    #[error(transparent)]
    Machine(#[from] MachineError),
}
