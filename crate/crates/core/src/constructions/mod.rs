//! Machine builders: totality from Σ⁰₂ sets, cofiniteness from Σ⁰₃ families via
//! movable markers, prescribed probabilities via Kraft–Chaitin allocation, and
//! infinitary self-delimiting machines.

mod family;
mod infsd;
mod markers;
mod pairing;
mod prescribed;
mod target;
mod tot;

pub use family::{Burst, FamilyError, Generator, MonotoneStageFamily, ScriptedFamily};
pub use infsd::{infsd_from_sigma2, Sigma2InfSd};
pub use markers::{cof_machine_from_sigma3, CofMachine, FamilyCheck};
pub use pairing::{ColumnPairing, DiagonalPairing};
pub use prescribed::{
    prescribed_cof_machine, prescribed_com_machine, prescribed_domain_infsd,
    prescribed_tot_machine, prescribed_universal_tot, Allocation, Prescribed, UniversalTot,
    C_SCAN,
};
pub use target::{Direction, PrescribedTarget};
pub use tot::{monotone_from_tot, tot_machine_from_sigma2, MonotoneFromTot, TotMachine};

use crate::bits::{Dyadic, KraftError};
use crate::machines::MachineError;
use crate::stagewise::Stage;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("target approximation is empty")]
    EmptyTarget,
    #[error("target value {value} at stage {stage} is outside [0, 1)")]
    OutOfRange { stage: Stage, value: Dyadic },
    #[error("target is not {expected} at stage {stage}")]
    Direction { stage: Stage, expected: Direction },
    #[error("headroom violated at stage {stage}: {detail}")]
    Headroom { stage: Stage, detail: String },
    #[error("no admissible c in [1, {bound}]")]
    NoAdmissibleC { bound: u32 },
    #[error(transparent)]
    Kraft(#[from] KraftError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Machine(#[from] MachineError),
}
