//! JSON descriptions of machines and the scripts they reference.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use omegaforge::bits::{kraft_chaitin, Bits, Dyadic};
use omegaforge::constructions::{
    cof_machine_from_sigma3, infsd_from_sigma2, monotone_from_tot, prescribed_cof_machine,
    prescribed_com_machine, prescribed_domain_infsd, prescribed_tot_machine,
    prescribed_universal_tot, tot_machine_from_sigma2, Allocation, CofMachine, DiagonalPairing,
    FamilyCheck, PrescribedTarget, ScriptedFamily,
};
use omegaforge::machines::{
    universal_from_family, AnyMachine, EmptyOracle, OracleTable, SpliceCheck, TableEntry, UnaryCoding,
};
use omegaforge::stagewise::{Event, EventKind, EventScript, OracleApprox, Stage, StagewiseSet};

use crate::error::CliError;

pub const ARTIFACT_FORMAT: &str = "omegaforge-machine/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptEvent {
    pub element: Bits,
    pub stage: Stage,
    pub kind: EventKind,
}

/// A stagewise set of strings: `members` present from stage 0, changed by
/// `events`.  Without events the set is constant.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetScript {
    #[serde(default)]
    pub members: Vec<Bits>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub events: Vec<ScriptEvent>,
}

impl SetScript {
    pub fn to_set(&self) -> StagewiseSet {
        if self.events.is_empty() {
            return StagewiseSet::constant(self.members.iter().cloned().collect());
        }
        let initial = self.members.iter().map(|m| Event {
            element: m.clone(),
            stage: 0,
            kind: EventKind::Enter,
        });
        let events = self.events.iter().map(|e| Event {
            element: e.element.clone(),
            stage: e.stage,
            kind: e.kind,
        });
        StagewiseSet::scripted(EventScript::new(initial.chain(events).collect()))
    }
}

/// An approximation to an oracle set of naturals.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OracleScript {
    #[default]
    Empty,
    /// Scripted entries and removals as `[n, stage]` pairs.
    Toy {
        #[serde(default)]
        entries: Vec<(u64, Stage)>,
        #[serde(default)]
        removals: Vec<(u64, Stage)>,
    },
    /// Step-bounded halting of the first `programs` micro-programs.
    Halting { programs: u64, step_budget: Stage },
}

impl OracleScript {
    pub fn to_approx(&self) -> Result<OracleApprox, CliError> {
        Ok(match self {
            OracleScript::Empty => OracleApprox::empty(),
            OracleScript::Toy { entries, removals } => {
                OracleApprox::toy(entries.clone(), removals.clone(), None).map_err(CliError::domain)?
            }
            OracleScript::Halting {
                programs,
                step_budget,
            } => OracleApprox::halting(*programs, *step_budget),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoParams {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableParams {
    pub entries: Vec<TableEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetParams {
    pub v: SetScript,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkerParams {
    pub family: ScriptedFamily,
    #[serde(default)]
    pub oracle: OracleScript,
    /// Horizons for the shrinking-cell check and the logged marker moves.
    #[serde(default = "default_family_check")]
    pub check: FamilyCheck,
}

fn default_family_check() -> FamilyCheck {
    FamilyCheck { depth: 3, stage: 32 }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetParams {
    pub target: PrescribedTarget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniversalParams {
    pub target: PrescribedTarget,
    /// Oracle machines making up the universal machine's family.
    pub family: Vec<MachineSpec>,
    /// Descending approximation of the family machine's totality measure.
    pub gamma: Vec<Dyadic>,
    #[serde(default)]
    pub c: Option<u32>,
    #[serde(default = "default_splice_check")]
    pub check: SpliceCheck,
}

fn default_splice_check() -> SpliceCheck {
    SpliceCheck {
        depth: 6,
        n_max: 8,
        stage: 16,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KraftParams {
    pub requests: Vec<u32>,
}

/// A construction name with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", content = "params", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MachineSpec {
    EmptyOracle(NoParams),
    OracleTable(TableParams),
    TotFromSigma2(SetParams),
    MonotoneFromTot(SetParams),
    InfsdFromSigma2(SetParams),
    CofMarkers(MarkerParams),
    PrescribedTot(TargetParams),
    PrescribedCof(TargetParams),
    PrescribedCom(TargetParams),
    PrescribedInfsd(TargetParams),
    UniversalTot(UniversalParams),
    /// Codewords only; there is no machine to trace.
    KraftChaitin(KraftParams),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkerLog {
    pub sigma: Bits,
    pub moves: Vec<Stage>,
}

/// What a builder decided, written next to the description.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildLog {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub describe: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<Bits>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub allocation: Option<Allocation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<PrescribedTarget>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codes: Option<Vec<Bits>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codewords: Option<Vec<Bits>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub markers: Option<Vec<MarkerLog>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// The file written by `build`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Artifact {
    pub format: String,
    pub machine: MachineSpec,
    #[serde(default)]
    pub log: BuildLog,
}

pub struct Built {
    pub machine: Option<AnyMachine>,
    pub log: BuildLog,
}

fn marker_log(m: &CofMachine, check: FamilyCheck) -> Vec<MarkerLog> {
    Bits::all_up_to(check.depth)
        .map(|sigma| MarkerLog {
            moves: m.marker_moves(&sigma, check.stage),
            sigma,
        })
        .collect()
}

fn with_machine(machine: AnyMachine, mut log: BuildLog) -> Built {
    log.describe = Some(machine.describe());
    Built {
        machine: Some(machine),
        log,
    }
}

impl MachineSpec {
    pub fn build(&self) -> Result<Built, CliError> {
        let log = BuildLog::default();
        Ok(match self {
            MachineSpec::EmptyOracle(_) => with_machine(AnyMachine::oracle(EmptyOracle), log),
            MachineSpec::OracleTable(p) => with_machine(
                AnyMachine::oracle(OracleTable::new(p.entries.clone()).map_err(CliError::domain)?),
                log,
            ),
            MachineSpec::TotFromSigma2(p) => {
                with_machine(AnyMachine::oracle(tot_machine_from_sigma2(p.v.to_set())), log)
            }
            MachineSpec::MonotoneFromTot(p) => with_machine(
                AnyMachine::monotone(monotone_from_tot(Arc::new(tot_machine_from_sigma2(p.v.to_set())))),
                log,
            ),
            MachineSpec::InfsdFromSigma2(p) => {
                with_machine(AnyMachine::infsd(infsd_from_sigma2(p.v.to_set())), log)
            }
            MachineSpec::CofMarkers(p) => {
                let m = cof_machine_from_sigma3(
                    Arc::new(p.family.clone()),
                    Arc::new(DiagonalPairing),
                    p.oracle.to_approx()?,
                    p.check,
                )
                .map_err(CliError::domain)?;
                let log = BuildLog {
                    markers: Some(marker_log(&m, p.check)),
                    ..log
                };
                with_machine(AnyMachine::oracle(m), log)
            }
            MachineSpec::PrescribedTot(p) => {
                let built = prescribed_tot_machine(&p.target).map_err(CliError::domain)?;
                let log = BuildLog {
                    rho: Some(built.rho),
                    allocation: Some(built.allocation),
                    ..log
                };
                with_machine(AnyMachine::oracle(built.machine), log)
            }
            MachineSpec::PrescribedCof(p) | MachineSpec::PrescribedCom(p) => {
                let built = if matches!(self, MachineSpec::PrescribedCof(_)) {
                    prescribed_cof_machine(&p.target)
                } else {
                    prescribed_com_machine(&p.target)
                }
                .map_err(CliError::domain)?;
                let log = BuildLog {
                    rho: Some(built.rho),
                    allocation: Some(built.allocation),
                    ..log
                };
                with_machine(AnyMachine::oracle(built.machine), log)
            }
            MachineSpec::PrescribedInfsd(p) => {
                let built = prescribed_domain_infsd(&p.target).map_err(CliError::domain)?;
                let log = BuildLog {
                    rho: Some(built.rho),
                    allocation: Some(built.allocation),
                    ..log
                };
                with_machine(AnyMachine::infsd(built.machine), log)
            }
            MachineSpec::UniversalTot(p) => {
                let mut family = Vec::with_capacity(p.family.len());
                for (i, spec) in p.family.iter().enumerate() {
                    match spec.build()?.machine {
                        Some(AnyMachine::Oracle(m)) => family.push(m),
                        _ => {
                            return Err(CliError::Domain(format!(
                                "family member {i} is not an oracle machine"
                            )))
                        }
                    }
                }
                let v = universal_from_family(family, &UnaryCoding).map_err(CliError::domain)?;
                let codes = v.codes().to_vec();
                let u = prescribed_universal_tot(&p.target, Arc::new(v), &p.gamma, p.c, p.check)
                    .map_err(CliError::domain)?;
                let log = BuildLog {
                    rho: Some(u.inner.rho.clone()),
                    allocation: Some(u.inner.allocation.clone()),
                    c: Some(u.c),
                    beta: Some(u.beta.clone()),
                    codes: Some(codes),
                    ..log
                };
                with_machine(AnyMachine::oracle(u.machine), log)
            }
            MachineSpec::KraftChaitin(p) => Built {
                machine: None,
                log: BuildLog {
                    codewords: Some(kraft_chaitin(&p.requests).map_err(CliError::domain)?),
                    ..log
                },
            },
        })
    }
}
