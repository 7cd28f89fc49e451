use serde::{Deserialize, Serialize};

use super::{InfSdMachine, MachineError, MonotoneMachine, Nat, OracleMachine, UsePolicy};
use crate::bits::Bits;
use crate::measure::{ClassTag, Verdict};
use crate::stagewise::Stage;

/// Verdicts for a region on which an oracle machine is nowhere defined.
pub fn empty_verdict(tag: ClassTag) -> Option<Verdict> {
    match tag {
        ClassTag::Tot | ClassTag::InfDomain | ClassTag::CofDomain => Some(Verdict::Out),
        ClassTag::ComDomain | ClassTag::CofOutput => Some(Verdict::In),
        _ => None,
    }
}

fn const_verdict(tag: ClassTag, value: Nat) -> Option<Verdict> {
    match tag {
        ClassTag::Tot | ClassTag::InfDomain | ClassTag::CofDomain | ClassTag::ComDomain => {
            Some(Verdict::In)
        }
        ClassTag::CofOutput => Some(Verdict::from_bool(value == 1)),
        _ => None,
    }
}

/// Nowhere defined.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmptyOracle;

impl OracleMachine for EmptyOracle {
    fn eval(&self, _tau: &Bits, _n: Nat, _stage: Stage) -> Option<Nat> {
        None
    }

    fn use_policy(&self) -> UsePolicy {
        UsePolicy::Identity
    }

    fn certify(&self, tag: ClassTag, _prefix: &Bits, _stage: Stage) -> Option<Verdict> {
        empty_verdict(tag)
    }

    fn describe(&self) -> String {
        "empty".into()
    }
}

/// Defined everywhere from stage 0 with a constant value.
#[derive(Debug, Clone, Copy)]
pub struct ConstOracle {
    pub value: Nat,
}

impl OracleMachine for ConstOracle {
    fn eval(&self, _tau: &Bits, _n: Nat, _stage: Stage) -> Option<Nat> {
        Some(self.value)
    }

    fn use_policy(&self) -> UsePolicy {
        UsePolicy::Identity
    }

    fn certify(&self, tag: ClassTag, _prefix: &Bits, _stage: Stage) -> Option<Verdict> {
        const_verdict(tag, self.value)
    }

    fn describe(&self) -> String {
        format!("const({})", self.value)
    }
}

/// Defined everywhere on `⟦region⟧` with a constant value, nowhere else.
#[derive(Debug, Clone)]
pub struct CylinderOracle {
    pub region: Vec<Bits>,
    pub value: Nat,
}

impl CylinderOracle {
    fn inside(&self, tau: &Bits) -> bool {
        self.region.iter().any(|g| g.is_prefix_of(tau))
    }
}

impl OracleMachine for CylinderOracle {
    fn eval(&self, tau: &Bits, _n: Nat, _stage: Stage) -> Option<Nat> {
        self.inside(tau).then_some(self.value)
    }

    fn use_policy(&self) -> UsePolicy {
        UsePolicy::Recorded
    }

    fn certify(&self, tag: ClassTag, prefix: &Bits, _stage: Stage) -> Option<Verdict> {
        if self.inside(prefix) {
            const_verdict(tag, self.value)
        } else if !self.region.iter().any(|g| g.is_compatible(prefix)) {
            empty_verdict(tag)
        } else {
            None
        }
    }

    fn describe(&self) -> String {
        let r: Vec<String> = self.region.iter().map(|g| g.to_string()).collect();
        format!("cylinder([{}], {})", r.join(", "), self.value)
    }
}

/// One scripted computation: `M(σ, n) = value` from `stage` on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub sigma: Bits,
    pub n: Nat,
    pub stage: Stage,
    pub value: Nat,
}

/// A finite scripted oracle machine.  Extensions inherit computations.
#[derive(Debug, Clone)]
pub struct OracleTable {
    entries: Vec<TableEntry>,
}

impl OracleTable {
    /// Rejects two entries that give different values to the same `n` on
    /// compatible strings.
    pub fn new(entries: Vec<TableEntry>) -> Result<Self, MachineError> {
        for (i, a) in entries.iter().enumerate() {
            for (j, b) in entries.iter().enumerate().skip(i + 1) {
                if a.n == b.n && a.value != b.value && a.sigma.is_compatible(&b.sigma) {
                    return Err(MachineError::TableConflict { first: i, second: j });
                }
            }
        }
        Ok(OracleTable { entries })
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }
}

impl OracleMachine for OracleTable {
    fn eval(&self, tau: &Bits, n: Nat, stage: Stage) -> Option<Nat> {
        self.entries
            .iter()
            .find(|e| e.n == n && e.stage <= stage && e.sigma.is_prefix_of(tau))
            .map(|e| e.value)
    }

    fn use_policy(&self) -> UsePolicy {
        UsePolicy::Recorded
    }

    fn describe(&self) -> String {
        format!("table({} entries)", self.entries.len())
    }
}

/// A finite scripted monotone machine: `N(σ) = out` from `stage` on.  No
/// consistency is enforced, so violations surface at evaluation time.
#[derive(Debug, Clone)]
pub struct MonotoneTable {
    entries: Vec<(Bits, Stage, Bits)>,
}

impl MonotoneTable {
    pub fn new(entries: Vec<(Bits, Stage, Bits)>) -> Self {
        MonotoneTable { entries }
    }
}

impl MonotoneMachine for MonotoneTable {
    fn eval(&self, sigma: &Bits, stage: Stage) -> Option<Bits> {
        self.entries
            .iter()
            .filter(|(s, t, _)| s == sigma && *t <= stage)
            .map(|(_, _, out)| out)
            .max_by_key(|out| out.len())
            .cloned()
    }

    fn describe(&self) -> String {
        format!("monotone-table({} entries)", self.entries.len())
    }
}

/// `M(σ, n)` undefined everywhere.
#[derive(Debug, Clone, Copy, Default)]
pub struct InfSdNowhere;

impl InfSdMachine for InfSdNowhere {
    fn eval(&self, _sigma: &Bits, _n: Nat) -> Option<Bits> {
        None
    }

    fn certify(&self, tag: ClassTag, _prefix: &Bits, _n_max: Nat) -> Option<Verdict> {
        matches!(tag, ClassTag::DomInfSd | ClassTag::FinInfSd | ClassTag::InfInfSd)
            .then_some(Verdict::Out)
    }

    fn describe(&self) -> String {
        "infsd-nowhere".into()
    }
}

/// `M(σ, n) = output` everywhere.
#[derive(Debug, Clone, Default)]
pub struct InfSdConst {
    output: Bits,
}

impl InfSdConst {
    pub fn new(output: Bits) -> Self {
        InfSdConst { output }
    }
}

impl InfSdMachine for InfSdConst {
    fn eval(&self, _sigma: &Bits, _n: Nat) -> Option<Bits> {
        Some(self.output.clone())
    }

    fn certify(&self, tag: ClassTag, _prefix: &Bits, _n_max: Nat) -> Option<Verdict> {
        match tag {
            ClassTag::DomInfSd | ClassTag::FinInfSd => Some(Verdict::In),
            ClassTag::InfInfSd => Some(Verdict::Out),
            _ => None,
        }
    }

    fn describe(&self) -> String {
        format!("infsd-const({})", self.output)
    }
}
