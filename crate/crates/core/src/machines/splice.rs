use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::toys::empty_verdict;
use super::{MachineError, Nat, OracleMachine, UniversalCoding, UsePolicy};
use crate::bits::{check_prefix_free, Bits};
use crate::measure::{ClassTag, Verdict};
use crate::stagewise::Stage;

/// Horizons up to which a splice is checked for conflicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpliceCheck {
    pub depth: usize,
    pub n_max: Nat,
    pub stage: Stage,
}

/// `M(ρτ) = V(τ)`, `M(σ) = N(σ)` for `σ` incompatible with `ρ`, and `M`
/// undefined on proper prefixes of `ρ`.
#[derive(Clone)]
pub struct Splice {
    v: Arc<dyn OracleMachine>,
    n: Arc<dyn OracleMachine>,
    rho: Bits,
}

/// Builds the splice after checking that `n` stays undefined on every string
/// compatible with `rho` within the horizons.
pub fn splice(
    v: Arc<dyn OracleMachine>,
    n: Arc<dyn OracleMachine>,
    rho: Bits,
    check: SpliceCheck,
) -> Result<Splice, MachineError> {
    let compatible = rho
        .prefixes()
        .chain((rho.len() + 1..=check.depth).flat_map(|len| rho.extensions_of_length(len)));
    for sigma in compatible {
        for k in 0..=check.n_max {
            if n.eval(&sigma, k, check.stage).is_some() {
                return Err(MachineError::SpliceConflict {
                    sigma,
                    n: k,
                    stage: check.stage,
                });
            }
        }
    }
    Ok(Splice { v, n, rho })
}

impl Splice {
    pub fn rho(&self) -> &Bits {
        &self.rho
    }
}

impl OracleMachine for Splice {
    fn eval(&self, tau: &Bits, n: Nat, stage: Stage) -> Option<Nat> {
        if self.rho.is_prefix_of(tau) {
            self.v.eval(&tau.suffix(self.rho.len()), n, stage)
        } else if tau.is_prefix_of(&self.rho) {
            None
        } else {
            self.n.eval(tau, n, stage)
        }
    }

    fn use_policy(&self) -> UsePolicy {
        UsePolicy::Recorded
    }

    fn certify(&self, tag: ClassTag, prefix: &Bits, stage: Stage) -> Option<Verdict> {
        if self.rho.is_prefix_of(prefix) {
            self.v.certify(tag, &prefix.suffix(self.rho.len()), stage)
        } else if prefix.is_prefix_of(&self.rho) {
            None
        } else {
            self.n.certify(tag, prefix, stage)
        }
    }

    fn describe(&self) -> String {
        format!(
            "splice(ρ = {}, V = {}, N = {})",
            self.rho,
            self.v.describe(),
            self.n.describe()
        )
    }
}

/// `U(code(e) τ, n) = M_e(τ, n)` over a finite family.
#[derive(Clone)]
pub struct Universal {
    family: Vec<Arc<dyn OracleMachine>>,
    codes: Vec<Bits>,
}

pub fn universal_from_family(
    family: Vec<Arc<dyn OracleMachine>>,
    coding: &dyn UniversalCoding,
) -> Result<Universal, MachineError> {
    let codes: Vec<Bits> = (0..family.len()).map(|e| coding.code(e)).collect();
    check_prefix_free(&codes)?;
    Ok(Universal { family, codes })
}

impl Universal {
    pub fn codes(&self) -> &[Bits] {
        &self.codes
    }

    fn locate(&self, tau: &Bits) -> Option<usize> {
        self.codes.iter().position(|c| c.is_prefix_of(tau))
    }
}

impl OracleMachine for Universal {
    fn eval(&self, tau: &Bits, n: Nat, stage: Stage) -> Option<Nat> {
        let e = self.locate(tau)?;
        self.family[e].eval(&tau.suffix(self.codes[e].len()), n, stage)
    }

    fn use_policy(&self) -> UsePolicy {
        UsePolicy::Recorded
    }

    fn certify(&self, tag: ClassTag, prefix: &Bits, stage: Stage) -> Option<Verdict> {
        if let Some(e) = self.locate(prefix) {
            return self.family[e].certify(tag, &prefix.suffix(self.codes[e].len()), stage);
        }
        if self.codes.iter().any(|c| c.is_compatible(prefix)) {
            None
        } else {
            empty_verdict(tag)
        }
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self
            .codes
            .iter()
            .zip(&self.family)
            .map(|(c, m)| format!("{c} ↦ {}", m.describe()))
            .collect();
        format!("universal[{}]", parts.join(", "))
    }
}
