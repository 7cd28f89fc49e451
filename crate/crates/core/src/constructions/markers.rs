use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::family::{FamilyError, MonotoneStageFamily};
use super::pairing::ColumnPairing;
use crate::bits::Bits;
use crate::machines::{empty_verdict, Nat, OracleMachine, UsePolicy};
use crate::measure::{ClassTag, Verdict};
use crate::stagewise::{OracleApprox, Stage};

/// Horizons up to which a family is checked for shrinking cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyCheck {
    pub depth: usize,
    pub stage: Stage,
}

/// The movable-marker machine.
///
/// The marker of `σ` sits at `⟨σ, u⟩` where `u` is the last stage at which
/// cell `(|σ|, σ)` grew or `|σ|` entered `E` (0 if neither happened).  At
/// stage `s ≥ 1`, for `|σ| ≤ s` and `k ≤ s`, `M(τ, ⟨σ, k⟩) = ⟨σ, k⟩` for every
/// `τ ⪰ σ` unless `⟨σ, k⟩` is the marker, and for every `τ` of length at least
/// `|σ|` incompatible with `σ`.  So `M(X)` has exactly one hole per column
/// `ℕ^[σ]` with `σ ≺ X` at each stage, and its domain equals its range.
#[derive(Clone)]
pub struct CofMachine {
    family: Arc<dyn MonotoneStageFamily>,
    pairing: Arc<dyn ColumnPairing>,
    e: OracleApprox,
    rho: Option<Bits>,
}

/// Checks that diagonal cells `(|σ|, σ)` never shrink within the horizons,
/// then builds the marker machine.
pub fn cof_machine_from_sigma3(
    family: Arc<dyn MonotoneStageFamily>,
    pairing: Arc<dyn ColumnPairing>,
    e: OracleApprox,
    check: FamilyCheck,
) -> Result<CofMachine, FamilyError> {
    for sigma in Bits::all_up_to(check.depth) {
        let t = sigma.len();
        let mut prev = family.count(t, &sigma, 0);
        for stage in 1..=check.stage {
            let now = family.count(t, &sigma, stage);
            if now < prev {
                return Err(FamilyError::NonMonotone {
                    t,
                    sigma,
                    stage: stage - 1,
                });
            }
            prev = now;
        }
    }
    Ok(CofMachine {
        family,
        pairing,
        e,
        rho: None,
    })
}

impl CofMachine {
    /// Leaves the machine undefined on every string compatible with `rho`.
    pub fn suppress(mut self, rho: Bits) -> Self {
        self.rho = Some(rho);
        self
    }

    pub fn rho(&self) -> Option<&Bits> {
        self.rho.as_ref()
    }

    pub fn pairing(&self) -> &dyn ColumnPairing {
        self.pairing.as_ref()
    }

    /// Column index `u` of the marker `m(σ)[stage] = ⟨σ, u⟩`.
    pub fn marker_index(&self, sigma: &Bits, stage: Stage) -> Nat {
        let grew = self.family.last_growth(sigma.len(), sigma, stage);
        let entered = self.e.last_entry(sigma.len() as u64, stage);
        grew.max(entered).map_or(0, Nat::from)
    }

    /// `m(σ)[stage]`.
    pub fn marker(&self, sigma: &Bits, stage: Stage) -> Nat {
        self.pairing.pair(sigma, self.marker_index(sigma, stage))
    }

    /// Stages in `[1, stage]` at which the marker of `σ` moved.
    pub fn marker_moves(&self, sigma: &Bits, stage: Stage) -> Vec<Stage> {
        (1..=stage)
            .filter(|&s| self.marker_index(sigma, s) == Nat::from(s))
            .collect()
    }

    /// Elements `⟨σ, k⟩`, `k ≤ stage`, left undefined on `σ` at `stage`.
    pub fn holes(&self, sigma: &Bits, stage: Stage) -> Vec<Nat> {
        (0..=Nat::from(stage))
            .map(|k| self.pairing.pair(sigma, k))
            .filter(|&n| self.eval(sigma, n, stage).is_none())
            .collect()
    }

    fn in_rho_region(&self, tau: &Bits) -> bool {
        self.rho.as_ref().is_some_and(|r| r.is_compatible(tau))
    }
}

impl OracleMachine for CofMachine {
    fn eval(&self, tau: &Bits, n: Nat, stage: Stage) -> Option<Nat> {
        if stage == 0 || self.in_rho_region(tau) {
            return None;
        }
        let (sigma, k) = self.pairing.unpair(n)?;
        if sigma.len() > tau.len() || sigma.len() as Nat > Nat::from(stage) || k > Nat::from(stage) {
            return None;
        }
        if sigma.is_prefix_of(tau) {
            (k != self.marker_index(&sigma, stage)).then_some(n)
        } else {
            Some(n)
        }
    }

    fn use_policy(&self) -> UsePolicy {
        if self.rho.is_some() {
            UsePolicy::Recorded
        } else {
            UsePolicy::Identity
        }
    }

    fn certify(&self, tag: ClassTag, prefix: &Bits, stage: Stage) -> Option<Verdict> {
        if let Some(rho) = &self.rho {
            if rho.is_prefix_of(prefix) {
                return empty_verdict(tag);
            }
            if prefix.is_prefix_of(rho) {
                return None;
            }
        }
        let infinite = self.family.certify_infinite(prefix, stage);
        match tag {
            ClassTag::InfDomain => Some(Verdict::In),
            ClassTag::CofOutput => Some(Verdict::Out),
            ClassTag::Tot => (infinite == Some(false)).then_some(Verdict::Out),
            ClassTag::CofDomain | ClassTag::ComDomain => infinite.map(Verdict::from_bool),
            _ => None,
        }
    }

    fn describe(&self) -> String {
        match &self.rho {
            Some(r) => format!("cof-markers({}, ρ = {r})", self.family.describe()),
            None => format!("cof-markers({})", self.family.describe()),
        }
    }
}
