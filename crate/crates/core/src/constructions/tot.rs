use std::sync::Arc;

use crate::bits::Bits;
use crate::machines::{empty_verdict, run_oracle, MonotoneMachine, Nat, OracleMachine, UsePolicy};
use crate::measure::{ClassTag, Verdict};
use crate::stagewise::{Stage, StagewiseSet};

/// `M(σ, |σ|) = 0` is defined at stage `s` once some stage `t` in
/// `[|σ| + 1, s]` has no prefix of `σ` in `V_t`; nothing else is defined.
/// With identity use, `M(X)` is total iff no prefix of `X` lies in the limit
/// of `V`.
#[derive(Clone, Debug)]
pub struct TotMachine {
    v: StagewiseSet,
    rho: Option<Bits>,
}

pub fn tot_machine_from_sigma2(v: StagewiseSet) -> TotMachine {
    TotMachine { v, rho: None }
}

impl TotMachine {
    /// Leaves the machine undefined on every string compatible with `rho`.
    pub fn suppress(mut self, rho: Bits) -> Self {
        self.rho = Some(rho);
        self
    }

    pub fn v(&self) -> &StagewiseSet {
        &self.v
    }

    pub fn rho(&self) -> Option<&Bits> {
        self.rho.as_ref()
    }

    /// The first stage at which `M(σ, |σ|)` is defined, up to `stage`.
    pub fn defined_from(&self, sigma: &Bits, stage: Stage) -> Option<Stage> {
        let start = Stage::try_from(sigma.len() + 1).ok()?;
        (start..=stage).find(|&t| !self.v.has_prefix_of(t, sigma))
    }

    fn limit_verdict(&self, prefix: &Bits, stage: Stage) -> Option<Verdict> {
        if prefix.prefixes().any(|g| self.v.is_settled_member(stage, &g)) {
            return Some(Verdict::Out);
        }
        let limit = self.v.limit()?;
        (stage >= limit.stabilization && !limit.touches(prefix)).then_some(Verdict::In)
    }
}

impl OracleMachine for TotMachine {
    fn eval(&self, tau: &Bits, n: Nat, stage: Stage) -> Option<Nat> {
        if let Some(rho) = &self.rho {
            if rho.is_compatible(tau) {
                return None;
            }
        }
        let n = usize::try_from(n).ok().filter(|&n| n <= tau.len())?;
        self.defined_from(&tau.prefix(n), stage).map(|_| 0)
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
        match tag {
            ClassTag::Tot | ClassTag::InfDomain | ClassTag::CofDomain => {
                self.limit_verdict(prefix, stage)
            }
            ClassTag::ComDomain => Some(Verdict::In),
            ClassTag::CofOutput => self.limit_verdict(prefix, stage).map(|v| match v {
                Verdict::In => Verdict::Out,
                Verdict::Out => Verdict::In,
            }),
            _ => None,
        }
    }

    fn describe(&self) -> String {
        match &self.rho {
            Some(r) => format!("tot({:?}, ρ = {r})", self.v.semantics()),
            None => format!("tot({:?})", self.v.semantics()),
        }
    }
}

/// `N(σ) = 0^{|σ|}` once `M(σ, i)` is defined for every `i < |σ|`.
#[derive(Clone)]
pub struct MonotoneFromTot {
    m: Arc<dyn OracleMachine>,
}

pub fn monotone_from_tot(m: Arc<dyn OracleMachine>) -> MonotoneFromTot {
    MonotoneFromTot { m }
}

impl MonotoneMachine for MonotoneFromTot {
    fn eval(&self, sigma: &Bits, stage: Stage) -> Option<Bits> {
        (0..sigma.len() as Nat)
            .all(|i| run_oracle(self.m.as_ref(), sigma, i, stage).is_some())
            .then(|| Bits::zeros(sigma.len()))
    }

    fn certify(&self, tag: ClassTag, prefix: &Bits, stage: Stage) -> Option<Verdict> {
        let tot = self.m.certify(ClassTag::Tot, prefix, stage)?;
        match tag {
            ClassTag::InfOutput => Some(tot),
            ClassTag::FinOutput => Some(match tot {
                Verdict::In => Verdict::Out,
                Verdict::Out => Verdict::In,
            }),
            _ => None,
        }
    }

    fn describe(&self) -> String {
        format!("monotone-from({})", self.m.describe())
    }
}
