use crate::bits::Bits;
use crate::machines::{InfSdMachine, Nat};
use crate::measure::{ClassTag, Verdict};
use crate::stagewise::{Stage, StagewiseSet};

/// `M(σ, n) = ε` iff for every `t` with `|σ| ≤ t ≤ n` some prefix of `σ` lies
/// in `V_t`.  The machine never prints, so every convergent `M^∞(σ)` has finite
/// output, and `M^∞(X↾m)` converges for some `m` iff `X` has a prefix in the
/// limit of `V`.
#[derive(Clone, Debug)]
pub struct Sigma2InfSd {
    v: StagewiseSet,
    rho: Option<Bits>,
}

pub fn infsd_from_sigma2(v: StagewiseSet) -> Sigma2InfSd {
    Sigma2InfSd { v, rho: None }
}

fn stage_of(n: Nat) -> Stage {
    Stage::try_from(n).unwrap_or(Stage::MAX)
}

impl Sigma2InfSd {
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
}

impl InfSdMachine for Sigma2InfSd {
    fn eval(&self, sigma: &Bits, n: Nat) -> Option<Bits> {
        if self.rho.as_ref().is_some_and(|r| r.is_compatible(sigma)) {
            return None;
        }
        let from = sigma.len() as Nat;
        (from..=n)
            .all(|t| self.v.has_prefix_of(stage_of(t), sigma))
            .then(Bits::empty)
    }

    fn certify(&self, tag: ClassTag, prefix: &Bits, n_max: Nat) -> Option<Verdict> {
        if !matches!(tag, ClassTag::DomInfSd | ClassTag::FinInfSd | ClassTag::InfInfSd) {
            return None;
        }
        if let Some(rho) = &self.rho {
            if rho.is_prefix_of(prefix) {
                return Some(Verdict::Out);
            }
            if prefix.is_prefix_of(rho) {
                return None;
            }
        }
        if tag == ClassTag::InfInfSd {
            return Some(Verdict::Out);
        }
        let stage = stage_of(n_max);
        if prefix.prefixes().any(|g| self.v.is_settled_member(stage, &g)) {
            return Some(Verdict::In);
        }
        let limit = self.v.limit()?;
        (stage >= limit.stabilization && !limit.touches(prefix)).then_some(Verdict::Out)
    }

    fn describe(&self) -> String {
        match &self.rho {
            Some(r) => format!("infsd({:?}, ρ = {r})", self.v.semantics()),
            None => format!("infsd({:?})", self.v.semantics()),
        }
    }
}
