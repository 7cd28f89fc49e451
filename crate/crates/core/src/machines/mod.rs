//! The three machine models, bounded evaluation, universal enumeration by a
//! prefix-free coding, and splicing.

mod coding;
mod invariants;
mod splice;
mod toys;

pub use coding::{TableCoding, UnaryCoding, UniversalCoding};
pub use invariants::{check_infsd, check_monotone, check_oracle, Grid, Violation};
pub use splice::{splice, universal_from_family, Splice, SpliceCheck, Universal};
pub use toys::{
    empty_verdict, ConstOracle, CylinderOracle, EmptyOracle, InfSdConst, InfSdNowhere,
    MonotoneTable, OracleTable, TableEntry,
};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::{Bits, NotPrefixFree};
use crate::measure::{ClassTag, MachineKind, Verdict};
use crate::stagewise::Stage;

/// Natural-number arguments and values of oracle machines.  Column pairing
/// grows exponentially, hence the width.
pub type Nat = u128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UsePolicy {
    /// `M(X, n)` depends on `X↾n` only.
    Identity,
    /// The use is whatever prefix the machine happens to read.
    Recorded,
}

/// A stage-indexed partial map `(σ, n) ↦ M(σ, n)[stage]`.
///
/// Contract: once defined, defined with the same value at later stages, and
/// defined with the same value on every extension of `σ`.
pub trait OracleMachine: Send + Sync {
    fn eval(&self, tau: &Bits, n: Nat, stage: Stage) -> Option<Nat>;

    fn use_policy(&self) -> UsePolicy;

    /// A verdict on the whole cylinder `⟦prefix⟧` justified by what the
    /// machine knows about its own construction at `stage`.
    fn certify(&self, _tag: ClassTag, _prefix: &Bits, _stage: Stage) -> Option<Verdict> {
        None
    }

    fn describe(&self) -> String;
}

/// A monotone machine `σ ↦ N(σ)[stage]`.
pub trait MonotoneMachine: Send + Sync {
    fn eval(&self, sigma: &Bits, stage: Stage) -> Option<Bits>;

    fn certify(&self, _tag: ClassTag, _prefix: &Bits, _stage: Stage) -> Option<Verdict> {
        None
    }

    fn describe(&self) -> String;
}

/// An infinitary self-delimiting machine: `M(σ, n)` is total and decidable in
/// `(σ, n)`.
pub trait InfSdMachine: Send + Sync {
    fn eval(&self, sigma: &Bits, n: Nat) -> Option<Bits>;

    fn certify(&self, _tag: ClassTag, _prefix: &Bits, _n_max: Nat) -> Option<Verdict> {
        None
    }

    fn describe(&self) -> String;
}

/// Any of the three models, shareable across threads.
#[derive(Clone)]
pub enum AnyMachine {
    Oracle(Arc<dyn OracleMachine>),
    Monotone(Arc<dyn MonotoneMachine>),
    InfSd(Arc<dyn InfSdMachine>),
}

impl AnyMachine {
    pub fn kind(&self) -> MachineKind {
        match self {
            AnyMachine::Oracle(_) => MachineKind::Oracle,
            AnyMachine::Monotone(_) => MachineKind::Monotone,
            AnyMachine::InfSd(_) => MachineKind::InfSd,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            AnyMachine::Oracle(m) => m.describe(),
            AnyMachine::Monotone(m) => m.describe(),
            AnyMachine::InfSd(m) => m.describe(),
        }
    }

    pub fn oracle(m: impl OracleMachine + 'static) -> Self {
        AnyMachine::Oracle(Arc::new(m))
    }

    pub fn monotone(m: impl MonotoneMachine + 'static) -> Self {
        AnyMachine::Monotone(Arc::new(m))
    }

    pub fn infsd(m: impl InfSdMachine + 'static) -> Self {
        AnyMachine::InfSd(Arc::new(m))
    }
}

impl fmt::Debug for AnyMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnyMachine({})", self.describe())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MachineError {
    #[error("monotonicity violated: N({shorter}) = {left} and N({longer}) = {right} are incomparable")]
    Monotonicity {
        shorter: Bits,
        longer: Bits,
        left: Bits,
        right: Bits,
    },
    #[error("condition (a) violated at σ = {sigma}: M(σ, {n}) vs M(σ, {m})")]
    ConditionA { sigma: Bits, n: Nat, m: Nat },
    #[error("condition (b) violated: M({sigma}, {n}) is defined but M({extension}, {n}) differs")]
    ConditionB { sigma: Bits, extension: Bits, n: Nat },
    #[error("splice conflict: the second machine is defined at ({sigma}, {n}) stage {stage}, which is compatible with ρ")]
    SpliceConflict { sigma: Bits, n: Nat, stage: Stage },
    #[error("table entries {first} and {second} assign different values to compatible strings")]
    TableConflict { first: usize, second: usize },
    #[error(transparent)]
    NotPrefixFree(#[from] NotPrefixFree),
}

/// Bounded evaluation of `M(X, n)` at `stage`.  `None` means pending.
pub fn run_oracle(m: &dyn OracleMachine, x: &Bits, n: Nat, stage: Stage) -> Option<Nat> {
    match m.use_policy() {
        UsePolicy::Identity => {
            let u = usize::try_from(n).map_or(x.len(), |n| n.min(x.len()));
            m.eval(&x.prefix(u), n, stage)
        }
        UsePolicy::Recorded => x.prefixes().find_map(|p| m.eval(&p, n, stage)),
    }
}

/// The ⪯-supremum of the defined `N(σ)[stage]` over prefixes `σ ⪯ X`.
pub fn monotone_output(
    m: &dyn MonotoneMachine,
    x: &Bits,
    stage: Stage,
) -> Result<Bits, MachineError> {
    let mut best: Option<(Bits, Bits)> = None;
    for sigma in x.prefixes() {
        let Some(out) = m.eval(&sigma, stage) else {
            continue;
        };
        if let Some((prev_sigma, prev_out)) = &best {
            if !prev_out.is_prefix_of(&out) {
                return Err(MachineError::Monotonicity {
                    shorter: prev_sigma.clone(),
                    longer: sigma,
                    left: prev_out.clone(),
                    right: out,
                });
            }
        }
        best = Some((sigma, out));
    }
    Ok(best.map(|(_, out)| out).unwrap_or_default())
}

/// Result of scanning `M(σ, n)` for `n ≤ n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InftyOutcome {
    /// `M(σ, n)` is undefined, so `M^∞(σ)` diverges.
    Refuted(Nat),
    /// Defined up to `n_max` with this output.
    Alive(Bits),
}

impl InftyOutcome {
    pub fn is_alive(&self) -> bool {
        matches!(self, InftyOutcome::Alive(_))
    }
}

/// Scans `n = 0..=n_max`, checking condition (a) along `n` and condition (b)
/// against the parent of `σ`.
pub fn infty_eval(
    m: &dyn InfSdMachine,
    sigma: &Bits,
    n_max: Nat,
) -> Result<InftyOutcome, MachineError> {
    let parent = (!sigma.is_empty()).then(|| sigma.prefix(sigma.len() - 1));
    let mut refuted: Option<Nat> = None;
    let mut last = Bits::empty();
    for n in 0..=n_max {
        let here = m.eval(sigma, n);
        if let Some(p) = &parent {
            if let Some(pv) = m.eval(p, n) {
                if here.as_ref() != Some(&pv) {
                    return Err(MachineError::ConditionB {
                        sigma: p.clone(),
                        extension: sigma.clone(),
                        n,
                    });
                }
            }
        }
        match here {
            None => {
                refuted.get_or_insert(n);
            }
            Some(out) => {
                if let Some(r) = refuted {
                    return Err(MachineError::ConditionA {
                        sigma: sigma.clone(),
                        n: r,
                        m: n,
                    });
                }
                if n > 0 && !last.is_prefix_of(&out) {
                    return Err(MachineError::ConditionA {
                        sigma: sigma.clone(),
                        n: n - 1,
                        m: n,
                    });
                }
                last = out;
            }
        }
    }
    Ok(match refuted {
        Some(n) => InftyOutcome::Refuted(n),
        None => InftyOutcome::Alive(last),
    })
}

/// Minimal strings of length at most `max_len` that are alive at `n_max`
/// while every proper prefix is refuted, in lexicographic order.
pub fn mstar_front(
    m: &dyn InfSdMachine,
    max_len: usize,
    n_max: Nat,
) -> Result<Vec<Bits>, MachineError> {
    let mut front = Vec::new();
    let mut stack = vec![Bits::empty()];
    while let Some(sigma) = stack.pop() {
        if infty_eval(m, &sigma, n_max)?.is_alive() {
            front.push(sigma);
        } else if sigma.len() < max_len {
            stack.push(sigma.child(true));
            stack.push(sigma.child(false));
        }
    }
    front.sort();
    Ok(front)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{bits, check_prefix_free};

    struct ZeroWhenLong;
    impl OracleMachine for ZeroWhenLong {
        fn eval(&self, tau: &Bits, n: Nat, stage: Stage) -> Option<Nat> {
            (tau.len() as Nat >= n && stage as Nat >= n).then_some(0)
        }
        fn use_policy(&self) -> UsePolicy {
            UsePolicy::Identity
        }
        fn describe(&self) -> String {
            "zero-when-long".into()
        }
    }

    #[test]
    fn run_oracle_examples() {
        assert_eq!(run_oracle(&EmptyOracle, &bits("0101"), 2, 50), None);
        assert_eq!(run_oracle(&ZeroWhenLong, &bits("000"), 2, 5), Some(0));
        assert_eq!(run_oracle(&ZeroWhenLong, &bits("000"), 4, 5), None);
        assert_eq!(run_oracle(&ZeroWhenLong, &bits("000"), 2, 1), None);
    }

    #[test]
    fn monotone_output_examples() {
        let none = MonotoneTable::new(vec![]);
        assert_eq!(monotone_output(&none, &bits("0110"), 9).unwrap(), Bits::empty());

        let ok = MonotoneTable::new(vec![(bits("0"), 0, bits("0")), (bits("00"), 0, bits("00"))]);
        assert_eq!(monotone_output(&ok, &bits("000"), 3).unwrap(), bits("00"));

        let bad = MonotoneTable::new(vec![(bits("0"), 0, bits("1")), (bits("00"), 0, bits("0"))]);
        assert_eq!(
            monotone_output(&bad, &bits("00"), 3),
            Err(MachineError::Monotonicity {
                shorter: bits("0"),
                longer: bits("00"),
                left: bits("1"),
                right: bits("0"),
            })
        );
    }

    #[test]
    fn infty_eval_examples() {
        assert_eq!(infty_eval(&InfSdNowhere, &bits("01"), 5).unwrap(), InftyOutcome::Refuted(0));
        let all = InfSdConst::new(Bits::empty());
        for s in Bits::all_up_to(3) {
            assert_eq!(infty_eval(&all, &s, 7).unwrap(), InftyOutcome::Alive(Bits::empty()));
        }
    }

    #[test]
    fn mstar_front_examples() {
        let all = InfSdConst::new(Bits::empty());
        assert_eq!(mstar_front(&all, 4, 10).unwrap(), vec![Bits::empty()]);
        assert!(mstar_front(&InfSdNowhere, 4, 10).unwrap().is_empty());
    }

    struct BreaksA;
    impl InfSdMachine for BreaksA {
        fn eval(&self, _sigma: &Bits, n: Nat) -> Option<Bits> {
            (n != 2).then(Bits::empty)
        }
        fn describe(&self) -> String {
            "breaks-a".into()
        }
    }

    struct BreaksB;
    impl InfSdMachine for BreaksB {
        fn eval(&self, sigma: &Bits, _n: Nat) -> Option<Bits> {
            sigma.is_empty().then(Bits::empty)
        }
        fn describe(&self) -> String {
            "breaks-b".into()
        }
    }

    #[test]
    fn condition_violations_are_reported() {
        assert!(matches!(
            infty_eval(&BreaksA, &bits("0"), 5),
            Err(MachineError::ConditionA { n: 2, m: 3, .. })
        ));
        assert!(matches!(
            infty_eval(&BreaksB, &bits("1"), 5),
            Err(MachineError::ConditionB { n: 0, .. })
        ));
    }

    struct Depth2;
    impl InfSdMachine for Depth2 {
        // alive exactly on ⟦1⟧ ∪ ⟦01⟧
        fn eval(&self, sigma: &Bits, n: Nat) -> Option<Bits> {
            let ok = bits("1").is_prefix_of(sigma) || bits("01").is_prefix_of(sigma);
            (ok || n < sigma.len() as Nat).then(Bits::empty)
        }
        fn describe(&self) -> String {
            "depth2".into()
        }
    }

    #[test]
    fn front_is_prefix_free_and_minimal() {
        let f = mstar_front(&Depth2, 5, 8).unwrap();
        assert_eq!(f, vec![bits("01"), bits("1")]);
        assert!(check_prefix_free(&f).is_ok());
    }
}
