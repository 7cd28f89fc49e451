use std::thread;

use serde::{Deserialize, Serialize};

use super::{ClassTag, MeasureError, Verdict};
use crate::bits::{Bits, Dyadic};
use crate::machines::{
    infty_eval, monotone_output, run_oracle, AnyMachine, InfSdMachine, InftyOutcome,
    MonotoneMachine, Nat, OracleMachine,
};
use crate::stagewise::Stage;

/// Largest depth accepted by [`class_bounds`].
pub const MAX_DEPTH: usize = 24;

/// A finite truncation: cylinders of length `depth`, construction `stage`,
/// and argument horizon `n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    pub depth: usize,
    pub stage: Stage,
    pub n_max: Nat,
}

impl Truncation {
    pub fn new(depth: usize, stage: Stage, n_max: Nat) -> Self {
        Truncation {
            depth,
            stage,
            n_max,
        }
    }

    /// Whether no coordinate decreases from `self` to `next`.
    pub fn precedes(&self, next: &Truncation) -> bool {
        self.depth <= next.depth && self.stage <= next.stage && self.n_max <= next.n_max
    }
}

/// Bounds on the measure of a class at a truncation.  `lower` is the measure
/// of the depth-L cylinders judged inside, `upper` is one minus the measure of
/// those judged outside.  A side is certified when every judgement feeding it
/// came from a certificate rather than a heuristic window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureBound {
    pub depth: usize,
    pub stage: Stage,
    pub n_max: Nat,
    pub lower: Dyadic,
    pub upper: Dyadic,
    pub lower_certified: bool,
    pub upper_certified: bool,
}

impl MeasureBound {
    pub fn truncation(&self) -> Truncation {
        Truncation::new(self.depth, self.stage, self.n_max)
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper && self.lower_certified && self.upper_certified
    }
}

/// One cylinder's judgement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Judgement {
    pub verdict: Verdict,
    pub certified: bool,
}

fn window(n_max: Nat) -> std::ops::Range<Nat> {
    n_max / 2..n_max
}

fn oracle_heuristic(m: &dyn OracleMachine, tag: ClassTag, x: &Bits, t: Truncation) -> bool {
    let at = |n| run_oracle(m, x, n, t.stage);
    match tag {
        ClassTag::Tot => (0..t.n_max).all(|n| at(n).is_some()),
        ClassTag::InfDomain => window(t.n_max).any(|n| at(n).is_some()),
        ClassTag::CofDomain => window(t.n_max).all(|n| at(n).is_some()),
        ClassTag::ComDomain => {
            let defined: Vec<bool> = window(t.n_max).map(|n| at(n).is_some()).collect();
            defined.iter().all(|&d| d) || defined.iter().all(|&d| !d)
        }
        ClassTag::CofOutput => window(t.n_max).all(|n| at(n).is_none_or(|v| v == 1)),
        _ => unreachable!("tag kind checked by caller"),
    }
}

fn monotone_heuristic(
    m: &dyn MonotoneMachine,
    tag: ClassTag,
    x: &Bits,
    t: Truncation,
) -> Result<bool, MeasureError> {
    let long = monotone_output(m, x, t.stage)?.len() as Nat >= t.n_max;
    Ok(match tag {
        ClassTag::InfOutput => long,
        ClassTag::FinOutput => !long,
        _ => unreachable!("tag kind checked by caller"),
    })
}

fn infsd_heuristic(
    m: &dyn InfSdMachine,
    tag: ClassTag,
    sigma: &Bits,
    t: Truncation,
) -> Result<bool, MeasureError> {
    for tau in sigma.prefixes() {
        if let InftyOutcome::Alive(out) = infty_eval(m, &tau, t.n_max)? {
            let long = out.len() as Nat >= t.n_max;
            return Ok(match tag {
                ClassTag::DomInfSd => true,
                ClassTag::FinInfSd => !long,
                ClassTag::InfInfSd => long,
                _ => unreachable!("tag kind checked by caller"),
            });
        }
    }
    Ok(false)
}

fn check_applicable(machine: &AnyMachine, tag: ClassTag) -> Result<(), MeasureError> {
    if tag.machine_kind() == machine.kind() {
        Ok(())
    } else {
        Err(MeasureError::Inapplicable {
            tag,
            kind: machine.kind(),
        })
    }
}

/// Judges the cylinder `⟦σ⟧`: by the machine's certificate when it has one,
/// otherwise by the tag's heuristic window on the representative `σ0^{n_max}`.
pub fn classify(
    machine: &AnyMachine,
    tag: ClassTag,
    sigma: &Bits,
    t: Truncation,
) -> Result<Judgement, MeasureError> {
    check_applicable(machine, tag)?;
    let certificate = match machine {
        AnyMachine::Oracle(m) => m.certify(tag, sigma, t.stage),
        AnyMachine::Monotone(m) => m.certify(tag, sigma, t.stage),
        AnyMachine::InfSd(m) => m.certify(tag, sigma, t.n_max),
    };
    if let Some(verdict) = certificate {
        return Ok(Judgement {
            verdict,
            certified: true,
        });
    }
    let pad = usize::try_from(t.n_max).map_err(|_| MeasureError::HorizonTooLarge(t.n_max))?;
    let x = sigma.concat(&Bits::zeros(pad));
    let inside = match machine {
        AnyMachine::Oracle(m) => oracle_heuristic(m.as_ref(), tag, &x, t),
        AnyMachine::Monotone(m) => monotone_heuristic(m.as_ref(), tag, &x, t)?,
        AnyMachine::InfSd(m) => infsd_heuristic(m.as_ref(), tag, sigma, t)?,
    };
    Ok(Judgement {
        verdict: Verdict::from_bool(inside),
        certified: false,
    })
}

#[derive(Default)]
struct Tally {
    inside: Dyadic,
    outside: Dyadic,
    lower_certified: bool,
    upper_certified: bool,
}

impl Tally {
    fn new() -> Self {
        Tally {
            lower_certified: true,
            upper_certified: true,
            ..Tally::default()
        }
    }

    fn add(&mut self, j: Judgement, weight: &Dyadic) {
        match j.verdict {
            Verdict::In => {
                self.inside += weight;
                self.lower_certified &= j.certified;
            }
            Verdict::Out => {
                self.outside += weight;
                self.upper_certified &= j.certified;
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.inside += other.inside;
        self.outside += other.outside;
        self.lower_certified &= other.lower_certified;
        self.upper_certified &= other.upper_certified;
    }
}

fn tally_range(
    machine: &AnyMachine,
    tag: ClassTag,
    t: Truncation,
    range: std::ops::Range<u64>,
) -> Result<Tally, MeasureError> {
    let weight = Dyadic::pow2_neg(t.depth as u32);
    let mut tally = Tally::new();
    for v in range {
        let sigma = Bits::from_value(v as u128, t.depth);
        tally.add(classify(machine, tag, &sigma, t)?, &weight);
    }
    Ok(tally)
}

fn finish(t: Truncation, tally: Tally) -> MeasureBound {
    MeasureBound {
        depth: t.depth,
        stage: t.stage,
        n_max: t.n_max,
        upper: &Dyadic::one() - &tally.outside,
        lower: tally.inside,
        lower_certified: tally.lower_certified,
        upper_certified: tally.upper_certified,
    }
}

fn check_depth(t: Truncation) -> Result<(), MeasureError> {
    if t.depth > MAX_DEPTH {
        Err(MeasureError::DepthTooLarge(t.depth))
    } else {
        Ok(())
    }
}

/// Exhaustive bounds over all `2^depth` cylinders.
pub fn class_bounds(
    machine: &AnyMachine,
    tag: ClassTag,
    t: Truncation,
) -> Result<MeasureBound, MeasureError> {
    check_applicable(machine, tag)?;
    check_depth(t)?;
    let tally = tally_range(machine, tag, t, 0..1u64 << t.depth)?;
    Ok(finish(t, tally))
}

/// [`class_bounds`] spread over `jobs` threads.  The result is identical.
pub fn class_bounds_jobs(
    machine: &AnyMachine,
    tag: ClassTag,
    t: Truncation,
    jobs: usize,
) -> Result<MeasureBound, MeasureError> {
    check_applicable(machine, tag)?;
    check_depth(t)?;
    let total = 1u64 << t.depth;
    let jobs = (jobs.max(1) as u64).min(total);
    let chunk = total.div_ceil(jobs);
    let parts: Vec<Result<Tally, MeasureError>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let range = j * chunk..((j + 1) * chunk).min(total);
                scope.spawn(move || tally_range(machine, tag, t, range))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut tally = Tally::new();
    for part in parts {
        tally.merge(part?);
    }
    Ok(finish(t, tally))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::constructions::{infsd_from_sigma2, tot_machine_from_sigma2};
    use crate::machines::{ConstOracle, EmptyOracle, MonotoneTable, OracleTable, TableEntry};
    use crate::stagewise::StagewiseSet;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn empty_machine_tot_is_certified_zero() {
        let m = AnyMachine::oracle(EmptyOracle);
        let b = class_bounds(&m, ClassTag::Tot, Truncation::new(3, 0, 4)).unwrap();
        assert_eq!((b.lower.clone(), b.upper.clone()), (Dyadic::zero(), Dyadic::zero()));
        assert!(b.is_exact());
    }

    #[test]
    fn closure_of_one() {
        let v = StagewiseSet::constant([bits("1")].into());
        let m = AnyMachine::oracle(tot_machine_from_sigma2(v.clone()));
        let b = class_bounds(&m, ClassTag::Tot, Truncation::new(3, 10, 6)).unwrap();
        assert_eq!((b.lower.clone(), b.upper.clone()), (d("1/2"), d("1/2")));
        assert!(b.is_exact());

        let m = AnyMachine::infsd(infsd_from_sigma2(v));
        let b = class_bounds(&m, ClassTag::DomInfSd, Truncation::new(3, 0, 10)).unwrap();
        assert_eq!((b.lower.clone(), b.upper.clone()), (d("1/2"), d("1/2")));
        assert!(b.is_exact());
    }

    #[test]
    fn heuristic_sides_are_flagged() {
        let t = OracleTable::new(vec![TableEntry {
            sigma: bits("0"),
            n: 0,
            stage: 0,
            value: 1,
        }])
        .unwrap();
        let m = AnyMachine::oracle(t);
        let b = class_bounds(&m, ClassTag::Tot, Truncation::new(2, 5, 1)).unwrap();
        assert_eq!((b.lower.clone(), b.upper.clone()), (d("1/2"), d("1/2")));
        assert!(!b.lower_certified && !b.upper_certified);

        let n = AnyMachine::monotone(MonotoneTable::new(vec![(bits("1"), 0, bits("111"))]));
        let b = class_bounds(&n, ClassTag::InfOutput, Truncation::new(1, 0, 3)).unwrap();
        assert_eq!(b.lower, d("1/2"));
    }

    #[test]
    fn inapplicable_tag() {
        let m = AnyMachine::oracle(ConstOracle { value: 1 });
        assert_eq!(
            class_bounds(&m, ClassTag::DomInfSd, Truncation::new(2, 0, 2)),
            Err(MeasureError::Inapplicable {
                tag: ClassTag::DomInfSd,
                kind: crate::measure::MachineKind::Oracle
            })
        );
    }

    #[test]
    fn jobs_agree() {
        let v = StagewiseSet::constant([bits("01"), bits("110")].into());
        let m = AnyMachine::oracle(tot_machine_from_sigma2(v));
        for jobs in [1, 2, 3, 8, 100] {
            for depth in 0..6 {
                let t = Truncation::new(depth, 7, 5);
                assert_eq!(
                    class_bounds_jobs(&m, ClassTag::Tot, t, jobs).unwrap(),
                    class_bounds(&m, ClassTag::Tot, t).unwrap()
                );
            }
        }
    }
}
