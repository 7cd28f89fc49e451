use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::family::{Generator, ScriptedFamily};
use super::infsd::{infsd_from_sigma2, Sigma2InfSd};
use super::markers::{cof_machine_from_sigma3, CofMachine, FamilyCheck};
use super::pairing::DiagonalPairing;
use super::target::{digit_requests, Direction, PrescribedTarget};
use super::tot::{tot_machine_from_sigma2, TotMachine};
use super::ConstructionError;
use crate::bits::{Bits, Dyadic, KraftChaitin};
use crate::machines::{splice, OracleMachine, Splice, SpliceCheck};
use crate::stagewise::{EventScript, OracleApprox, Stage, StagewiseSet};

/// Upper end of the scan for the headroom exponent of the universal builder.
pub const C_SCAN: u32 = 32;

/// The strings issued by the allocator: `rho` first, then the rest with the
/// stages of their requests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allocation {
    pub rho: Bits,
    pub strings: Vec<(Stage, Bits)>,
}

impl Allocation {
    /// `μ⟦S⟧` for the strings other than `rho`.
    pub fn measure(&self) -> Dyadic {
        self.strings.iter().map(|(_, s)| s.weight()).sum()
    }

    /// Each string present from its allocation stage on.
    pub fn stagewise(&self) -> StagewiseSet {
        StagewiseSet::scripted(EventScript::entries(
            self.strings.iter().map(|(s, b)| (b.clone(), *s)),
        ))
    }
}

/// A prescribed machine with its reserved string and allocation.
#[derive(Debug, Clone)]
pub struct Prescribed<M> {
    pub machine: M,
    pub rho: Bits,
    pub allocation: Allocation,
}

fn allocate(c: u32, seq: &[Dyadic]) -> Result<Allocation, ConstructionError> {
    let mut kc = KraftChaitin::new();
    let rho = kc.request(c)?;
    let mut strings = Vec::new();
    for (stage, len) in digit_requests(seq) {
        strings.push((stage, kc.request(len)?));
    }
    Ok(Allocation { rho, strings })
}

fn require(target: &PrescribedTarget, direction: Direction) -> Result<(), ConstructionError> {
    if target.direction() == direction {
        Ok(())
    } else {
        Err(ConstructionError::Direction {
            stage: 0,
            expected: direction,
        })
    }
}

/// `α_s + 2^{-c} < 1` at every listed stage.
fn room_above(target: &PrescribedTarget) -> Result<(), ConstructionError> {
    let h = target.headroom();
    for (s, a) in target.approx().iter().enumerate() {
        if a + &h >= Dyadic::one() {
            return Err(ConstructionError::Headroom {
                stage: s as Stage,
                detail: format!("{a} + 2^-{} is not below 1", target.c()),
            });
        }
    }
    Ok(())
}

/// `μ(TOT(M)) = μ(INF(M)) = α` for a descending target: the allocator reserves
/// `ρ` of length `c` and then covers `1 − α_s − 2^{-c}` from below, and the
/// totality machine over the allocated strings is suppressed on `ρ`.
pub fn prescribed_tot_machine(
    target: &PrescribedTarget,
) -> Result<Prescribed<TotMachine>, ConstructionError> {
    require(target, Direction::Descending)?;
    room_above(target)?;
    let base = &Dyadic::one() - &target.headroom();
    let complement: Vec<Dyadic> = target.approx().iter().map(|a| &base - a).collect();
    let allocation = allocate(target.c(), &complement)?;
    let machine = tot_machine_from_sigma2(allocation.stagewise()).suppress(allocation.rho.clone());
    Ok(Prescribed {
        machine,
        rho: allocation.rho.clone(),
        allocation,
    })
}

fn marker_machine(allocation: &Allocation) -> CofMachine {
    let generators = allocation
        .strings
        .iter()
        .map(|(stage, g)| Generator {
            t: 0,
            prefix: g.clone(),
            from: *stage,
        })
        .collect();
    let family = ScriptedFamily::new(generators, vec![]).expect("generators only");
    cof_machine_from_sigma3(
        Arc::new(family),
        Arc::new(DiagonalPairing),
        OracleApprox::empty(),
        FamilyCheck { depth: 0, stage: 0 },
    )
    .expect("scripted generators never shrink")
    .suppress(allocation.rho.clone())
}

/// `μ(COF(M)) = α` for an ascending target: the cofiniteness region is the
/// upward closure of the allocated strings.
pub fn prescribed_cof_machine(
    target: &PrescribedTarget,
) -> Result<Prescribed<CofMachine>, ConstructionError> {
    require(target, Direction::Ascending)?;
    room_above(target)?;
    let allocation = allocate(target.c(), target.approx())?;
    Ok(Prescribed {
        machine: marker_machine(&allocation),
        rho: allocation.rho.clone(),
        allocation,
    })
}

/// `μ(COM(M)) = α` for an ascending target with `α_s ≥ 2^{-c}`: the allocated
/// strings carry `α − 2^{-c}` and the empty function on `⟦ρ⟧` supplies the rest.
pub fn prescribed_com_machine(
    target: &PrescribedTarget,
) -> Result<Prescribed<CofMachine>, ConstructionError> {
    require(target, Direction::Ascending)?;
    let h = target.headroom();
    let mut shifted = Vec::with_capacity(target.approx().len());
    for (s, a) in target.approx().iter().enumerate() {
        if a < &h {
            return Err(ConstructionError::Headroom {
                stage: s as Stage,
                detail: format!("{a} is below 2^-{}", target.c()),
            });
        }
        shifted.push(a - &h);
    }
    let allocation = allocate(target.c(), &shifted)?;
    Ok(Prescribed {
        machine: marker_machine(&allocation),
        rho: allocation.rho.clone(),
        allocation,
    })
}

/// `μ⟦DOM(M^*)⟧ = α` for an ascending target with `2^{-c} < 1 − α`.
pub fn prescribed_domain_infsd(
    target: &PrescribedTarget,
) -> Result<Prescribed<Sigma2InfSd>, ConstructionError> {
    require(target, Direction::Ascending)?;
    room_above(target)?;
    let allocation = allocate(target.c(), target.approx())?;
    let machine = infsd_from_sigma2(allocation.stagewise()).suppress(allocation.rho.clone());
    Ok(Prescribed {
        machine,
        rho: allocation.rho.clone(),
        allocation,
    })
}

/// A universal machine with prescribed totality probability.
#[derive(Clone)]
pub struct UniversalTot {
    pub machine: Splice,
    pub c: u32,
    /// `β_s = α_s − 2^{-c} γ_s`.
    pub beta: PrescribedTarget,
    pub inner: Prescribed<TotMachine>,
}

fn beta_for(
    target: &PrescribedTarget,
    gamma: &[Dyadic],
    c: u32,
) -> Result<PrescribedTarget, ConstructionError> {
    let h = Dyadic::pow2_neg(c);
    let len = target.approx().len().max(gamma.len());
    let beta: Vec<Dyadic> = (0..len)
        .map(|s| {
            let a = target.at(s as Stage);
            let g = gamma.get(s).or(gamma.last()).cloned().unwrap_or_default();
            a - &(&h * &g)
        })
        .collect();
    let beta = PrescribedTarget::new(beta, Direction::Descending, c)?;
    room_above(&beta)?;
    Ok(beta)
}

/// Splices the universal machine `v` onto `ρ` and fills the rest with a
/// prescribed totality machine for `β = α − 2^{-c} γ`, where `γ` is a
/// descending approximation of `μ(TOT(v))`.  When `c` is not given the least
/// admissible value in `[1, C_SCAN]` is used.
pub fn prescribed_universal_tot(
    target: &PrescribedTarget,
    v: Arc<dyn OracleMachine>,
    gamma: &[Dyadic],
    c: Option<u32>,
    check: SpliceCheck,
) -> Result<UniversalTot, ConstructionError> {
    require(target, Direction::Descending)?;
    for (s, g) in gamma.iter().enumerate() {
        if g.is_negative() || g > &Dyadic::one() {
            return Err(ConstructionError::OutOfRange {
                stage: s as Stage,
                value: g.clone(),
            });
        }
        if s > 0 && &gamma[s - 1] < g {
            return Err(ConstructionError::Direction {
                stage: s as Stage,
                expected: Direction::Descending,
            });
        }
    }
    let (c, beta) = match c {
        Some(c) => (c, beta_for(target, gamma, c)?),
        None => (1..=C_SCAN)
            .find_map(|c| beta_for(target, gamma, c).ok().map(|b| (c, b)))
            .ok_or(ConstructionError::NoAdmissibleC { bound: C_SCAN })?,
    };
    let inner = prescribed_tot_machine(&beta)?;
    let machine = splice(v, Arc::new(inner.machine.clone()), inner.rho.clone(), check)?;
    Ok(UniversalTot {
        machine,
        c,
        beta,
        inner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{bits, measure_of};
    use crate::machines::{check_oracle, mstar_front, ConstOracle, EmptyOracle, Grid};
    use crate::measure::{ClassTag, Verdict};

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn constant(v: &str, dir: Direction, c: u32) -> PrescribedTarget {
        PrescribedTarget::constant(d(v), dir, c).unwrap()
    }

    #[test]
    fn tot_half() {
        let p = prescribed_tot_machine(&constant("1/2", Direction::Descending, 2)).unwrap();
        assert_eq!(p.rho, bits("00"));
        assert_eq!(p.allocation.strings, vec![(0, bits("01"))]);
        assert!(check_oracle(&p.machine, Grid { depth: 4, n_max: 5, stage: 8 }).is_empty());
    }

    #[test]
    fn tot_three_quarters() {
        let p = prescribed_tot_machine(&constant("3/4", Direction::Descending, 3)).unwrap();
        assert_eq!(p.rho, bits("000"));
        assert_eq!(p.allocation.measure(), d("1/8"));
    }

    #[test]
    fn tot_headroom() {
        let err = prescribed_tot_machine(&constant("7/8", Direction::Descending, 3)).unwrap_err();
        assert!(matches!(err, ConstructionError::Headroom { stage: 0, .. }));
    }

    #[test]
    fn cof_allocations() {
        let p = prescribed_cof_machine(&constant("1/4", Direction::Ascending, 2)).unwrap();
        assert_eq!(p.allocation.strings, vec![(0, bits("01"))]);
        let p = prescribed_cof_machine(&constant("3/8", Direction::Ascending, 2)).unwrap();
        assert_eq!(p.allocation.measure(), d("3/8"));
        assert_eq!(p.allocation.strings.len(), 2);
        let p = prescribed_cof_machine(&constant("0", Direction::Ascending, 2)).unwrap();
        assert!(p.allocation.strings.is_empty());
        assert_eq!(p.machine.certify(ClassTag::CofDomain, &bits("1"), 5), Some(Verdict::Out));
    }

    #[test]
    fn com_boundaries() {
        let p = prescribed_com_machine(&constant("1/4", Direction::Ascending, 2)).unwrap();
        assert!(p.allocation.strings.is_empty());
        let p = prescribed_com_machine(&constant("1/2", Direction::Ascending, 2)).unwrap();
        assert_eq!(p.allocation.measure(), d("1/4"));
        assert!(matches!(
            prescribed_com_machine(&constant("1/8", Direction::Ascending, 2)),
            Err(ConstructionError::Headroom { .. })
        ));
    }

    #[test]
    fn domain_infsd_half() {
        let p = prescribed_domain_infsd(&constant("1/2", Direction::Ascending, 2)).unwrap();
        let front = mstar_front(&p.machine, 6, 10).unwrap();
        assert_eq!(measure_of(&front).unwrap(), d("1/2"));
        let p = prescribed_domain_infsd(&constant("1/4", Direction::Ascending, 1)).unwrap();
        assert_eq!(mstar_front(&p.machine, 6, 10).unwrap(), vec![bits("10")]);
    }

    #[test]
    fn ascending_stages_allocate_late() {
        let t = PrescribedTarget::new(
            vec![d("1/8"), d("1/8"), d("1/4"), d("3/8")],
            Direction::Ascending,
            2,
        )
        .unwrap();
        let p = prescribed_domain_infsd(&t).unwrap();
        let stages: Vec<Stage> = p.allocation.strings.iter().map(|(s, _)| *s).collect();
        assert_eq!(stages, vec![0, 2, 3]);
        assert_eq!(p.allocation.measure(), d("3/8"));
    }

    #[test]
    fn universal_betas() {
        let check = SpliceCheck {
            depth: 5,
            n_max: 5,
            stage: 8,
        };
        let t = constant("3/4", Direction::Descending, 2);
        let u = prescribed_universal_tot(&t, Arc::new(ConstOracle { value: 0 }), &[Dyadic::one()], Some(2), check)
            .unwrap();
        assert_eq!(u.beta.limit(), &d("1/2"));
        let t = constant("5/8", Direction::Descending, 2);
        let u = prescribed_universal_tot(&t, Arc::new(ConstOracle { value: 0 }), &[d("1/2")], Some(2), check)
            .unwrap();
        assert_eq!(u.beta.limit(), &d("1/2"));
        let u = prescribed_universal_tot(&t, Arc::new(EmptyOracle), &[Dyadic::zero()], None, check).unwrap();
        assert_eq!(u.c, 2);
        assert_eq!(u.beta.limit(), &d("5/8"));
        assert!(matches!(
            prescribed_universal_tot(&constant("3/4", Direction::Descending, 2), Arc::new(EmptyOracle), &[Dyadic::zero()], Some(2), check),
            Err(ConstructionError::Headroom { .. })
        ));
    }
}
