use std::collections::BTreeSet;

use super::oracle::{OracleApprox, OracleKind};
use super::operator::CeOperator;
use super::set::{KnownLimit, Semantics, StageSource, StagewiseSet};
use super::{Stage, StagewiseError};
use crate::bits::Bits;

/// `Ŵ^{E_s}_s`: an axiom fires at `s` only if the oracle segment below its use
/// agrees between `E_{s-1}` and `E_s`.
struct HatSource {
    w: CeOperator,
    e: OracleApprox,
}

impl StageSource for HatSource {
    fn at(&self, stage: Stage) -> BTreeSet<Bits> {
        let now = self.e.enumerate(stage);
        let before = match stage.checked_sub(1) {
            Some(p) => self.e.enumerate(p),
            None => BTreeSet::new(),
        };
        self.w
            .enumerate(&now, stage)
            .filter(|a| now.range(..a.use_bound).eq(before.range(..a.use_bound)))
            .map(|a| a.string.clone())
            .collect()
    }
}

/// Canonical Σ⁰₂ approximation of `W^E` by the hat-trick.
///
/// When both `W` and `E` settle at known stages the result carries its limit.
pub fn hat_trick(w: CeOperator, e: OracleApprox) -> StagewiseSet {
    let settled = e
        .settle_stage()
        .map(|t| t.max(w.last_stage()).saturating_add(1));
    let source = HatSource { w, e };
    let limit = settled.map(|t| KnownLimit {
        members: source.at(t),
        stabilization: t,
    });
    StagewiseSet::new(source, Semantics::CanonicalSigma2, limit)
}

/// Stages `s ≤ horizon` at which some `n` enters `E` with `E_s↾n` equal to
/// the limit below `n`.
pub fn true_stages(e: &OracleApprox, horizon: Stage) -> Result<Vec<Stage>, StagewiseError> {
    let (limit, _) = match (e.kind(), e.known_limit()) {
        (OracleKind::KnownLimitToy, Some(l)) => l,
        _ => return Err(StagewiseError::NoKnownLimit),
    };
    let mut out = Vec::new();
    for s in 0..=horizon {
        let now = e.enumerate(s);
        let is_true = now.iter().any(|&n| {
            e.entered_at(n, s) && now.range(..n).eq(limit.range(..n))
        });
        if is_true {
            out.push(s);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::stagewise::Axiom;

    #[test]
    fn oracle_free_operator_is_unchanged() {
        let w = CeOperator::oracle_free([(bits("0"), 1), (bits("11"), 4)]);
        let e = OracleApprox::toy(vec![(0, 2), (3, 5)], vec![], None).unwrap();
        let v = hat_trick(w.clone(), e);
        let empty = BTreeSet::new();
        for s in 0..10 {
            let plain: BTreeSet<Bits> = w.enumerate(&empty, s).map(|a| a.string.clone()).collect();
            assert_eq!(*v.at(s), plain);
        }
    }

    #[test]
    fn suppression_and_readmission() {
        // 01 enumerated from stage 3 with use 5 on the empty segment, and
        // again from stage 8 on the segment {4}; 4 enters E at stage 6
        let w = CeOperator::new(vec![
            Axiom {
                string: bits("01"),
                stage: 3,
                use_bound: 5,
                oracle: BTreeSet::new(),
            },
            Axiom {
                string: bits("01"),
                stage: 8,
                use_bound: 5,
                oracle: [4].into(),
            },
        ])
        .unwrap();
        let e = OracleApprox::toy(vec![(4, 6)], vec![], None).unwrap();
        let v = hat_trick(w, e);
        let present: Vec<Stage> = (0..12).filter(|&s| v.at(s).contains(&bits("01"))).collect();
        assert_eq!(present, vec![3, 4, 5, 8, 9, 10, 11]);
        assert_eq!(v.limit().unwrap().members, [bits("01")].into());
    }

    #[test]
    fn readmission_waits_one_stage_for_stability() {
        let w = CeOperator::new(vec![Axiom {
            string: bits("1"),
            stage: 0,
            use_bound: 3,
            oracle: [2].into(),
        }])
        .unwrap();
        let e = OracleApprox::toy(vec![(2, 4)], vec![], None).unwrap();
        let v = hat_trick(w, e);
        let present: Vec<Stage> = (0..8).filter(|&s| !v.at(s).is_empty()).collect();
        assert_eq!(present, vec![5, 6, 7]);
    }

    #[test]
    fn empty_oracle_never_suppresses() {
        let w = CeOperator::new(vec![Axiom {
            string: bits("10"),
            stage: 2,
            use_bound: 7,
            oracle: BTreeSet::new(),
        }])
        .unwrap();
        let v = hat_trick(w, OracleApprox::empty());
        for s in 2..20 {
            assert!(v.at(s).contains(&bits("10")));
        }
    }

    #[test]
    fn true_stage_examples() {
        let single = OracleApprox::toy(vec![(2, 4)], vec![], Some([2].into())).unwrap();
        assert_eq!(true_stages(&single, 10).unwrap(), vec![4]);

        // 5 enters at stage 2 while 1 (below 5, in the limit) is still missing
        let two = OracleApprox::toy(vec![(5, 2), (1, 3)], vec![], Some([1, 5].into())).unwrap();
        assert_eq!(true_stages(&two, 10).unwrap(), vec![3]);

        assert!(true_stages(&OracleApprox::empty(), 10).unwrap().is_empty());
        assert!(matches!(
            true_stages(&OracleApprox::halting(8, 50), 10),
            Err(StagewiseError::NoKnownLimit)
        ));
    }
}
