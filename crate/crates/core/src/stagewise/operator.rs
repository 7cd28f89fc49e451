use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Stage, StagewiseError};
use crate::bits::Bits;

/// One enumeration rule of a c.e. operator: from `stage` on, `string` is
/// enumerated relative to any oracle `A` with `A ∩ [0, use) = oracle`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axiom {
    pub string: Bits,
    pub stage: Stage,
    #[serde(rename = "use")]
    pub use_bound: u64,
    #[serde(default)]
    pub oracle: BTreeSet<u64>,
}

/// A scripted c.e. operator `W`, given as a finite list of axioms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CeOperator {
    axioms: Vec<Axiom>,
}

impl CeOperator {
    pub fn new(axioms: Vec<Axiom>) -> Result<Self, StagewiseError> {
        for (i, a) in axioms.iter().enumerate() {
            if let Some(&x) = a.oracle.iter().find(|&&x| x >= a.use_bound) {
                return Err(StagewiseError::AxiomOutsideUse {
                    index: i,
                    element: x,
                    use_bound: a.use_bound,
                });
            }
        }
        Ok(CeOperator { axioms })
    }

    /// Axioms that never look at the oracle.
    pub fn oracle_free(entries: impl IntoIterator<Item = (Bits, Stage)>) -> Self {
        CeOperator {
            axioms: entries
                .into_iter()
                .map(|(string, stage)| Axiom {
                    string,
                    stage,
                    use_bound: 0,
                    oracle: BTreeSet::new(),
                })
                .collect(),
        }
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    /// Axioms that fire at `stage` relative to `oracle`, each carrying its use.
    pub fn enumerate<'a>(
        &'a self,
        oracle: &'a BTreeSet<u64>,
        stage: Stage,
    ) -> impl Iterator<Item = &'a Axiom> + 'a {
        self.axioms.iter().filter(move |a| {
            a.stage <= stage && oracle.range(..a.use_bound).eq(a.oracle.iter())
        })
    }

    /// Last stage at which an axiom appears.
    pub fn last_stage(&self) -> Stage {
        self.axioms.iter().map(|a| a.stage).max().unwrap_or(0)
    }
}
