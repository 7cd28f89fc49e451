use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::stagewise::Stage;

/// A stage-indexed double sequence of c.e. cells `(t, σ)`.
///
/// Contract: counts never decrease with the stage, and if cell `(t, σ)` grows
/// forever then so does every cell `(k, τ)` with `t ≤ k` and `σ ⪯ τ`.
pub trait MonotoneStageFamily: Send + Sync {
    /// Elements enumerated into cell `(t, σ)` by `stage`.
    fn count(&self, t: usize, sigma: &Bits, stage: Stage) -> u64;

    /// The last `u` in `[1, stage]` with `count(u) > count(u − 1)`.
    fn last_growth(&self, t: usize, sigma: &Bits, stage: Stage) -> Option<Stage> {
        (1..=stage)
            .rev()
            .find(|&u| self.count(t, sigma, u) > self.count(t, sigma, u - 1))
    }

    /// `Some(true)` when, for every `X ⪰ σ`, all but finitely many diagonal
    /// cells `(|τ|, τ)` with `τ ≺ X` are known by `stage` to grow forever;
    /// `Some(false)` when, for every `X ⪰ σ`, only finitely many of them grow.
    fn certify_infinite(&self, _sigma: &Bits, _stage: Stage) -> Option<bool> {
        None
    }

    fn describe(&self) -> String;
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("cell ({t}, {sigma}) shrinks after stage {stage}")]
    NonMonotone { t: usize, sigma: Bits, stage: Stage },
}

/// Grows every cell `(k, τ)` with `k ≥ t` and `prefix ⪯ τ` by one element at
/// every stage from `from` on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generator {
    pub t: usize,
    pub prefix: Bits,
    pub from: Stage,
}

/// Finitely many elements in one cell: `steps` lists `(stage, count)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Burst {
    pub t: usize,
    pub sigma: Bits,
    pub steps: Vec<(Stage, u64)>,
}

/// A family given by generators (cells that grow forever) and bursts (cells
/// that grow finitely).  The generators make the contract hold.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily", deny_unknown_fields)]
pub struct ScriptedFamily {
    generators: Vec<Generator>,
    bursts: Vec<Burst>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    #[serde(default)]
    generators: Vec<Generator>,
    #[serde(default)]
    bursts: Vec<Burst>,
}

impl TryFrom<RawFamily> for ScriptedFamily {
    type Error = FamilyError;
    fn try_from(r: RawFamily) -> Result<Self, Self::Error> {
        ScriptedFamily::new(r.generators, r.bursts)
    }
}

impl ScriptedFamily {
    pub fn new(generators: Vec<Generator>, bursts: Vec<Burst>) -> Result<Self, FamilyError> {
        for b in &bursts {
            for w in b.steps.windows(2) {
                if w[1].0 <= w[0].0 || w[1].1 < w[0].1 {
                    return Err(FamilyError::NonMonotone {
                        t: b.t,
                        sigma: b.sigma.clone(),
                        stage: w[0].0,
                    });
                }
            }
        }
        Ok(ScriptedFamily { generators, bursts })
    }

    pub fn empty() -> Self {
        ScriptedFamily::default()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    fn applying<'a>(&'a self, t: usize, sigma: &'a Bits) -> impl Iterator<Item = &'a Generator> {
        self.generators
            .iter()
            .filter(move |g| g.t <= t && g.prefix.is_prefix_of(sigma))
    }

    fn cell_bursts<'a>(&'a self, t: usize, sigma: &'a Bits) -> impl Iterator<Item = &'a Burst> {
        self.bursts.iter().filter(move |b| b.t == t && &b.sigma == sigma)
    }
}

impl MonotoneStageFamily for ScriptedFamily {
    fn count(&self, t: usize, sigma: &Bits, stage: Stage) -> u64 {
        let generated: u64 = self
            .applying(t, sigma)
            .filter(|g| g.from <= stage)
            .map(|g| u64::from(stage - g.from) + 1)
            .sum();
        let burst: u64 = self
            .cell_bursts(t, sigma)
            .filter_map(|b| b.steps.iter().take_while(|(u, _)| *u <= stage).last())
            .map(|(_, c)| c)
            .sum();
        generated + burst
    }

    fn last_growth(&self, t: usize, sigma: &Bits, stage: Stage) -> Option<Stage> {
        let generated = (stage >= 1 && self.applying(t, sigma).any(|g| g.from <= stage))
            .then_some(stage);
        let burst = self
            .cell_bursts(t, sigma)
            .flat_map(|b| {
                let mut prev = 0;
                b.steps.iter().filter_map(move |&(u, c)| {
                    let grew = c > prev;
                    prev = c;
                    (grew && u >= 1 && u <= stage).then_some(u)
                })
            })
            .max();
        generated.max(burst)
    }

    fn certify_infinite(&self, sigma: &Bits, stage: Stage) -> Option<bool> {
        if self
            .generators
            .iter()
            .any(|g| g.prefix.is_prefix_of(sigma) && g.from <= stage)
        {
            Some(true)
        } else if self.generators.iter().all(|g| !g.prefix.is_compatible(sigma)) {
            Some(false)
        } else {
            None
        }
    }

    fn describe(&self) -> String {
        format!(
            "scripted-family({} generators, {} bursts)",
            self.generators.len(),
            self.bursts.len()
        )
    }
}
