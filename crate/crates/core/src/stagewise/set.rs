use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use super::script::EventScript;
use super::Stage;
use crate::bits::Bits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    /// `at(s) ⊆ at(s+1)` for every `s`.
    Sigma1Monotone,
    /// Produced by the hat-trick; limit membership is cofinal stability.
    CanonicalSigma2,
    /// Scripted, with the limit and a stabilization stage declared.
    ToyKnownLimit,
}

/// The limit of a stagewise set: `at(s) == members` for every `s ≥ stabilization`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownLimit {
    pub members: BTreeSet<Bits>,
    pub stabilization: Stage,
}

impl KnownLimit {
    /// Whether some member is a prefix of `tau`.
    pub fn covers(&self, tau: &Bits) -> bool {
        self.members.iter().any(|g| g.is_prefix_of(tau))
    }

    /// Whether some member is compatible with `tau`.
    pub fn touches(&self, tau: &Bits) -> bool {
        self.members.iter().any(|g| g.is_compatible(tau))
    }
}

/// Anything that can produce the finite set at a stage.
pub trait StageSource: Send + Sync {
    fn at(&self, stage: Stage) -> BTreeSet<Bits>;
}

impl StageSource for EventScript<Bits> {
    fn at(&self, stage: Stage) -> BTreeSet<Bits> {
        self.state_at(stage)
    }
}

type Cache = RwLock<HashMap<Stage, Arc<BTreeSet<Bits>>>>;

/// A computable stage-indexed family of finite sets of strings.
///
/// Evaluations are memoized; the cache is shared between clones and guarded
/// by a lock, so concurrent readers see identical sets.
#[derive(Clone)]
pub struct StagewiseSet {
    source: Arc<dyn StageSource>,
    semantics: Semantics,
    limit: Option<KnownLimit>,
    cache: Arc<Cache>,
}

impl fmt::Debug for StagewiseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StagewiseSet")
            .field("semantics", &self.semantics)
            .field("limit", &self.limit)
            .finish_non_exhaustive()
    }
}

impl StagewiseSet {
    pub fn new(
        source: impl StageSource + 'static,
        semantics: Semantics,
        limit: Option<KnownLimit>,
    ) -> Self {
        StagewiseSet {
            source: Arc::new(source),
            semantics,
            limit,
            cache: Arc::default(),
        }
    }

    /// Empty at every stage.
    pub fn empty() -> Self {
        StagewiseSet::constant(BTreeSet::new())
    }

    /// The same finite set at every stage.
    pub fn constant(members: BTreeSet<Bits>) -> Self {
        StagewiseSet::scripted(EventScript::entries(members.into_iter().map(|m| (m, 0))))
    }

    /// A scripted set.  The final state of the script is its limit.
    pub fn scripted(script: EventScript<Bits>) -> Self {
        let limit = KnownLimit {
            members: script.final_state(),
            stabilization: script.settle_stage(),
        };
        let semantics = if script.is_monotone() {
            Semantics::Sigma1Monotone
        } else {
            Semantics::ToyKnownLimit
        };
        StagewiseSet::new(script, semantics, Some(limit))
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    pub fn limit(&self) -> Option<&KnownLimit> {
        self.limit.as_ref()
    }

    pub fn at(&self, stage: Stage) -> Arc<BTreeSet<Bits>> {
        if let Some(hit) = self.cache.read().expect("cache lock poisoned").get(&stage) {
            return Arc::clone(hit);
        }
        let computed = Arc::new(self.source.at(stage));
        let mut w = self.cache.write().expect("cache lock poisoned");
        Arc::clone(w.entry(stage).or_insert(computed))
    }

    /// Whether `at(stage)` contains a prefix of `tau`.
    pub fn has_prefix_of(&self, stage: Stage, tau: &Bits) -> bool {
        let set = self.at(stage);
        tau.prefixes().any(|p| set.contains(&p))
    }

    /// Whether membership of `g` at `stage` is permanent: either the set is
    /// monotone, or the stage is past stabilization and `g` is in the limit.
    pub fn is_settled_member(&self, stage: Stage, g: &Bits) -> bool {
        if !self.at(stage).contains(g) {
            return false;
        }
        if self.semantics == Semantics::Sigma1Monotone {
            return true;
        }
        self.limit
            .as_ref()
            .is_some_and(|l| stage >= l.stabilization && l.members.contains(g))
    }
}

/// All strings of length at most `max_len` extending some member of `V.at(stage)`.
pub fn upward_closure_at(v: &StagewiseSet, stage: Stage, max_len: usize) -> BTreeSet<Bits> {
    let mut out = BTreeSet::new();
    for g in v.at(stage).iter() {
        for len in g.len()..=max_len {
            out.extend(g.extensions_of_length(len));
        }
    }
    out
}
