use std::collections::BTreeSet;

use super::{Bits, Dyadic};

/// Two members of a set where the first properly extends into the second.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not prefix-free: {prefix} is a proper prefix of {extension}")]
pub struct NotPrefixFree {
    pub prefix: Bits,
    pub extension: Bits,
}

/// Checks that no member of `set` is a proper prefix of another.
///
/// In lexicographic order every string sits directly before the block of its
/// extensions, so comparing neighbours is enough.
pub fn check_prefix_free<'a, I>(set: I) -> Result<(), NotPrefixFree>
where
    I: IntoIterator<Item = &'a Bits>,
{
    let sorted: BTreeSet<&Bits> = set.into_iter().collect();
    let mut prev: Option<&Bits> = None;
    for s in sorted {
        if let Some(p) = prev {
            if p.is_proper_prefix_of(s) {
                return Err(NotPrefixFree {
                    prefix: p.clone(),
                    extension: s.clone(),
                });
            }
        }
        prev = Some(s);
    }
    Ok(())
}

/// A finite prefix-free set of strings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixFreeSet {
    members: BTreeSet<Bits>,
}

impl PrefixFreeSet {
    pub fn new(members: impl IntoIterator<Item = Bits>) -> Result<Self, NotPrefixFree> {
        let members: BTreeSet<Bits> = members.into_iter().collect();
        check_prefix_free(&members)?;
        Ok(PrefixFreeSet { members })
    }

    pub fn empty() -> Self {
        PrefixFreeSet::default()
    }

    pub fn members(&self) -> &BTreeSet<Bits> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &Bits) -> bool {
        self.members.contains(s)
    }

    /// Σ 2^{-|σ|}, which is also the measure of the open class it generates.
    pub fn measure(&self) -> Dyadic {
        self.members.iter().map(Bits::weight).sum()
    }

    /// Whether some member is a prefix of `x`.
    pub fn covers(&self, x: &Bits) -> bool {
        x.prefixes().any(|p| self.members.contains(&p))
    }
}

impl<'a> IntoIterator for &'a PrefixFreeSet {
    type Item = &'a Bits;
    type IntoIter = std::collections::btree_set::Iter<'a, Bits>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Exact measure of a prefix-free set given as any collection of strings.
pub fn measure_of<'a, I>(set: I) -> Result<Dyadic, NotPrefixFree>
where
    I: IntoIterator<Item = &'a Bits>,
{
    let members: BTreeSet<&Bits> = set.into_iter().collect();
    check_prefix_free(members.iter().copied())?;
    Ok(members.into_iter().map(Bits::weight).sum())
}
