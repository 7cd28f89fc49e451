use super::{Bits, Dyadic};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KraftError {
    #[error("request {index} (length {length}) would push the Kraft sum to {sum}, above 1")]
    BudgetExceeded { index: usize, length: u32, sum: Dyadic },
    #[error("request {index} has length 0; requested lengths must be positive")]
    ZeroLength { index: usize },
}

/// Online Kraft-Chaitin allocator.
///
/// Free space is a list of disjoint cylinders kept in left-to-right order.
/// Each request takes the leftmost free cylinder that is at least as large as
/// asked, allocates its leftmost sub-cylinder of the requested length and
/// returns the right-hand remainders to the free list.  The free cylinders
/// then always have strictly decreasing lengths from left to right, so a
/// request fails only when the Kraft budget is exhausted.
#[derive(Debug, Clone)]
pub struct KraftChaitin {
    free: Vec<Bits>,
    used: Dyadic,
    issued: usize,
}

impl Default for KraftChaitin {
    fn default() -> Self {
        KraftChaitin::new()
    }
}

impl KraftChaitin {
    pub fn new() -> Self {
        KraftChaitin {
            free: vec![Bits::empty()],
            used: Dyadic::zero(),
            issued: 0,
        }
    }

    /// Kraft sum of everything allocated so far.
    pub fn used(&self) -> &Dyadic {
        &self.used
    }

    /// Number of requests answered so far.
    pub fn issued(&self) -> usize {
        self.issued
    }

    /// The current free cylinders, left to right.
    pub fn free(&self) -> &[Bits] {
        &self.free
    }

    /// Answers one request.  A rejected request leaves the allocator untouched.
    pub fn request(&mut self, length: u32) -> Result<Bits, KraftError> {
        let index = self.issued;
        if length == 0 {
            return Err(KraftError::ZeroLength { index });
        }
        let sum = &self.used + &Dyadic::pow2_neg(length);
        if sum > Dyadic::one() {
            return Err(KraftError::BudgetExceeded { index, length, sum });
        }
        let slot = self
            .free
            .iter()
            .position(|f| f.len() <= length as usize)
            .expect("free list keeps a fitting cylinder while the Kraft sum is at most 1");
        let base = self.free.remove(slot);
        let pad = length as usize - base.len();
        let allocated = base.concat(&Bits::zeros(pad));
        // right siblings along the path, longest (leftmost) first
        let remainders = (0..pad)
            .rev()
            .map(|k| base.concat(&Bits::zeros(k)).child(true));
        self.free.splice(slot..slot, remainders);
        self.used = sum;
        self.issued += 1;
        Ok(allocated)
    }
}

/// Runs a whole request sequence through a fresh allocator.
pub fn kraft_chaitin(requests: &[u32]) -> Result<Vec<Bits>, KraftError> {
    let mut kc = KraftChaitin::new();
    requests.iter().map(|&c| kc.request(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{bits, check_prefix_free, measure_of};
    use proptest::prelude::*;

    /// Independent oracle: the lexicographically least string of the requested
    /// length that is incompatible with everything issued before.
    fn lex_least_assignment(requests: &[u32]) -> Option<Vec<Bits>> {
        let mut out: Vec<Bits> = Vec::new();
        for &c in requests {
            let pick = Bits::all_of_length(c as usize)
                .find(|s| out.iter().all(|o| !o.is_compatible(s)))?;
            out.push(pick);
        }
        Some(out)
    }

    #[test]
    fn leftmost_allocation_examples() {
        assert_eq!(
            kraft_chaitin(&[1, 2, 3]).unwrap(),
            vec![bits("0"), bits("10"), bits("110")]
        );
        assert_eq!(
            lex_least_assignment(&[1, 2, 3]).unwrap(),
            vec![bits("0"), bits("10"), bits("110")]
        );
        assert_eq!(kraft_chaitin(&[1, 1]).unwrap(), vec![bits("0"), bits("1")]);
    }

    #[test]
    fn budget_exceeded_names_index() {
        match kraft_chaitin(&[1, 1, 1]) {
            Err(KraftError::BudgetExceeded { index, length, sum }) => {
                assert_eq!(index, 2);
                assert_eq!(length, 1);
                assert_eq!(sum, "3/2".parse().unwrap());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            kraft_chaitin(&[2, 0]),
            Err(KraftError::ZeroLength { index: 1 })
        );
    }

    #[test]
    fn rejected_request_leaves_state() {
        let mut kc = KraftChaitin::new();
        kc.request(1).unwrap();
        kc.request(2).unwrap();
        assert!(kc.request(1).is_err());
        assert_eq!(kc.request(2).unwrap(), bits("11"));
        assert_eq!(kc.used(), &Dyadic::one());
        assert!(kc.free().is_empty());
    }

    #[test]
    fn free_list_lengths_strictly_decrease() {
        let mut kc = KraftChaitin::new();
        for c in [3, 1, 4, 2, 5, 5] {
            kc.request(c).unwrap();
            let lens: Vec<usize> = kc.free().iter().map(Bits::len).collect();
            assert!(lens.windows(2).all(|w| w[0] > w[1]), "{lens:?}");
        }
    }

    fn budgeted_requests() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(1u32..=8, 0..24).prop_map(|raw| {
            let mut sum = Dyadic::zero();
            raw.into_iter()
                .filter(|&c| {
                    let next = &sum + &Dyadic::pow2_neg(c);
                    if next <= Dyadic::one() {
                        sum = next;
                        true
                    } else {
                        false
                    }
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn output_is_prefix_free_with_exact_lengths(reqs in budgeted_requests()) {
            let out = kraft_chaitin(&reqs).unwrap();
            prop_assert!(check_prefix_free(&out).is_ok());
            for (s, &c) in out.iter().zip(&reqs) {
                prop_assert_eq!(s.len(), c as usize);
            }
            let expected: Dyadic = reqs.iter().map(|&c| Dyadic::pow2_neg(c)).sum();
            prop_assert_eq!(measure_of(&out).unwrap(), expected);
        }

        #[test]
        fn matches_lexicographically_least_search(reqs in budgeted_requests()) {
            prop_assert_eq!(Some(kraft_chaitin(&reqs).unwrap()), lex_least_assignment(&reqs));
        }
    }
}
