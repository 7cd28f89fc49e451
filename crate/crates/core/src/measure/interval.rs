use num_rational::BigRational;
use num_traits::Zero;

/// Lebesgue measure of a finite union of intervals `(a, b)`, by sorting on the
/// left endpoint and sweeping.  Empty and reversed intervals contribute nothing.
pub fn union_measure(intervals: &[(BigRational, BigRational)]) -> BigRational {
    let mut sorted: Vec<&(BigRational, BigRational)> =
        intervals.iter().filter(|(a, b)| a < b).collect();
    sorted.sort();
    let mut total = BigRational::zero();
    let mut current: Option<(BigRational, BigRational)> = None;
    for (a, b) in sorted {
        current = match current {
            Some((lo, hi)) if a <= &hi => Some((lo, hi.max(b.clone()))),
            Some((lo, hi)) => {
                total += hi - lo;
                Some((a.clone(), b.clone()))
            }
            None => Some((a.clone(), b.clone())),
        };
    }
    if let Some((lo, hi)) = current {
        total += hi - lo;
    }
    total
}
