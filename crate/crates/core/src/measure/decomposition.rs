use std::cmp::{max, min};

use serde::{Deserialize, Serialize};

use super::bounds::{class_bounds_jobs, MeasureBound, Truncation};
use super::{ClassTag, MeasureError};
use crate::bits::Dyadic;
use crate::machines::AnyMachine;

/// The class of `X` with `M(X)` total and eventually all ones, split into its
/// Π⁰₂ side (totality) and Σ⁰₂ side (eventually every defined value is 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub pi2: MeasureBound,
    pub sigma2: MeasureBound,
    /// Fréchet bounds on the intersection.
    pub lower: Dyadic,
    pub upper: Dyadic,
    pub lower_certified: bool,
    pub upper_certified: bool,
}

pub fn cof_total_decomposition(
    machine: &AnyMachine,
    t: Truncation,
    jobs: usize,
) -> Result<Decomposition, MeasureError> {
    let pi2 = class_bounds_jobs(machine, ClassTag::Tot, t, jobs)?;
    let sigma2 = class_bounds_jobs(machine, ClassTag::CofOutput, t, jobs)?;
    let lower = max(Dyadic::zero(), &(&pi2.lower + &sigma2.lower) - &Dyadic::one());
    let upper = min(pi2.upper.clone(), sigma2.upper.clone());
    Ok(Decomposition {
        lower,
        upper,
        lower_certified: pi2.lower_certified && sigma2.lower_certified,
        upper_certified: pi2.upper_certified && sigma2.upper_certified,
        pi2,
        sigma2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::machines::{ConstOracle, CylinderOracle, EmptyOracle};

    fn t() -> Truncation {
        Truncation::new(3, 10, 8)
    }

    #[test]
    fn empty_machine() {
        let dcmp = cof_total_decomposition(&AnyMachine::oracle(EmptyOracle), t(), 1).unwrap();
        assert_eq!((dcmp.pi2.lower.clone(), dcmp.pi2.upper.clone()), (Dyadic::zero(), Dyadic::zero()));
        assert_eq!((dcmp.lower, dcmp.upper), (Dyadic::zero(), Dyadic::zero()));
    }

    #[test]
    fn constant_one() {
        let dcmp = cof_total_decomposition(&AnyMachine::oracle(ConstOracle { value: 1 }), t(), 2).unwrap();
        assert_eq!((dcmp.lower, dcmp.upper), (Dyadic::one(), Dyadic::one()));
        assert!(dcmp.lower_certified && dcmp.upper_certified);
    }

    #[test]
    fn ones_on_left_half() {
        let m = CylinderOracle {
            region: vec![bits("0")],
            value: 1,
        };
        let dcmp = cof_total_decomposition(&AnyMachine::oracle(m), t(), 2).unwrap();
        let half: Dyadic = "1/2".parse().unwrap();
        assert_eq!(dcmp.sigma2.lower, Dyadic::one());
        assert_eq!((dcmp.lower, dcmp.upper), (half.clone(), half));
    }
}
