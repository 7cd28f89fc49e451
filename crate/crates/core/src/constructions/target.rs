use std::fmt;

use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::bits::Dyadic;
use crate::stagewise::Stage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Non-decreasing: approximated from below.
    Ascending,
    /// Non-increasing: approximated from above.
    Descending,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Ascending => "ascending",
            Direction::Descending => "descending",
        })
    }
}

/// A stage-indexed dyadic approximation `(α_s)` of a target value, constant
/// after its last listed stage, together with the headroom exponent `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTarget", deny_unknown_fields)]
pub struct PrescribedTarget {
    approx: Vec<Dyadic>,
    direction: Direction,
    c: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    approx: Vec<Dyadic>,
    direction: Direction,
    c: u32,
}

impl TryFrom<RawTarget> for PrescribedTarget {
    type Error = ConstructionError;
    fn try_from(r: RawTarget) -> Result<Self, Self::Error> {
        PrescribedTarget::new(r.approx, r.direction, r.c)
    }
}

impl PrescribedTarget {
    pub fn new(approx: Vec<Dyadic>, direction: Direction, c: u32) -> Result<Self, ConstructionError> {
        check_sequence(&approx, direction)?;
        Ok(PrescribedTarget {
            approx,
            direction,
            c,
        })
    }

    pub fn constant(value: Dyadic, direction: Direction, c: u32) -> Result<Self, ConstructionError> {
        PrescribedTarget::new(vec![value], direction, c)
    }

    pub fn approx(&self) -> &[Dyadic] {
        &self.approx
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    /// `2^{-c}`.
    pub fn headroom(&self) -> Dyadic {
        Dyadic::pow2_neg(self.c)
    }

    pub fn at(&self, stage: Stage) -> &Dyadic {
        let i = (stage as usize).min(self.approx.len() - 1);
        &self.approx[i]
    }

    pub fn limit(&self) -> &Dyadic {
        self.approx.last().expect("validated non-empty")
    }

    /// The stage of the last listed value.
    pub fn last_stage(&self) -> Stage {
        (self.approx.len() - 1) as Stage
    }

    pub fn with_c(&self, c: u32) -> Self {
        PrescribedTarget { c, ..self.clone() }
    }
}

pub(crate) fn check_sequence(seq: &[Dyadic], direction: Direction) -> Result<(), ConstructionError> {
    if seq.is_empty() {
        return Err(ConstructionError::EmptyTarget);
    }
    for (i, v) in seq.iter().enumerate() {
        if v.is_negative() || *v >= Dyadic::one() {
            return Err(ConstructionError::OutOfRange {
                stage: i as Stage,
                value: v.clone(),
            });
        }
        if i > 0 {
            let ok = match direction {
                Direction::Ascending => seq[i - 1] <= *v,
                Direction::Descending => seq[i - 1] >= *v,
            };
            if !ok {
                return Err(ConstructionError::Direction {
                    stage: i as Stage,
                    expected: direction,
                });
            }
        }
    }
    Ok(())
}

/// Kraft–Chaitin requests for a non-decreasing sequence in `[0, 1)`: at stage
/// `s` one request of length `k` per binary digit `2^{-k}` of `x_s − x_{s−1}`.
pub(crate) fn digit_requests(seq: &[Dyadic]) -> Vec<(Stage, u32)> {
    let mut out = Vec::new();
    let mut prev = Dyadic::zero();
    for (s, x) in seq.iter().enumerate() {
        let step = x - &prev;
        let digits = step.binary_digits().expect("increment of a sequence in [0, 1)");
        out.extend(digits.into_iter().map(|k| (s as Stage, k)));
        prev = x.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn validation() {
        assert!(PrescribedTarget::new(vec![d("1/2"), d("1/4")], Direction::Descending, 2).is_ok());
        assert_eq!(
            PrescribedTarget::new(vec![d("1/4"), d("1/2")], Direction::Descending, 2),
            Err(ConstructionError::Direction {
                stage: 1,
                expected: Direction::Descending
            })
        );
        assert!(matches!(
            PrescribedTarget::constant(Dyadic::one(), Direction::Ascending, 2),
            Err(ConstructionError::OutOfRange { stage: 0, .. })
        ));
        assert_eq!(
            PrescribedTarget::new(vec![], Direction::Ascending, 1),
            Err(ConstructionError::EmptyTarget)
        );
    }

    #[test]
    fn requests_follow_increments() {
        let seq = [d("1/4"), d("1/4"), d("3/8"), d("7/16")];
        assert_eq!(digit_requests(&seq), vec![(0, 2), (2, 3), (3, 4)]);
        assert_eq!(digit_requests(&[d("3/8")]), vec![(0, 2), (0, 3)]);
    }

    #[test]
    fn serde_validates() {
        let ok: PrescribedTarget =
            serde_json::from_str(r#"{"approx":["1/2"],"direction":"descending","c":2}"#).unwrap();
        assert_eq!(ok.limit(), &d("1/2"));
        assert!(serde_json::from_str::<PrescribedTarget>(
            r#"{"approx":["1/2","3/4"],"direction":"descending","c":2}"#
        )
        .is_err());
    }
}
