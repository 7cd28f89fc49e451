use super::bounds::{class_bounds_jobs, MeasureBound, Truncation};
use super::{ClassTag, MeasureError};
use crate::machines::AnyMachine;

pub const CSV_HEADER: &str =
    "depth,stage,n_max,lower_num,lower_exp,upper_num,upper_exp,lower_certified,upper_certified";

impl MeasureBound {
    /// One CSV row matching [`CSV_HEADER`]; a bound `p / 2^e` is written as
    /// `p,e`.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.depth,
            self.stage,
            self.n_max,
            self.lower.numerator(),
            self.lower.exponent(),
            self.upper.numerator(),
            self.upper.exponent(),
            self.lower_certified,
            self.upper_certified
        )
    }
}

/// Bounds at each point of a schedule that is non-decreasing in every
/// coordinate.
pub fn trace(
    machine: &AnyMachine,
    tag: ClassTag,
    schedule: &[Truncation],
    jobs: usize,
) -> Result<Vec<MeasureBound>, MeasureError> {
    if let Some(i) = schedule.windows(2).position(|w| !w[0].precedes(&w[1])) {
        return Err(MeasureError::NonMonotoneSchedule { index: i + 1 });
    }
    schedule
        .iter()
        .map(|&t| class_bounds_jobs(machine, tag, t, jobs))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceViolation {
    #[error("certified lower bound decreases at row {row}")]
    LowerDecreases { row: usize },
    #[error("certified upper bound increases at row {row}")]
    UpperIncreases { row: usize },
}

/// Rows where a certified side moves the wrong way relative to the previous
/// row with that side certified.
pub fn trace_violations(rows: &[MeasureBound]) -> Vec<TraceViolation> {
    let mut out = Vec::new();
    let mut lower = None;
    let mut upper = None;
    for (row, b) in rows.iter().enumerate() {
        if b.lower_certified {
            if lower.is_some_and(|l| &b.lower < l) {
                out.push(TraceViolation::LowerDecreases { row });
            }
            lower = Some(&b.lower);
        }
        if b.upper_certified {
            if upper.is_some_and(|u| &b.upper > u) {
                out.push(TraceViolation::UpperIncreases { row });
            }
            upper = Some(&b.upper);
        }
    }
    out
}
