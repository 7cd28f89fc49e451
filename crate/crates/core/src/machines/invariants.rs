use serde::{Deserialize, Serialize};

use super::{infty_eval, InfSdMachine, MachineError, MonotoneMachine, Nat, OracleMachine};
use crate::bits::Bits;
use crate::stagewise::Stage;

/// A finite window of strings, arguments and stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub depth: usize,
    pub n_max: Nat,
    pub stage: Stage,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("M({sigma}, {n}) = {before} at stage {stage} but {after:?} at stage {}", stage + 1)]
    StageRegression {
        sigma: Bits,
        n: Nat,
        stage: Stage,
        before: Nat,
        after: Option<Nat>,
    },
    #[error("M({sigma}, {n}) = {value} at stage {stage} but M({extension}, {n}) = {other:?}")]
    ExtensionMismatch {
        sigma: Bits,
        extension: Bits,
        n: Nat,
        stage: Stage,
        value: Nat,
        other: Option<Nat>,
    },
    #[error("N({sigma}) = {before} at stage {stage} is not a prefix of {after:?} at stage {}", stage + 1)]
    OutputRegression {
        sigma: Bits,
        stage: Stage,
        before: Bits,
        after: Option<Bits>,
    },
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Stage monotonicity and prefix consistency of an oracle machine on the grid.
pub fn check_oracle(m: &dyn OracleMachine, grid: Grid) -> Vec<Violation> {
    let mut out = Vec::new();
    for sigma in Bits::all_up_to(grid.depth) {
        for n in 0..=grid.n_max {
            let mut prev = m.eval(&sigma, n, 0);
            for stage in 0..grid.stage {
                let next = m.eval(&sigma, n, stage + 1);
                if let Some(before) = prev {
                    if next != Some(before) {
                        out.push(Violation::StageRegression {
                            sigma: sigma.clone(),
                            n,
                            stage,
                            before,
                            after: next,
                        });
                    }
                }
                prev = next;
            }
            let Some(value) = prev else { continue };
            if sigma.len() == grid.depth {
                continue;
            }
            for bit in [false, true] {
                let extension = sigma.child(bit);
                let other = m.eval(&extension, n, grid.stage);
                if other != Some(value) {
                    out.push(Violation::ExtensionMismatch {
                        sigma: sigma.clone(),
                        extension,
                        n,
                        stage: grid.stage,
                        value,
                        other,
                    });
                }
            }
        }
    }
    out
}

/// Stage monotonicity and output monotonicity of a monotone machine.
pub fn check_monotone(m: &dyn MonotoneMachine, grid: Grid) -> Vec<Violation> {
    let mut out = Vec::new();
    for sigma in Bits::all_up_to(grid.depth) {
        let mut prev = m.eval(&sigma, 0);
        for stage in 0..grid.stage {
            let next = m.eval(&sigma, stage + 1);
            if let Some(before) = &prev {
                if !next.as_ref().is_some_and(|a| before.is_prefix_of(a)) {
                    out.push(Violation::OutputRegression {
                        sigma: sigma.clone(),
                        stage,
                        before: before.clone(),
                        after: next.clone(),
                    });
                }
            }
            prev = next;
        }
        let Some(left) = prev else { continue };
        if sigma.len() == grid.depth {
            continue;
        }
        for bit in [false, true] {
            let longer = sigma.child(bit);
            if let Some(right) = m.eval(&longer, grid.stage) {
                if !left.is_prefix_of(&right) {
                    out.push(
                        MachineError::Monotonicity {
                            shorter: sigma.clone(),
                            longer,
                            left: left.clone(),
                            right,
                        }
                        .into(),
                    );
                }
            }
        }
    }
    out
}

/// Conditions (a) and (b) of an infinitary self-delimiting machine.
pub fn check_infsd(m: &dyn InfSdMachine, depth: usize, n_max: Nat) -> Vec<Violation> {
    Bits::all_up_to(depth)
        .filter_map(|sigma| infty_eval(m, &sigma, n_max).err())
        .map(Violation::from)
        .collect()
}
