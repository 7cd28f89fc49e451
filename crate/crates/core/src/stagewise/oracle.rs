use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::script::EventScript;
use super::{Stage, StagewiseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    CeMonotone,
    KnownLimitToy,
}

/// A stage-indexed approximation `E_0, E_1, ...` to a set of naturals.
#[derive(Debug, Clone)]
pub struct OracleApprox {
    kind: OracleKind,
    source: Source,
}

#[derive(Debug, Clone)]
enum Source {
    Script {
        script: EventScript<u64>,
        limit: Option<BTreeSet<u64>>,
    },
    Halting(HaltingStandIn),
}

impl OracleApprox {
    /// The oracle that stays empty forever.
    pub fn empty() -> Self {
        OracleApprox::toy(Vec::new(), Vec::new(), None).expect("empty script is consistent")
    }

    /// A scripted oracle whose limit is its final state.  A declared `limit`
    /// is checked against that final state.
    pub fn toy(
        entries: Vec<(u64, Stage)>,
        removals: Vec<(u64, Stage)>,
        limit: Option<BTreeSet<u64>>,
    ) -> Result<Self, StagewiseError> {
        let script = EventScript::with_removals(entries, removals);
        let computed = script.final_state();
        if let Some(declared) = &limit {
            if declared != &computed {
                return Err(StagewiseError::LimitMismatch {
                    declared: format!("{declared:?}"),
                    computed: format!("{computed:?}"),
                });
            }
        }
        Ok(OracleApprox {
            kind: OracleKind::KnownLimitToy,
            source: Source::Script {
                script,
                limit: Some(computed),
            },
        })
    }

    /// A scripted c.e. enumeration whose limit is not handed to the harness.
    pub fn ce_script(entries: Vec<(u64, Stage)>) -> Self {
        OracleApprox {
            kind: OracleKind::CeMonotone,
            source: Source::Script {
                script: EventScript::entries(entries),
                limit: None,
            },
        }
    }

    /// Step-bounded halting of the first `programs` micro-programs.
    pub fn halting(programs: u64, step_budget: Stage) -> Self {
        OracleApprox {
            kind: OracleKind::CeMonotone,
            source: Source::Halting(HaltingStandIn::new(programs, step_budget)),
        }
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    pub fn enumerate(&self, stage: Stage) -> BTreeSet<u64> {
        match &self.source {
            Source::Script { script, .. } => script.state_at(stage),
            Source::Halting(h) => h.enumerate(stage),
        }
    }

    /// `E_stage ∩ [0, bound)`.
    pub fn segment(&self, stage: Stage, bound: u64) -> BTreeSet<u64> {
        self.enumerate(stage).range(..bound).copied().collect()
    }

    /// The segment below `bound` one stage earlier, with `E_{-1}` empty.
    pub fn previous_segment(&self, stage: Stage, bound: u64) -> BTreeSet<u64> {
        match stage.checked_sub(1) {
            Some(p) => self.segment(p, bound),
            None => BTreeSet::new(),
        }
    }

    /// Whether `n ∈ E_stage − E_{stage−1}`.
    pub fn entered_at(&self, n: u64, stage: Stage) -> bool {
        self.enumerate(stage).contains(&n)
            && (stage == 0 || !self.enumerate(stage - 1).contains(&n))
    }

    /// The last stage `t` with `1 ≤ t ≤ stage` at which `n` entered.
    pub fn last_entry(&self, n: u64, stage: Stage) -> Option<Stage> {
        match &self.source {
            Source::Script { script, .. } => script
                .entry_stages(&n)
                .into_iter()
                .rfind(|&t| t >= 1 && t <= stage),
            Source::Halting(h) => h.halting_stage(n).filter(|&t| t >= 1 && t <= stage),
        }
    }

    /// The limit and a stage from which the approximation equals it, when known.
    pub fn known_limit(&self) -> Option<(&BTreeSet<u64>, Stage)> {
        match &self.source {
            Source::Script {
                script,
                limit: Some(l),
            } => Some((l, script.settle_stage())),
            _ => None,
        }
    }

    /// A stage after which the approximation never changes, when known.
    pub fn settle_stage(&self) -> Option<Stage> {
        match &self.source {
            Source::Script { script, .. } => Some(script.settle_stage()),
            Source::Halting(_) => None,
        }
    }
}

/// Instructions of the two-counter micro-machine used as a halting-problem
/// stand-in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instr {
    IncA,
    IncB,
    DecA,
    DecB,
    /// Skip the next instruction when counter A is zero.
    SkipIfZeroA,
    SkipIfZeroB,
    /// Jump back to the first instruction.
    Restart,
    Halt,
}

const INSTRS: [Instr; 8] = [
    Instr::IncA,
    Instr::IncB,
    Instr::DecA,
    Instr::DecB,
    Instr::SkipIfZeroA,
    Instr::SkipIfZeroB,
    Instr::Restart,
    Instr::Halt,
];

/// Program `e` in base 8, least significant digit first, one instruction per
/// digit.  Program 0 is `[IncA]`.
pub fn decode_program(e: u64) -> Vec<Instr> {
    let mut out = vec![INSTRS[(e % 8) as usize]];
    let mut rest = e / 8;
    while rest > 0 {
        out.push(INSTRS[(rest % 8) as usize]);
        rest /= 8;
    }
    out
}

/// Number of steps program `e` takes to halt, if it halts within `budget`.
/// Running off the end of the program counts as halting.
pub fn halting_time(program: &[Instr], budget: Stage) -> Option<Stage> {
    let (mut a, mut b, mut pc) = (0u64, 0u64, 0usize);
    for step in 1..=budget {
        let Some(&ins) = program.get(pc) else {
            return Some(step);
        };
        pc += 1;
        match ins {
            Instr::IncA => a += 1,
            Instr::IncB => b += 1,
            Instr::DecA => a = a.saturating_sub(1),
            Instr::DecB => b = b.saturating_sub(1),
            Instr::SkipIfZeroA if a == 0 => pc += 1,
            Instr::SkipIfZeroB if b == 0 => pc += 1,
            Instr::SkipIfZeroA | Instr::SkipIfZeroB => {}
            Instr::Restart => pc = 0,
            Instr::Halt => return Some(step),
        }
    }
    None
}

/// `E_s` = programs among the first `programs` that halt within `s` steps.
/// Exact for stages up to `step_budget`; beyond it the state is frozen.
#[derive(Debug, Clone)]
pub struct HaltingStandIn {
    times: Vec<Option<Stage>>,
    step_budget: Stage,
}

impl HaltingStandIn {
    pub fn new(programs: u64, step_budget: Stage) -> Self {
        let times = (0..programs)
            .map(|e| halting_time(&decode_program(e), step_budget))
            .collect();
        HaltingStandIn { times, step_budget }
    }

    pub fn step_budget(&self) -> Stage {
        self.step_budget
    }

    pub fn enumerate(&self, stage: Stage) -> BTreeSet<u64> {
        self.times
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_some_and(|t| t <= stage))
            .map(|(e, _)| e as u64)
            .collect()
    }

    pub fn halting_stage(&self, e: u64) -> Option<Stage> {
        self.times.get(e as usize).copied().flatten()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_limit_is_checked() {
        let ok = OracleApprox::toy(vec![(2, 4)], vec![], Some([2].into()));
        assert!(ok.is_ok());
        let bad = OracleApprox::toy(vec![(2, 4)], vec![(2, 5)], Some([2].into()));
        assert!(matches!(bad, Err(StagewiseError::LimitMismatch { .. })));
    }

    #[test]
    fn entries_and_segments() {
        let e = OracleApprox::toy(vec![(4, 6), (1, 2)], vec![], None).unwrap();
        assert!(e.entered_at(4, 6));
        assert!(!e.entered_at(4, 7));
        assert_eq!(e.segment(6, 5), [1, 4].into());
        assert_eq!(e.previous_segment(6, 5), [1].into());
        assert_eq!(e.previous_segment(0, 5), BTreeSet::new());
        assert_eq!(e.last_entry(4, 10), Some(6));
        assert_eq!(e.last_entry(4, 5), None);
        assert_eq!(e.known_limit().unwrap().1, 6);
    }

    #[test]
    fn micro_programs() {
        assert_eq!(halting_time(&[Instr::Halt], 10), Some(1));
        assert_eq!(halting_time(&[Instr::IncA], 10), Some(2));
        assert_eq!(halting_time(&[Instr::IncA, Instr::Restart], 1000), None);
        let countdown = [
            Instr::DecA,
            Instr::SkipIfZeroA,
            Instr::Restart,
            Instr::Halt,
        ];
        assert_eq!(halting_time(&countdown, 100), Some(3));
        let loop_b = [Instr::IncB, Instr::SkipIfZeroB, Instr::Restart];
        assert_eq!(halting_time(&loop_b, 1000), None);
        assert_eq!(decode_program(0), vec![Instr::IncA]);
        assert_eq!(decode_program(7 + 8 * 6), vec![Instr::Halt, Instr::Restart]);
    }

    #[test]
    fn halting_stand_in_is_monotone_and_nontrivial() {
        let e = OracleApprox::halting(64, 500);
        assert_eq!(e.kind(), OracleKind::CeMonotone);
        assert!(e.known_limit().is_none());
        let mut prev = BTreeSet::new();
        for s in 0..60 {
            let cur = e.enumerate(s);
            assert!(prev.is_subset(&cur));
            prev = cur;
        }
        let fin = e.enumerate(500);
        assert!(!fin.is_empty() && fin.len() < 64);
        for n in &fin {
            let t = e.last_entry(*n, 500).unwrap();
            assert!(e.entered_at(*n, t));
        }
    }
}
