use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::Stage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Enter,
    Leave,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event<T> {
    pub element: T,
    pub stage: Stage,
    pub kind: EventKind,
}

/// A finite list of membership changes.  The state at stage `s` contains the
/// elements whose most recent event at or before `s` is an entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventScript<T> {
    events: Vec<Event<T>>,
}

impl<T: Ord + Clone> EventScript<T> {
    pub fn new(mut events: Vec<Event<T>>) -> Self {
        // stable: events at the same stage apply in the order given
        events.sort_by_key(|e| e.stage);
        EventScript { events }
    }

    pub fn entries(entries: impl IntoIterator<Item = (T, Stage)>) -> Self {
        EventScript::new(
            entries
                .into_iter()
                .map(|(element, stage)| Event {
                    element,
                    stage,
                    kind: EventKind::Enter,
                })
                .collect(),
        )
    }

    pub fn with_removals(
        entries: impl IntoIterator<Item = (T, Stage)>,
        removals: impl IntoIterator<Item = (T, Stage)>,
    ) -> Self {
        let mut events: Vec<Event<T>> = entries
            .into_iter()
            .map(|(element, stage)| Event {
                element,
                stage,
                kind: EventKind::Enter,
            })
            .collect();
        events.extend(removals.into_iter().map(|(element, stage)| Event {
            element,
            stage,
            kind: EventKind::Leave,
        }));
        EventScript::new(events)
    }

    pub fn events(&self) -> &[Event<T>] {
        &self.events
    }

    pub fn state_at(&self, stage: Stage) -> BTreeSet<T> {
        let mut out = BTreeSet::new();
        for e in self.events.iter().take_while(|e| e.stage <= stage) {
            match e.kind {
                EventKind::Enter => out.insert(e.element.clone()),
                EventKind::Leave => out.remove(&e.element),
            };
        }
        out
    }

    /// Last stage carrying an event; the state is constant from here on.
    pub fn settle_stage(&self) -> Stage {
        self.events.last().map_or(0, |e| e.stage)
    }

    pub fn final_state(&self) -> BTreeSet<T> {
        self.state_at(self.settle_stage())
    }

    pub fn is_monotone(&self) -> bool {
        self.events.iter().all(|e| e.kind == EventKind::Enter)
    }

    /// Stages at which `element` is absent at `s - 1` and present at `s`,
    /// with the state before stage 0 taken to be empty.
    pub fn entry_stages(&self, element: &T) -> Vec<Stage> {
        let mut present = false;
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.events.len() {
            let stage = self.events[i].stage;
            let before = present;
            while i < self.events.len() && self.events[i].stage == stage {
                if &self.events[i].element == element {
                    present = self.events[i].kind == EventKind::Enter;
                }
                i += 1;
            }
            if present && !before {
                out.push(stage);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_follows_latest_event() {
        let s = EventScript::with_removals([(3u64, 2), (3, 6)], [(3u64, 4)]);
        assert!(s.state_at(1).is_empty());
        assert!(s.state_at(2).contains(&3));
        assert!(!s.state_at(5).contains(&3));
        assert!(s.state_at(6).contains(&3));
        assert_eq!(s.settle_stage(), 6);
        assert_eq!(s.entry_stages(&3), vec![2, 6]);
        assert!(!s.is_monotone());
    }

    #[test]
    fn same_stage_leave_and_enter_is_not_an_entry() {
        let s = EventScript::with_removals([(1u64, 0), (1, 3)], [(1u64, 3)]);
        // leave is listed after enter at stage 3, so 1 is absent from stage 3 on
        assert_eq!(s.entry_stages(&1), vec![0]);
        assert!(!s.state_at(3).contains(&1));
    }
}
