//! Dynamic constraint patterns.
//!
//! Each pattern is written as a small monitor (a memory value plus a step
//! function that refuses forbidden events) and unfolded into an automaton by
//! breadth-first exploration; the result is then minimized. All states are
//! marked.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::{
    case_study_tasks, done_event, predicates, start_event, validate_name, ModelError, TaskSpec,
    TracePredicate,
};
use crate::automata::{Automaton, Event};

/// Built-in dynamic constraint patterns, referenced by name from model files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "pattern", rename_all = "snake_case")]
pub enum DynamicConstraint {
    /// `blocked` cannot start once `blocker` is done.
    ForbidStartAfterDone { blocker: String, blocked: String },
    /// If `first` is done before `second` is done and `follower` has not
    /// started by then, the event right after `second_done` is
    /// `follower_start`.
    StartImmediatelyAfter {
        first: String,
        second: String,
        follower: String,
    },
    /// Governs the repeatable task `screw`:
    /// if `trigger_second_done` comes right after `trigger_first_done`, then
    /// `screw` starts next and is done before either guarded task starts;
    /// and right after both guarded tasks are done `screw` starts, finishing
    /// before `last` starts. `screw` may not start at any other time.
    Screwing {
        trigger_first: String,
        trigger_second: String,
        guarded: [String; 2],
        last: String,
        screw: String,
    },
}

impl DynamicConstraint {
    pub fn name(&self) -> String {
        match self {
            DynamicConstraint::ForbidStartAfterDone { blocker, blocked } => {
                format!("forbid_{blocked}_after_{blocker}")
            }
            DynamicConstraint::StartImmediatelyAfter {
                first,
                second,
                follower,
            } => format!("immediate_{follower}_after_{first}_{second}"),
            DynamicConstraint::Screwing { screw, .. } => format!("screwing_{screw}"),
        }
    }

    fn referenced_tasks(&self) -> Vec<&str> {
        match self {
            DynamicConstraint::ForbidStartAfterDone { blocker, blocked } => vec![blocker, blocked],
            DynamicConstraint::StartImmediatelyAfter {
                first,
                second,
                follower,
            } => vec![first, second, follower],
            DynamicConstraint::Screwing {
                trigger_first,
                trigger_second,
                guarded,
                last,
                screw,
            } => vec![
                trigger_first,
                trigger_second,
                &guarded[0],
                &guarded[1],
                last,
                screw,
            ],
        }
    }

    /// Builds the specification automaton over `alphabet` (the patterns that
    /// speak about immediacy observe every event in it) and the matching
    /// trace predicate.
    pub fn build(
        &self,
        tasks: &[TaskSpec],
        alphabet: &[Event],
    ) -> Result<(Automaton, TracePredicate), ModelError> {
        for t in self.referenced_tasks() {
            validate_name(t)?;
            if !tasks.iter().any(|x| x.name == t) {
                return Err(ModelError::UnknownTask(t.to_string()));
            }
        }
        let name = self.name();
        Ok(match self {
            DynamicConstraint::ForbidStartAfterDone { blocker, blocked } => (
                forbid_start_after_done(blocker, blocked)?,
                predicates::forbid_start_after_done(&name, blocker, blocked),
            ),
            DynamicConstraint::StartImmediatelyAfter {
                first,
                second,
                follower,
            } => (
                start_immediately_after(&name, alphabet, first, second, follower),
                predicates::start_immediately_after(&name, first, second, follower),
            ),
            DynamicConstraint::Screwing {
                trigger_first,
                trigger_second,
                guarded,
                last,
                screw,
            } => {
                let roles = ScrewRoles::new(trigger_first, trigger_second, guarded, last, screw);
                (
                    screwing(&name, alphabet, &roles),
                    predicates::screwing(
                        &name,
                        trigger_first,
                        trigger_second,
                        guarded,
                        last,
                        screw,
                    ),
                )
            }
        })
    }
}

/// Unfolds a monitor into an automaton over `alphabet`, then minimizes it.
fn monitor<S, F>(name: &str, alphabet: &[Event], init: S, step: F) -> Automaton
where
    S: Clone + Eq + Hash,
    F: Fn(&S, &str) -> Option<S>,
{
    let mut index: HashMap<S, usize> = HashMap::new();
    let mut memory = vec![init.clone()];
    index.insert(init, 0);
    let mut transitions = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let cur = memory[i].clone();
        for e in alphabet {
            if let Some(next) = step(&cur, &e.name) {
                let j = *index.entry(next.clone()).or_insert_with(|| {
                    memory.push(next);
                    queue.push_back(memory.len() - 1);
                    memory.len() - 1
                });
                transitions.push((format!("m{i}"), e.name.clone(), format!("m{j}")));
            }
        }
    }
    let states: Vec<String> = (0..memory.len()).map(|i| format!("m{i}")).collect();
    Automaton::new(
        name,
        states.clone(),
        alphabet.iter().cloned(),
        transitions,
        "m0",
        states,
    )
    .expect("monitor unfolding is deterministic and closed")
    .minimize()
}

/// `blocked_start` is allowed until `blocker_done` occurs; after that the
/// specification enables nothing.
pub fn forbid_start_after_done(blocker: &str, blocked: &str) -> Result<Automaton, ModelError> {
    validate_name(blocker)?;
    validate_name(blocked)?;
    if blocker == blocked {
        return Err(ModelError::SelfPrecedence(blocker.to_string()));
    }
    let (bd, bs) = (done_event(blocker), start_event(blocked));
    let name = DynamicConstraint::ForbidStartAfterDone {
        blocker: blocker.into(),
        blocked: blocked.into(),
    }
    .name();
    Ok(Automaton::new(
        name,
        ["s0", "s1"],
        [Event::uncontrollable(&bd), Event::controllable(&bs)],
        [
            ("s0".into(), bs.clone(), "s0".into()),
            ("s0".into(), bd, "s1".into()),
        ],
        "s0",
        ["s0", "s1"],
    )?)
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Immediacy {
    Watching { first_done: bool },
    Pending,
    Free,
}

fn start_immediately_after(
    name: &str,
    alphabet: &[Event],
    first: &str,
    second: &str,
    follower: &str,
) -> Automaton {
    let (first_done, second_done, follower_start) =
        (done_event(first), done_event(second), start_event(follower));
    monitor(
        name,
        alphabet,
        Immediacy::Watching { first_done: false },
        |m, e| match m {
            Immediacy::Free => Some(Immediacy::Free),
            Immediacy::Pending => (e == follower_start).then_some(Immediacy::Free),
            Immediacy::Watching { first_done: fd } => Some(if e == follower_start {
                Immediacy::Free
            } else if e == second_done {
                if *fd {
                    Immediacy::Pending
                } else {
                    Immediacy::Free
                }
            } else if e == first_done {
                Immediacy::Watching { first_done: true }
            } else {
                m.clone()
            }),
        },
    )
}

/// Case-study constraint 2: C starts right after B is done when A was done
/// first and C has not started yet. Observes every event of tasks A–F.
pub fn immediacy_constraint_2() -> Automaton {
    let alphabet = case_study_alphabet();
    start_immediately_after(
        &DynamicConstraint::StartImmediatelyAfter {
            first: "A".into(),
            second: "B".into(),
            follower: "C".into(),
        }
        .name(),
        &alphabet,
        "A",
        "B",
        "C",
    )
}

fn case_study_alphabet() -> Vec<Event> {
    let mut events: Vec<Event> = case_study_tasks()
        .iter()
        .flat_map(|t| {
            [
                Event::controllable(start_event(&t.name)),
                Event::uncontrollable(done_event(&t.name)),
            ]
        })
        .collect();
    events.sort();
    events
}

struct ScrewRoles {
    trigger_first_done: String,
    trigger_second_done: String,
    guarded_start: [String; 2],
    guarded_done: [String; 2],
    last_start: String,
    screw_start: String,
    screw_done: String,
}

impl ScrewRoles {
    fn new(
        trigger_first: &str,
        trigger_second: &str,
        guarded: &[String; 2],
        last: &str,
        screw: &str,
    ) -> Self {
        ScrewRoles {
            trigger_first_done: done_event(trigger_first),
            trigger_second_done: done_event(trigger_second),
            guarded_start: [start_event(&guarded[0]), start_event(&guarded[1])],
            guarded_done: [done_event(&guarded[0]), done_event(&guarded[1])],
            last_start: start_event(last),
            screw_start: start_event(screw),
            screw_done: done_event(screw),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Phase {
    Idle,
    MustStart,
    Running,
    Over,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Screw {
    after_trigger_first: bool,
    trigger_seen: [bool; 2],
    conditional: Phase,
    guarded_done: [bool; 2],
    closing: Phase,
}

fn screwing(name: &str, alphabet: &[Event], r: &ScrewRoles) -> Automaton {
    let init = Screw {
        after_trigger_first: false,
        trigger_seen: [false, false],
        conditional: Phase::Idle,
        guarded_done: [false, false],
        closing: Phase::Idle,
    };
    monitor(name, alphabet, init, |m, e| {
        let mut n = m.clone();
        n.after_trigger_first = e == r.trigger_first_done;
        if m.conditional == Phase::MustStart || m.closing == Phase::MustStart {
            if e != r.screw_start {
                return None;
            }
            if m.conditional == Phase::MustStart {
                n.conditional = Phase::Running;
            } else {
                n.closing = Phase::Running;
            }
            return Some(n);
        }
        if e == r.screw_start {
            return None;
        }
        if e == r.screw_done {
            if m.conditional == Phase::Running {
                n.conditional = Phase::Over;
            } else if m.closing == Phase::Running {
                n.closing = Phase::Over;
            } else {
                return None;
            }
        }
        if r.guarded_start.iter().any(|g| g == e) && m.conditional == Phase::Running {
            return None;
        }
        if e == r.last_start && m.closing != Phase::Over {
            return None;
        }
        if e == r.trigger_second_done && m.after_trigger_first && m.conditional == Phase::Idle {
            n.conditional = Phase::MustStart;
        }
        if e == r.trigger_first_done {
            n.trigger_seen[0] = true;
        }
        if e == r.trigger_second_done {
            n.trigger_seen[1] = true;
        }
        // both trigger events happened without the trigger firing: resolved
        if n.trigger_seen == [true, true] && n.conditional == Phase::Idle {
            n.conditional = Phase::Over;
        }
        for (i, g) in r.guarded_done.iter().enumerate() {
            if e == g {
                n.guarded_done[i] = true;
            }
        }
        if n.guarded_done == [true, true]
            && m.guarded_done != [true, true]
            && m.closing == Phase::Idle
        {
            n.closing = Phase::MustStart;
        }
        Some(n)
    })
}

/// Case-study screwing constraint for F, triggered by A done right after B.
pub fn screwing_constraint() -> Automaton {
    let guarded = ["C".to_string(), "D".to_string()];
    screwing(
        &DynamicConstraint::Screwing {
            trigger_first: "B".into(),
            trigger_second: "A".into(),
            guarded: guarded.clone(),
            last: "E".into(),
            screw: "F".into(),
        }
        .name(),
        &case_study_alphabet(),
        &ScrewRoles::new("B", "A", &guarded, "E", "F"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Execution;

    fn executes(a: &Automaton, word: &[&str]) -> bool {
        // run the projection onto the automaton's alphabet
        let projected: Vec<&str> = word
            .iter()
            .copied()
            .filter(|e| a.event_id(e).is_some())
            .collect();
        matches!(a.execute(&projected), Ok(Execution::Reached(_)))
    }

    #[test]
    fn forbid_after_done() {
        let a = forbid_start_after_done("D", "C").unwrap();
        assert!(!executes(&a, &["D_done", "C_start"]));
        assert!(executes(&a, &["C_start", "D_done"]));
        assert!(executes(&a, &["A_start", "A_done"]));
        assert_eq!(a.num_states(), 2);
        assert_eq!(a.marked_states().count(), 2);
    }

    #[test]
    fn immediacy_constraint() {
        let a = immediacy_constraint_2();
        assert_eq!(a.marked_states().count(), a.num_states());
        assert!(executes(
            &a,
            &["A_start", "A_done", "B_start", "B_done", "C_start", "C_done"]
        ));
        assert!(!executes(
            &a,
            &["A_start", "A_done", "B_start", "B_done", "D_start"]
        ));
        assert!(executes(
            &a,
            &["B_start", "B_done", "A_start", "A_done", "D_start"]
        ));
        // C already started: the antecedent fails
        assert!(executes(
            &a,
            &["A_start", "A_done", "C_start", "B_start", "B_done", "D_start"]
        ));
        // F events count as intervening events too
        assert!(!executes(
            &a,
            &["A_start", "A_done", "B_start", "B_done", "F_start"]
        ));
    }

    #[test]
    fn screwing_constraint_cases() {
        let a = screwing_constraint();
        assert_eq!(a.marked_states().count(), a.num_states());
        let ok = [
            "A_start", "B_start", "A_done", "B_done", "C_start", "D_start", "C_done", "D_done",
            "F_start", "F_done", "E_start", "E_done",
        ];
        assert!(executes(&a, &ok));
        let skip_f = [
            "A_start", "B_start", "A_done", "B_done", "C_start", "D_start", "C_done", "D_done",
            "E_start",
        ];
        assert!(!executes(&a, &skip_f));
        let conditional = [
            "B_start", "A_start", "B_done", "A_done", "F_start", "F_done", "C_start", "D_start",
        ];
        assert!(executes(&a, &conditional));
        let early_c = [
            "B_start", "A_start", "B_done", "A_done", "F_start", "C_start",
        ];
        assert!(!executes(&a, &early_c));
        let late_f = ["B_start", "A_start", "B_done", "A_done", "C_start"];
        assert!(!executes(&a, &late_f));
        // no screwing outside the two designated windows
        assert!(!executes(&a, &["F_start"]));
    }
}
