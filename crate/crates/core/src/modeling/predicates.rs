//! Direct checks over event sequences, one per constraint.
//!
//! These restate each constraint by scanning positions in a trace and never
//! consult the constraint automata; tests compare the two encodings. Every
//! constraint predicate is prefix-safe: a prefix is accepted unless it
//! already contains a violation.

use std::fmt;
use std::sync::Arc;

use super::{done_event, start_event};

type Evaluator = Arc<dyn Fn(&[String]) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct TracePredicate {
    name: String,
    /// Name of the specification automaton this predicate restates, if any.
    constraint: Option<String>,
    eval: Evaluator,
}

impl TracePredicate {
    pub fn new(
        name: impl Into<String>,
        constraint: Option<String>,
        eval: impl Fn(&[String]) -> bool + Send + Sync + 'static,
    ) -> Self {
        TracePredicate {
            name: name.into(),
            constraint,
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn constraint(&self) -> Option<&str> {
        self.constraint.as_deref()
    }

    pub fn holds<S: AsRef<str>>(&self, trace: &[S]) -> bool {
        let owned: Vec<String> = trace.iter().map(|s| s.as_ref().to_string()).collect();
        (self.eval)(&owned)
    }
}

impl fmt::Debug for TracePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TracePredicate")
            .field("name", &self.name)
            .field("constraint", &self.constraint)
            .finish_non_exhaustive()
    }
}

fn first(trace: &[String], event: &str) -> Option<usize> {
    trace.iter().position(|e| e == event)
}

fn first_after(trace: &[String], from: usize, event: &str) -> Option<usize> {
    trace
        .iter()
        .enumerate()
        .skip(from)
        .find(|(_, e)| *e == event)
        .map(|(i, _)| i)
}

/// Every `after_start` has an earlier `before_done`.
pub fn precedence(before: &str, after: &str) -> TracePredicate {
    let name = super::precedence_name(before, after);
    let (bd, as_) = (done_event(before), start_event(after));
    TracePredicate::new(name.clone(), Some(name), move |t| {
        t.iter()
            .enumerate()
            .filter(|(_, e)| **e == as_)
            .all(|(i, _)| t[..i].contains(&bd))
    })
}

/// No `blocked_start` after any `blocker_done`.
pub fn forbid_start_after_done(name: &str, blocker: &str, blocked: &str) -> TracePredicate {
    let (bd, bs) = (done_event(blocker), start_event(blocked));
    TracePredicate::new(name, Some(name.to_string()), move |t| match first(t, &bd) {
        Some(i) => !t[i + 1..].contains(&bs),
        None => true,
    })
}

/// When `first_done` precedes the first `second_done` and `follower_start`
/// does not, the next event is `follower_start`.
pub fn start_immediately_after(
    name: &str,
    first_task: &str,
    second: &str,
    follower: &str,
) -> TracePredicate {
    let (fd, sd, fs) = (
        done_event(first_task),
        done_event(second),
        start_event(follower),
    );
    TracePredicate::new(name, Some(name.to_string()), move |t| {
        let Some(b) = first(t, &sd) else {
            return true;
        };
        let antecedent = t[..b].contains(&fd) && !t[..b].contains(&fs);
        !antecedent || t.get(b + 1).is_none_or(|next| *next == fs)
    })
}

/// See [`super::DynamicConstraint::Screwing`].
pub fn screwing(
    name: &str,
    trigger_first: &str,
    trigger_second: &str,
    guarded: &[String; 2],
    last: &str,
    screw: &str,
) -> TracePredicate {
    let tfd = done_event(trigger_first);
    let tsd = done_event(trigger_second);
    let gs = [start_event(&guarded[0]), start_event(&guarded[1])];
    let gd = [done_event(&guarded[0]), done_event(&guarded[1])];
    let ls = start_event(last);
    let ss = start_event(screw);
    let sd = done_event(screw);
    TracePredicate::new(name, Some(name.to_string()), move |t| {
        let mut allowed_starts = Vec::new();

        // conditional part: trigger_second done right after trigger_first done
        if let Some(i) = (0..t.len().saturating_sub(1)).find(|&i| t[i] == tfd && t[i + 1] == tsd) {
            let s = i + 2;
            if s < t.len() {
                if t[s] != ss {
                    return false;
                }
                allowed_starts.push(s);
                let end = first_after(t, s + 1, &sd).unwrap_or(t.len());
                if t[s + 1..end].iter().any(|e| gs.contains(e)) {
                    return false;
                }
            }
        }

        // closing part: right after both guarded tasks are done
        let closing = match (first(t, &gd[0]), first(t, &gd[1])) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        let mut closing_done = None;
        if let Some(k) = closing {
            let s = k + 1;
            if s < t.len() {
                if t[s] != ss {
                    return false;
                }
                allowed_starts.push(s);
                closing_done = first_after(t, s + 1, &sd);
            }
        }
        for (p, e) in t.iter().enumerate() {
            if *e == ls && !closing_done.is_some_and(|d| d < p) {
                return false;
            }
            if *e == ss && !allowed_starts.contains(&p) {
                return false;
            }
        }
        true
    })
}

/// Each listed task starts exactly once and is done exactly once. Meant for
/// complete traces.
pub fn exactly_once(tasks: &[String]) -> TracePredicate {
    let events: Vec<(String, String)> = tasks
        .iter()
        .map(|x| (start_event(x), done_event(x)))
        .collect();
    TracePredicate::new("exactly_once", None, move |t| {
        events.iter().all(|(s, d)| {
            t.iter().filter(|e| *e == s).count() == 1 && t.iter().filter(|e| *e == d).count() == 1
        })
    })
}
