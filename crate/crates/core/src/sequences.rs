//! Enumeration and counting of complete sequences (words from the initial
//! state to a marked state).

use serde::Serialize;

use crate::automata::{Automaton, StateId, Trace};

pub const DEFAULT_MAX_LEN: usize = 64;
pub const DEFAULT_MAX_COUNT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceSet {
    pub sequences: Vec<Trace>,
    /// True iff the listing is the whole (finite) language.
    pub complete: bool,
    pub language_infinite: bool,
    pub bound_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceCount {
    Finite(u128),
    Infinite,
}

impl SequenceCount {
    pub fn finite(self) -> Option<u128> {
        match self {
            SequenceCount::Finite(n) => Some(n),
            SequenceCount::Infinite => None,
        }
    }
}

impl std::fmt::Display for SequenceCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SequenceCount::Finite(n) => write!(f, "{n}"),
            SequenceCount::Infinite => write!(f, "infinite"),
        }
    }
}

/// Reachable and coreachable states.
fn trim_mask(a: &Automaton) -> Vec<bool> {
    let co = a.coreachable_mask();
    let mut trim = vec![false; a.num_states()];
    for s in a.bfs_order() {
        trim[s.0] = co[s.0];
    }
    trim
}

/// Whether the trim part contains a cycle, i.e. the marked language is
/// infinite.
pub fn has_coreachable_cycle(a: &Automaton) -> bool {
    let trim = trim_mask(a);
    // 0 = unvisited, 1 = on stack, 2 = finished
    let mut color = vec![0u8; a.num_states()];
    for root in (0..a.num_states()).filter(|&s| trim[s]) {
        if color[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(root, succ(a, &trim, root))];
        color[root] = 1;
        while let Some((s, pending)) = stack.last_mut() {
            match pending.pop() {
                Some(t) if color[t] == 1 => return true,
                Some(t) if color[t] == 0 => {
                    color[t] = 1;
                    let next = succ(a, &trim, t);
                    stack.push((t, next));
                }
                Some(_) => {}
                None => {
                    color[*s] = 2;
                    stack.pop();
                }
            }
        }
    }
    false
}

fn succ(a: &Automaton, trim: &[bool], s: usize) -> Vec<usize> {
    a.outgoing(StateId(s))
        .map(|(_, t)| t.0)
        .filter(|&t| trim[t])
        .collect()
}

/// Depth-first listing of complete sequences, branches in event-name order.
///
/// Only states that can still reach a marked state are explored. A trace at
/// a marked state is emitted before its extensions.
pub fn enumerate_sequences(a: &Automaton, max_len: usize, max_count: usize) -> SequenceSet {
    let max_count = max_count.max(1);
    let trim = trim_mask(a);
    let language_infinite = has_coreachable_cycle(a);
    let mut walk = Walk {
        a,
        trim: &trim,
        max_len,
        max_count,
        word: Vec::new(),
        out: Vec::new(),
        truncated: false,
    };
    if trim[a.initial().0] {
        walk.visit(a.initial());
    }
    SequenceSet {
        complete: !walk.truncated && !language_infinite,
        sequences: walk.out,
        language_infinite,
        bound_used: max_len,
    }
}

struct Walk<'a> {
    a: &'a Automaton,
    trim: &'a [bool],
    max_len: usize,
    max_count: usize,
    word: Vec<String>,
    out: Vec<Trace>,
    truncated: bool,
}

impl Walk<'_> {
    /// Returns false once the count bound stops the search.
    fn visit(&mut self, s: StateId) -> bool {
        if self.a.is_marked(s) {
            if self.out.len() == self.max_count {
                self.truncated = true;
                return false;
            }
            self.out.push(Trace(self.word.clone()));
        }
        let next: Vec<_> = self.a.outgoing(s).filter(|(_, t)| self.trim[t.0]).collect();
        if self.word.len() == self.max_len {
            if !next.is_empty() {
                self.truncated = true;
            }
            return true;
        }
        for (e, t) in next {
            self.word.push(self.a.event(e).name.clone());
            let go_on = self.visit(t);
            self.word.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Number of complete sequences, by path counting over the trim part.
/// Saturates at `u128::MAX`.
pub fn count_sequences(a: &Automaton) -> SequenceCount {
    if has_coreachable_cycle(a) {
        return SequenceCount::Infinite;
    }
    let trim = trim_mask(a);
    if !trim[a.initial().0] {
        return SequenceCount::Finite(0);
    }
    // memoized post-order over the acyclic trim graph
    let mut paths: Vec<Option<u128>> = vec![None; a.num_states()];
    let mut stack = vec![(a.initial().0, false)];
    while let Some((s, expanded)) = stack.pop() {
        if paths[s].is_some() {
            continue;
        }
        let children = succ(a, &trim, s);
        if expanded {
            let total = children
                .iter()
                .fold(u128::from(a.is_marked(StateId(s))), |acc, &t| {
                    acc.saturating_add(paths[t].expect("children finish first"))
                });
            paths[s] = Some(total);
        } else {
            stack.push((s, true));
            stack.extend(
                children
                    .into_iter()
                    .filter(|&t| paths[t].is_none())
                    .map(|t| (t, false)),
            );
        }
    }
    SequenceCount::Finite(paths[a.initial().0].unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{synchronous_composition, Execution};
    use crate::modeling::{repetitive_task, single_task};

    #[test]
    fn single_task_has_one_sequence() {
        let a = single_task("A").unwrap();
        let set = enumerate_sequences(&a, DEFAULT_MAX_LEN, DEFAULT_MAX_COUNT);
        assert_eq!(set.sequences.len(), 1);
        assert_eq!(set.sequences[0].to_string(), "A_start A_done");
        assert!(set.complete && !set.language_infinite);
        assert_eq!(count_sequences(&a), SequenceCount::Finite(1));
    }

    #[test]
    fn two_tasks_interleave_six_ways() {
        let ab = synchronous_composition(&single_task("A").unwrap(), &single_task("B").unwrap())
            .unwrap();
        let set = enumerate_sequences(&ab, DEFAULT_MAX_LEN, DEFAULT_MAX_COUNT);
        assert_eq!(set.sequences.len(), 6);
        assert!(set.complete);
        assert_eq!(count_sequences(&ab), SequenceCount::Finite(6));
        for t in &set.sequences {
            assert!(matches!(ab.execute(t.events()), Ok(Execution::Reached(s)) if ab.is_marked(s)));
        }
        // lexicographic at every branch: A_done < A_start < B_done < B_start
        assert_eq!(
            set.sequences[0].to_string(),
            "A_start A_done B_start B_done"
        );
    }

    #[test]
    fn repetitive_task_is_infinite() {
        let f = repetitive_task("F").unwrap();
        let set = enumerate_sequences(&f, 6, DEFAULT_MAX_COUNT);
        assert!(set.language_infinite && !set.complete);
        // both states marked: every prefix of (start done)* up to length 6
        assert_eq!(set.sequences.len(), 7);
        assert_eq!(count_sequences(&f), SequenceCount::Infinite);
    }

    #[test]
    fn bounds_truncate() {
        let ab = synchronous_composition(&single_task("A").unwrap(), &single_task("B").unwrap())
            .unwrap();
        let set = enumerate_sequences(&ab, DEFAULT_MAX_LEN, 4);
        assert_eq!(set.sequences.len(), 4);
        assert!(!set.complete);
        let set = enumerate_sequences(&ab, 3, DEFAULT_MAX_COUNT);
        assert!(set.sequences.is_empty());
        assert!(!set.complete);
    }
}
