//! Exhaustive search for precedence digraphs that reproduce given state
//! and transition counts of the case study.
//!
//! For every acyclic digraph on the five main tasks the case-study model is
//! composed, its blocking states counted, and the supervisor synthesized and
//! minimized.

use std::thread;

use serde::Serialize;

use super::{case_study_model, ModelError, CASE_STUDY_TASKS};
use crate::automata::{compose_all, Automaton};
use crate::synthesis::synthesize_composite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Target {
    pub composite_states: usize,
    pub composite_transitions: usize,
    pub blocking_states: usize,
    pub supervisor_states: usize,
    pub supervisor_transitions: usize,
}

impl Default for Target {
    /// The figures reported for the case study.
    fn default() -> Self {
        Target {
            composite_states: 33,
            composite_transitions: 45,
            blocking_states: 1,
            supervisor_states: 25,
            supervisor_transitions: 34,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub edges: Vec<(String, String)>,
    pub composite_states: usize,
    pub composite_transitions: usize,
    pub blocking_states: usize,
    /// States and transitions of the minimized supervisor; `None` when no
    /// supervisor exists.
    pub supervisor: Option<(usize, usize)>,
}

impl Candidate {
    pub fn distance(&self, t: &Target) -> usize {
        let (ss, st) = self.supervisor.unwrap_or((0, 0));
        self.composite_states.abs_diff(t.composite_states)
            + self.composite_transitions.abs_diff(t.composite_transitions)
            + self.blocking_states.abs_diff(t.blocking_states)
            + ss.abs_diff(t.supervisor_states)
            + st.abs_diff(t.supervisor_transitions)
    }

    pub fn matches(&self, t: &Target) -> bool {
        self.distance(t) == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub examined: usize,
    pub matches: Vec<Candidate>,
    /// Closest non-matching candidates, best first.
    pub nearest: Vec<Candidate>,
}

/// All acyclic edge sets over `nodes`. Each unordered pair is absent or
/// oriented one of two ways; edges are listed in node order.
pub fn acyclic_digraphs(nodes: &[&str]) -> Vec<Vec<(String, String)>> {
    let n = nodes.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut edges = Vec::new();
        for &(i, j) in &pairs {
            match c % 3 {
                1 => edges.push((i, j)),
                2 => edges.push((j, i)),
                _ => {}
            }
            c /= 3;
        }
        if is_acyclic(n, &edges) {
            let mut named: Vec<(String, String)> = edges
                .into_iter()
                .map(|(a, b)| (nodes[a].to_string(), nodes[b].to_string()))
                .collect();
            named.sort();
            out.push(named);
        }
    }
    out
}

fn is_acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut indegree = vec![0; n];
    for &(_, b) in edges {
        indegree[b] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = ready.pop() {
        seen += 1;
        for &(a, b) in edges {
            if a == i {
                indegree[b] -= 1;
                if indegree[b] == 0 {
                    ready.push(b);
                }
            }
        }
    }
    seen == n
}

/// Figures of the case-study model under one precedence digraph.
pub fn evaluate(plant: &Automaton, edges: &[(String, String)]) -> Result<Candidate, ModelError> {
    let model = case_study_model(edges)?;
    let all: Vec<Automaton> = model
        .plants()
        .iter()
        .chain(model.specs())
        .cloned()
        .collect();
    let composite = compose_all(&all)?;
    let blocking_states = composite.is_nonblocking().blocking.len();
    let (composite_states, composite_transitions) =
        (composite.num_states(), composite.num_transitions());
    let supervisor = synthesize_composite(plant.clone(), composite)
        .ok()
        .map(|r| {
            let m = r.supervisor.minimize();
            (m.num_states(), m.num_transitions())
        });
    Ok(Candidate {
        edges: edges.to_vec(),
        composite_states,
        composite_transitions,
        blocking_states,
        supervisor,
    })
}

/// Evaluates every acyclic digraph on tasks A–E against `target`.
/// Results are independent of the number of worker threads.
pub fn find_digraph(target: &Target, keep_nearest: usize) -> Result<SearchOutcome, ModelError> {
    let digraphs = acyclic_digraphs(&CASE_STUDY_TASKS);
    let plant = compose_all(case_study_model::<&str, &str>(&[])?.plants())?;
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(16);
    let chunk = digraphs.len().div_ceil(workers).max(1);

    let results: Vec<Result<Vec<Candidate>, ModelError>> = thread::scope(|scope| {
        let handles: Vec<_> = digraphs
            .chunks(chunk)
            .map(|part| {
                let plant = &plant;
                scope.spawn(move || part.iter().map(|e| evaluate(plant, e)).collect())
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });
    let mut all = Vec::with_capacity(digraphs.len());
    for r in results {
        all.extend(r?);
    }

    let examined = all.len();
    let (matches, mut rest): (Vec<Candidate>, Vec<Candidate>) =
        all.into_iter().partition(|c| c.matches(target));
    rest.sort_by_key(|c| c.distance(target));
    rest.truncate(keep_nearest);
    Ok(SearchOutcome {
        examined,
        matches,
        nearest: rest,
    })
}
