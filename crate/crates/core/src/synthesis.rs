//! Monolithic supervisor synthesis.
//!
//! Given plants `G = ∥ plants` and the controlled behaviour
//! `K = ∥ (plants ++ specs)`, [`synthesize`] computes the greatest
//! sub-automaton of `K` that is nonblocking and never disables an
//! uncontrollable event the plant can execute. Removal alternates between a
//! coreachability pass and an uncontrollable back-propagation pass until a
//! round removes nothing.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::automata::{
    compose_all, merge_alphabets, Automaton, AutomatonError, EventId, StateId, Trace,
};

pub mod oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalReason {
    /// No marked state is reachable from here inside the retained states.
    NotCoreachable,
    /// The plant can execute an uncontrollable event here that leads out of
    /// the retained states (or is not allowed by the specification at all).
    UncontrollablePredecessor,
    /// Still safe, but cut off from the initial state once the fixpoint is
    /// reached.
    Unreachable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RemovedState {
    pub state: String,
    pub reason: RemovalReason,
    /// Round of the fixpoint in which the state was removed (1-based).
    pub iteration: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Certificates {
    pub controllable: bool,
    pub nonblocking: bool,
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub supervisor: Automaton,
    /// Composition of the plants alone.
    pub plant: Automaton,
    /// Composition of plants and specifications, before any removal.
    pub composite: Automaton,
    pub removed_states: Vec<RemovedState>,
    pub iterations: usize,
    pub certificates: Certificates,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("the initial state was removed: no feasible sequence exists")]
    EmptySupervisor {
        removed_states: Vec<RemovedState>,
        iterations: usize,
    },
    #[error("brute-force oracle refused: {transitions} controllable transitions exceed the budget of {budget}")]
    OracleTooLarge { transitions: usize, budget: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Word leading to the offending state pair.
    pub trace: Trace,
    pub plant_state: String,
    pub candidate_state: String,
    /// Uncontrollable event enabled by the plant but not by the candidate.
    pub event: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ControllabilityReport {
    pub ok: bool,
    pub counterexample: Option<Counterexample>,
}

/// Reachable pairs of `a ∥ b` with breadth-first parent links.
struct PairGraph {
    pairs: Vec<(StateId, StateId)>,
    parent: Vec<Option<(usize, String)>>,
}

impl PairGraph {
    fn explore(a: &Automaton, b: &Automaton) -> Result<PairGraph, AutomatonError> {
        let alphabet = merge_alphabets([a.alphabet(), b.alphabet()])?;
        let ids: Vec<(Option<EventId>, Option<EventId>)> = alphabet
            .iter()
            .map(|e| (a.event_id(&e.name), b.event_id(&e.name)))
            .collect();
        let mut index = std::collections::HashMap::new();
        let mut pairs = vec![(a.initial(), b.initial())];
        let mut parent = vec![None];
        index.insert(pairs[0], 0usize);
        let mut head = 0;
        while head < pairs.len() {
            let (p, q) = pairs[head];
            for (e, &(ea, eb)) in ids.iter().enumerate() {
                let np = match ea {
                    Some(ea) => match a.successor(p, ea) {
                        Some(t) => t,
                        None => continue,
                    },
                    None => p,
                };
                let nq = match eb {
                    Some(eb) => match b.successor(q, eb) {
                        Some(t) => t,
                        None => continue,
                    },
                    None => q,
                };
                if let std::collections::hash_map::Entry::Vacant(slot) = index.entry((np, nq)) {
                    slot.insert(pairs.len());
                    pairs.push((np, nq));
                    parent.push(Some((head, alphabet[e].name.clone())));
                }
            }
            head += 1;
        }
        Ok(PairGraph { pairs, parent })
    }

    fn trace_to(&self, mut i: usize) -> Trace {
        let mut events = Vec::new();
        while let Some((p, e)) = &self.parent[i] {
            events.push(e.clone());
            i = *p;
        }
        events.reverse();
        Trace(events)
    }
}

/// Checks `candidate` against `plant`: in every reachable pair of
/// `plant ∥ candidate`, an uncontrollable event of the candidate's alphabet
/// that the plant enables must be enabled by the candidate too.
///
/// Events outside the candidate's alphabet are never restricted by it.
pub fn check_controllability(
    plant: &Automaton,
    candidate: &Automaton,
) -> Result<ControllabilityReport, AutomatonError> {
    let graph = PairGraph::explore(plant, candidate)?;
    // (plant id, candidate id) of every uncontrollable event both know
    let watched: Vec<(EventId, EventId)> = plant
        .event_ids()
        .filter(|&e| !plant.event(e).controllable)
        .filter_map(|e| candidate.event_id(&plant.event(e).name).map(|c| (e, c)))
        .collect();
    for (i, &(p, c)) in graph.pairs.iter().enumerate() {
        for &(ep, ec) in &watched {
            if plant.successor(p, ep).is_some() && candidate.successor(c, ec).is_none() {
                return Ok(ControllabilityReport {
                    ok: false,
                    counterexample: Some(Counterexample {
                        trace: graph.trace_to(i),
                        plant_state: plant.state_name(p).to_string(),
                        candidate_state: candidate.state_name(c).to_string(),
                        event: plant.event(ep).name.clone(),
                    }),
                });
            }
        }
    }
    Ok(ControllabilityReport {
        ok: true,
        counterexample: None,
    })
}

/// Synthesizes the supremal controllable nonblocking supervisor of
/// `specs` over `plants`.
pub fn synthesize(
    plants: &[Automaton],
    specs: &[Automaton],
) -> Result<SynthesisResult, SynthesisError> {
    let plant = compose_all(plants)?;
    let all: Vec<Automaton> = plants.iter().chain(specs).cloned().collect();
    let composite = compose_all(&all)?;
    synthesize_composite(plant, composite)
}

/// Synthesis on an already composed pair. `composite` must refine `plant`:
/// its alphabet contains the plant's and each of its words is a plant word.
pub fn synthesize_composite(
    plant: Automaton,
    composite: Automaton,
) -> Result<SynthesisResult, SynthesisError> {
    let n = composite.num_states();
    let graph = PairGraph::explore(&plant, &composite)?;

    // Uncontrollable events (composite ids) the plant enables in some
    // partner of each composite state.
    let mut required: Vec<Vec<EventId>> = vec![Vec::new(); n];
    for &(g, k) in &graph.pairs {
        for (e, _) in plant.outgoing(g) {
            let ev = plant.event(e);
            if ev.controllable {
                continue;
            }
            let ke = composite
                .event_id(&ev.name)
                .expect("composite alphabet contains the plant alphabet");
            if !required[k.0].contains(&ke) {
                required[k.0].push(ke);
            }
        }
    }
    let preds = composite.predecessors();

    let mut kept = vec![true; n];
    let mut removed_states = Vec::new();
    let mut iterations = 0;
    let initial = composite.initial().0;

    let remove = |s: usize,
                  reason: RemovalReason,
                  iteration: usize,
                  kept: &mut Vec<bool>,
                  removed: &mut Vec<RemovedState>| {
        kept[s] = false;
        removed.push(RemovedState {
            state: composite.state_name(StateId(s)).to_string(),
            reason,
            iteration,
        });
    };

    loop {
        iterations += 1;
        let mut changed = false;

        // coreachability inside the retained states
        let mut co = vec![false; n];
        let mut stack: Vec<usize> = (0..n)
            .filter(|&s| kept[s] && composite.is_marked(StateId(s)))
            .collect();
        for &s in &stack {
            co[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &preds[s] {
                if kept[p] && !co[p] {
                    co[p] = true;
                    stack.push(p);
                }
            }
        }
        for s in 0..n {
            if kept[s] && !co[s] {
                remove(
                    s,
                    RemovalReason::NotCoreachable,
                    iterations,
                    &mut kept,
                    &mut removed_states,
                );
                changed = true;
            }
        }

        // uncontrollable back-propagation
        let is_bad = |s: usize, kept: &[bool]| {
            required[s]
                .iter()
                .any(|&u| match composite.successor(StateId(s), u) {
                    Some(t) => !kept[t.0],
                    None => true,
                })
        };
        let mut queue: VecDeque<usize> = (0..n).filter(|&s| kept[s]).collect();
        while let Some(s) = queue.pop_front() {
            if !kept[s] || !is_bad(s, &kept) {
                continue;
            }
            remove(
                s,
                RemovalReason::UncontrollablePredecessor,
                iterations,
                &mut kept,
                &mut removed_states,
            );
            changed = true;
            queue.extend(preds[s].iter().copied().filter(|&p| kept[p]));
        }

        if !kept[initial] {
            return Err(SynthesisError::EmptySupervisor {
                removed_states,
                iterations,
            });
        }
        if !changed {
            break;
        }
    }

    // drop what the cuts disconnected
    let mut reach = vec![false; n];
    let mut queue = VecDeque::from([initial]);
    reach[initial] = true;
    while let Some(s) = queue.pop_front() {
        for (_, t) in composite.outgoing(StateId(s)) {
            if kept[t.0] && !reach[t.0] {
                reach[t.0] = true;
                queue.push_back(t.0);
            }
        }
    }
    for s in 0..n {
        if kept[s] && !reach[s] {
            remove(
                s,
                RemovalReason::Unreachable,
                iterations,
                &mut kept,
                &mut removed_states,
            );
        }
    }

    let supervisor = composite
        .restrict(&kept)
        .with_name(format!("sup({})", composite.name()));
    let certificates = Certificates {
        controllable: check_controllability(&plant, &supervisor)?.ok,
        nonblocking: supervisor.is_nonblocking().nonblocking,
    };
    Ok(SynthesisResult {
        supervisor,
        plant,
        composite,
        removed_states,
        iterations,
        certificates,
    })
}
