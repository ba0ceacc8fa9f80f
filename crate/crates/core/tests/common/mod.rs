//! Random automata and brute-force helpers shared by the integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use sct_core::{Automaton, Event, Execution};

/// Events `e0..` of a shared pool; even indices are controllable.
pub fn event_pool(n: usize) -> Vec<Event> {
    (0..n)
        .map(|i| Event::new(format!("e{i}"), i % 2 == 0))
        .collect()
}

/// A random deterministic automaton over `alphabet`: each `(state, event)`
/// pair is defined with probability `density`, each state marked with
/// probability `marked`.
pub fn random_automaton(
    rng: &mut impl Rng,
    name: &str,
    states: usize,
    alphabet: &[Event],
    density: f64,
    marked: f64,
) -> Automaton {
    let names: Vec<String> = (0..states).map(|i| i.to_string()).collect();
    let mut transitions = Vec::new();
    for s in &names {
        for e in alphabet {
            if rng.gen_bool(density) {
                let t = names.choose(rng).unwrap();
                transitions.push((s.clone(), e.name.clone(), t.clone()));
            }
        }
    }
    let marks: Vec<&String> = names.iter().filter(|_| rng.gen_bool(marked)).collect();
    Automaton::new(
        name,
        names.clone(),
        alphabet.iter().cloned(),
        transitions,
        "0",
        marks,
    )
    .unwrap()
}

/// A random sub-alphabet of `pool` with `size` events.
pub fn pick_events(rng: &mut impl Rng, pool: &[Event], size: usize) -> Vec<Event> {
    let mut v: Vec<Event> = pool
        .choose_multiple(rng, size.min(pool.len()))
        .cloned()
        .collect();
    v.sort();
    v
}

/// `Some(marked?)` if the word is defined, `None` otherwise.
pub fn run<S: AsRef<str>>(a: &Automaton, word: &[S]) -> Option<bool> {
    match a.execute(word).ok()? {
        Execution::Reached(s) => Some(a.is_marked(s)),
        Execution::Undefined { .. } => None,
    }
}

/// Projection of `word` onto the events of `a`.
pub fn project<'w>(a: &Automaton, word: &'w [String]) -> Vec<&'w String> {
    word.iter().filter(|e| a.event_id(e).is_some()).collect()
}
