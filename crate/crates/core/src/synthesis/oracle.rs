//! Exhaustive reference for the supremal controllable nonblocking
//! sublanguage, used to cross-check [`super::synthesize`] on small models.
//!
//! Every subset of the controllable transitions of `K` is disabled in turn;
//! the remainder is trimmed and kept if it is controllable with respect to
//! `G`. The union of the bounded languages of all kept candidates is the
//! supremal language at that bound. The search shares nothing with the
//! fixpoint beyond composition.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::SynthesisError;
use crate::automata::{compose_all, Automaton, EventId, StateId};

/// Largest number of controllable transitions of `K` the oracle accepts.
pub const ORACLE_BUDGET: usize = 16;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SupremalWords {
    pub accepted: BTreeSet<Vec<String>>,
    pub prefixes: BTreeSet<Vec<String>>,
}

pub fn brute_force_supremal(
    plants: &[Automaton],
    specs: &[Automaton],
    word_bound: usize,
) -> Result<SupremalWords, SynthesisError> {
    let g = compose_all(plants)?;
    let all: Vec<Automaton> = plants.iter().chain(specs).cloned().collect();
    let k = compose_all(&all)?;
    let n = k.num_states();

    let edges: Vec<(usize, usize, usize)> =
        k.transitions().map(|(s, e, t)| (s.0, e.0, t.0)).collect();
    let controllable: Vec<usize> = (0..edges.len())
        .filter(|&i| k.event(EventId(edges[i].1)).controllable)
        .collect();
    if controllable.len() > ORACLE_BUDGET {
        return Err(SynthesisError::OracleTooLarge {
            transitions: controllable.len(),
            budget: ORACLE_BUDGET,
        });
    }

    // plant states that accompany each K state (walk K, mirroring moves in G)
    let mut partners: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    let mut queue = VecDeque::from([(k.initial().0, g.initial().0)]);
    partners[k.initial().0].insert(g.initial().0);
    while let Some((ks, gs)) = queue.pop_front() {
        for &(s, e, t) in edges.iter().filter(|edge| edge.0 == ks) {
            let name = &k.event(EventId(e)).name;
            let gt = match g.event_id(name) {
                Some(ge) => match g.successor(StateId(gs), ge) {
                    Some(next) => next.0,
                    None => continue,
                },
                None => gs,
            };
            debug_assert_eq!(s, ks);
            if partners[t].insert(gt) {
                queue.push_back((t, gt));
            }
        }
    }
    // K-side names of uncontrollable events the plant enables per K state
    let mut must_allow: Vec<Vec<String>> = vec![Vec::new(); n];
    for (ks, gs_set) in partners.iter().enumerate() {
        for &gs in gs_set {
            for (e, _) in g.outgoing(StateId(gs)) {
                let ev = g.event(e);
                if !ev.controllable && !must_allow[ks].contains(&ev.name) {
                    must_allow[ks].push(ev.name.clone());
                }
            }
        }
    }

    let mut candidates: HashSet<Vec<bool>> = HashSet::new();
    for mask in 0u32..(1u32 << controllable.len()) {
        let mut enabled = vec![true; edges.len()];
        for (bit, &i) in controllable.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                enabled[i] = false;
            }
        }
        let Some(kept) = trim(&k, &edges, &enabled) else {
            continue;
        };
        let in_trim = |i: usize| enabled[i] && kept[edges[i].0] && kept[edges[i].2];
        let controllable_ok = (0..n).filter(|&s| kept[s]).all(|s| {
            must_allow[s].iter().all(|u| {
                edges.iter().enumerate().any(|(i, &(src, e, _))| {
                    src == s && &k.event(EventId(e)).name == u && in_trim(i)
                })
            })
        });
        if controllable_ok {
            candidates.insert((0..edges.len()).map(in_trim).collect());
        }
    }

    let mut out = SupremalWords::default();
    let mut by_source: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        by_source.entry(e.0).or_default().push(i);
    }
    for cand in &candidates {
        let mut word = Vec::new();
        walk(
            &k,
            &edges,
            &by_source,
            cand,
            k.initial().0,
            word_bound,
            &mut word,
            &mut out,
        );
    }
    Ok(out)
}

/// Reachable-and-coreachable states over the enabled edges; `None` when the
/// initial state does not survive.
fn trim(k: &Automaton, edges: &[(usize, usize, usize)], enabled: &[bool]) -> Option<Vec<bool>> {
    let n = k.num_states();
    let mut reach = vec![false; n];
    reach[k.initial().0] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for (i, &(s, _, t)) in edges.iter().enumerate() {
            if enabled[i] && reach[s] && !reach[t] {
                reach[t] = true;
                changed = true;
            }
        }
    }
    let mut co: Vec<bool> = (0..n)
        .map(|s| reach[s] && k.is_marked(StateId(s)))
        .collect();
    changed = true;
    while changed {
        changed = false;
        for (i, &(s, _, t)) in edges.iter().enumerate() {
            if enabled[i] && reach[s] && co[t] && !co[s] {
                co[s] = true;
                changed = true;
            }
        }
    }
    if co[k.initial().0] {
        Some(co)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn walk(
    k: &Automaton,
    edges: &[(usize, usize, usize)],
    by_source: &HashMap<usize, Vec<usize>>,
    cand: &[bool],
    state: usize,
    remaining: usize,
    word: &mut Vec<String>,
    out: &mut SupremalWords,
) {
    out.prefixes.insert(word.clone());
    if k.is_marked(StateId(state)) {
        out.accepted.insert(word.clone());
    }
    if remaining == 0 {
        return;
    }
    for &i in by_source.get(&state).into_iter().flatten() {
        if cand[i] {
            let (_, e, t) = edges[i];
            word.push(k.event(EventId(e)).name.clone());
            walk(k, edges, by_source, cand, t, remaining - 1, word, out);
            word.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Event;

    fn t(s: &str, e: &str, d: &str) -> (String, String, String) {
        (s.into(), e.into(), d.into())
    }

    fn task(x: &str) -> Automaton {
        let (s, d) = (format!("{x}_start"), format!("{x}_done"));
        Automaton::new(
            x,
            ["N", "E", "C"],
            [Event::controllable(&s), Event::uncontrollable(&d)],
            [t("N", &s, "E"), t("E", &d, "C")],
            "N",
            ["C"],
        )
        .unwrap()
    }

    #[test]
    fn no_specs_returns_plant_words() {
        let plant = task("A");
        let words = brute_force_supremal(std::slice::from_ref(&plant), &[], 6).unwrap();
        let lang = plant.words_up_to(6);
        assert_eq!(words.accepted, lang.accepted);
        assert_eq!(words.prefixes, lang.defined);
    }

    #[test]
    fn forbidding_every_start_leaves_nothing() {
        let spec = Automaton::new(
            "never",
            ["s"],
            [Event::controllable("A_start")],
            [],
            "s",
            ["s"],
        )
        .unwrap();
        let words = brute_force_supremal(&[task("A")], &[spec], 6).unwrap();
        assert!(words.accepted.is_empty());
        assert!(words.prefixes.is_empty());
    }

    #[test]
    fn budget_enforced() {
        let plants: Vec<Automaton> = ["A", "B", "C"].into_iter().map(task).collect();
        // 27 states, 27 controllable transitions
        assert!(matches!(
            brute_force_supremal(&plants, &[], 4),
            Err(SynthesisError::OracleTooLarge { .. })
        ));
    }
}
