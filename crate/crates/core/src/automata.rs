//! Deterministic finite automata over named events.
//!
//! An [`Automaton`] is the usual 5-tuple: a finite ordered state set, an
//! alphabet of [`Event`]s (each flagged controllable or uncontrollable), a
//! partial transition function, an initial state and a set of marked states.
//! Values are immutable once built; every operation returns a new automaton.
//!
//! States and events are addressed by dense indices ([`StateId`],
//! [`EventId`]). The alphabet is always kept sorted by event name so that
//! exploration orders, and therefore output files, are deterministic.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A named event together with its controllability flag.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Event {
    pub name: String,
    pub controllable: bool,
}

impl Event {
    pub fn new(name: impl Into<String>, controllable: bool) -> Self {
        Event {
            name: name.into(),
            controllable,
        }
    }

    pub fn controllable(name: impl Into<String>) -> Self {
        Self::new(name, true)
    }

    pub fn uncontrollable(name: impl Into<String>) -> Self {
        Self::new(name, false)
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.controllable {
            write!(f, "{}", self.name)
        } else {
            write!(f, "!{}", self.name)
        }
    }
}

/// Index of a state inside one automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

/// Index of an event inside one automaton's (sorted) alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventId(pub usize);

/// A word over event names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Trace(pub Vec<String>);

impl Trace {
    pub fn new() -> Self {
        Trace(Vec::new())
    }

    pub fn events(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, event: impl Into<String>) {
        self.0.push(event.into());
    }

    pub fn pop(&mut self) -> Option<String> {
        self.0.pop()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(" "))
    }
}

impl<S: Into<String>> FromIterator<S> for Trace {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Trace(iter.into_iter().map(Into::into).collect())
    }
}

impl From<Vec<String>> for Trace {
    fn from(events: Vec<String>) -> Self {
        Trace(events)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("automaton `{0}` has no states")]
    EmptyStateSet(String),
    #[error("state `{0}` is declared twice")]
    DuplicateState(String),
    #[error("state `{state}` has more than one successor on event `{event}`")]
    DuplicateTransition { state: String, event: String },
    #[error("dangling reference: {0}")]
    DanglingReference(String),
    #[error("event `{0}` is used with conflicting controllability flags")]
    ControllabilityMismatch(String),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
}

/// Result of running a word from the initial state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    /// Every event was defined; the run ended in this state.
    Reached(StateId),
    /// The event at `position` (0-based) has no transition.
    Undefined { position: usize },
}

/// A reachable state from which no marked state can be reached, with the
/// shortest word leading to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub state: StateId,
    pub trace: Trace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonblockingReport {
    pub nonblocking: bool,
    /// All reachable, non-coreachable states in breadth-first order.
    pub blocking: Vec<StateId>,
    pub witness: Option<Witness>,
}

/// Words of bounded length, split into marked words and defined words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundedLanguage {
    pub accepted: BTreeSet<Vec<String>>,
    pub defined: BTreeSet<Vec<String>>,
}

/// A deterministic finite automaton. See the module docs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    name: String,
    states: Vec<String>,
    state_index: HashMap<String, usize>,
    alphabet: Vec<Event>,
    /// Row-major `states x alphabet` transition table.
    delta: Vec<Option<usize>>,
    initial: usize,
    marked: Vec<bool>,
}

impl Automaton {
    /// Builds and validates an automaton from named parts.
    ///
    /// Transitions are `(source, event, target)` triples. Repeating an
    /// identical triple is accepted; two different targets for one
    /// `(source, event)` pair is a [`AutomatonError::DuplicateTransition`].
    pub fn new<S, E, T, M>(
        name: impl Into<String>,
        states: S,
        alphabet: E,
        transitions: T,
        initial: &str,
        marked: M,
    ) -> Result<Automaton, AutomatonError>
    where
        S: IntoIterator,
        S::Item: Into<String>,
        E: IntoIterator<Item = Event>,
        T: IntoIterator<Item = (String, String, String)>,
        M: IntoIterator,
        M::Item: AsRef<str>,
    {
        let name = name.into();
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if states.is_empty() {
            return Err(AutomatonError::EmptyStateSet(name));
        }
        let mut state_index = HashMap::with_capacity(states.len());
        for (i, s) in states.iter().enumerate() {
            if state_index.insert(s.clone(), i).is_some() {
                return Err(AutomatonError::DuplicateState(s.clone()));
            }
        }

        let mut events: BTreeMap<String, bool> = BTreeMap::new();
        for e in alphabet {
            match events.get(&e.name) {
                Some(&flag) if flag != e.controllable => {
                    return Err(AutomatonError::ControllabilityMismatch(e.name));
                }
                _ => {
                    events.insert(e.name, e.controllable);
                }
            }
        }
        let alphabet: Vec<Event> = events
            .into_iter()
            .map(|(name, controllable)| Event { name, controllable })
            .collect();
        let ne = alphabet.len();

        let lookup_state = |s: &str, role: &str| {
            state_index
                .get(s)
                .copied()
                .ok_or_else(|| AutomatonError::DanglingReference(format!("{role} state `{s}`")))
        };

        let initial = lookup_state(initial, "initial")?;
        let mut marked_flags = vec![false; states.len()];
        for m in marked {
            marked_flags[lookup_state(m.as_ref(), "marked")?] = true;
        }

        let mut delta = vec![None; states.len() * ne];
        for (src, ev, dst) in transitions {
            let s = lookup_state(&src, "transition source")?;
            let t = lookup_state(&dst, "transition target")?;
            let e = alphabet
                .binary_search_by(|x| x.name.as_str().cmp(ev.as_str()))
                .map_err(|_| {
                    AutomatonError::DanglingReference(format!("transition event `{ev}`"))
                })?;
            let slot = &mut delta[s * ne + e];
            match *slot {
                Some(existing) if existing != t => {
                    return Err(AutomatonError::DuplicateTransition {
                        state: src,
                        event: ev,
                    });
                }
                _ => *slot = Some(t),
            }
        }

        Ok(Automaton {
            name,
            states,
            state_index,
            alphabet,
            delta,
            initial,
            marked: marked_flags,
        })
    }

    /// Assembles an automaton from already-validated index data.
    pub(crate) fn from_parts(
        name: String,
        states: Vec<String>,
        alphabet: Vec<Event>,
        delta: Vec<Option<usize>>,
        initial: usize,
        marked: Vec<bool>,
    ) -> Automaton {
        debug_assert_eq!(delta.len(), states.len() * alphabet.len());
        debug_assert!(alphabet.windows(2).all(|w| w[0].name < w[1].name));
        let state_index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Automaton {
            name,
            states,
            state_index,
            alphabet,
            delta,
            initial,
            marked,
        }
    }

    /// The single marked state automaton with an empty alphabet; the neutral
    /// element of synchronous composition.
    pub fn unit() -> Automaton {
        Automaton::from_parts(
            "unit".into(),
            vec!["u".into()],
            Vec::new(),
            Vec::new(),
            0,
            vec![true],
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Automaton {
        self.name = name.into();
        self
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().filter(|t| t.is_some()).count()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied().map(StateId)
    }

    pub fn alphabet(&self) -> &[Event] {
        &self.alphabet
    }

    pub fn event(&self, e: EventId) -> &Event {
        &self.alphabet[e.0]
    }

    pub fn event_id(&self, name: &str) -> Option<EventId> {
        self.alphabet
            .binary_search_by(|x| x.name.as_str().cmp(name))
            .ok()
            .map(EventId)
    }

    pub fn event_ids(&self) -> impl Iterator<Item = EventId> {
        (0..self.alphabet.len()).map(EventId)
    }

    pub fn initial(&self) -> StateId {
        StateId(self.initial)
    }

    pub fn is_marked(&self, s: StateId) -> bool {
        self.marked[s.0]
    }

    pub fn marked_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.marked
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| StateId(i))
    }

    pub fn successor(&self, s: StateId, e: EventId) -> Option<StateId> {
        self.delta[s.0 * self.alphabet.len() + e.0].map(StateId)
    }

    /// Successor by event name; `None` when the event is outside the
    /// alphabet or undefined at `s`.
    pub fn successor_by_name(&self, s: StateId, event: &str) -> Option<StateId> {
        self.event_id(event).and_then(|e| self.successor(s, e))
    }

    /// Outgoing transitions of `s` in alphabet order.
    pub fn outgoing(&self, s: StateId) -> impl Iterator<Item = (EventId, StateId)> + '_ {
        let ne = self.alphabet.len();
        self.delta[s.0 * ne..(s.0 + 1) * ne]
            .iter()
            .enumerate()
            .filter_map(|(e, t)| t.map(|t| (EventId(e), StateId(t))))
    }

    /// All transitions as `(source, event, target)` in state then alphabet order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, EventId, StateId)> + '_ {
        self.state_ids()
            .flat_map(move |s| self.outgoing(s).map(move |(e, t)| (s, e, t)))
    }

    /// Transitions rendered with names, as used by the model file format.
    pub fn named_transitions(&self) -> Vec<(String, String, String)> {
        self.transitions()
            .map(|(s, e, t)| {
                (
                    self.states[s.0].clone(),
                    self.alphabet[e.0].name.clone(),
                    self.states[t.0].clone(),
                )
            })
            .collect()
    }

    pub fn enabled_events(&self, s: StateId) -> Result<Vec<&Event>, AutomatonError> {
        if s.0 >= self.states.len() {
            return Err(AutomatonError::UnknownState(format!("#{}", s.0)));
        }
        Ok(self.outgoing(s).map(|(e, _)| &self.alphabet[e.0]).collect())
    }

    /// Runs `trace` from the initial state. All events are resolved against
    /// the alphabet before stepping.
    pub fn execute<S: AsRef<str>>(&self, trace: &[S]) -> Result<Execution, AutomatonError> {
        let ids = trace
            .iter()
            .map(|e| {
                self.event_id(e.as_ref())
                    .ok_or_else(|| AutomatonError::UnknownEvent(e.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut cur = self.initial();
        for (position, e) in ids.into_iter().enumerate() {
            match self.successor(cur, e) {
                Some(next) => cur = next,
                None => return Ok(Execution::Undefined { position }),
            }
        }
        Ok(Execution::Reached(cur))
    }

    /// Forward closure from the initial state.
    pub fn reachable_states(&self) -> BTreeSet<StateId> {
        self.bfs_order().into_iter().collect()
    }

    /// Reachable states in breadth-first discovery order (events in
    /// alphabet order).
    pub fn bfs_order(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.states.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen[self.initial] = true;
        queue.push_back(self.initial());
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for (_, t) in self.outgoing(s) {
                if !seen[t.0] {
                    seen[t.0] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Backward closure from the marked states.
    pub fn coreachable_states(&self) -> BTreeSet<StateId> {
        self.coreachable_mask()
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c)
            .map(|(i, _)| StateId(i))
            .collect()
    }

    pub(crate) fn coreachable_mask(&self) -> Vec<bool> {
        let preds = self.predecessors();
        let mut co = self.marked.clone();
        let mut stack: Vec<usize> = (0..self.states.len()).filter(|&i| co[i]).collect();
        while let Some(s) = stack.pop() {
            for &p in &preds[s] {
                if !co[p] {
                    co[p] = true;
                    stack.push(p);
                }
            }
        }
        co
    }

    pub(crate) fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut preds = vec![Vec::new(); self.states.len()];
        for (s, _, t) in self.transitions() {
            preds[t.0].push(s.0);
        }
        preds
    }

    /// Shortest word (ties broken by alphabet order) from the initial state
    /// to `target`, if `target` is reachable.
    pub fn shortest_trace_to(&self, target: StateId) -> Option<Trace> {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.states.len()];
        let mut seen = vec![false; self.states.len()];
        let mut queue = VecDeque::new();
        seen[self.initial] = true;
        queue.push_back(self.initial);
        while let Some(s) = queue.pop_front() {
            if s == target.0 {
                let mut events = Vec::new();
                let mut cur = s;
                while let Some((p, e)) = parent[cur] {
                    events.push(self.alphabet[e].name.clone());
                    cur = p;
                }
                events.reverse();
                return Some(Trace(events));
            }
            for (e, t) in self.outgoing(StateId(s)) {
                if !seen[t.0] {
                    seen[t.0] = true;
                    parent[t.0] = Some((s, e.0));
                    queue.push_back(t.0);
                }
            }
        }
        None
    }

    /// Checks that every reachable state can still reach a marked state.
    pub fn is_nonblocking(&self) -> NonblockingReport {
        let co = self.coreachable_mask();
        let blocking: Vec<StateId> = self.bfs_order().into_iter().filter(|s| !co[s.0]).collect();
        let witness = blocking.first().map(|&state| Witness {
            state,
            trace: self
                .shortest_trace_to(state)
                .expect("blocking states are reachable"),
        });
        NonblockingReport {
            nonblocking: blocking.is_empty(),
            blocking,
            witness,
        }
    }

    /// Keeps the states flagged in `keep` (original order), dropping every
    /// transition that touches a removed state.
    pub fn restrict(&self, keep: &[bool]) -> Automaton {
        assert!(
            keep[self.initial],
            "restriction must keep the initial state"
        );
        let ne = self.alphabet.len();
        let mut new_index = vec![usize::MAX; self.states.len()];
        let mut states = Vec::new();
        for (i, s) in self.states.iter().enumerate() {
            if keep[i] {
                new_index[i] = states.len();
                states.push(s.clone());
            }
        }
        let mut delta = vec![None; states.len() * ne];
        let mut marked = vec![false; states.len()];
        for i in (0..self.states.len()).filter(|&i| keep[i]) {
            let ni = new_index[i];
            marked[ni] = self.marked[i];
            for (e, t) in self.outgoing(StateId(i)) {
                if keep[t.0] {
                    delta[ni * ne + e.0] = Some(new_index[t.0]);
                }
            }
        }
        Automaton::from_parts(
            self.name.clone(),
            states,
            self.alphabet.clone(),
            delta,
            new_index[self.initial],
            marked,
        )
    }

    /// The reachable part, states renumbered in breadth-first order.
    /// Two deterministic automata over the same alphabet are isomorphic iff
    /// their canonical forms have equal marking and transition tables.
    pub fn canonical(&self) -> Automaton {
        let order = self.bfs_order();
        self.renumber(&order, |i| self.states[i].clone())
    }

    /// Reachable part with states named `q0..qn` in breadth-first order.
    pub fn relabeled(&self, prefix: &str) -> Automaton {
        let order = self.bfs_order();
        let mut pos = vec![0; self.states.len()];
        for (k, s) in order.iter().enumerate() {
            pos[s.0] = k;
        }
        self.renumber(&order, |i| format!("{prefix}{}", pos[i]))
    }

    fn renumber(&self, order: &[StateId], label: impl Fn(usize) -> String) -> Automaton {
        let ne = self.alphabet.len();
        let mut pos = vec![usize::MAX; self.states.len()];
        for (k, s) in order.iter().enumerate() {
            pos[s.0] = k;
        }
        let mut delta = vec![None; order.len() * ne];
        for (k, s) in order.iter().enumerate() {
            for (e, t) in self.outgoing(*s) {
                delta[k * ne + e.0] = Some(pos[t.0]);
            }
        }
        Automaton::from_parts(
            self.name.clone(),
            order.iter().map(|s| label(s.0)).collect(),
            self.alphabet.clone(),
            delta,
            0,
            order.iter().map(|s| self.marked[s.0]).collect(),
        )
    }

    /// A copy with a different initial state; the reachable part of the
    /// result is the future of `s`.
    pub fn with_initial(&self, s: StateId) -> Automaton {
        assert!(s.0 < self.states.len());
        let mut a = self.clone();
        a.initial = s.0;
        a
    }

    /// Language-equivalent automaton with the fewest states.
    ///
    /// Works on the reachable part. A missing transition is observable, so
    /// blocking states are kept apart from each other only when their defined
    /// futures differ, and no implicit sink is merged in. States of the
    /// result are named `q0..qn` in breadth-first order.
    pub fn minimize(&self) -> Automaton {
        let reach = self.bfs_order();
        let ne = self.alphabet.len();
        let mut class = vec![usize::MAX; self.states.len()];
        for s in &reach {
            class[s.0] = usize::from(self.marked[s.0]);
        }
        let mut num_classes = reach
            .iter()
            .map(|s| class[s.0])
            .collect::<BTreeSet<_>>()
            .len();
        loop {
            let mut ids: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
            let mut next = vec![usize::MAX; self.states.len()];
            for s in &reach {
                let sig: Vec<Option<usize>> = (0..ne)
                    .map(|e| self.delta[s.0 * ne + e].map(|t| class[t]))
                    .collect();
                let fresh = ids.len();
                next[s.0] = *ids.entry((class[s.0], sig)).or_insert(fresh);
            }
            class = next;
            if ids.len() == num_classes {
                break;
            }
            num_classes = ids.len();
        }

        let mut delta = vec![None; num_classes * ne];
        let mut marked = vec![false; num_classes];
        for s in &reach {
            let c = class[s.0];
            marked[c] = self.marked[s.0];
            for (e, t) in self.outgoing(*s) {
                delta[c * ne + e.0] = Some(class[t.0]);
            }
        }
        Automaton::from_parts(
            self.name.clone(),
            (0..num_classes).map(|c| format!("c{c}")).collect(),
            self.alphabet.clone(),
            delta,
            class[self.initial],
            marked,
        )
        .relabeled("q")
    }

    /// Every word of length at most `bound` that is defined from the initial
    /// state, and the subset ending in a marked state.
    pub fn words_up_to(&self, bound: usize) -> BoundedLanguage {
        let mut lang = BoundedLanguage::default();
        let mut word = Vec::new();
        self.collect_words(self.initial(), bound, &mut word, &mut lang);
        lang
    }

    fn collect_words(
        &self,
        s: StateId,
        remaining: usize,
        word: &mut Vec<String>,
        lang: &mut BoundedLanguage,
    ) {
        lang.defined.insert(word.clone());
        if self.is_marked(s) {
            lang.accepted.insert(word.clone());
        }
        if remaining == 0 {
            return;
        }
        for (e, t) in self.outgoing(s) {
            word.push(self.alphabet[e.0].name.clone());
            self.collect_words(t, remaining - 1, word, lang);
            word.pop();
        }
    }
}

/// True iff the reachable parts of `a` and `b` are isomorphic and the
/// alphabets agree.
pub fn isomorphic(a: &Automaton, b: &Automaton) -> bool {
    if a.alphabet != b.alphabet {
        return false;
    }
    let (ca, cb) = (a.canonical(), b.canonical());
    ca.marked == cb.marked && ca.delta == cb.delta
}

/// Merges alphabets, failing on a controllability disagreement.
pub(crate) fn merge_alphabets<'a>(
    alphabets: impl IntoIterator<Item = &'a [Event]>,
) -> Result<Vec<Event>, AutomatonError> {
    let mut events: BTreeMap<&str, bool> = BTreeMap::new();
    for alphabet in alphabets {
        for e in alphabet {
            if let Some(&flag) = events.get(e.name.as_str()) {
                if flag != e.controllable {
                    return Err(AutomatonError::ControllabilityMismatch(e.name.clone()));
                }
            } else {
                events.insert(&e.name, e.controllable);
            }
        }
    }
    Ok(events.into_iter().map(|(n, c)| Event::new(n, c)).collect())
}

/// Reachable synchronous product of any number of automata.
///
/// A shared event moves every component that has it in its alphabet and is
/// defined only if all of them define it; a private event moves its owner
/// alone. Composite states are named by joining component names with `.`.
fn product(components: &[&Automaton]) -> Result<Automaton, AutomatonError> {
    if components.is_empty() {
        return Ok(Automaton::unit());
    }
    let alphabet = merge_alphabets(components.iter().map(|a| a.alphabet()))?;
    let ne = alphabet.len();
    // local[c][e]: component c's index for merged event e
    let local: Vec<Vec<Option<EventId>>> = components
        .iter()
        .map(|a| alphabet.iter().map(|e| a.event_id(&e.name)).collect())
        .collect();

    let init: Vec<usize> = components.iter().map(|a| a.initial).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    index.insert(init.clone(), 0);
    tuples.push(init);
    let mut delta: Vec<Option<usize>> = Vec::new();
    let mut head = 0;
    while head < tuples.len() {
        let cur = tuples[head].clone();
        head += 1;
        #[allow(clippy::needless_range_loop)]
        for e in 0..ne {
            let mut next = cur.clone();
            let mut defined = true;
            for (c, a) in components.iter().enumerate() {
                if let Some(le) = local[c][e] {
                    match a.successor(StateId(cur[c]), le) {
                        Some(t) => next[c] = t.0,
                        None => {
                            defined = false;
                            break;
                        }
                    }
                }
            }
            if !defined {
                delta.push(None);
                continue;
            }
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = tuples.len();
                    index.insert(next.clone(), id);
                    tuples.push(next);
                    id
                }
            };
            delta.push(Some(id));
        }
    }

    let states = tuples
        .iter()
        .map(|t| {
            t.iter()
                .zip(components)
                .map(|(&s, a)| a.states[s].as_str())
                .collect::<Vec<_>>()
                .join(".")
        })
        .collect();
    let marked = tuples
        .iter()
        .map(|t| t.iter().zip(components).all(|(&s, a)| a.marked[s]))
        .collect();
    let name = components
        .iter()
        .map(|a| a.name.as_str())
        .collect::<Vec<_>>()
        .join("||");
    Ok(Automaton::from_parts(
        name, states, alphabet, delta, 0, marked,
    ))
}

/// `a ∥ b`, restricted to the part reachable from `(initial_a, initial_b)`.
pub fn synchronous_composition(a: &Automaton, b: &Automaton) -> Result<Automaton, AutomatonError> {
    product(&[a, b])
}

/// Synchronous composition of a list of automata.
///
/// Equal (state names and order included) to the left fold of
/// [`synchronous_composition`]; computed in one pass over state tuples.
/// An empty list yields [`Automaton::unit`].
pub fn compose_all(automata: &[Automaton]) -> Result<Automaton, AutomatonError> {
    let refs: Vec<&Automaton> = automata.iter().collect();
    product(&refs)
}
