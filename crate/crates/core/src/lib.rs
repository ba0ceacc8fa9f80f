//! Supervisory control for assembly sequence planning.
//!
//! Tasks and ordering constraints are modeled as finite automata
//! ([`modeling`]), composed and reduced to the least restrictive
//! controllable, nonblocking supervisor ([`synthesis`]), whose complete
//! sequences are the feasible assembly sequences ([`sequences`]).

pub mod automata;
pub mod modeling;
pub mod sequences;
pub mod synthesis;

pub use automata::{
    compose_all, isomorphic, synchronous_composition, Automaton, AutomatonError, Event, EventId,
    Execution, StateId, Trace,
};
pub use modeling::{AssemblyModel, ModelError, TaskKind, TaskSpec};
pub use sequences::{count_sequences, enumerate_sequences, SequenceCount, SequenceSet};
pub use synthesis::{check_controllability, synthesize, SynthesisError, SynthesisResult};
