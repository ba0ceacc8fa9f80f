//! Command implementations. Each returns the text for stdout and an exit
//! code; `main` only parses arguments and prints.

use std::fmt::Write;
use std::path::Path;

use sct_core::modeling::search::{find_digraph, Candidate, Target};
use sct_core::synthesis::RemovedState;
use sct_core::{
    check_controllability, compose_all, count_sequences, enumerate_sequences,
    synchronous_composition, synthesize, AssemblyModel, Automaton, AutomatonError, ModelError,
    SynthesisError,
};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::dot::{export_dot, Highlight};
use crate::format::{
    load_automaton, load_model, save_automaton, AutomatonFile, FileKind, FormatError,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Output {
        Output { stdout, code: 0 }
    }
}

fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Size {
    states: usize,
    transitions: usize,
    marked: usize,
}

impl Size {
    fn of(a: &Automaton) -> Size {
        Size {
            states: a.num_states(),
            transitions: a.num_transitions(),
            marked: a.marked_states().count(),
        }
    }
}

#[derive(Serialize)]
struct BlockingReport {
    nonblocking: bool,
    blocking_states: Vec<String>,
    witness_state: Option<String>,
    /// Breadth-first index name (`q<k>`) of the witness state.
    witness_index: Option<String>,
    witness_trace: Option<Vec<String>>,
}

fn blocking_report(a: &Automaton) -> BlockingReport {
    let report = a.is_nonblocking();
    let order = a.bfs_order();
    let index = |s| order.iter().position(|&x| x == s).map(|k| format!("q{k}"));
    BlockingReport {
        nonblocking: report.nonblocking,
        blocking_states: report
            .blocking
            .iter()
            .map(|&s| a.state_name(s).to_string())
            .collect(),
        witness_state: report
            .witness
            .as_ref()
            .map(|w| a.state_name(w.state).to_string()),
        witness_index: report.witness.as_ref().and_then(|w| index(w.state)),
        witness_trace: report.witness.map(|w| w.trace.0),
    }
}

fn write_blocking(out: &mut String, b: &BlockingReport) {
    if b.nonblocking {
        writeln!(out, "nonblocking: yes").unwrap();
        return;
    }
    writeln!(
        out,
        "nonblocking: no ({} blocking states)",
        b.blocking_states.len()
    )
    .unwrap();
    if let (Some(s), Some(k), Some(t)) = (&b.witness_state, &b.witness_index, &b.witness_trace) {
        writeln!(out, "witness: {k} {s}").unwrap();
        writeln!(out, "witness trace: {}", t.join(" ")).unwrap();
    }
}

fn all_automata(model: &AssemblyModel) -> Vec<Automaton> {
    model
        .plants()
        .iter()
        .chain(model.specs())
        .cloned()
        .collect()
}

pub fn compose(model: &Path, out: Option<&Path>, json: bool) -> Result<Output, CliError> {
    let model = load_model(model)?;
    let composite = compose_all(&all_automata(&model))?;
    if let Some(path) = out {
        save_automaton(
            &AutomatonFile {
                automaton: composite.clone(),
                kind: FileKind::Plant,
                tasks: model.tasks().to_vec(),
            },
            path,
        )?;
    }
    let blocking = blocking_report(&composite);
    if json {
        return Ok(Output::ok(to_json(&json!({
            "name": composite.name(),
            "size": Size::of(&composite),
            "blocking": blocking,
        }))));
    }
    let s = Size::of(&composite);
    let mut text = format!(
        "composite: {} states, {} transitions, {} marked\n",
        s.states, s.transitions, s.marked
    );
    write_blocking(&mut text, &blocking);
    Ok(Output::ok(text))
}

pub fn synthesize_cmd(
    model: &Path,
    minimize: bool,
    out: Option<&Path>,
    json: bool,
) -> Result<Output, CliError> {
    let model = load_model(model)?;
    let result = match synthesize(model.plants(), model.specs()) {
        Ok(r) => r,
        Err(SynthesisError::EmptySupervisor {
            removed_states,
            iterations,
        }) => {
            let msg = "no supervisor: the initial state was removed";
            let stdout = if json {
                to_json(
                    &json!({ "error": msg, "removed_states": removed_states, "iterations": iterations }),
                )
            } else {
                format!("{msg} after {iterations} iterations\n")
            };
            return Ok(Output { stdout, code: 1 });
        }
        Err(e) => return Err(e.into()),
    };
    let supervisor = if minimize {
        result
            .supervisor
            .minimize()
            .with_name(result.supervisor.name())
    } else {
        result.supervisor.clone()
    };
    if let Some(path) = out {
        save_automaton(
            &AutomatonFile {
                automaton: supervisor.clone(),
                kind: FileKind::Supervisor,
                tasks: model.tasks().to_vec(),
            },
            path,
        )?;
    }
    let count = count_sequences(&supervisor);
    if json {
        return Ok(Output::ok(to_json(&json!({
            "composite": Size::of(&result.composite),
            "supervisor": Size::of(&supervisor),
            "minimized": minimize,
            "iterations": result.iterations,
            "removed_states": result.removed_states,
            "certificates": result.certificates,
            "sequence_count": count.to_string(),
        }))));
    }
    let c = Size::of(&result.composite);
    let s = Size::of(&supervisor);
    let mut text = String::new();
    writeln!(
        text,
        "composite: {} states, {} transitions",
        c.states, c.transitions
    )
    .unwrap();
    writeln!(text, "iterations: {}", result.iterations).unwrap();
    for RemovedState {
        state,
        reason,
        iteration,
    } in &result.removed_states
    {
        writeln!(text, "removed: {state} ({reason:?}, iteration {iteration})").unwrap();
    }
    writeln!(
        text,
        "supervisor{}: {} states, {} transitions",
        if minimize { " (minimized)" } else { "" },
        s.states,
        s.transitions
    )
    .unwrap();
    writeln!(
        text,
        "controllable: {}, nonblocking: {}",
        result.certificates.controllable, result.certificates.nonblocking
    )
    .unwrap();
    writeln!(text, "complete sequences: {count}").unwrap();
    Ok(Output::ok(text))
}

/// Exit code 0 iff the supervisor is controllable for the model's plant and
/// the closed loop is nonblocking.
pub fn verify(model: &Path, supervisor: &Path, json: bool) -> Result<Output, CliError> {
    let model = load_model(model)?;
    let plant = compose_all(model.plants())?;
    let candidate = load_automaton(supervisor)?.automaton;
    let control = check_controllability(&plant, &candidate)?;
    let closed = synchronous_composition(&plant, &candidate)?;
    let blocking = blocking_report(&closed);
    let code = if control.ok && blocking.nonblocking {
        0
    } else {
        1
    };
    let stdout = if json {
        to_json(&json!({
            "ok": code == 0,
            "controllability": control,
            "blocking": blocking,
        }))
    } else {
        let mut text = String::new();
        match &control.counterexample {
            None => writeln!(text, "controllable: yes").unwrap(),
            Some(c) => {
                writeln!(text, "controllable: no").unwrap();
                writeln!(
                    text,
                    "counterexample: `{}` disabled after: {}",
                    c.event, c.trace
                )
                .unwrap();
            }
        }
        write_blocking(&mut text, &blocking);
        text
    };
    Ok(Output { stdout, code })
}

pub fn enumerate(
    file: &Path,
    max_len: usize,
    max_count: usize,
    json: bool,
) -> Result<Output, CliError> {
    let a = load_automaton(file)?.automaton;
    let set = enumerate_sequences(&a, max_len, max_count);
    if json {
        return Ok(Output::ok(to_json(&json!({
            "sequences": set.sequences,
            "complete": set.complete,
            "language_infinite": set.language_infinite,
            "bound_used": set.bound_used,
            "count": count_sequences(&a).to_string(),
        }))));
    }
    let mut text = String::new();
    for t in &set.sequences {
        writeln!(text, "{t}").unwrap();
    }
    Ok(Output::ok(text))
}

pub fn export_dot_cmd(file: &Path, json: bool) -> Result<Output, CliError> {
    let a = load_automaton(file)?.automaton;
    let dot = export_dot(&a, Highlight::default());
    Ok(Output::ok(if json {
        to_json(&json!({ "dot": dot }))
    } else {
        dot
    }))
}

fn describe(c: &Candidate) -> String {
    let edges: Vec<String> = c.edges.iter().map(|(a, b)| format!("{a}>{b}")).collect();
    let sup = c
        .supervisor
        .map_or("none".to_string(), |(s, t)| format!("{s}/{t}"));
    format!(
        "composite {}/{} blocking {} supervisor {} edges [{}]",
        c.composite_states,
        c.composite_transitions,
        c.blocking_states,
        sup,
        edges.join(" ")
    )
}

pub fn find_digraph_cmd(target: Target, nearest: usize, json: bool) -> Result<Output, CliError> {
    let outcome = find_digraph(&target, nearest)?;
    if json {
        return Ok(Output::ok(to_json(
            &json!({ "target": target, "outcome": outcome }),
        )));
    }
    let mut text = format!("examined {} acyclic digraphs\n", outcome.examined);
    writeln!(text, "matches: {}", outcome.matches.len()).unwrap();
    for c in &outcome.matches {
        writeln!(text, "  {}", describe(c)).unwrap();
    }
    if !outcome.nearest.is_empty() {
        writeln!(text, "nearest:").unwrap();
        for c in &outcome.nearest {
            writeln!(text, "  d={} {}", c.distance(&target), describe(c)).unwrap();
        }
    }
    Ok(Output::ok(text))
}
