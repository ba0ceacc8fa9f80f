//! JSON model files.
//!
//! A model file lists events, literal automata, tasks, precedence edges and
//! dynamic constraint patterns. Output is pretty-printed with a fixed field
//! order, so saving a loaded file reproduces it byte for byte.
//!
//! An automaton file uses the same layout with exactly one automaton and no
//! precedence or dynamic entries; its `tasks` list is optional metadata.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use sct_core::modeling::{AutomatonKind, DynamicConstraint};
use sct_core::{AssemblyModel, Automaton, Event, TaskSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid model: {0}")]
    Validation(String),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

fn invalid(msg: impl ToString) -> FormatError {
    FormatError::Validation(msg.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileKind {
    Plant,
    Spec,
    /// Only in automaton files.
    Supervisor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonEntry {
    pub name: String,
    pub kind: FileKind,
    /// Event names; when absent, the events used by `transitions`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
    pub states: Vec<String>,
    pub initial: String,
    pub marked: Vec<String>,
    /// `[source, event, target]`.
    pub transitions: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default)]
    pub events: Vec<Event>,
    #[serde(default)]
    pub automata: Vec<AutomatonEntry>,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
    #[serde(default)]
    pub precedence: Vec<(String, String)>,
    #[serde(default)]
    pub dynamic: Vec<DynamicConstraint>,
}

impl ModelFile {
    fn parse(text: &str) -> Result<ModelFile, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model files always serialize");
        s.push('\n');
        s
    }

    fn event_table(&self) -> Result<BTreeMap<&str, bool>, FormatError> {
        let mut table = BTreeMap::new();
        for e in &self.events {
            if table.insert(e.name.as_str(), e.controllable).is_some() {
                return Err(invalid(format!("event `{}` is declared twice", e.name)));
            }
        }
        Ok(table)
    }
}

impl AutomatonEntry {
    fn build(&self, events: &BTreeMap<&str, bool>) -> Result<Automaton, FormatError> {
        let lookup = |name: &str| {
            events
                .get(name)
                .map(|&c| Event::new(name, c))
                .ok_or_else(|| {
                    invalid(format!(
                        "automaton `{}` uses undeclared event `{name}`",
                        self.name
                    ))
                })
        };
        let names: BTreeSet<&str> = match &self.alphabet {
            Some(list) => {
                let set: BTreeSet<&str> = list.iter().map(String::as_str).collect();
                if set.len() != list.len() {
                    return Err(invalid(format!(
                        "automaton `{}` lists an event twice",
                        self.name
                    )));
                }
                if let Some((_, e, _)) = self
                    .transitions
                    .iter()
                    .find(|(_, e, _)| !set.contains(e.as_str()))
                {
                    return Err(invalid(format!(
                        "automaton `{}` uses event `{e}` outside its alphabet",
                        self.name
                    )));
                }
                set
            }
            None => self
                .transitions
                .iter()
                .map(|(_, e, _)| e.as_str())
                .collect(),
        };
        let alphabet = names
            .into_iter()
            .map(lookup)
            .collect::<Result<Vec<_>, _>>()?;
        Automaton::new(
            self.name.clone(),
            self.states.clone(),
            alphabet,
            self.transitions.clone(),
            &self.initial,
            &self.marked,
        )
        .map_err(|e| invalid(format!("automaton `{}`: {e}", self.name)))
    }

    fn from_automaton(a: &Automaton, kind: FileKind) -> AutomatonEntry {
        AutomatonEntry {
            name: a.name().to_string(),
            kind,
            alphabet: Some(a.alphabet().iter().map(|e| e.name.clone()).collect()),
            states: a.states().to_vec(),
            initial: a.state_name(a.initial()).to_string(),
            marked: a
                .marked_states()
                .map(|s| a.state_name(s).to_string())
                .collect(),
            transitions: a.named_transitions(),
        }
    }
}

fn events_of<'a>(automata: impl IntoIterator<Item = &'a Automaton>) -> Vec<Event> {
    let set: BTreeSet<Event> = automata
        .into_iter()
        .flat_map(|a| a.alphabet().iter().cloned())
        .collect();
    set.into_iter().collect()
}

pub fn parse_model(text: &str) -> Result<AssemblyModel, FormatError> {
    let file = ModelFile::parse(text)?;
    let events = file.event_table()?;
    let mut b = AssemblyModel::builder().tasks(file.tasks.iter().cloned());
    for (x, y) in &file.precedence {
        b = b.precedence(x, y);
    }
    for d in &file.dynamic {
        b = b.dynamic(d.clone());
    }
    for entry in &file.automata {
        let kind = match entry.kind {
            FileKind::Plant => AutomatonKind::Plant,
            FileKind::Spec => AutomatonKind::Spec,
            FileKind::Supervisor => {
                return Err(invalid(format!(
                    "automaton `{}`: kind `supervisor` is only allowed in automaton files",
                    entry.name
                )))
            }
        };
        b = b.automaton(kind, entry.build(&events)?);
    }
    b.build().map_err(invalid)
}

pub fn model_to_string(model: &AssemblyModel) -> String {
    let explicit = model.explicit_automata();
    ModelFile {
        events: events_of(explicit.iter().map(|(_, a)| a)),
        automata: explicit
            .iter()
            .map(|(k, a)| {
                let kind = match k {
                    AutomatonKind::Plant => FileKind::Plant,
                    AutomatonKind::Spec => FileKind::Spec,
                };
                AutomatonEntry::from_automaton(a, kind)
            })
            .collect(),
        tasks: model.tasks().to_vec(),
        precedence: model.precedence().edges().to_vec(),
        dynamic: model.dynamic().to_vec(),
    }
    .render()
}

/// A single automaton with optional task metadata.
#[derive(Debug, Clone)]
pub struct AutomatonFile {
    pub automaton: Automaton,
    pub kind: FileKind,
    pub tasks: Vec<TaskSpec>,
}

pub fn parse_automaton(text: &str) -> Result<AutomatonFile, FormatError> {
    let file = ModelFile::parse(text)?;
    let events = file.event_table()?;
    if !file.precedence.is_empty() || !file.dynamic.is_empty() {
        return Err(invalid(
            "automaton files cannot contain precedence or dynamic entries",
        ));
    }
    let [entry] = file.automata.as_slice() else {
        return Err(invalid(format!(
            "automaton files contain exactly one automaton, found {}",
            file.automata.len()
        )));
    };
    Ok(AutomatonFile {
        automaton: entry.build(&events)?,
        kind: entry.kind,
        tasks: file.tasks,
    })
}

pub fn automaton_to_string(file: &AutomatonFile) -> String {
    ModelFile {
        events: events_of([&file.automaton]),
        automata: vec![AutomatonEntry::from_automaton(&file.automaton, file.kind)],
        tasks: file.tasks.clone(),
        precedence: Vec::new(),
        dynamic: Vec::new(),
    }
    .render()
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model(path: impl AsRef<Path>) -> Result<AssemblyModel, FormatError> {
    parse_model(&read(path.as_ref())?)
}

pub fn save_model(model: &AssemblyModel, path: impl AsRef<Path>) -> Result<(), FormatError> {
    write(path.as_ref(), &model_to_string(model))
}

pub fn load_automaton(path: impl AsRef<Path>) -> Result<AutomatonFile, FormatError> {
    parse_automaton(&read(path.as_ref())?)
}

pub fn save_automaton(file: &AutomatonFile, path: impl AsRef<Path>) -> Result<(), FormatError> {
    write(path.as_ref(), &automaton_to_string(file))
}
