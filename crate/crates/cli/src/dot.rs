//! Graphviz export.

use std::fmt::Write;

use sct_core::Automaton;

/// Which state classes get distinct styling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Highlight {
    /// Marked states: green double circle.
    pub marked: bool,
    /// Reachable states that cannot reach a marked state: dashed red.
    pub blocking: bool,
}

impl Default for Highlight {
    fn default() -> Self {
        Highlight {
            marked: true,
            blocking: true,
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders `a` as a DOT digraph. Nodes follow state order and edges follow
/// state then event order, so the output depends only on the automaton.
pub fn export_dot(a: &Automaton, highlight: Highlight) -> String {
    let blocking: Vec<bool> = {
        let mut v = vec![false; a.num_states()];
        if highlight.blocking {
            for s in a.is_nonblocking().blocking {
                v[s.0] = true;
            }
        }
        v
    };
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(a.name())).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    writeln!(out, "  __start [shape=point];").unwrap();
    for s in a.state_ids() {
        let mut attrs = vec![format!("label={}", quote(a.state_name(s)))];
        if highlight.marked && a.is_marked(s) {
            attrs.push("shape=doublecircle".into());
            attrs.push("color=green".into());
        }
        if blocking[s.0] {
            attrs.push("style=dashed".into());
            attrs.push("color=red".into());
        }
        writeln!(out, "  n{} [{}];", s.0, attrs.join(", ")).unwrap();
    }
    writeln!(out, "  __start -> n{};", a.initial().0).unwrap();
    for (s, e, t) in a.transitions() {
        let ev = a.event(e);
        let style = if ev.controllable {
            ""
        } else {
            ", style=dashed"
        };
        writeln!(
            out,
            "  n{} -> n{} [label={}{style}];",
            s.0,
            t.0,
            quote(&ev.name)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
