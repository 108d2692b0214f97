//! DOT and JSON serialization.
//!
//! JSON layout, shared by both automaton kinds:
//!
//! ```json
//! {
//!   "kind": "M",
//!   "field": {"p": 5, "k": 1},
//!   "alphabet": [{"name": "f", "a": "0", "b": "2"}, ...],
//!   "states": [{"id": 0, "accepting": true, "label": "{I,(2),(3)}"}, ...],
//!   "start": 0,
//!   "transitions": [{"from": 0, "letter": 0, "to": 0}, ...]
//! }
//! ```
//!
//! `letter` is an index into `alphabet`. For the interim automaton a state
//! label is `I`, `<a>` or `(a)`; for the partial DFA it is the set of interim
//! states it stands for.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::field::FqCtx;
use crate::monoid::{Alphabet, MonicQuad};

use super::interim::{format_subset, parse_subset, AutomatonN, ExportFormat};
use super::partial::PartialDfaM;
use super::AutomatonError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u32,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterJson {
    pub name: String,
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateJson {
    pub id: u32,
    pub accepting: bool,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionJson {
    pub from: u32,
    pub letter: usize,
    pub to: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonJson {
    pub kind: String,
    pub field: FieldJson,
    pub alphabet: Vec<LetterJson>,
    pub states: Vec<StateJson>,
    pub start: u32,
    pub transitions: Vec<TransitionJson>,
}

struct GraphView {
    name: &'static str,
    /// `(id, node name, label, accepting)`
    states: Vec<(u32, String, String, bool)>,
    transitions: Vec<(u32, usize, u32)>,
}

fn alphabet_json(alphabet: &Alphabet) -> Vec<LetterJson> {
    let ctx = alphabet.ctx();
    alphabet
        .letters()
        .iter()
        .zip(alphabet.names())
        .map(|(l, n)| LetterJson {
            name: n.clone(),
            a: ctx.format(l.a),
            b: ctx.format(l.b),
        })
        .collect()
}

fn field_json(ctx: &FqCtx) -> FieldJson {
    FieldJson {
        p: ctx.characteristic(),
        k: ctx.degree(),
    }
}

impl AutomatonN {
    fn view(&self, trim: bool) -> GraphView {
        let ctx = self.alphabet().ctx();
        let keep = if trim {
            self.reachable()
        } else {
            vec![true; self.num_states()]
        };
        let states = (0..self.num_states() as u32)
            .filter(|&i| keep[i as usize])
            .map(|i| {
                let label = self.state(i).display(ctx);
                (i, label.clone(), label, self.is_accepting(i))
            })
            .collect();
        let transitions = (0..self.num_states() as u32)
            .filter(|&i| keep[i as usize])
            .flat_map(|i| (0..self.alphabet().len()).map(move |l| (i, l, self.next(i, l))))
            .collect();
        GraphView {
            name: "N",
            states,
            transitions,
        }
    }

    /// Serializes the interim automaton; `trim` drops states unreachable from the start.
    pub fn export(&self, format: ExportFormat, trim: bool) -> String {
        render(&self.view(trim), self.alphabet(), format)
    }
}

impl PartialDfaM {
    fn view(&self) -> GraphView {
        let ctx = self.alphabet().ctx();
        let states = (0..self.num_states() as u32)
            .map(|i| {
                let node = if i == 0 {
                    "S".to_string()
                } else {
                    i.to_string()
                };
                (i, node, format_subset(ctx, self.subset(i)), true)
            })
            .collect();
        GraphView {
            name: "M",
            states,
            transitions: self.transitions().collect(),
        }
    }

    pub fn export(&self, format: ExportFormat) -> String {
        render(&self.view(), self.alphabet(), format)
    }

    /// Inverse of [`PartialDfaM::export`] with [`ExportFormat::Json`].
    pub fn from_json(text: &str) -> Result<PartialDfaM, AutomatonError> {
        let doc: AutomatonJson =
            serde_json::from_str(text).map_err(|e| AutomatonError::Parse(e.to_string()))?;
        if doc.kind != "M" {
            return Err(AutomatonError::Parse(format!(
                "expected kind M, found {}",
                doc.kind
            )));
        }
        let ctx = FqCtx::new(doc.field.p as u64, doc.field.k)
            .map_err(|e| AutomatonError::Parse(e.to_string()))?;
        let mut letters = Vec::new();
        let mut names = Vec::new();
        for l in &doc.alphabet {
            let parse = |s: &str| {
                ctx.parse(s)
                    .map_err(|e| AutomatonError::Parse(e.to_string()))
            };
            letters.push(MonicQuad::new(parse(&l.a)?, parse(&l.b)?));
            names.push(l.name.clone());
        }
        let alphabet = Alphabet::with_names(&ctx, letters, names)
            .map_err(|e| AutomatonError::Parse(e.to_string()))?;
        let n = doc.states.len();
        if doc
            .states
            .iter()
            .enumerate()
            .any(|(i, s)| s.id as usize != i)
        {
            return Err(AutomatonError::Parse(
                "state ids must be 0..n in order".into(),
            ));
        }
        if doc.start != 0 {
            return Err(AutomatonError::Parse("start state must be 0".into()));
        }
        let mut table = vec![vec![None; alphabet.len()]; n];
        for t in &doc.transitions {
            let row = table
                .get_mut(t.from as usize)
                .ok_or_else(|| AutomatonError::Parse(format!("unknown state {}", t.from)))?;
            let slot = row
                .get_mut(t.letter)
                .ok_or_else(|| AutomatonError::Parse(format!("unknown letter {}", t.letter)))?;
            if slot.replace(t.to as usize).is_some() {
                return Err(AutomatonError::Parse("nondeterministic transition".into()));
            }
        }
        let subsets = doc
            .states
            .iter()
            .map(|s| parse_subset(&ctx, &s.label))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PartialDfaM::from_table(&alphabet, table)?.with_subsets(subsets))
    }
}

fn render(view: &GraphView, alphabet: &Alphabet, format: ExportFormat) -> String {
    match format {
        ExportFormat::Dot => render_dot(view, alphabet),
        ExportFormat::Json => render_json(view, alphabet),
        ExportFormat::Text => render_text(view, alphabet),
    }
}

fn node_name(view: &GraphView, id: u32) -> &str {
    view.states
        .iter()
        .find(|s| s.0 == id)
        .map(|s| s.1.as_str())
        .unwrap_or("?")
}

fn render_dot(view: &GraphView, alphabet: &Alphabet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", view.name);
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  node [shape=circle];");
    let _ = writeln!(out, "  __start [shape=point];");
    let _ = writeln!(out, "  __start -> \"{}\";", node_name(view, 0));
    for (_, name, _, accepting) in &view.states {
        let shape = if *accepting { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  \"{name}\" [shape={shape}];");
    }
    for &(from, l, to) in &view.transitions {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            node_name(view, from),
            node_name(view, to),
            alphabet.names()[l]
        );
    }
    out.push_str("}\n");
    out
}

fn render_json(view: &GraphView, alphabet: &Alphabet) -> String {
    let doc = AutomatonJson {
        kind: view.name.to_string(),
        field: field_json(alphabet.ctx()),
        alphabet: alphabet_json(alphabet),
        states: view
            .states
            .iter()
            .map(|(id, _, label, accepting)| StateJson {
                id: *id,
                accepting: *accepting,
                label: label.clone(),
            })
            .collect(),
        start: 0,
        transitions: view
            .transitions
            .iter()
            .map(|&(from, letter, to)| TransitionJson { from, letter, to })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

fn render_text(view: &GraphView, alphabet: &Alphabet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "automaton {}: {} states", view.name, view.states.len());
    for (id, name, label, accepting) in &view.states {
        let mark = if *accepting { "*" } else { " " };
        let edges: Vec<String> = view
            .transitions
            .iter()
            .filter(|t| t.0 == *id)
            .map(|&(_, l, to)| format!("{}->{}", alphabet.names()[l], node_name(view, to)))
            .collect();
        if name == label {
            let _ = writeln!(out, "{mark} {name}: {}", edges.join(" "));
        } else {
            let _ = writeln!(out, "{mark} {name} {label}: {}", edges.join(" "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{f3_maximal, f5_pair};

    #[test]
    fn dot_for_two_letter_automaton() {
        let m = PartialDfaM::from_interim(&AutomatonN::build(&f5_pair()).unwrap());
        let dot = m.export(ExportFormat::Dot);
        assert_eq!(dot.matches("shape=doublecircle").count(), 4);
        assert_eq!(dot.matches("[label=").count(), 4);
        assert!(dot.contains("\"S\" -> \"S\" [label=\"f\"]"));
        assert!(dot.starts_with("digraph M {"));
    }

    #[test]
    fn json_round_trip() {
        for s in [
            f5_pair(),
            f3_maximal(),
            Alphabet::maximal(&FqCtx::new(3, 2).unwrap()),
        ] {
            let m = PartialDfaM::from_interim(&AutomatonN::build(&s).unwrap());
            let text = m.export(ExportFormat::Json);
            let back = PartialDfaM::from_json(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(back.export(ExportFormat::Json), text);
        }
    }

    #[test]
    fn json_rejects_malformed() {
        assert!(PartialDfaM::from_json("{").is_err());
        let m = PartialDfaM::from_interim(&AutomatonN::build(&f5_pair()).unwrap());
        let mut doc: AutomatonJson = serde_json::from_str(&m.export(ExportFormat::Json)).unwrap();
        doc.transitions.push(TransitionJson {
            from: 0,
            letter: 0,
            to: 1,
        });
        let text = serde_json::to_string(&doc).unwrap();
        assert!(PartialDfaM::from_json(&text).is_err());
    }

    #[test]
    fn interim_trim_drops_unreachable() {
        let n = AutomatonN::build(&f5_pair())
            .unwrap()
            .merge_distinguished()
            .unwrap();
        let full = n.export(ExportFormat::Dot, false);
        let trimmed = n.export(ExportFormat::Dot, true);
        assert!(full.contains("\"(0)\""));
        assert!(!trimmed.contains("\"(0)\""));
        assert_eq!(trimmed.matches("[label=").count(), 10);
        let doc: AutomatonJson =
            serde_json::from_str(&n.export(ExportFormat::Json, false)).unwrap();
        assert_eq!(doc.kind, "N");
        assert_eq!(doc.states.len(), 6);
    }

    #[test]
    fn text_table() {
        let m = PartialDfaM::from_interim(&AutomatonN::build(&f5_pair()).unwrap());
        let text = m.export(ExportFormat::Text);
        assert!(text.starts_with("automaton M: 4 states"));
    }
}
