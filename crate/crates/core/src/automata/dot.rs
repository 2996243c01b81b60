use std::fmt::Write;

use serde_json::{json, Value};

use super::dfa::{chr, Dfa};
use super::extended::ExtendedDfa;

fn quote(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl Dfa {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  init [shape=point];\n  init -> q0;\n");
        for q in 0..self.num_states() {
            let shape = if self.is_accepting(q) { "doublecircle" } else { "circle" };
            writeln!(out, "  q{q} [shape={shape}];").unwrap();
        }
        for q in 0..self.num_states() {
            for (c, t) in self.transitions(q) {
                writeln!(out, "  q{q} -> q{t} [label=\"{}\"];", quote(&chr(c).to_string())).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> Value {
        let transitions: Vec<Value> = (0..self.num_states())
            .flat_map(|q| self.transitions(q).map(move |(c, t)| json!({"from": q, "char": chr(c).to_string(), "to": t})))
            .collect();
        let accepting: Vec<usize> = (0..self.num_states()).filter(|&q| self.is_accepting(q)).collect();
        json!({
            "states": self.num_states(),
            "initial": 0,
            "accepting": accepting,
            "transitions": transitions,
            "regex": self.to_regex(),
        })
    }
}

impl ExtendedDfa {
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph extended {{\n  rankdir=LR;\n  init [shape=point];\n  init -> q{};\n", self.initial);
        for q in self.live_states() {
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            writeln!(out, "  q{q} [shape={shape}];").unwrap();
        }
        for (q, es) in self.edges.iter().enumerate() {
            for (s, t) in es {
                writeln!(out, "  q{q} -> q{t} [label=\"{}\"];", quote(&s.render())).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_line_per_transition() {
        let d = Dfa::from_literal("ab").unwrap();
        let dot = d.to_dot();
        assert_eq!(dot.lines().filter(|l| l.contains("label=")).count(), 2);
        assert_eq!(d.to_json()["states"], 3);
    }
}
