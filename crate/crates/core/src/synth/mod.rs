//! The abstract parser: from an automaton of candidate programs to a
//! control-flow graph covering every program it spells.

mod cycles;
mod lex;
mod stmts;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use cycles::{reduce_cycles, Reduced};
pub use stmts::{Fragment, Node};

use crate::automata::{Dfa, ExtendedDfa};
use crate::cfg::Cfg;
use crate::imp::Label;
use crate::label::AbsLabel;
use lex::Lexer;
use stmts::StmtParser;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("no executable statement is spelled by the automaton")]
    NoExecutablePath,
    #[error("cycles cannot be reduced: {0}")]
    UnreducibleCycles(String),
    #[error("set-valued transition in unsupported position: {0}")]
    UnsupportedBulk(String),
}

/// Program point of an automaton state. Negative, so that it never
/// collides with the labels of the host program.
pub fn lab(q: usize) -> Label {
    -(q as Label + 1)
}

#[derive(Debug, Clone)]
pub struct SynthesizedCfg {
    pub graph: Cfg<AbsLabel>,
    pub origin: Dfa,
    pub reduced: ExtendedDfa,
}

/// Top-level statements read from `q` in the reduced automaton, as
/// fragments ending at the returned state.
pub fn reduce_stmts(r: &Reduced, q: usize) -> Result<Vec<(Fragment, usize)>, SynthError> {
    let p = StmtParser::new(Lexer::new(&r.automaton), &r.star_heads);
    let out = p.reduce_stmts(q);
    check_flags(&p)?;
    Ok(out)
}

fn check_flags(p: &StmtParser) -> Result<(), SynthError> {
    match p.lx.flagged.borrow().iter().next() {
        Some(f) => Err(SynthError::UnsupportedBulk(f.clone())),
        None => Ok(()),
    }
}

pub fn synthesize(a: &Dfa) -> Result<SynthesizedCfg, SynthError> {
    let r = reduce_cycles(a)?;
    let p = StmtParser::new(Lexer::new(&r.automaton), &r.star_heads);
    let q0 = r.automaton.initial;
    let mut edges = BTreeSet::new();
    let mut exits = BTreeSet::new();
    let mut visited = BTreeSet::from([q0]);
    let mut work = vec![q0];
    while let Some(q) = work.pop() {
        for (frag, end) in p.reduce_stmts(q) {
            let place = |n: Node| match n {
                Node::At(s) => lab(s),
                Node::Exit => lab(end),
            };
            for (u, l, v) in frag {
                edges.insert((place(u), l, place(v)));
            }
            if p.lx.is_end(end) {
                exits.insert(lab(end));
            }
            if visited.insert(end) {
                work.push(end);
            }
        }
    }
    check_flags(&p)?;
    let edges = drop_subsumed(edges);
    let graph = prune(lab(q0), edges, exits);
    if graph.exits.is_empty() {
        return Err(SynthError::NoExecutablePath);
    }
    Ok(SynthesizedCfg { graph, origin: a.clone(), reduced: r.automaton })
}

/// Among parallel edges, keeps only labels not covered by another one.
fn drop_subsumed(edges: BTreeSet<(Label, AbsLabel, Label)>) -> Vec<(Label, AbsLabel, Label)> {
    let mut groups: BTreeMap<(Label, Label), Vec<AbsLabel>> = BTreeMap::new();
    for (u, l, v) in edges {
        let kept = groups.entry((u, v)).or_default();
        if kept.iter().any(|k| k.subsumes(&l)) {
            continue;
        }
        kept.retain(|k| !l.subsumes(k));
        kept.push(l);
    }
    groups.into_iter().flat_map(|((u, v), ls)| ls.into_iter().map(move |l| (u, l, v))).collect()
}

/// Keeps the edges lying on some path from the entry to an exit.
fn prune(entry: Label, edges: Vec<(Label, AbsLabel, Label)>, exits: BTreeSet<Label>) -> Cfg<AbsLabel> {
    let mut fwd = BTreeSet::from([entry]);
    let mut changed = true;
    while changed {
        changed = false;
        for (u, _, v) in &edges {
            if fwd.contains(u) && fwd.insert(*v) {
                changed = true;
            }
        }
    }
    let mut back: BTreeSet<Label> = exits.intersection(&fwd).copied().collect();
    changed = true;
    while changed {
        changed = false;
        for (u, _, v) in &edges {
            if back.contains(v) && fwd.contains(u) && back.insert(*u) {
                changed = true;
            }
        }
    }
    let edges: Vec<_> = edges.into_iter().filter(|(u, _, v)| back.contains(u) && back.contains(v)).collect();
    let mut nodes = back.clone();
    nodes.insert(entry);
    let exits = exits.intersection(&back).copied().collect();
    Cfg { nodes, edges, entry, exits }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(s: &SynthesizedCfg) -> Vec<String> {
        s.graph.edges.iter().map(|(_, l, _)| l.to_string()).collect()
    }

    #[test]
    fn single_assignment() {
        let s = synthesize(&Dfa::from_literal("x:=5;").unwrap()).unwrap();
        assert_eq!(s.graph.nodes.len(), 2);
        assert_eq!(labels(&s), vec!["x:=5"]);
    }

    #[test]
    fn two_strings_give_parallel_edges() {
        let s = synthesize(&Dfa::from_strings(["x:=5;", "y:=7;"]).unwrap()).unwrap();
        assert_eq!(s.graph.edges.len(), 2);
        assert_eq!(s.graph.exits.len(), 1);
        let (u0, _, v0) = &s.graph.edges[0];
        let (u1, _, v1) = &s.graph.edges[1];
        assert_eq!((u0, v0), (u1, v1));
    }

    #[test]
    fn growing_numeral_becomes_a_bulk_assignment() {
        let d = Dfa::from_literal("x=5").unwrap().concat(&Dfa::from_literal("5").unwrap().star()).concat(&Dfa::from_literal(";").unwrap());
        let s = synthesize(&d).unwrap();
        assert_eq!(s.graph.edges.len(), 1);
        let (_, l, _) = &s.graph.edges[0];
        let expected = Dfa::from_literal("5").unwrap().plus();
        assert!(matches!(l, AbsLabel::Assign { rhs: crate::domains::AbsExpr::BulkNum(d), .. } if *d == expected));
    }

    #[test]
    fn conditional_with_growing_branch() {
        let five = Dfa::from_literal("5").unwrap();
        let d = Dfa::from_literal("if(x<5){x:=5")
            .unwrap()
            .concat(&five.star())
            .concat(&Dfa::from_literal("}else{x:=1};").unwrap());
        let s = synthesize(&d).unwrap();
        let mut ls = labels(&s);
        ls.sort();
        assert_eq!(ls.len(), 4, "{ls:?}");
        assert!(ls.contains(&"x<5".to_string()));
        assert!(ls.contains(&"¬(x<5)".to_string()));
        assert!(ls.contains(&"x:=1".to_string()));
        assert_eq!(s.graph.exits.len(), 1);
    }

    #[test]
    fn garbage_has_no_executable_path() {
        assert_eq!(synthesize(&Dfa::from_literal("not code").unwrap()).unwrap_err(), SynthError::NoExecutablePath);
    }

    #[test]
    fn statement_loop_iterates_any_number_of_times() {
        let d = Dfa::from_literal("x:=1;").unwrap().star().concat(&Dfa::from_literal("y:=2;").unwrap());
        let s = synthesize(&d).unwrap();
        let skips = s.graph.edges.iter().filter(|(_, l, _)| l.is_skip()).count();
        assert_eq!(skips, 2);
        assert!(labels(&s).contains(&"y:=2".to_string()));
    }
}
