use std::collections::{BTreeMap, BTreeSet};

use super::SynthError;
use crate::automata::{sym, Dfa, ExtendedDfa, Symbol};
use crate::imp::{parse_fragment, render, Expr, Stmt};

/// An acyclic automaton plus the states where a synthetic
/// `while(true){..}` spelling starts.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub automaton: ExtendedDfa,
    pub star_heads: BTreeSet<usize>,
}

/// Strings leading from `o` back to `o` for the first time, staying inside
/// `members`.
fn first_return(e: &ExtendedDfa, members: &BTreeSet<usize>, o: usize) -> Dfa {
    let mut index = BTreeMap::from([(o, 0usize)]);
    for &q in members {
        let next = index.len();
        index.entry(q).or_insert(next);
    }
    let done = index.len();
    let mut delta = vec![BTreeMap::new(); done + 1];
    for (&q, &i) in &index {
        for (s, t) in &e.edges[q] {
            if let (Symbol::Char(c), true) = (s, members.contains(t)) {
                delta[i].insert(*c, if *t == o { done } else { index[t] });
            }
        }
    }
    let mut accepting = vec![false; done + 1];
    accepting[done] = true;
    Dfa::from_parts(delta, accepting)
}

/// The canonical spelling of a loop running `body` forever.
fn loop_spelling(body: Stmt) -> String {
    let text = render(&Stmt::while_(Expr::bool(true), body));
    text.strip_suffix(';').unwrap_or(&text).to_string()
}

/// The statement spelled by a loop language, if it has exactly one word.
fn statement(loop_lang: &Dfa) -> Option<Stmt> {
    loop_lang.singleton().and_then(|r| parse_fragment(&r).ok())
}

/// Spells `while(true){body}` from `from` to `to` on fresh states.
fn spell(e: &mut ExtendedDfa, from: usize, body: Stmt, to: usize) -> Result<(), SynthError> {
    let chars: Vec<char> = loop_spelling(body).chars().collect();
    let mut cur = from;
    for (i, ch) in chars.iter().enumerate() {
        let next = if i + 1 == chars.len() { to } else { e.add_state(false) };
        let s = sym(*ch).map_err(|err| SynthError::UnreducibleCycles(err.to_string()))?;
        e.add_edge(cur, Symbol::Char(s), next);
        cur = next;
    }
    Ok(())
}

/// Cycle states from `h` up to, not including, `o`.
fn walk(e: &ExtendedDfa, members: &BTreeSet<usize>, h: usize, o: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = h;
    while q != o && !out.contains(&q) {
        out.push(q);
        match e.edges[q].iter().find(|(_, t)| members.contains(t)) {
            Some((_, t)) => q = *t,
            None => break,
        }
    }
    out
}

/// Copies the part of the automaton reachable from `h` without coming
/// back to `h`, and returns the copy of `h`. The copy accepts the words
/// from `h` that never return to it.
fn detach(e: &mut ExtendedDfa, h: usize, heads: &mut BTreeSet<usize>) -> usize {
    let mut copy = BTreeMap::from([(h, e.add_state(e.accepting[h]))]);
    let mut work = vec![h];
    while let Some(q) = work.pop() {
        for (s, t) in e.edges[q].clone() {
            if t == h {
                continue;
            }
            let t2 = match copy.get(&t) {
                Some(&t2) => t2,
                None => {
                    let t2 = e.add_state(e.accepting[t]);
                    if heads.contains(&t) {
                        heads.insert(t2);
                    }
                    copy.insert(t, t2);
                    work.push(t);
                    t2
                }
            };
            e.add_edge(copy[&q], s, t2);
        }
    }
    copy[&h]
}

/// Removes every cycle. A cycle whose loop string is a statement becomes a
/// spelled-out `while(true){..}`; any other cycle becomes one transition
/// reading the loop language. Only simple cycles with a single entry and a
/// single exit are handled. Components come sinks first, so the part
/// copied by `detach` is already acyclic.
pub fn reduce_cycles(a: &Dfa) -> Result<Reduced, SynthError> {
    let mut e = ExtendedDfa::from_dfa(a);
    let sccs = e.sccs().map_err(|m| SynthError::UnreducibleCycles(m.to_string()))?;
    let mut star_heads = BTreeSet::new();
    for c in sccs.iter().filter(|c| c.is_cycle) {
        let members: BTreeSet<usize> = c.states.iter().copied().collect();
        for &q in &members {
            let inner: BTreeSet<usize> = e.edges[q].iter().map(|(_, t)| *t).filter(|t| members.contains(t)).collect();
            if inner.len() != 1 {
                return Err(SynthError::UnreducibleCycles(format!("state {q} lies on nested cycles")));
            }
        }
        let Some(o) = c.exit.or(c.entry) else {
            continue;
        };
        let loop_lang = first_return(&e, &members, o);
        let body = statement(&loop_lang);
        // A statement loop whose exit sits inside a shared prefix, as in
        // (x:=x+1;)*x:=0; : read the loop at a state between the entry and
        // the exit instead, where every run still passes.
        if body.is_none() {
            let before_exit = c.entry.map(|h| walk(&e, &members, h, o)).unwrap_or_default();
            let head = before_exit.into_iter().find_map(|q| statement(&first_return(&e, &members, q)).map(|s| (q, s)));
            if let Some((q, stmt)) = head {
                let fresh = detach(&mut e, q, &mut star_heads);
                e.accepting[q] = false;
                e.edges[q].clear();
                spell(&mut e, q, stmt, fresh)?;
                star_heads.insert(q);
                continue;
            }
        }
        let fresh = e.add_state(e.accepting[o]);
        e.accepting[o] = false;
        let leaving = std::mem::take(&mut e.edges[o]).into_iter().filter(|(_, t)| !members.contains(t)).collect();
        e.edges[fresh] = leaving;
        match body {
            Some(stmt) => {
                spell(&mut e, o, stmt, fresh)?;
                star_heads.insert(o);
            }
            None => e.add_edge(o, Symbol::Bulk(loop_lang.star()), fresh),
        }
    }
    e.trim();
    Ok(Reduced { automaton: e, star_heads })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn growing() -> Dfa {
        Dfa::from_literal("x=5").unwrap().concat(&Dfa::from_literal("5").unwrap().star()).concat(&Dfa::from_literal(";").unwrap())
    }

    #[test]
    fn self_loop_becomes_one_bulk_transition() {
        let r = reduce_cycles(&growing()).unwrap();
        assert!(r.automaton.is_acyclic());
        let bulks: Vec<&Dfa> = r
            .automaton
            .edges
            .iter()
            .flatten()
            .filter_map(|(s, _)| match s {
                Symbol::Bulk(d) => Some(d),
                _ => None,
            })
            .collect();
        assert_eq!(bulks.len(), 1);
        assert_eq!(*bulks[0], Dfa::from_literal("5").unwrap().star());
        assert_eq!(r.automaton.language(), growing());
    }

    #[test]
    fn acyclic_input_is_unchanged() {
        let d = Dfa::from_strings(["x:=1;", "y:=2;"]).unwrap();
        let r = reduce_cycles(&d).unwrap();
        assert_eq!(r.automaton, ExtendedDfa::from_dfa(&d));
        assert!(r.star_heads.is_empty());
    }

    #[test]
    fn statement_cycle_is_spelled_as_a_loop() {
        let d = Dfa::from_literal("x:=1;").unwrap().star().concat(&Dfa::from_literal("y:=2;").unwrap());
        let r = reduce_cycles(&d).unwrap();
        assert!(r.automaton.is_acyclic());
        assert_eq!(r.star_heads.len(), 1);
        assert!(r.automaton.language().accepts("while(true){x:=1}y:=2;"));
    }

    #[test]
    fn loop_sharing_a_prefix_with_its_exit() {
        let lit = |s: &str| Dfa::from_literal(s).unwrap();
        let d = lit("x:=x+1;").star().concat(&lit("x:=0;"));
        let r = reduce_cycles(&d).unwrap();
        assert!(r.automaton.is_acyclic());
        assert_eq!(r.star_heads.len(), 1);
        assert!(r.automaton.language().accepts("while(true){x:=x+1}x:=0;"));
    }

    #[test]
    fn loop_read_between_entry_and_exit() {
        let lit = |s: &str| Dfa::from_literal(s).unwrap();
        let d = lit("x:=1;").concat(&lit("y:=y+1;").star()).concat(&lit("y:=0;"));
        let r = reduce_cycles(&d).unwrap();
        assert!(r.automaton.is_acyclic());
        assert!(r.automaton.language().accepts("x:=1;while(true){y:=y+1}y:=0;"));
    }

    #[test]
    fn nested_cycles_are_rejected() {
        let inner = Dfa::from_literal("bc").unwrap().star();
        let d = Dfa::from_literal("a").unwrap().concat(&inner).concat(&Dfa::from_literal("d").unwrap()).star();
        assert!(matches!(reduce_cycles(&d), Err(SynthError::UnreducibleCycles(_))));
    }
}
