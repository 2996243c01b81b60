use std::collections::{BTreeSet, HashMap};

use super::dfa::Dfa;
use super::nfa::Nfa;

/// What two states must share to be merged by the widening.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    /// accepted suffixes of length at most k
    Accept(BTreeSet<Vec<u8>>),
    /// no accepted suffix that short: the strings of length at most k that
    /// can be read at all
    Read(BTreeSet<Vec<u8>>),
}

fn suffixes(d: &Dfa, q: usize, k: usize, only_accepted: bool) -> BTreeSet<Vec<u8>> {
    let mut out = BTreeSet::new();
    let mut stack = vec![(q, Vec::new())];
    while let Some((p, w)) = stack.pop() {
        if !only_accepted || d.is_accepting(p) {
            out.insert(w.clone());
        }
        if w.len() < k {
            for (c, t) in d.transitions(p) {
                let mut w2 = w.clone();
                w2.push(c);
                stack.push((t, w2));
            }
        }
    }
    out
}

fn key(d: &Dfa, q: usize, k: usize) -> Key {
    let acc = suffixes(d, q, k, true);
    if acc.is_empty() {
        Key::Read(suffixes(d, q, k, false))
    } else {
        Key::Accept(acc)
    }
}

/// Merges all states with equal keys. Returns `None` when keys are already
/// pairwise distinct.
fn quotient(d: &Dfa, k: usize) -> Option<Dfa> {
    let mut class_of: HashMap<Key, usize> = HashMap::new();
    let classes: Vec<usize> = (0..d.num_states())
        .map(|q| {
            let n = class_of.len();
            *class_of.entry(key(d, q, k)).or_insert(n)
        })
        .collect();
    if class_of.len() == d.num_states() {
        return None;
    }
    let mut nfa = Nfa::new();
    // make the initial state's class come first
    let mut order: Vec<usize> = vec![classes[0]];
    for &c in &classes {
        if !order.contains(&c) {
            order.push(c);
        }
    }
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    for _ in &order {
        nfa.add_state(false);
    }
    for q in 0..d.num_states() {
        let cq = pos[&classes[q]];
        if d.is_accepting(q) {
            nfa.accepting[cq] = true;
        }
        for (c, t) in d.transitions(q) {
            nfa.add(cq, Some(c), pos[&classes[t]]);
        }
    }
    Some(nfa.determinize())
}

/// Widening by state equivalence with parameter `k`.
///
/// If `b` adds nothing to `a`, `a` is returned unchanged. Otherwise the
/// minimal automaton of `a ∪ b` is repeatedly quotiented by the
/// equivalence "same k-bounded key" until all keys differ.
pub fn widen(a: &Dfa, b: &Dfa, k: usize) -> Dfa {
    const ROUNDS: usize = 8;
    assert!(k >= 1, "widening parameter must be positive");
    if a.includes(b) {
        return a.clone();
    }
    let mut cur = a.union(b);
    for _ in 0..ROUNDS {
        match quotient(&cur, k) {
            Some(next) if next != cur => cur = next,
            _ => break,
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(xs: &[&str]) -> Dfa {
        Dfa::from_strings(xs.iter().copied()).unwrap()
    }

    #[test]
    fn fig1_chain_stabilises() {
        let a1 = lits(&["x=5;"]);
        let a2 = widen(&a1, &lits(&["x=5;", "x=55;"]), 2);
        let a3 = widen(&a2, &a2.union(&lits(&["x=555;"])), 2);
        assert_eq!(a3.num_states(), 5);
        assert!(a3.accepts("x=55555;"));
        assert!(!a3.accepts("x=;"));
        let a4 = widen(&a3, &a3.union(&lits(&["x=5555;"])), 2);
        assert_eq!(a4, a3);
    }

    #[test]
    fn idempotent_on_equal_arguments() {
        let a = lits(&["aaab", "q"]);
        assert_eq!(widen(&a, &a, 1), a);
    }

    #[test]
    fn upper_bound_from_empty() {
        let b = lits(&["xy", "xyz"]);
        assert!(widen(&Dfa::empty(), &b, 2).includes(&b));
    }
}
