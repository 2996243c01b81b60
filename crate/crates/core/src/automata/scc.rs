use thiserror::Error;

use super::dfa::Dfa;

/// Strongly connected components of a graph given by adjacency lists,
/// in reverse topological order (iterative Tarjan).
pub fn strongly_connected(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1];
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(u, _)) = call.last() {
                low[u] = low[u].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scc {
    pub states: Vec<usize>,
    pub is_cycle: bool,
    pub entry: Option<usize>,
    pub exit: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cycle over states {states:?} has {entries} entry and {exits} exit states")]
pub struct MultiEntryCycle {
    pub states: Vec<usize>,
    pub entries: usize,
    pub exits: usize,
}

/// Classifies the components of a graph with designated initial and final
/// states. Entries of a cycle are its states reached from outside (or the
/// initial state); exits are states with an edge leaving it (or final).
pub fn classify(adj: &[Vec<usize>], initial: usize, is_final: impl Fn(usize) -> bool) -> Result<Vec<Scc>, MultiEntryCycle> {
    let comps = strongly_connected(adj);
    let mut comp_of = vec![0; adj.len()];
    for (i, c) in comps.iter().enumerate() {
        for &q in c {
            comp_of[q] = i;
        }
    }
    let mut out = Vec::new();
    for (ci, states) in comps.into_iter().enumerate() {
        let is_cycle = states.len() > 1 || adj[states[0]].contains(&states[0]);
        if !is_cycle {
            out.push(Scc { states, is_cycle, entry: None, exit: None });
            continue;
        }
        let mut entries = Vec::new();
        let mut exits = Vec::new();
        for &q in &states {
            if q == initial {
                entries.push(q);
            }
            if is_final(q) || adj[q].iter().any(|&t| comp_of[t] != ci) {
                exits.push(q);
            }
        }
        for (p, succ) in adj.iter().enumerate() {
            if comp_of[p] != ci {
                for &t in succ {
                    if comp_of[t] == ci && !entries.contains(&t) {
                        entries.push(t);
                    }
                }
            }
        }
        if entries.len() > 1 || exits.len() > 1 {
            return Err(MultiEntryCycle { states, entries: entries.len(), exits: exits.len() });
        }
        out.push(Scc { entry: entries.first().copied(), exit: exits.first().copied(), states, is_cycle });
    }
    Ok(out)
}

pub fn dfa_adjacency(d: &Dfa) -> Vec<Vec<usize>> {
    (0..d.num_states()).map(|q| d.transitions(q).map(|(_, t)| t).collect()).collect()
}

pub fn tarjan_scc(d: &Dfa) -> Result<Vec<Scc>, MultiEntryCycle> {
    classify(&dfa_adjacency(d), 0, |q| d.is_accepting(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    use crate::automata::dfa::sym;

    #[test]
    fn fig1_has_one_self_loop() {
        let d = Dfa::from_literal("x=5").unwrap().concat(&Dfa::from_literal("5").unwrap().star()).concat(&Dfa::from_literal(";").unwrap());
        let sccs = tarjan_scc(&d).unwrap();
        let cycles: Vec<&Scc> = sccs.iter().filter(|s| s.is_cycle).collect();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].states.len(), 1);
        assert_eq!(cycles[0].entry, cycles[0].exit);
    }

    #[test]
    fn chain_has_no_cycle() {
        let sccs = tarjan_scc(&Dfa::from_literal("abc").unwrap()).unwrap();
        assert!(sccs.iter().all(|s| !s.is_cycle));
        assert_eq!(sccs.len(), 4);
    }

    #[test]
    fn two_loops_sharing_a_state() {
        // self-loops on 1 and 2, which also reach each other and go back to 0
        let mut m = vec![BTreeMap::new(); 3];
        m[0].insert(sym('a').unwrap(), 1);
        m[1].insert(sym('b').unwrap(), 1);
        m[1].insert(sym('c').unwrap(), 2);
        m[2].insert(sym('d').unwrap(), 1);
        m[2].insert(sym('e').unwrap(), 2);
        m[2].insert(sym('f').unwrap(), 0);
        let d = Dfa::from_parts(m, vec![false, true, true]);
        assert!(tarjan_scc(&d).is_err());
    }
}
