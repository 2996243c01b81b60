use super::dfa::{chr, Dfa};
use super::nfa::Nfa;
use super::scc::{classify, MultiEntryCycle, Scc};

/// Transition label of an extended automaton: one character, or a whole
/// set of strings read in one step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    Char(u8),
    Bulk(Dfa),
}

impl Symbol {
    pub fn render(&self) -> String {
        match self {
            Symbol::Char(c) => chr(*c).to_string(),
            Symbol::Bulk(d) => format!("⟨{}⟩", d.to_regex()),
        }
    }
}

/// An automaton over characters and bulk labels. States are never
/// renumbered; removed states simply lose their edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedDfa {
    pub edges: Vec<Vec<(Symbol, usize)>>,
    pub accepting: Vec<bool>,
    pub initial: usize,
}

impl ExtendedDfa {
    pub fn from_dfa(d: &Dfa) -> ExtendedDfa {
        let edges = (0..d.num_states()).map(|q| d.transitions(q).map(|(c, t)| (Symbol::Char(c), t)).collect()).collect();
        let accepting = (0..d.num_states()).map(|q| d.is_accepting(q)).collect();
        ExtendedDfa { edges, accepting, initial: 0 }
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.edges.push(Vec::new());
        self.accepting.push(accepting);
        self.edges.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, sym: Symbol, to: usize) {
        if !self.edges[from].iter().any(|(s, t)| *t == to && *s == sym) {
            self.edges[from].push((sym, to));
        }
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.edges.iter().map(|es| es.iter().map(|(_, t)| *t).collect()).collect()
    }

    pub fn sccs(&self) -> Result<Vec<Scc>, MultiEntryCycle> {
        classify(&self.adjacency(), self.initial, |q| self.accepting[q])
    }

    pub fn is_acyclic(&self) -> bool {
        self.sccs().is_ok_and(|cs| cs.iter().all(|c| !c.is_cycle))
    }

    /// Drops every edge touching a state that is unreachable or cannot
    /// reach acceptance.
    pub fn trim(&mut self) {
        let n = self.num_states();
        let adj = self.adjacency();
        let mut reach = vec![false; n];
        let mut stack = vec![self.initial];
        reach[self.initial] = true;
        while let Some(q) = stack.pop() {
            for &t in &adj[q] {
                if !reach[t] {
                    reach[t] = true;
                    stack.push(t);
                }
            }
        }
        let mut rev = vec![Vec::new(); n];
        for (q, ts) in adj.iter().enumerate() {
            for &t in ts {
                rev[t].push(q);
            }
        }
        let mut live = self.accepting.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&q| live[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        for q in 0..n {
            let keep = reach[q] && live[q];
            if !keep {
                self.edges[q].clear();
                self.accepting[q] = false;
            } else {
                self.edges[q].retain(|(_, t)| reach[*t] && live[*t]);
            }
        }
    }

    /// States that still take part in the automaton.
    pub fn live_states(&self) -> Vec<usize> {
        let mut used = vec![false; self.num_states()];
        used[self.initial] = true;
        for (q, es) in self.edges.iter().enumerate() {
            if !es.is_empty() || self.accepting[q] {
                used[q] = true;
            }
            for (_, t) in es {
                used[*t] = true;
            }
        }
        (0..self.num_states()).filter(|&q| used[q]).collect()
    }

    /// The language obtained by expanding bulk labels.
    pub fn language(&self) -> Dfa {
        let mut n = Nfa::new();
        for &a in &self.accepting {
            n.add_state(a);
        }
        for (q, es) in self.edges.iter().enumerate() {
            for (s, t) in es {
                match s {
                    Symbol::Char(c) => n.add(q, Some(*c), *t),
                    Symbol::Bulk(d) => {
                        let off = n.embed(d, false);
                        n.add(q, None, off);
                        for p in 0..d.num_states() {
                            if d.is_accepting(p) {
                                n.add(off + p, None, *t);
                            }
                        }
                    }
                }
            }
        }
        n.determinize_from([self.initial].into())
    }
}
