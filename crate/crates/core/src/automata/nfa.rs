use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::dfa::Dfa;

/// Nondeterministic automaton with ε-moves (`None` labels). Only used as
/// an intermediate form; state 0 is initial.
#[derive(Debug, Clone, Default)]
pub struct Nfa {
    pub(crate) trans: Vec<Vec<(Option<u8>, usize)>>,
    pub(crate) accepting: Vec<bool>,
}

impl Nfa {
    pub fn new() -> Nfa {
        Nfa::default()
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.trans.push(Vec::new());
        self.accepting.push(accepting);
        self.trans.len() - 1
    }

    pub fn add(&mut self, from: usize, label: Option<u8>, to: usize) {
        self.trans[from].push((label, to));
    }

    /// Copies `d` into this automaton, returning the offset of its states.
    pub fn embed(&mut self, d: &Dfa, keep_accepting: bool) -> usize {
        let off = self.trans.len();
        for q in 0..d.num_states() {
            self.add_state(keep_accepting && d.is_accepting(q));
        }
        for q in 0..d.num_states() {
            for (c, t) in d.transitions(q) {
                self.add(off + q, Some(c), off + t);
            }
        }
        off
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &(l, t) in &self.trans[q] {
                if l.is_none() && set.insert(t) {
                    stack.push(t);
                }
            }
        }
    }

    /// Subset construction followed by canonical minimisation.
    pub fn determinize(&self) -> Dfa {
        self.determinize_from(BTreeSet::from([0]))
    }

    pub fn determinize_from(&self, mut start: BTreeSet<usize>) -> Dfa {
        if self.trans.is_empty() {
            return Dfa::empty();
        }
        self.closure(&mut start);
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut sets = vec![start.clone()];
        index.insert(start, 0);
        let mut delta: Vec<BTreeMap<u8, usize>> = Vec::new();
        let mut accepting = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let cur = sets[i].clone();
            accepting.push(cur.iter().any(|&q| self.accepting[q]));
            let mut moves: BTreeMap<u8, BTreeSet<usize>> = BTreeMap::new();
            for &q in &cur {
                for &(l, t) in &self.trans[q] {
                    if let Some(c) = l {
                        moves.entry(c).or_default().insert(t);
                    }
                }
            }
            let mut m = BTreeMap::new();
            for (c, mut tgt) in moves {
                self.closure(&mut tgt);
                let j = match index.get(&tgt) {
                    Some(&j) => j,
                    None => {
                        sets.push(tgt.clone());
                        index.insert(tgt, sets.len() - 1);
                        sets.len() - 1
                    }
                };
                m.insert(c, j);
            }
            delta.push(m);
            i += 1;
        }
        Dfa::from_parts(delta, accepting)
    }
}
