use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Number of characters in the alphabet: printable ASCII, space to `~`.
pub const ALPHABET_LEN: u8 = 95;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("character {0:?} is outside the automaton alphabet")]
pub struct AlphabetError(pub char);

pub fn sym(c: char) -> Result<u8, AlphabetError> {
    if (' '..='~').contains(&c) {
        Ok(c as u8 - b' ')
    } else {
        Err(AlphabetError(c))
    }
}

pub fn chr(s: u8) -> char {
    (s + b' ') as char
}

/// All alphabet symbols in order.
pub fn alphabet() -> impl Iterator<Item = u8> {
    0..ALPHABET_LEN
}

/// A deterministic automaton with a partial transition function.
///
/// Every public constructor returns the canonical minimal automaton: all
/// states reachable and co-reachable, no two equivalent states, states
/// numbered in breadth-first order from the initial state 0. Structural
/// equality is therefore language equality. The empty language is the
/// single non-accepting state without transitions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dfa {
    pub(crate) delta: Vec<BTreeMap<u8, usize>>,
    pub(crate) accepting: Vec<bool>,
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dfa({})", self.to_regex())
    }
}

impl Dfa {
    /// Builds a canonical automaton from raw parts; state 0 is initial.
    pub fn from_parts(delta: Vec<BTreeMap<u8, usize>>, accepting: Vec<bool>) -> Dfa {
        assert_eq!(delta.len(), accepting.len());
        assert!(!delta.is_empty(), "an automaton needs an initial state");
        Dfa { delta, accepting }.canonical()
    }

    pub fn empty() -> Dfa {
        Dfa { delta: vec![BTreeMap::new()], accepting: vec![false] }
    }

    pub fn epsilon() -> Dfa {
        Dfa { delta: vec![BTreeMap::new()], accepting: vec![true] }
    }

    /// All strings over the alphabet.
    pub fn universe() -> Dfa {
        Self::star_of(alphabet())
    }

    /// `C*` for a character set `C`.
    pub fn star_of(chars: impl IntoIterator<Item = u8>) -> Dfa {
        let m: BTreeMap<u8, usize> = chars.into_iter().map(|c| (c, 0)).collect();
        Dfa { delta: vec![m], accepting: vec![true] }
    }

    /// One character drawn from `C`.
    pub fn char_class(chars: impl IntoIterator<Item = u8>) -> Dfa {
        let m: BTreeMap<u8, usize> = chars.into_iter().map(|c| (c, 1)).collect();
        Dfa::from_parts(vec![m, BTreeMap::new()], vec![false, true])
    }

    pub fn from_literal(s: &str) -> Result<Dfa, AlphabetError> {
        let syms = s.chars().map(sym).collect::<Result<Vec<_>, _>>()?;
        let n = syms.len();
        let mut delta = vec![BTreeMap::new(); n + 1];
        for (i, c) in syms.into_iter().enumerate() {
            delta[i].insert(c, i + 1);
        }
        let mut accepting = vec![false; n + 1];
        accepting[n] = true;
        Ok(Dfa { delta, accepting })
    }

    /// Finite union of literals.
    pub fn from_strings<'a>(items: impl IntoIterator<Item = &'a str>) -> Result<Dfa, AlphabetError> {
        let mut delta: Vec<BTreeMap<u8, usize>> = vec![BTreeMap::new()];
        let mut accepting = vec![false];
        for s in items {
            let mut q = 0;
            for c in s.chars() {
                let c = sym(c)?;
                q = match delta[q].get(&c) {
                    Some(&t) => t,
                    None => {
                        delta.push(BTreeMap::new());
                        accepting.push(false);
                        let t = delta.len() - 1;
                        delta[q].insert(c, t);
                        t
                    }
                };
            }
            accepting[q] = true;
        }
        Ok(Dfa::from_parts(delta, accepting))
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn step(&self, q: usize, c: u8) -> Option<usize> {
        self.delta[q].get(&c).copied()
    }

    pub fn transitions(&self, q: usize) -> impl Iterator<Item = (u8, usize)> + '_ {
        self.delta[q].iter().map(|(&c, &t)| (c, t))
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(|m| m.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        !self.accepting.iter().any(|&a| a)
    }

    pub fn accepts(&self, s: &str) -> bool {
        let mut q = 0;
        for c in s.chars() {
            let Ok(c) = sym(c) else { return false };
            match self.step(q, c) {
                Some(t) => q = t,
                None => return false,
            }
        }
        self.accepting[q]
    }

    /// Whether the (canonical, trimmed) automaton has a cycle.
    pub fn is_finite(&self) -> bool {
        // In a trimmed automaton every cycle lies on an accepting path.
        let n = self.delta.len();
        let mut indeg = vec![0usize; n];
        for m in &self.delta {
            for &t in m.values() {
                indeg[t] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&q| indeg[q] == 0).collect();
        let mut seen = 0;
        while let Some(q) = queue.pop_front() {
            seen += 1;
            for &t in self.delta[q].values() {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        seen == n
    }

    /// Number of accepted strings, if finite (saturating).
    pub fn count(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        let mut memo = vec![None; self.delta.len()];
        fn go(d: &Dfa, q: usize, memo: &mut Vec<Option<u64>>) -> u64 {
            if let Some(v) = memo[q] {
                return v;
            }
            let mut v = u64::from(d.accepting[q]);
            for &t in d.delta[q].values() {
                v = v.saturating_add(go(d, t, memo));
            }
            memo[q] = Some(v);
            v
        }
        Some(go(self, 0, &mut memo))
    }

    /// The unique accepted string, if the language is a singleton.
    pub fn singleton(&self) -> Option<String> {
        if self.count() != Some(1) {
            return None;
        }
        let mut q = 0;
        let mut out = String::new();
        while !self.accepting[q] {
            let (&c, &t) = self.delta[q].iter().next()?;
            out.push(chr(c));
            q = t;
        }
        Some(out)
    }

    /// Length of the longest accepted string, if finite.
    pub fn max_len(&self) -> Option<usize> {
        if !self.is_finite() || self.is_empty() {
            return None;
        }
        let mut memo: Vec<Option<usize>> = vec![None; self.delta.len()];
        fn go(d: &Dfa, q: usize, memo: &mut Vec<Option<usize>>) -> usize {
            if let Some(v) = memo[q] {
                return v;
            }
            let v = d.delta[q].values().map(|&t| go(d, t, memo) + 1).max().unwrap_or(0);
            memo[q] = Some(v);
            v
        }
        Some(go(self, 0, &mut memo))
    }

    /// All accepted strings of length at most `max_len`, sorted.
    pub fn enumerate(&self, max_len: usize) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut buf = String::new();
        self.enum_from(0, max_len, &mut buf, &mut out, usize::MAX);
        out
    }

    /// Like [`Dfa::enumerate`] but gives up once more than `limit` strings
    /// are found.
    pub fn enumerate_bounded(&self, max_len: usize, limit: usize) -> Option<BTreeSet<String>> {
        let mut out = BTreeSet::new();
        let mut buf = String::new();
        if self.enum_from(0, max_len, &mut buf, &mut out, limit) {
            Some(out)
        } else {
            None
        }
    }

    fn enum_from(&self, q: usize, left: usize, buf: &mut String, out: &mut BTreeSet<String>, limit: usize) -> bool {
        if self.accepting[q] {
            out.insert(buf.clone());
            if out.len() > limit {
                return false;
            }
        }
        if left == 0 {
            return true;
        }
        for (&c, &t) in &self.delta[q] {
            buf.push(chr(c));
            let ok = self.enum_from(t, left - 1, buf, out, limit);
            buf.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    /// Every accepted string, when the language is finite and has at most
    /// `limit` members.
    pub fn finite_strings(&self, limit: usize) -> Option<BTreeSet<String>> {
        let n = self.count()?;
        if n > limit as u64 {
            return None;
        }
        Some(self.enumerate(self.max_len().unwrap_or(0)))
    }

    /// States from which an accepting state is reachable.
    pub(crate) fn coreachable(delta: &[BTreeMap<u8, usize>], accepting: &[bool]) -> Vec<bool> {
        let n = delta.len();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (q, m) in delta.iter().enumerate() {
            for &t in m.values() {
                rev[t].push(q);
            }
        }
        let mut live = accepting.to_vec();
        let mut stack: Vec<usize> = (0..n).filter(|&q| accepting[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// Trim, minimise by partition refinement, renumber breadth-first.
    fn canonical(self) -> Dfa {
        let live = Self::coreachable(&self.delta, &self.accepting);
        if !live[0] {
            return Dfa::empty();
        }
        // reachable live states, in BFS order
        let mut order = vec![0usize];
        let mut index: HashMap<usize, usize> = HashMap::from([(0, 0)]);
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for &t in self.delta[q].values() {
                if live[t] && !index.contains_key(&t) {
                    index.insert(t, order.len());
                    order.push(t);
                }
            }
            i += 1;
        }
        let n = order.len();
        let delta: Vec<BTreeMap<u8, usize>> = order
            .iter()
            .map(|&q| {
                self.delta[q].iter().filter_map(|(&c, t)| index.get(t).map(|&j| (c, j))).collect()
            })
            .collect();
        let accepting: Vec<bool> = order.iter().map(|&q| self.accepting[q]).collect();

        // Moore refinement; a missing transition goes to the implicit dead class.
        let mut class: Vec<usize> = accepting.iter().map(|&a| usize::from(a)).collect();
        let mut num_classes = class.iter().collect::<BTreeSet<_>>().len();
        loop {
            let mut sigs: HashMap<(usize, Vec<(u8, usize)>), usize> = HashMap::new();
            let mut next = vec![0; n];
            for q in 0..n {
                let sig: Vec<(u8, usize)> = delta[q].iter().map(|(&c, &t)| (c, class[t])).collect();
                let len = sigs.len();
                next[q] = *sigs.entry((class[q], sig)).or_insert(len);
            }
            let count = sigs.len();
            class = next;
            if count == num_classes {
                break;
            }
            num_classes = count;
        }

        // renumber classes breadth-first from the initial state
        let mut new_id: HashMap<usize, usize> = HashMap::new();
        let mut reps: Vec<usize> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        new_id.insert(class[0], 0);
        reps.push(0);
        while let Some(q) = queue.pop_front() {
            for &t in delta[q].values() {
                if let std::collections::hash_map::Entry::Vacant(slot) = new_id.entry(class[t]) {
                    slot.insert(reps.len());
                    reps.push(t);
                    queue.push_back(t);
                }
            }
        }
        let out_delta = reps
            .iter()
            .map(|&q| delta[q].iter().map(|(&c, &t)| (c, new_id[&class[t]])).collect())
            .collect();
        let out_acc = reps.iter().map(|&q| accepting[q]).collect();
        Dfa { delta: out_delta, accepting: out_acc }
    }

    /// Product construction over pairs of optional states; `keep` decides
    /// acceptance from the component acceptances.
    pub(crate) fn product(a: &Dfa, b: &Dfa, keep: impl Fn(bool, bool) -> bool, need_both: bool) -> Dfa {
        type P = (Option<usize>, Option<usize>);
        let mut index: HashMap<P, usize> = HashMap::new();
        let mut states: Vec<P> = vec![(Some(0), Some(0))];
        index.insert((Some(0), Some(0)), 0);
        let mut delta: Vec<BTreeMap<u8, usize>> = Vec::new();
        let mut accepting = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (p, q) = states[i];
            accepting.push(keep(p.is_some_and(|p| a.accepting[p]), q.is_some_and(|q| b.accepting[q])));
            let mut m = BTreeMap::new();
            let syms: BTreeSet<u8> = p
                .map(|p| a.delta[p].keys().copied().collect::<Vec<_>>())
                .unwrap_or_default()
                .into_iter()
                .chain(q.map(|q| b.delta[q].keys().copied().collect::<Vec<_>>()).unwrap_or_default())
                .collect();
            for c in syms {
                let np = p.and_then(|p| a.step(p, c));
                let nq = q.and_then(|q| b.step(q, c));
                if need_both && (np.is_none() || nq.is_none()) {
                    continue;
                }
                if np.is_none() && nq.is_none() {
                    continue;
                }
                let key = (np, nq);
                let j = *index.entry(key).or_insert_with(|| {
                    states.push(key);
                    states.len() - 1
                });
                m.insert(c, j);
            }
            delta.push(m);
            i += 1;
        }
        Dfa::from_parts(delta, accepting)
    }
}
