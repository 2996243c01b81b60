use std::collections::{BTreeMap, BTreeSet};

use super::dfa::{alphabet, sym, Dfa};
use super::nfa::Nfa;

impl Dfa {
    pub fn union(&self, other: &Dfa) -> Dfa {
        Dfa::product(self, other, |a, b| a || b, false)
    }

    pub fn intersect(&self, other: &Dfa) -> Dfa {
        Dfa::product(self, other, |a, b| a && b, true)
    }

    /// `L(self) \ L(other)`.
    pub fn difference(&self, other: &Dfa) -> Dfa {
        Dfa::product(self, other, |a, b| a && !b, false)
    }

    pub fn complement(&self) -> Dfa {
        Dfa::universe().difference(self)
    }

    /// Whether `L(other) ⊆ L(self)`.
    pub fn includes(&self, other: &Dfa) -> bool {
        other.difference(self).is_empty()
    }

    pub fn equivalent(&self, other: &Dfa) -> bool {
        // canonical forms coincide exactly when languages do
        self == other
    }

    pub fn is_disjoint(&self, other: &Dfa) -> bool {
        self.intersect(other).is_empty()
    }

    /// Already canonical; kept as an explicit operation.
    pub fn minimize(&self) -> Dfa {
        Dfa::from_parts(self.delta.clone(), self.accepting.clone())
    }

    pub fn concat(&self, other: &Dfa) -> Dfa {
        if self.is_empty() || other.is_empty() {
            return Dfa::empty();
        }
        let mut n = Nfa::new();
        let a = n.embed(self, false);
        let b = n.embed(other, true);
        for q in 0..self.num_states() {
            if self.is_accepting(q) {
                n.add(a + q, None, b);
            }
        }
        n.determinize()
    }

    pub fn star(&self) -> Dfa {
        let mut n = Nfa::new();
        let s = n.add_state(true);
        let a = n.embed(self, true);
        n.add(s, None, a);
        for q in 0..self.num_states() {
            if self.is_accepting(q) {
                n.add(a + q, None, s);
            }
        }
        n.determinize()
    }

    pub fn plus(&self) -> Dfa {
        self.concat(&self.star())
    }

    /// Every contiguous substring of every accepted string.
    pub fn factors(&self) -> Dfa {
        if self.is_empty() {
            return Dfa::empty();
        }
        let mut n = Nfa::new();
        let s = n.add_state(true);
        let a = n.embed(self, false);
        for q in 0..self.num_states() {
            n.accepting[a + q] = true;
            n.add(s, None, a + q);
        }
        n.determinize()
    }

    /// Every prefix of every accepted string.
    pub fn prefixes(&self) -> Dfa {
        if self.is_empty() {
            return Dfa::empty();
        }
        Dfa::from_parts(self.delta.clone(), vec![true; self.num_states()])
    }

    /// Characters that occur in some accepted string.
    pub fn used_chars(&self) -> BTreeSet<u8> {
        self.delta.iter().flat_map(|m| m.keys().copied()).collect()
    }

    /// Whether some accepted string contains the character.
    pub fn mentions(&self, c: char) -> bool {
        sym(c).is_ok_and(|s| self.used_chars().contains(&s))
    }

    /// Strings of length exactly `n` over the alphabet.
    pub fn any_of_length(n: usize) -> Dfa {
        let mut delta = vec![BTreeMap::new(); n + 1];
        for (i, m) in delta.iter_mut().enumerate().take(n) {
            for c in alphabet() {
                m.insert(c, i + 1);
            }
        }
        let mut acc = vec![false; n + 1];
        acc[n] = true;
        Dfa::from_parts(delta, acc)
    }

    /// Restriction to strings of length at most `n`.
    pub fn truncate(&self, n: usize) -> Dfa {
        let mut short = Dfa::epsilon();
        let mut acc = Dfa::epsilon();
        let one = Dfa::any_of_length(1);
        for _ in 0..n {
            acc = acc.concat(&one);
            short = short.union(&acc);
        }
        self.intersect(&short)
    }
}

/// Concrete substring with both indices clamped into the string.
pub fn substr_clamped(s: &str, i: i64, j: i64) -> String {
    let chars: Vec<char> = s.chars().collect();
    if chars.is_empty() {
        return String::new();
    }
    let last = chars.len() as i64 - 1;
    let (i, j) = (i.clamp(0, last), j.clamp(0, last));
    if i > j {
        return String::new();
    }
    chars[i as usize..=j as usize].iter().collect()
}

/// Index information available to the substring transfer: exact values or
/// an unknown range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexInfo {
    Exact(i64),
    Unknown,
}

/// Sound image of substring over a language. Exact when both indices are
/// known and the language is small enough to enumerate; the factor
/// automaton otherwise.
pub fn substring_overapprox(a: &Dfa, i: IndexInfo, j: IndexInfo) -> Dfa {
    const LIMIT: usize = 10_000;
    if a.is_empty() {
        return Dfa::empty();
    }
    if let (IndexInfo::Exact(i), IndexInfo::Exact(j)) = (i, j) {
        if let Some(strings) = a.finite_strings(LIMIT) {
            let images: BTreeSet<String> = strings.iter().map(|s| substr_clamped(s, i, j)).collect();
            return Dfa::from_strings(images.iter().map(String::as_str)).expect("substrings stay in the alphabet");
        }
        if i <= 0 && j <= 0 {
            // the first character, or nothing for the empty string
            let mut out = if a.accepts("") { Dfa::epsilon() } else { Dfa::empty() };
            let firsts: Vec<u8> = a.transitions(0).map(|(c, _)| c).collect();
            out = out.union(&Dfa::char_class(firsts));
            return out;
        }
    }
    a.factors()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(s: &str) -> Dfa {
        Dfa::from_literal(s).unwrap()
    }

    #[test]
    fn concat_literals() {
        let d = lit("x:=5").concat(&lit(";"));
        assert_eq!(d, lit("x:=5;"));
    }

    #[test]
    fn star_and_plus() {
        let d = lit("5").star();
        assert!(d.accepts("") && d.accepts("555"));
        assert!(!lit("5").plus().accepts(""));
    }

    #[test]
    fn factors_of_abc() {
        let f = lit("abc").factors();
        let want: BTreeSet<String> = ["", "a", "b", "c", "ab", "bc", "abc"].iter().map(|s| s.to_string()).collect();
        assert_eq!(f.enumerate(5), want);
    }

    #[test]
    fn exact_substring_on_singleton() {
        let r = substring_overapprox(&lit("abc"), IndexInfo::Exact(0), IndexInfo::Exact(0));
        assert_eq!(r, lit("a"));
        assert!(substring_overapprox(&Dfa::empty(), IndexInfo::Unknown, IndexInfo::Unknown).is_empty());
    }

    #[test]
    fn clamping() {
        assert_eq!(substr_clamped("abc", -4, 1), "ab");
        assert_eq!(substr_clamped("abc", 2, 9), "c");
        assert_eq!(substr_clamped("abc", 2, 1), "");
        assert_eq!(substr_clamped("", 0, 0), "");
    }

    #[test]
    fn truncation() {
        let d = lit("a").star().truncate(2);
        assert_eq!(d.count(), Some(3));
    }
}
