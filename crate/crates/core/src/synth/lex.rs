//! Tokens read along the paths of an acyclic extended automaton.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::automata::nfa::Nfa;
use crate::automata::{chr, sym, Dfa, ExtendedDfa, Symbol};
use crate::domains::AbsExpr;

/// Class of the token just read; a word may not be followed directly by a
/// letter, nor a number by a digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Prev {
    Other,
    Word,
    Num,
}

pub(crate) type At = (usize, Prev);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum PTok {
    Word(String),
    /// `Int` or `BulkNum`.
    Num(AbsExpr),
    /// `Str` or `BulkStr`.
    Text(AbsExpr),
    Sym(&'static str),
}

const PUNCT: &[(char, &str)] = &[
    ('=', "="),
    ('<', "<"),
    ('>', ">"),
    ('+', "+"),
    ('-', "-"),
    ('*', "*"),
    ('!', "!"),
    ('(', "("),
    (')', ")"),
    ('{', "{"),
    ('}', "}"),
    (';', ";"),
    (',', ","),
];

fn class(pred: impl Fn(char) -> bool) -> Dfa {
    Dfa::char_class((' '..='~').filter(|&c| pred(c)).map(|c| sym(c).expect("printable")))
}

pub(crate) struct Lexer<'a> {
    pub ext: &'a ExtendedDfa,
    memo: RefCell<HashMap<At, Rc<Vec<(PTok, At)>>>>,
    /// Set-valued transitions met where no token can absorb them.
    pub flagged: RefCell<BTreeSet<String>>,
    digits: Dfa,
    numeral: Dfa,
    no_quote: Dfa,
    letter_led: Dfa,
}

impl<'a> Lexer<'a> {
    pub fn new(ext: &'a ExtendedDfa) -> Self {
        let digits = class(|c| c.is_ascii_digit());
        Lexer {
            ext,
            memo: RefCell::default(),
            flagged: RefCell::default(),
            numeral: digits.plus(),
            digits,
            no_quote: class(|c| c != '"').star(),
            letter_led: class(|c| c.is_ascii_alphabetic()).concat(&Dfa::universe()),
        }
    }

    fn flag(&self, q: usize, d: &Dfa) {
        self.flagged.borrow_mut().insert(format!("state {q}: ⟨{}⟩", d.to_regex()));
    }

    fn non_empty_part(d: &Dfa) -> Dfa {
        d.difference(&Dfa::epsilon())
    }

    /// States reachable through blanks and bulk labels that may read
    /// nothing. A blank resets the token class.
    fn closure(&self, at: At) -> Vec<At> {
        let mut seen = BTreeSet::from([at]);
        let mut stack = vec![at];
        while let Some((q, p)) = stack.pop() {
            for (s, t) in &self.ext.edges[q] {
                let next = match s {
                    Symbol::Char(c) if chr(*c) == ' ' => (*t, Prev::Other),
                    Symbol::Bulk(d) if d.accepts("") => (*t, p),
                    _ => continue,
                };
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Whether the input may end at `q`, possibly after blanks.
    pub fn is_end(&self, q: usize) -> bool {
        self.closure((q, Prev::Other)).iter().any(|&(s, _)| self.ext.accepting[s])
    }

    pub fn tokens(&self, at: At) -> Rc<Vec<(PTok, At)>> {
        if let Some(r) = self.memo.borrow().get(&at) {
            return r.clone();
        }
        let mut out = BTreeSet::new();
        let mut ident_from = BTreeSet::new();
        let mut number_from = BTreeSet::new();
        for (q, prev) in self.closure(at) {
            for (s, t) in &self.ext.edges[q] {
                match s {
                    Symbol::Bulk(d) => {
                        let rest = Self::non_empty_part(d);
                        if rest.is_empty() {
                            continue;
                        }
                        if prev != Prev::Num && !rest.is_disjoint(&self.numeral) {
                            number_from.insert(q);
                        }
                        if !rest.difference(&self.numeral).is_empty() {
                            self.flag(q, d);
                        }
                    }
                    Symbol::Char(c) => match chr(*c) {
                        ' ' => {}
                        ch if ch.is_ascii_alphabetic() => {
                            if prev != Prev::Word {
                                ident_from.insert(q);
                            }
                        }
                        ch if ch.is_ascii_digit() => {
                            if prev != Prev::Num {
                                number_from.insert(q);
                            }
                        }
                        '"' => out.extend(self.strings(*t)),
                        ':' => out.extend(self.pair(*t, '=', ":=")),
                        '&' => out.extend(self.pair(*t, '&', "&&")),
                        ch => {
                            if let Some((_, name)) = PUNCT.iter().find(|(p, _)| *p == ch) {
                                out.insert((PTok::Sym(name), (*t, Prev::Other)));
                            }
                        }
                    },
                }
            }
        }
        for q in ident_from {
            out.extend(self.words(q));
        }
        for q in number_from {
            out.extend(self.numbers(q));
        }
        let r = Rc::new(out.into_iter().collect::<Vec<_>>());
        self.memo.borrow_mut().insert(at, r.clone());
        r
    }

    /// Two-character operators whose first character was read into `q`.
    fn pair(&self, q: usize, second: char, name: &'static str) -> Vec<(PTok, At)> {
        let mut out = Vec::new();
        let lead = Dfa::from_literal(&second.to_string()).expect("printable").concat(&Dfa::universe());
        for (s, t) in &self.ext.edges[q] {
            match s {
                Symbol::Char(c) if chr(*c) == second => out.push((PTok::Sym(name), (*t, Prev::Other))),
                Symbol::Bulk(d) if !d.is_disjoint(&lead) => self.flag(q, d),
                _ => {}
            }
        }
        out
    }

    fn words(&self, q: usize) -> BTreeSet<(PTok, At)> {
        let mut out = BTreeSet::new();
        let mut stack = vec![(q, String::new())];
        while let Some((s, text)) = stack.pop() {
            for (sy, t) in &self.ext.edges[s] {
                match sy {
                    Symbol::Char(c) if chr(*c).is_ascii_alphabetic() => {
                        let mut next = text.clone();
                        next.push(chr(*c));
                        out.insert((PTok::Word(next.clone()), (*t, Prev::Word)));
                        stack.push((*t, next));
                    }
                    Symbol::Bulk(d) if !text.is_empty() => {
                        if d.accepts("") {
                            out.insert((PTok::Word(text.clone()), (*t, Prev::Word)));
                            stack.push((*t, text.clone()));
                        }
                        if !d.is_disjoint(&self.letter_led) {
                            self.flag(s, d);
                        }
                    }
                    _ => {}
                }
            }
        }
        out
    }

    /// States reachable from `start` through characters satisfying `ch`
    /// and through the part of bulk labels selected by `part`, as an
    /// automaton whose states mirror those of the extended automaton.
    fn region(&self, start: usize, ch: impl Fn(char) -> bool, part: impl Fn(&Dfa) -> Dfa) -> (Nfa, BTreeSet<usize>) {
        let n = self.ext.num_states();
        let mut nfa = Nfa::new();
        for _ in 0..n {
            nfa.add_state(false);
        }
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(q) = stack.pop() {
            for (s, t) in &self.ext.edges[q] {
                let used = match s {
                    Symbol::Char(c) if ch(chr(*c)) => {
                        nfa.add(q, Some(*c), *t);
                        true
                    }
                    Symbol::Bulk(d) => {
                        let p = part(d);
                        if p.is_empty() {
                            false
                        } else {
                            let off = nfa.embed(&p, false);
                            nfa.add(q, None, off);
                            for f in 0..p.num_states() {
                                if p.is_accepting(f) {
                                    nfa.add(off + f, None, *t);
                                }
                            }
                            true
                        }
                    }
                    _ => false,
                };
                if used && seen.insert(*t) {
                    stack.push(*t);
                }
            }
        }
        (nfa, seen)
    }

    fn language_to(nfa: &mut Nfa, start: usize, target: usize) -> Dfa {
        nfa.accepting[target] = true;
        let d = nfa.determinize_from(BTreeSet::from([start]));
        nfa.accepting[target] = false;
        d
    }

    fn numbers(&self, q: usize) -> Vec<(PTok, At)> {
        let digits = self.digits.star();
        let (mut nfa, reach) = self.region(q, |c| c.is_ascii_digit(), |d| d.intersect(&digits));
        let mut out = Vec::new();
        for t in reach {
            let lang = Self::language_to(&mut nfa, q, t).intersect(&self.numeral);
            if lang.is_empty() {
                continue;
            }
            let tok = match lang.singleton() {
                Some(s) => match s.parse::<i64>() {
                    Ok(n) => AbsExpr::Int(n),
                    Err(_) => continue,
                },
                None => AbsExpr::BulkNum(lang),
            };
            out.push((PTok::Num(tok), (t, Prev::Num)));
        }
        out
    }

    /// String literals whose opening quote was read into `q`.
    fn strings(&self, q: usize) -> Vec<(PTok, At)> {
        let (mut nfa, reach) = self.region(q, |c| c != '"', |d| d.intersect(&self.no_quote));
        let mut out = Vec::new();
        for &p in &reach {
            for (s, t) in &self.ext.edges[p] {
                match s {
                    Symbol::Char(c) if chr(*c) == '"' => {
                        let lang = Self::language_to(&mut nfa, q, p);
                        let tok = match lang.singleton() {
                            Some(s) => AbsExpr::Str(s),
                            None => AbsExpr::BulkStr(lang),
                        };
                        out.push((PTok::Text(tok), (*t, Prev::Other)));
                    }
                    Symbol::Bulk(d) if !self.no_quote.includes(d) => self.flag(p, d),
                    _ => {}
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(d: &Dfa) -> Vec<PTok> {
        let e = ExtendedDfa::from_dfa(d);
        let lx = Lexer::new(&e);
        let mut at = (0, Prev::Other);
        let mut out = Vec::new();
        loop {
            let ts = lx.tokens(at);
            let Some((t, next)) = ts.iter().max_by_key(|(_, (q, _))| *q).cloned() else {
                return out;
            };
            out.push(t);
            at = next;
        }
    }

    #[test]
    fn reads_a_single_string() {
        let ts = toks(&Dfa::from_literal("ab := \"q;\" + 12").unwrap());
        assert_eq!(ts.len(), 5);
        assert_eq!(ts[0], PTok::Word("ab".into()));
        assert_eq!(ts[1], PTok::Sym(":="));
        assert_eq!(ts[2], PTok::Text(AbsExpr::Str("q;".into())));
        assert_eq!(ts[4], PTok::Num(AbsExpr::Int(12)));
    }

    #[test]
    fn words_are_maximal() {
        let e = ExtendedDfa::from_dfa(&Dfa::from_literal("abc").unwrap());
        let lx = Lexer::new(&e);
        let ends: Vec<usize> = lx.tokens((0, Prev::Other)).iter().map(|(_, (q, _))| *q).collect();
        assert_eq!(ends.len(), 3);
        assert!(lx.tokens((1, Prev::Word)).is_empty());
    }
}
