use std::collections::{BTreeMap, BTreeSet};

use super::dfa::{chr, Dfa};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Re {
    Empty,
    Eps,
    Sym(u8),
    Cat(Vec<Re>),
    Alt(BTreeSet<Re>),
    Star(Box<Re>),
}

fn cat(a: Re, b: Re) -> Re {
    match (a, b) {
        (Re::Empty, _) | (_, Re::Empty) => Re::Empty,
        (Re::Eps, x) | (x, Re::Eps) => x,
        (Re::Cat(mut xs), Re::Cat(ys)) => {
            xs.extend(ys);
            Re::Cat(xs)
        }
        (Re::Cat(mut xs), y) => {
            xs.push(y);
            Re::Cat(xs)
        }
        (x, Re::Cat(ys)) => {
            let mut v = vec![x];
            v.extend(ys);
            Re::Cat(v)
        }
        (x, y) => Re::Cat(vec![x, y]),
    }
}

fn alt(a: Re, b: Re) -> Re {
    match (a, b) {
        (Re::Empty, x) | (x, Re::Empty) => x,
        (x, y) if x == y => x,
        (Re::Eps, s @ Re::Star(_)) | (s @ Re::Star(_), Re::Eps) => s,
        (Re::Alt(mut xs), Re::Alt(ys)) => {
            xs.extend(ys);
            Re::Alt(xs)
        }
        (Re::Alt(mut xs), y) | (y, Re::Alt(mut xs)) => {
            xs.insert(y);
            Re::Alt(xs)
        }
        (x, y) => Re::Alt(BTreeSet::from([x, y])),
    }
}

fn star(a: Re) -> Re {
    match a {
        Re::Empty | Re::Eps => Re::Eps,
        s @ Re::Star(_) => s,
        x => Re::Star(Box::new(x)),
    }
}

fn escape(c: u8) -> String {
    let ch = chr(c);
    if "\\()|*?[]".contains(ch) {
        format!("\\{ch}")
    } else {
        ch.to_string()
    }
}

fn class(syms: &[u8]) -> String {
    let mut out = String::from("[");
    let mut i = 0;
    while i < syms.len() {
        let mut j = i;
        while j + 1 < syms.len() && syms[j + 1] == syms[j] + 1 {
            j += 1;
        }
        let show = |c: u8| if "\\]-^".contains(chr(c)) { format!("\\{}", chr(c)) } else { chr(c).to_string() };
        if j >= i + 2 {
            out.push_str(&format!("{}-{}", show(syms[i]), show(syms[j])));
        } else {
            for &c in &syms[i..=j] {
                out.push_str(&show(c));
            }
        }
        i = j + 1;
    }
    out.push(']');
    out
}

fn prec(r: &Re) -> u8 {
    match r {
        Re::Alt(xs) if xs.contains(&Re::Eps) && xs.len() == 2 => 3,
        Re::Alt(xs) if xs.iter().all(|x| matches!(x, Re::Sym(_))) => 3,
        Re::Alt(_) => 1,
        Re::Cat(_) => 2,
        _ => 3,
    }
}

fn show(r: &Re) -> String {
    let paren = |x: &Re, min: u8| if prec(x) < min { format!("({})", show(x)) } else { show(x) };
    match r {
        Re::Empty => "∅".into(),
        Re::Eps => "ε".into(),
        Re::Sym(c) => escape(*c),
        Re::Cat(xs) => xs.iter().map(|x| paren(x, 2)).collect(),
        Re::Alt(xs) => {
            if xs.len() == 2 && xs.contains(&Re::Eps) {
                let other = xs.iter().find(|x| **x != Re::Eps).expect("two members");
                let inner = show(other);
                return if prec(other) == 3 && !matches!(other, Re::Star(_)) && inner.chars().count() == 1 {
                    format!("{inner}?")
                } else {
                    format!("({inner})?")
                };
            }
            if xs.iter().all(|x| matches!(x, Re::Sym(_))) {
                let syms: Vec<u8> = xs.iter().filter_map(|x| if let Re::Sym(c) = x { Some(*c) } else { None }).collect();
                return class(&syms);
            }
            xs.iter().map(show).collect::<Vec<_>>().join("|")
        }
        Re::Star(x) => {
            let inner = show(x);
            if prec(x) == 3 && inner.chars().count() == 1 || matches!(**x, Re::Alt(ref s) if s.iter().all(|y| matches!(y, Re::Sym(_)))) {
                format!("{inner}*")
            } else {
                format!("({inner})*")
            }
        }
    }
}

impl Dfa {
    /// A regular expression for the language, by state elimination.
    pub fn to_regex(&self) -> String {
        if self.is_empty() {
            return "∅".into();
        }
        let n = self.num_states();
        let (start, fin) = (n, n + 1);
        let mut edges: BTreeMap<(usize, usize), Re> = BTreeMap::new();
        let add = |edges: &mut BTreeMap<(usize, usize), Re>, k: (usize, usize), r: Re| {
            let cur = edges.remove(&k).unwrap_or(Re::Empty);
            edges.insert(k, alt(cur, r));
        };
        add(&mut edges, (start, 0), Re::Eps);
        for q in 0..n {
            for (c, t) in self.transitions(q) {
                add(&mut edges, (q, t), Re::Sym(c));
            }
            if self.is_accepting(q) {
                add(&mut edges, (q, fin), Re::Eps);
            }
        }
        for k in (0..n).rev() {
            let self_loop = edges.remove(&(k, k)).map(star).unwrap_or(Re::Eps);
            let ins: Vec<(usize, Re)> = edges.iter().filter(|((_, b), _)| *b == k).map(|((a, _), r)| (*a, r.clone())).collect();
            let outs: Vec<(usize, Re)> = edges.iter().filter(|((a, _), _)| *a == k).map(|((_, b), r)| (*b, r.clone())).collect();
            edges.retain(|(a, b), _| *a != k && *b != k);
            for (i, ri) in &ins {
                for (j, rj) in &outs {
                    let r = cat(cat(ri.clone(), self_loop.clone()), rj.clone());
                    add(&mut edges, (*i, *j), r);
                }
            }
        }
        show(&edges.remove(&(start, fin)).unwrap_or(Re::Empty))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_and_loop() {
        let d = Dfa::from_literal("x=5").unwrap().concat(&Dfa::from_literal("5").unwrap().star());
        assert_eq!(d.to_regex(), "x=55*");
        assert_eq!(Dfa::empty().to_regex(), "∅");
        assert_eq!(Dfa::epsilon().to_regex(), "ε");
    }

    #[test]
    fn digit_class() {
        let d = Dfa::char_class((b'0' - b' ')..=(b'9' - b' '));
        assert_eq!(d.to_regex(), "[0-9]");
    }
}
