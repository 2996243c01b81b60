use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value as Json};

use super::boolval::BoolVal;
use super::sign::Sign;
use crate::automata::{widen, Dfa};

/// A concrete runtime value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConcreteValue {
    Int(i64),
    Bool(bool),
    Str(String),
}

impl fmt::Display for ConcreteValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConcreteValue::Int(n) => write!(f, "{n}"),
            ConcreteValue::Bool(b) => write!(f, "{b}"),
            ConcreteValue::Str(s) => write!(f, "\"{s}\""),
        }
    }
}

/// Finite window on the concrete universe used by oracles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub lo: i64,
    pub hi: i64,
    pub max_len: usize,
    pub chars: Vec<char>,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { lo: -3, hi: 3, max_len: 3, chars: vec!['a', '5'] }
    }
}

impl Bounds {
    fn strings(&self) -> Dfa {
        let syms = self.chars.iter().filter_map(|&c| crate::automata::sym(c).ok());
        Dfa::star_of(syms).truncate(self.max_len)
    }
}

/// Coalesced sum of signs, boolean sets and automata.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Bot,
    Int(Sign),
    Bool(BoolVal),
    Str(Dfa),
    Top,
}

impl Value {
    pub fn int(s: Sign) -> Value {
        if s == Sign::Bot {
            Value::Bot
        } else {
            Value::Int(s)
        }
    }

    pub fn boolean(b: BoolVal) -> Value {
        if b.is_bot() {
            Value::Bot
        } else {
            Value::Bool(b)
        }
    }

    pub fn string(d: Dfa) -> Value {
        if d.is_empty() {
            Value::Bot
        } else {
            Value::Str(d)
        }
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Value::Bot)
    }

    pub fn of(c: &ConcreteValue) -> Value {
        match c {
            ConcreteValue::Int(n) => Value::Int(Sign::of(*n)),
            ConcreteValue::Bool(b) => Value::Bool(BoolVal::of(*b)),
            ConcreteValue::Str(s) => Value::Str(Dfa::from_literal(s).unwrap_or_else(|_| Dfa::universe())),
        }
    }

    pub fn alpha<'a>(cs: impl IntoIterator<Item = &'a ConcreteValue>) -> Value {
        let mut ints = Vec::new();
        let mut bools = Vec::new();
        let mut strs: Vec<&str> = Vec::new();
        for c in cs {
            match c {
                ConcreteValue::Int(n) => ints.push(*n),
                ConcreteValue::Bool(b) => bools.push(*b),
                ConcreteValue::Str(s) => strs.push(s),
            }
        }
        let kinds = usize::from(!ints.is_empty()) + usize::from(!bools.is_empty()) + usize::from(!strs.is_empty());
        match kinds {
            0 => Value::Bot,
            1 if !ints.is_empty() => Value::Int(Sign::alpha(ints)),
            1 if !bools.is_empty() => Value::Bool(BoolVal::alpha(bools)),
            1 => Value::Str(Dfa::from_strings(strs).unwrap_or_else(|_| Dfa::universe())),
            _ => Value::Top,
        }
    }

    pub fn contains(&self, c: &ConcreteValue) -> bool {
        match (self, c) {
            (Value::Top, _) => true,
            (Value::Int(s), ConcreteValue::Int(n)) => s.contains(*n),
            (Value::Bool(b), ConcreteValue::Bool(x)) => b.contains(*x),
            (Value::Str(d), ConcreteValue::Str(s)) => d.accepts(s),
            _ => false,
        }
    }

    /// The concretisation restricted to the bounds, exactly.
    pub fn gamma_bounded(&self, b: &Bounds) -> BTreeSet<ConcreteValue> {
        let ints = |s: Sign| s.gamma(b.lo, b.hi).into_iter().map(ConcreteValue::Int);
        let strs = |d: &Dfa| d.intersect(&b.strings()).enumerate(b.max_len).into_iter().map(ConcreteValue::Str);
        match self {
            Value::Bot => BTreeSet::new(),
            Value::Int(s) => ints(*s).collect(),
            Value::Bool(v) => v.gamma().into_iter().map(ConcreteValue::Bool).collect(),
            Value::Str(d) => strs(d).collect(),
            Value::Top => ints(Sign::Top)
                .chain([false, true].map(ConcreteValue::Bool))
                .chain(strs(&Dfa::universe()))
                .collect(),
        }
    }

    pub fn leq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Bot, _) | (_, Value::Top) => true,
            (Value::Int(a), Value::Int(b)) => a.leq(*b),
            (Value::Bool(a), Value::Bool(b)) => a.leq(*b),
            (Value::Str(a), Value::Str(b)) => b.includes(a),
            _ => false,
        }
    }

    pub fn join(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Bot, x) | (x, Value::Bot) => x.clone(),
            (Value::Int(a), Value::Int(b)) => Value::Int(a.join(*b)),
            (Value::Bool(a), Value::Bool(b)) => Value::Bool(a.join(*b)),
            (Value::Str(a), Value::Str(b)) => Value::Str(a.union(b)),
            _ => Value::Top,
        }
    }

    pub fn meet(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Top, x) | (x, Value::Top) => x.clone(),
            (Value::Int(a), Value::Int(b)) => Value::int(a.meet(*b)),
            (Value::Bool(a), Value::Bool(b)) => Value::boolean(a.meet(*b)),
            (Value::Str(a), Value::Str(b)) => Value::string(a.intersect(b)),
            _ => Value::Bot,
        }
    }

    /// Join on signs and booleans (finite height), automaton widening on strings.
    pub fn widen(&self, other: &Value, k: usize) -> Value {
        match (self, other) {
            (Value::Str(a), Value::Str(b)) => Value::Str(widen(a, b, k)),
            _ => self.join(other),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Value::Bot => "⊥".into(),
            Value::Top => "⊤".into(),
            Value::Int(s) => s.symbol().into(),
            Value::Bool(b) => b.to_string(),
            Value::Str(d) => d.to_regex(),
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Value::Bool(b) => json!(b.names()),
            other => json!(other.render()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_and_gamma() {
        let v = Value::alpha(&[ConcreteValue::Int(1), ConcreteValue::Int(5)]);
        assert_eq!(v, Value::Int(Sign::Pos));
        let g = Value::Int(Sign::Pos).gamma_bounded(&Bounds::default());
        assert_eq!(g, (1..=3).map(ConcreteValue::Int).collect());
        let mixed = Value::alpha(&[ConcreteValue::Int(1), ConcreteValue::Bool(true)]);
        assert_eq!(mixed, Value::Top);
    }

    #[test]
    fn coalesced_joins() {
        assert_eq!(Value::Int(Sign::Pos).join(&Value::Int(Sign::Zero)), Value::Int(Sign::Top));
        assert_eq!(Value::Int(Sign::Pos).join(&Value::Bool(BoolVal::TRUE)), Value::Top);
        assert_eq!(Value::Int(Sign::Pos).meet(&Value::Bool(BoolVal::TRUE)), Value::Bot);
    }

    #[test]
    fn string_gamma_is_bounded() {
        let d = Dfa::from_literal("a").unwrap().star();
        let g = Value::Str(d).gamma_bounded(&Bounds::default());
        assert_eq!(g.len(), 4);
    }
}
