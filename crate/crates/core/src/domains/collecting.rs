use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::memory::AbstractMemory;
use super::value::{ConcreteValue, Value};
use crate::automata::substr_clamped;
use crate::imp::{ArithOp, CmpOp, Expr};

pub type Store = BTreeMap<String, ConcreteValue>;

/// Integer arithmetic with overflow checks; `+` on two strings
/// concatenates. `None` means evaluation gets stuck.
pub fn arith(op: ArithOp, a: &ConcreteValue, b: &ConcreteValue) -> Option<ConcreteValue> {
    match (a, b) {
        (ConcreteValue::Int(x), ConcreteValue::Int(y)) => op.apply(*x, *y).map(ConcreteValue::Int),
        (ConcreteValue::Str(x), ConcreteValue::Str(y)) if op == ArithOp::Add => Some(ConcreteValue::Str(format!("{x}{y}"))),
        _ => None,
    }
}

pub fn compare(op: CmpOp, a: &ConcreteValue, b: &ConcreteValue) -> Option<bool> {
    use ConcreteValue as C;
    match (op, a, b) {
        (CmpOp::Eq, C::Int(x), C::Int(y)) => Some(x == y),
        (CmpOp::Eq, C::Bool(x), C::Bool(y)) => Some(x == y),
        (CmpOp::Eq, C::Str(x), C::Str(y)) => Some(x == y),
        (CmpOp::Lt, C::Int(x), C::Int(y)) => Some(x < y),
        (CmpOp::Lt, C::Str(x), C::Str(y)) => Some(x < y),
        (CmpOp::Gt, C::Int(x), C::Int(y)) => Some(x > y),
        (CmpOp::Gt, C::Str(x), C::Str(y)) => Some(x > y),
        _ => None,
    }
}

pub fn concat(a: &ConcreteValue, b: &ConcreteValue) -> Option<ConcreteValue> {
    match (a, b) {
        (ConcreteValue::Str(x), ConcreteValue::Str(y)) => Some(ConcreteValue::Str(format!("{x}{y}"))),
        _ => None,
    }
}

pub fn substr(s: &ConcreteValue, i: &ConcreteValue, j: &ConcreteValue) -> Option<ConcreteValue> {
    match (s, i, j) {
        (ConcreteValue::Str(s), ConcreteValue::Int(i), ConcreteValue::Int(j)) => {
            Some(ConcreteValue::Str(substr_clamped(s, *i, *j)))
        }
        _ => None,
    }
}

pub fn and(a: &ConcreteValue, b: &ConcreteValue) -> Option<ConcreteValue> {
    match (a, b) {
        (ConcreteValue::Bool(x), ConcreteValue::Bool(y)) => Some(ConcreteValue::Bool(*x && *y)),
        _ => None,
    }
}

pub fn not(a: &ConcreteValue) -> Option<ConcreteValue> {
    match a {
        ConcreteValue::Bool(x) => Some(ConcreteValue::Bool(!x)),
        _ => None,
    }
}

/// Standard semantics of an expression in one store.
pub fn eval_concrete(e: &Expr, st: &Store) -> Option<ConcreteValue> {
    match e {
        Expr::Int { value } => Some(ConcreteValue::Int(*value)),
        Expr::Str { value } => Some(ConcreteValue::Str(value.clone())),
        Expr::Bool { value } => Some(ConcreteValue::Bool(*value)),
        Expr::Var { name } => st.get(name).cloned(),
        Expr::Arith { op, left, right } => arith(*op, &eval_concrete(left, st)?, &eval_concrete(right, st)?),
        Expr::Cmp { op, left, right } => {
            compare(*op, &eval_concrete(left, st)?, &eval_concrete(right, st)?).map(ConcreteValue::Bool)
        }
        Expr::And { left, right } => and(&eval_concrete(left, st)?, &eval_concrete(right, st)?),
        Expr::Not { inner } => not(&eval_concrete(inner, st)?),
        Expr::Concat { left, right } => concat(&eval_concrete(left, st)?, &eval_concrete(right, st)?),
        Expr::Substr { subject, from, to } => {
            substr(&eval_concrete(subject, st)?, &eval_concrete(from, st)?, &eval_concrete(to, st)?)
        }
    }
}

/// Variables mapped to finite sets of concrete values. A variable bound to
/// the empty set makes the memory empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CollectingMemory {
    pub vars: BTreeMap<String, BTreeSet<ConcreteValue>>,
}

impl CollectingMemory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, x: &str, vs: impl IntoIterator<Item = ConcreteValue>) -> Self {
        self.vars.insert(x.to_string(), vs.into_iter().collect());
        self
    }

    pub fn from_store(st: &Store) -> Self {
        CollectingMemory { vars: st.iter().map(|(k, v)| (k.clone(), BTreeSet::from([v.clone()]))).collect() }
    }

    pub fn get(&self, x: &str) -> BTreeSet<ConcreteValue> {
        self.vars.get(x).cloned().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.values().any(BTreeSet::is_empty)
    }

    pub fn join(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, vs) in &other.vars {
            out.vars.entry(k.clone()).or_default().extend(vs.iter().cloned());
        }
        out
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.vars.iter().all(|(k, vs)| vs.is_subset(&other.get(k)))
    }

    /// Every store drawn pointwise from the memory.
    pub fn stores(&self) -> Vec<Store> {
        let mut out = vec![Store::new()];
        for (k, vs) in &self.vars {
            let mut next = Vec::with_capacity(out.len() * vs.len());
            for st in &out {
                for v in vs {
                    let mut s = st.clone();
                    s.insert(k.clone(), v.clone());
                    next.push(s);
                }
            }
            out = next;
        }
        out
    }

    pub fn from_stores<'a>(stores: impl IntoIterator<Item = &'a Store>) -> Self {
        let mut out = CollectingMemory::new();
        for st in stores {
            for (k, v) in st {
                out.vars.entry(k.clone()).or_default().insert(v.clone());
            }
        }
        out
    }

    pub fn alpha(&self) -> AbstractMemory {
        if self.is_empty() {
            return AbstractMemory::Bot;
        }
        AbstractMemory::from_bindings(self.vars.iter().map(|(k, vs)| (k.clone(), Value::alpha(vs))))
    }
}

impl fmt::Display for CollectingMemory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vars
            .iter()
            .map(|(k, vs)| format!("{k}↦{{{}}}", vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imp::parse_expr;

    #[test]
    fn concrete_evaluation() {
        let st = Store::from([("x".to_string(), ConcreteValue::Int(4))]);
        assert_eq!(eval_concrete(&parse_expr("x+1").unwrap(), &st), Some(ConcreteValue::Int(5)));
        assert_eq!(eval_concrete(&parse_expr("y+1").unwrap(), &st), None);
        let big = Store::from([("x".to_string(), ConcreteValue::Int(i64::MAX))]);
        assert_eq!(eval_concrete(&parse_expr("x+1").unwrap(), &big), None);
    }

    #[test]
    fn stores_are_a_product() {
        let m = CollectingMemory::new()
            .with("x", [ConcreteValue::Int(0), ConcreteValue::Int(1)])
            .with("y", [ConcreteValue::Int(2), ConcreteValue::Int(3)]);
        assert_eq!(m.stores().len(), 4);
        assert_eq!(CollectingMemory::from_stores(&m.stores()), m);
    }
}
