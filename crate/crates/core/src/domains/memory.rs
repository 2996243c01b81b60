use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{Map, Value as Json};

use super::value::Value;

/// Non-relational abstract memory. Unbound variables are ⊤; a variable
/// bound to ⊥ makes the whole memory ⊥.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AbstractMemory {
    Bot,
    Map(BTreeMap<String, Value>),
}

impl Default for AbstractMemory {
    fn default() -> Self {
        AbstractMemory::top()
    }
}

impl AbstractMemory {
    pub fn top() -> Self {
        AbstractMemory::Map(BTreeMap::new())
    }

    pub fn from_bindings(bs: impl IntoIterator<Item = (String, Value)>) -> Self {
        bs.into_iter().fold(AbstractMemory::top(), |m, (x, v)| m.set(&x, v))
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, AbstractMemory::Bot)
    }

    pub fn get(&self, x: &str) -> Value {
        match self {
            AbstractMemory::Bot => Value::Bot,
            AbstractMemory::Map(m) => m.get(x).cloned().unwrap_or(Value::Top),
        }
    }

    pub fn set(&self, x: &str, v: Value) -> Self {
        match self {
            AbstractMemory::Bot => AbstractMemory::Bot,
            AbstractMemory::Map(_) if v.is_bot() => AbstractMemory::Bot,
            AbstractMemory::Map(m) => {
                let mut m = m.clone();
                if v == Value::Top {
                    m.remove(x);
                } else {
                    m.insert(x.to_string(), v);
                }
                AbstractMemory::Map(m)
            }
        }
    }

    /// Explicit (non-⊤) bindings.
    pub fn bindings(&self) -> impl Iterator<Item = (&String, &Value)> {
        let m = match self {
            AbstractMemory::Bot => None,
            AbstractMemory::Map(m) => Some(m),
        };
        m.into_iter().flat_map(|m| m.iter())
    }

    fn keys<'a>(&'a self, other: &'a Self) -> BTreeSet<&'a String> {
        self.bindings().map(|(k, _)| k).chain(other.bindings().map(|(k, _)| k)).collect()
    }

    pub fn leq(&self, other: &Self) -> bool {
        match (self, other) {
            (AbstractMemory::Bot, _) => true,
            (_, AbstractMemory::Bot) => false,
            _ => self.keys(other).into_iter().all(|k| self.get(k).leq(&other.get(k))),
        }
    }

    fn pointwise(&self, other: &Self, f: impl Fn(&Value, &Value) -> Value) -> Self {
        let keys: Vec<String> = self.keys(other).into_iter().cloned().collect();
        let mut out = AbstractMemory::top();
        for k in keys {
            out = out.set(&k, f(&self.get(&k), &other.get(&k)));
        }
        out
    }

    pub fn join(&self, other: &Self) -> Self {
        match (self, other) {
            (AbstractMemory::Bot, x) | (x, AbstractMemory::Bot) => x.clone(),
            _ => self.pointwise(other, Value::join),
        }
    }

    pub fn meet(&self, other: &Self) -> Self {
        match (self, other) {
            (AbstractMemory::Bot, _) | (_, AbstractMemory::Bot) => AbstractMemory::Bot,
            _ => self.pointwise(other, Value::meet),
        }
    }

    pub fn widen(&self, other: &Self, k: usize) -> Self {
        match (self, other) {
            (AbstractMemory::Bot, x) | (x, AbstractMemory::Bot) => x.clone(),
            _ => self.pointwise(other, |a, b| a.widen(b, k)),
        }
    }

    /// Bindings rendered as JSON with sorted keys; `null` for ⊥.
    pub fn to_json(&self) -> Json {
        match self {
            AbstractMemory::Bot => Json::Null,
            AbstractMemory::Map(m) => {
                let obj: Map<String, Json> = m.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
                Json::Object(obj)
            }
        }
    }
}

impl fmt::Display for AbstractMemory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbstractMemory::Bot => f.write_str("⊥"),
            AbstractMemory::Map(m) => {
                let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}↦{v}")).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::sign::Sign;

    fn m(bs: &[(&str, Sign)]) -> AbstractMemory {
        AbstractMemory::from_bindings(bs.iter().map(|(x, s)| (x.to_string(), Value::Int(*s))))
    }

    #[test]
    fn pointwise_join_and_meet() {
        assert_eq!(m(&[("x", Sign::Pos)]).join(&m(&[("x", Sign::Zero)])), m(&[("x", Sign::Top)]));
        assert_eq!(m(&[("x", Sign::Pos)]).meet(&m(&[("x", Sign::Top)])), m(&[("x", Sign::Pos)]));
        assert_eq!(m(&[("x", Sign::Pos)]).meet(&m(&[("x", Sign::Neg)])), AbstractMemory::Bot);
    }

    #[test]
    fn order() {
        assert!(AbstractMemory::Bot.leq(&m(&[])));
        assert!(m(&[("x", Sign::Pos)]).leq(&AbstractMemory::top()));
        assert!(!AbstractMemory::top().leq(&m(&[("x", Sign::Pos)])));
    }
}
