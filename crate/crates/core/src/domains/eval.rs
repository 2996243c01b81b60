use std::collections::BTreeSet;
use std::sync::OnceLock;

use thiserror::Error;

use super::boolval::BoolVal;
use super::collecting::{self, CollectingMemory};
use super::expr::AbsExpr;
use super::memory::AbstractMemory;
use super::sign::Sign;
use super::value::{Bounds, ConcreteValue, Value};
use crate::automata::{substring_overapprox, sym, Dfa, IndexInfo};
use crate::imp::{ArithOp, CmpOp, Expr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("sort mismatch: {0}")]
pub struct SortMismatch(pub String);

/// Knobs of the abstract expression semantics.
#[derive(Debug, Clone, Copy)]
pub struct Transfer {
    /// Sign addition; replaceable so that tests can plant a broken one.
    pub sign_add: fn(Sign, Sign) -> Sign,
    /// Turn sort mismatches into ⊤ instead of failing.
    pub permissive: bool,
}

impl Default for Transfer {
    fn default() -> Self {
        Transfer { sign_add: Sign::add, permissive: true }
    }
}

fn digits() -> &'static Dfa {
    static D: OnceLock<Dfa> = OnceLock::new();
    D.get_or_init(|| Dfa::char_class((b'0'..=b'9').map(|c| sym(c as char).expect("digit"))))
}

/// Sign of the numbers spelled by a language of digit strings.
pub fn bulk_sign(d: &Dfa) -> Sign {
    static Z: OnceLock<(Dfa, Dfa)> = OnceLock::new();
    let (zero, any) = Z.get_or_init(|| {
        let zero = Dfa::from_literal("0").expect("digit").plus();
        (zero, digits().plus())
    });
    let spelled = d.intersect(any);
    let mut s = Sign::Bot;
    if !spelled.is_disjoint(zero) {
        s = s.join(Sign::Zero);
    }
    if !spelled.difference(zero).is_empty() {
        s = s.join(Sign::Pos);
    }
    s
}

/// Digit-only language accepted by `d`, as a check for numeric bulks.
pub fn digit_strings(d: &Dfa) -> Dfa {
    d.intersect(&digits().plus())
}

fn as_int(v: &Value) -> Result<Sign, SortMismatch> {
    match v {
        Value::Int(s) => Ok(*s),
        Value::Top => Ok(Sign::Top),
        Value::Bot => Ok(Sign::Bot),
        other => Err(SortMismatch(format!("expected an integer, found {other}"))),
    }
}

fn as_bool(v: &Value) -> Result<BoolVal, SortMismatch> {
    match v {
        Value::Bool(b) => Ok(*b),
        Value::Top => Ok(BoolVal::TOP),
        Value::Bot => Ok(BoolVal::BOT),
        other => Err(SortMismatch(format!("expected a boolean, found {other}"))),
    }
}

fn as_str(v: &Value) -> Result<Dfa, SortMismatch> {
    match v {
        Value::Str(d) => Ok(d.clone()),
        Value::Top => Ok(Dfa::universe()),
        Value::Bot => Ok(Dfa::empty()),
        other => Err(SortMismatch(format!("expected a string, found {other}"))),
    }
}

fn string_eq(a: &Dfa, b: &Dfa) -> BoolVal {
    if a.is_empty() || b.is_empty() {
        return BoolVal::BOT;
    }
    if a.is_disjoint(b) {
        return BoolVal::FALSE;
    }
    if a == b && a.singleton().is_some() {
        return BoolVal::TRUE;
    }
    BoolVal::TOP
}

fn string_order(op: CmpOp, a: &Dfa, b: &Dfa) -> BoolVal {
    const LIMIT: usize = 64;
    if a.is_empty() || b.is_empty() {
        return BoolVal::BOT;
    }
    match (a.finite_strings(LIMIT), b.finite_strings(LIMIT)) {
        (Some(xs), Some(ys)) => {
            let mut out = BoolVal::BOT;
            for x in &xs {
                for y in &ys {
                    out = out.join(BoolVal::of(if op == CmpOp::Lt { x < y } else { x > y }));
                }
            }
            out
        }
        _ => BoolVal::TOP,
    }
}

fn index_info(e: &AbsExpr, v: Sign) -> IndexInfo {
    match (e, v) {
        (AbsExpr::Int(n), _) => IndexInfo::Exact(*n),
        (_, Sign::Zero) => IndexInfo::Exact(0),
        _ => IndexInfo::Unknown,
    }
}

/// Abstract semantics of expressions with possibly abstract leaves.
pub fn eval_abstract(e: &AbsExpr, m: &AbstractMemory, t: &Transfer) -> Result<Value, SortMismatch> {
    if m.is_bot() {
        return Ok(Value::Bot);
    }
    match eval_inner(e, m, t) {
        Err(_) if t.permissive => Ok(Value::Top),
        r => r,
    }
}

/// Abstract semantics of a plain expression.
pub fn eval_abstract_expr(e: &Expr, m: &AbstractMemory, t: &Transfer) -> Result<Value, SortMismatch> {
    eval_abstract(&AbsExpr::from(e), m, t)
}

fn eval_inner(e: &AbsExpr, m: &AbstractMemory, t: &Transfer) -> Result<Value, SortMismatch> {
    let ev = |x: &AbsExpr| eval_inner(x, m, t);
    Ok(match e {
        AbsExpr::Int(n) => Value::Int(Sign::of(*n)),
        AbsExpr::Str(s) => Value::Str(Dfa::from_literal(s).unwrap_or_else(|_| Dfa::universe())),
        AbsExpr::Bool(b) => Value::Bool(BoolVal::of(*b)),
        AbsExpr::Var(x) => m.get(x),
        AbsExpr::AbsNum(s) => Value::int(*s),
        AbsExpr::AbsBool(b) => Value::boolean(*b),
        AbsExpr::AbsStr(d) | AbsExpr::BulkStr(d) => Value::string(d.clone()),
        AbsExpr::BulkNum(d) => Value::int(bulk_sign(d)),
        AbsExpr::Arith(op, l, r) => {
            let (a, b) = (ev(l)?, ev(r)?);
            if a.is_bot() || b.is_bot() {
                return Ok(Value::Bot);
            }
            let stringy = matches!(a, Value::Str(_)) || matches!(b, Value::Str(_));
            if *op == ArithOp::Add && stringy {
                Value::string(as_str(&a)?.concat(&as_str(&b)?))
            } else if *op == ArithOp::Add && a == Value::Top && b == Value::Top {
                Value::Top
            } else {
                let (x, y) = (as_int(&a)?, as_int(&b)?);
                Value::int(match op {
                    ArithOp::Add => (t.sign_add)(x, y),
                    ArithOp::Sub => x.sub(y),
                    ArithOp::Mul => x.mul(y),
                })
            }
        }
        AbsExpr::Cmp(op, l, r) => {
            let (a, b) = (ev(l)?, ev(r)?);
            if a.is_bot() || b.is_bot() {
                return Ok(Value::Bot);
            }
            let v = match (op, &a, &b) {
                (_, Value::Top, _) | (_, _, Value::Top) => BoolVal::TOP,
                (CmpOp::Eq, Value::Int(x), Value::Int(y)) => x.eq_verdict(*y),
                (CmpOp::Lt, Value::Int(x), Value::Int(y)) => x.less(*y),
                (CmpOp::Gt, Value::Int(x), Value::Int(y)) => x.greater(*y),
                (CmpOp::Eq, Value::Bool(x), Value::Bool(y)) => {
                    let mut out = BoolVal::BOT;
                    for p in x.gamma() {
                        for q in y.gamma() {
                            out = out.join(BoolVal::of(p == q));
                        }
                    }
                    out
                }
                (CmpOp::Eq, Value::Str(x), Value::Str(y)) => string_eq(x, y),
                (_, Value::Str(x), Value::Str(y)) => string_order(*op, x, y),
                _ => return Err(SortMismatch(format!("cannot compare {a} with {b}"))),
            };
            Value::boolean(v)
        }
        AbsExpr::And(l, r) => Value::boolean(as_bool(&ev(l)?)?.and(as_bool(&ev(r)?)?)),
        AbsExpr::Not(i) => Value::boolean(as_bool(&ev(i)?)?.not()),
        AbsExpr::Concat(l, r) => {
            let a = as_str(&ev(l)?)?;
            Value::string(a.concat(&as_str(&ev(r)?)?))
        }
        AbsExpr::Substr(s, i, j) => {
            let d = as_str(&ev(s)?)?;
            let si = as_int(&ev(i)?)?;
            let sj = as_int(&ev(j)?)?;
            if si == Sign::Bot || sj == Sign::Bot {
                return Ok(Value::Bot);
            }
            Value::string(substring_overapprox(&d, index_info(i, si), index_info(j, sj)))
        }
    })
}

/// Values denoted by a leaf inside the bounds. Bulk numerals are expanded
/// up to `max_len` digits regardless of the integer window.
pub fn leaf_values(e: &AbsExpr, b: &Bounds) -> BTreeSet<ConcreteValue> {
    match e {
        AbsExpr::Int(n) => BTreeSet::from([ConcreteValue::Int(*n)]),
        AbsExpr::Str(s) => BTreeSet::from([ConcreteValue::Str(s.clone())]),
        AbsExpr::Bool(v) => BTreeSet::from([ConcreteValue::Bool(*v)]),
        AbsExpr::AbsNum(s) => Value::int(*s).gamma_bounded(b),
        AbsExpr::AbsBool(v) => Value::boolean(*v).gamma_bounded(b),
        AbsExpr::AbsStr(d) | AbsExpr::BulkStr(d) => Value::string(d.clone()).gamma_bounded(b),
        AbsExpr::BulkNum(d) => digit_strings(d)
            .enumerate(b.max_len.max(1))
            .into_iter()
            .filter_map(|s| s.parse::<i64>().ok())
            .map(ConcreteValue::Int)
            .collect(),
        _ => BTreeSet::new(),
    }
}

fn lift2(
    a: &BTreeSet<ConcreteValue>,
    b: &BTreeSet<ConcreteValue>,
    f: impl Fn(&ConcreteValue, &ConcreteValue) -> Option<ConcreteValue>,
) -> BTreeSet<ConcreteValue> {
    a.iter().flat_map(|x| b.iter().filter_map(|y| f(x, y)).collect::<Vec<_>>()).collect()
}

/// Collecting semantics of expressions as the operator-wise lift to sets:
/// each operator is applied to every combination of operand values.
/// Abstract leaves denote their bounded concretisation.
pub fn eval_collecting(e: &AbsExpr, m: &CollectingMemory, b: &Bounds) -> BTreeSet<ConcreteValue> {
    let ev = |x: &AbsExpr| eval_collecting(x, m, b);
    match e {
        AbsExpr::Var(x) => m.get(x),
        AbsExpr::Arith(op, l, r) => lift2(&ev(l), &ev(r), |x, y| collecting::arith(*op, x, y)),
        AbsExpr::Cmp(op, l, r) => {
            lift2(&ev(l), &ev(r), |x, y| collecting::compare(*op, x, y).map(ConcreteValue::Bool))
        }
        AbsExpr::And(l, r) => lift2(&ev(l), &ev(r), collecting::and),
        AbsExpr::Not(i) => ev(i).iter().filter_map(collecting::not).collect(),
        AbsExpr::Concat(l, r) => lift2(&ev(l), &ev(r), collecting::concat),
        AbsExpr::Substr(s, i, j) => {
            let (ss, is, js) = (ev(s), ev(i), ev(j));
            let mut out = BTreeSet::new();
            for x in &ss {
                for y in &is {
                    for z in &js {
                        out.extend(collecting::substr(x, y, z));
                    }
                }
            }
            out
        }
        leaf => leaf_values(leaf, b),
    }
}

/// Collecting semantics of a plain expression.
pub fn eval_collecting_expr(e: &Expr, m: &CollectingMemory) -> BTreeSet<ConcreteValue> {
    eval_collecting(&AbsExpr::from(e), m, &Bounds::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imp::parse_expr;

    fn mem(bs: &[(&str, Value)]) -> AbstractMemory {
        AbstractMemory::from_bindings(bs.iter().map(|(x, v)| (x.to_string(), v.clone())))
    }

    #[test]
    fn sign_examples() {
        let t = Transfer::default();
        let m = mem(&[("x", Value::Int(Sign::Pos))]);
        assert_eq!(eval_abstract_expr(&parse_expr("x+1").unwrap(), &m, &t), Ok(Value::Int(Sign::Pos)));
        let m = mem(&[("x", Value::Int(Sign::Neg)), ("y", Value::Int(Sign::Neg))]);
        assert_eq!(eval_abstract_expr(&parse_expr("x*y").unwrap(), &m, &t), Ok(Value::Int(Sign::Pos)));
    }

    #[test]
    fn string_concat() {
        let t = Transfer::default();
        let m = mem(&[("s", Value::Str(Dfa::from_literal("x:=5").unwrap()))]);
        let e = parse_expr("s+\"5\"").unwrap();
        assert_eq!(eval_abstract_expr(&e, &m, &t), Ok(Value::Str(Dfa::from_literal("x:=55").unwrap())));
    }

    #[test]
    fn collecting_examples() {
        let m = CollectingMemory::new().with("x", [ConcreteValue::Int(0), ConcreteValue::Int(4)]);
        let r = eval_collecting_expr(&parse_expr("x+1").unwrap(), &m);
        assert_eq!(r, BTreeSet::from([ConcreteValue::Int(1), ConcreteValue::Int(5)]));
        let m = CollectingMemory::new().with("x", [ConcreteValue::Int(3), ConcreteValue::Int(7)]);
        let r = eval_collecting_expr(&parse_expr("x<5").unwrap(), &m);
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn bulk_numerals() {
        let d = Dfa::from_literal("5").unwrap().plus();
        assert_eq!(bulk_sign(&d), Sign::Pos);
        assert_eq!(bulk_sign(&Dfa::from_literal("00").unwrap()), Sign::Zero);
        let vals = leaf_values(&AbsExpr::BulkNum(d), &Bounds::default());
        assert_eq!(vals.len(), 3);
    }

    #[test]
    fn strict_mode_reports_mismatch() {
        let t = Transfer { permissive: false, ..Transfer::default() };
        let m = mem(&[("b", Value::Bool(BoolVal::TRUE))]);
        assert!(eval_abstract_expr(&parse_expr("b+1").unwrap(), &m, &t).is_err());
    }
}
