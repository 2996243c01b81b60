//! Abstract edge effects.

use super::{eval_transfer, Cx};
use crate::cfg::EdgeLabel;
use crate::code_abs::AbstractEdge;
use crate::domains::{eval_abstract, AbsExpr, AbstractMemory, BoolVal, Sign, Transfer, Value};
use crate::imp::CmpOp;
use crate::label::AbsLabel;

/// Labels that can be interpreted on abstract memories.
pub trait Effect {
    fn apply(&self, m: &AbstractMemory, cx: &mut Cx) -> AbstractMemory;
}

impl Effect for EdgeLabel {
    fn apply(&self, m: &AbstractMemory, cx: &mut Cx) -> AbstractMemory {
        AbsLabel::from(self).apply(m, cx)
    }
}

impl Effect for AbsLabel {
    fn apply(&self, m: &AbstractMemory, cx: &mut Cx) -> AbstractMemory {
        if m.is_bot() {
            return AbstractMemory::Bot;
        }
        match self {
            AbsLabel::Assign { target, rhs } => m.set(target, value(rhs, m, &cx.config.transfer)),
            AbsLabel::Guard { cond, positive } => guard(cond, *positive, m, &cx.config.transfer),
            AbsLabel::Eval { arg } => eval_transfer(arg, m, cx),
        }
    }
}

/// A set of labels acts as the join of its members.
impl Effect for AbstractEdge {
    fn apply(&self, m: &AbstractMemory, cx: &mut Cx) -> AbstractMemory {
        self.0.iter().fold(AbstractMemory::Bot, |acc, l| acc.join(&l.apply(m, cx)))
    }
}

pub fn value(e: &AbsExpr, m: &AbstractMemory, t: &Transfer) -> Value {
    eval_abstract(e, m, t).unwrap_or(Value::Top)
}

/// Memories in which `cond` may evaluate to `positive`. Besides ruling
/// out impossible branches, a few syntactic forms refine a variable:
/// comparisons of a variable against an expression of known sign,
/// equalities, boolean variables and conjunctions.
pub fn guard(cond: &AbsExpr, positive: bool, m: &AbstractMemory, t: &Transfer) -> AbstractMemory {
    if m.is_bot() {
        return AbstractMemory::Bot;
    }
    let possible = match value(cond, m, t) {
        Value::Bool(b) => b.contains(positive),
        Value::Bot => false,
        _ => true,
    };
    if !possible {
        return AbstractMemory::Bot;
    }
    match cond {
        AbsExpr::Not(inner) => guard(inner, !positive, m, t),
        AbsExpr::And(l, r) if positive => guard(r, true, &guard(l, true, m, t), t),
        AbsExpr::Var(x) => m.set(x, m.get(x).meet(&Value::boolean(BoolVal::of(positive)))),
        AbsExpr::Cmp(op, l, r) => {
            let mut out = m.clone();
            if let AbsExpr::Var(x) = &**l {
                out = refine(&out, x, *op, false, positive, &value(r, m, t));
            }
            if let AbsExpr::Var(y) = &**r {
                out = refine(&out, y, *op, true, positive, &value(l, m, t));
            }
            out
        }
        _ => m.clone(),
    }
}

/// Refines `x` knowing that `x op other` (or `other op x` when `mirrored`)
/// evaluates to `positive`.
fn refine(m: &AbstractMemory, x: &str, op: CmpOp, mirrored: bool, positive: bool, other: &Value) -> AbstractMemory {
    let op = match (op, mirrored) {
        (CmpOp::Lt, true) => CmpOp::Gt,
        (CmpOp::Gt, true) => CmpOp::Lt,
        (op, _) => op,
    };
    let bound = match (op, positive, other) {
        (CmpOp::Eq, true, v) => Some(v.clone()),
        (CmpOp::Lt, true, Value::Int(Sign::Neg | Sign::Zero)) => Some(Value::Int(Sign::Neg)),
        (CmpOp::Gt, true, Value::Int(Sign::Pos | Sign::Zero)) => Some(Value::Int(Sign::Pos)),
        (CmpOp::Lt, false, Value::Int(Sign::Pos)) => Some(Value::Int(Sign::Pos)),
        (CmpOp::Gt, false, Value::Int(Sign::Neg)) => Some(Value::Int(Sign::Neg)),
        _ => None,
    };
    match bound {
        Some(b) => m.set(x, m.get(x).meet(&b)),
        None => m.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imp::parse_expr;

    fn mem(bs: &[(&str, Sign)]) -> AbstractMemory {
        AbstractMemory::from_bindings(bs.iter().map(|(x, s)| (x.to_string(), Value::Int(*s))))
    }

    fn g(src: &str, positive: bool, m: &AbstractMemory) -> AbstractMemory {
        guard(&AbsExpr::from(&parse_expr(src).unwrap()), positive, m, &Transfer::default())
    }

    #[test]
    fn refinements() {
        let top = AbstractMemory::top();
        assert_eq!(g("x<0", true, &top), mem(&[("x", Sign::Neg)]));
        assert_eq!(g("x<5", true, &top), top);
        assert_eq!(g("x<5", false, &top), mem(&[("x", Sign::Pos)]));
        assert_eq!(g("0<x", true, &top), mem(&[("x", Sign::Pos)]));
        assert_eq!(g("x=0", true, &top), mem(&[("x", Sign::Zero)]));
        assert_eq!(g("x<5", false, &mem(&[("x", Sign::Pos)])), mem(&[("x", Sign::Pos)]));
        assert!(g("x<0", true, &mem(&[("x", Sign::Pos)])).is_bot());
        assert_eq!(g("true", true, &top), top);
        assert_eq!(g("x>0 && y<0", true, &top), mem(&[("x", Sign::Pos), ("y", Sign::Neg)]));
    }
}
