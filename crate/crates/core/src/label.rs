//! Edge labels whose expressions may carry set-valued leaves.

use std::fmt;

use crate::cfg::EdgeLabel;
use crate::domains::{bulk_sign, AbsExpr, Sign};
use crate::imp::Stmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AbsLabel {
    Assign { target: String, rhs: AbsExpr },
    Guard { cond: AbsExpr, positive: bool },
    Eval { arg: AbsExpr },
}

impl From<&EdgeLabel> for AbsLabel {
    fn from(l: &EdgeLabel) -> Self {
        match l {
            EdgeLabel::Assign { target, rhs } => AbsLabel::Assign { target: target.clone(), rhs: rhs.into() },
            EdgeLabel::Guard { cond, positive } => AbsLabel::Guard { cond: cond.into(), positive: *positive },
            EdgeLabel::Eval { arg } => AbsLabel::Eval { arg: arg.into() },
        }
    }
}

impl AbsLabel {
    /// The label of an atomic statement (assignment or eval).
    pub fn of_stmt(s: &Stmt) -> Option<AbsLabel> {
        match s {
            Stmt::Assign { target, rhs } => Some(AbsLabel::Assign { target: target.clone(), rhs: rhs.into() }),
            Stmt::Eval { arg } => Some(AbsLabel::Eval { arg: arg.into() }),
            _ => None,
        }
    }

    pub fn skip() -> AbsLabel {
        AbsLabel::Guard { cond: AbsExpr::Bool(true), positive: true }
    }

    pub fn is_skip(&self) -> bool {
        *self == AbsLabel::skip()
    }

    pub fn expr(&self) -> &AbsExpr {
        match self {
            AbsLabel::Assign { rhs, .. } => rhs,
            AbsLabel::Guard { cond, .. } => cond,
            AbsLabel::Eval { arg } => arg,
        }
    }

    pub fn with_expr(&self, e: AbsExpr) -> AbsLabel {
        match self {
            AbsLabel::Assign { target, .. } => AbsLabel::Assign { target: target.clone(), rhs: e },
            AbsLabel::Guard { positive, .. } => AbsLabel::Guard { cond: e, positive: *positive },
            AbsLabel::Eval { .. } => AbsLabel::Eval { arg: e },
        }
    }

    /// The plain label, if no leaf is set-valued.
    pub fn to_edge(&self) -> Option<EdgeLabel> {
        Some(match self {
            AbsLabel::Assign { target, rhs } => EdgeLabel::Assign { target: target.clone(), rhs: rhs.to_expr()? },
            AbsLabel::Guard { cond, positive } => EdgeLabel::Guard { cond: cond.to_expr()?, positive: *positive },
            AbsLabel::Eval { arg } => EdgeLabel::Eval { arg: arg.to_expr()? },
        })
    }

    /// Same statement kind, target and polarity; expressions may differ.
    pub fn same_head(&self, other: &AbsLabel) -> bool {
        match (self, other) {
            (AbsLabel::Assign { target: a, .. }, AbsLabel::Assign { target: b, .. }) => a == b,
            (AbsLabel::Guard { positive: a, .. }, AbsLabel::Guard { positive: b, .. }) => a == b,
            (AbsLabel::Eval { .. }, AbsLabel::Eval { .. }) => true,
            _ => false,
        }
    }

    /// Whether every concrete label denoted by `other` is denoted by `self`.
    /// Decided leaf by leaf on identical skeletons, so it may answer `false`
    /// for some genuine inclusions.
    pub fn subsumes(&self, other: &AbsLabel) -> bool {
        self.same_head(other) && expr_includes(self.expr(), other.expr())
    }

    /// Whether some concrete label is denoted by both. Conservative in the
    /// other direction: distinct skeletons never overlap.
    pub fn overlaps(&self, other: &AbsLabel) -> bool {
        self.same_head(other) && expr_overlaps(self.expr(), other.expr())
    }
}

pub fn expr_overlaps(a: &AbsExpr, b: &AbsExpr) -> bool {
    if a == b {
        return true;
    }
    let (ac, bc) = (a.children(), b.children());
    if !ac.is_empty() || !bc.is_empty() {
        return a.shape_op_eq(b) && ac.len() == bc.len() && ac.iter().zip(&bc).all(|(x, y)| expr_overlaps(x, y));
    }
    leaf_overlaps(a, b) || leaf_overlaps(b, a)
}

fn leaf_overlaps(a: &AbsExpr, b: &AbsExpr) -> bool {
    use AbsExpr as E;
    match (a, b) {
        (E::BulkNum(d), E::BulkNum(e)) => !d.is_disjoint(e),
        (E::BulkStr(d) | E::AbsStr(d), E::BulkStr(e) | E::AbsStr(e)) => !d.is_disjoint(e),
        (E::AbsNum(s), E::AbsNum(t)) => s.meet(*t) != Sign::Bot,
        (E::AbsNum(s), E::BulkNum(d)) => s.meet(bulk_sign(d)) != Sign::Bot,
        (E::AbsBool(x), E::AbsBool(y)) => !x.meet(*y).is_bot(),
        _ => leaf_includes(a, b),
    }
}

pub fn expr_includes(big: &AbsExpr, small: &AbsExpr) -> bool {
    if big == small {
        return true;
    }
    let (bc, sc) = (big.children(), small.children());
    if !bc.is_empty() || !sc.is_empty() {
        return big.shape_op_eq(small)
            && bc.len() == sc.len()
            && bc.iter().zip(&sc).all(|(b, s)| expr_includes(b, s));
    }
    leaf_includes(big, small)
}

fn leaf_includes(big: &AbsExpr, small: &AbsExpr) -> bool {
    use AbsExpr as E;
    match (big, small) {
        (E::BulkNum(d), E::Int(n)) => *n >= 0 && d.accepts(&n.to_string()),
        (E::BulkNum(d), E::BulkNum(e)) => d.includes(e),
        (E::BulkStr(d) | E::AbsStr(d), E::Str(s)) => d.accepts(s),
        (E::BulkStr(d) | E::AbsStr(d), E::BulkStr(e) | E::AbsStr(e)) => d.includes(e),
        (E::AbsNum(s), E::Int(n)) => s.contains(*n),
        (E::AbsNum(s), E::AbsNum(t)) => t.leq(*s),
        (E::AbsNum(s), E::BulkNum(d)) => bulk_sign(d).leq(*s),
        (E::AbsBool(b), E::Bool(v)) => b.contains(*v),
        (E::AbsBool(b), E::AbsBool(c)) => c.leq(*b),
        _ => false,
    }
}

impl fmt::Display for AbsLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsLabel::Assign { target, rhs } => write!(f, "{target}:={rhs}"),
            AbsLabel::Guard { cond, positive: true } => write!(f, "{cond}"),
            AbsLabel::Guard { cond, positive: false } => write!(f, "¬({cond})"),
            AbsLabel::Eval { arg } => write!(f, "eval({arg})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Dfa;

    fn assign(rhs: AbsExpr) -> AbsLabel {
        AbsLabel::Assign { target: "x".into(), rhs }
    }

    #[test]
    fn bulk_numerals_subsume_members() {
        let d = Dfa::from_literal("5").unwrap().plus();
        assert!(assign(AbsExpr::BulkNum(d.clone())).subsumes(&assign(AbsExpr::Int(55))));
        assert!(!assign(AbsExpr::BulkNum(d)).subsumes(&assign(AbsExpr::Int(1))));
        assert!(assign(AbsExpr::AbsNum(Sign::Pos)).subsumes(&assign(AbsExpr::Int(1))));
        let other = AbsLabel::Assign { target: "y".into(), rhs: AbsExpr::Int(1) };
        assert!(!assign(AbsExpr::AbsNum(Sign::Pos)).subsumes(&other));
    }

    #[test]
    fn overlap_is_symmetric_on_leaves() {
        let d = Dfa::from_literal("5").unwrap().plus();
        let bulk = assign(AbsExpr::BulkNum(d));
        assert!(bulk.overlaps(&assign(AbsExpr::Int(5))));
        assert!(assign(AbsExpr::Int(5)).overlaps(&bulk));
        assert!(!bulk.overlaps(&assign(AbsExpr::Int(1))));
        assert!(assign(AbsExpr::AbsNum(Sign::Pos)).overlaps(&bulk));
        assert!(!assign(AbsExpr::AbsNum(Sign::Neg)).overlaps(&bulk));
    }

    #[test]
    fn renders_guards() {
        let g = AbsLabel::Guard {
            cond: AbsExpr::Cmp(crate::imp::CmpOp::Lt, Box::new(AbsExpr::Var("x".into())), Box::new(AbsExpr::AbsNum(Sign::Pos))),
            positive: false,
        };
        assert_eq!(g.to_string(), "¬(x<Z+)");
        assert_eq!(AbsLabel::skip().to_string(), "true");
    }
}
