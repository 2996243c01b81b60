use std::fmt;

use super::boolval::BoolVal;
use super::sign::Sign;
use crate::automata::Dfa;
use crate::imp::{ArithOp, CmpOp, Expr};

/// Expressions whose leaves may denote sets of values: abstract signs,
/// boolean sets and automata, plus the bulk literals produced when
/// parsing automata.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AbsExpr {
    Int(i64),
    Str(String),
    Bool(bool),
    Var(String),
    AbsNum(Sign),
    AbsBool(BoolVal),
    AbsStr(Dfa),
    /// Decimal literals spelled by a language of digit strings.
    BulkNum(Dfa),
    /// String literals whose contents range over a language.
    BulkStr(Dfa),
    Arith(ArithOp, Box<AbsExpr>, Box<AbsExpr>),
    Cmp(CmpOp, Box<AbsExpr>, Box<AbsExpr>),
    And(Box<AbsExpr>, Box<AbsExpr>),
    Not(Box<AbsExpr>),
    Concat(Box<AbsExpr>, Box<AbsExpr>),
    Substr(Box<AbsExpr>, Box<AbsExpr>, Box<AbsExpr>),
}

impl From<&Expr> for AbsExpr {
    fn from(e: &Expr) -> Self {
        let b = |x: &Expr| Box::new(AbsExpr::from(x));
        match e {
            Expr::Int { value } => AbsExpr::Int(*value),
            Expr::Str { value } => AbsExpr::Str(value.clone()),
            Expr::Bool { value } => AbsExpr::Bool(*value),
            Expr::Var { name } => AbsExpr::Var(name.clone()),
            Expr::Arith { op, left, right } => AbsExpr::Arith(*op, b(left), b(right)),
            Expr::Cmp { op, left, right } => AbsExpr::Cmp(*op, b(left), b(right)),
            Expr::And { left, right } => AbsExpr::And(b(left), b(right)),
            Expr::Not { inner } => AbsExpr::Not(b(inner)),
            Expr::Concat { left, right } => AbsExpr::Concat(b(left), b(right)),
            Expr::Substr { subject, from, to } => AbsExpr::Substr(b(subject), b(from), b(to)),
        }
    }
}

impl AbsExpr {
    /// Back to a plain expression when no leaf is abstract.
    pub fn to_expr(&self) -> Option<Expr> {
        Some(match self {
            AbsExpr::Int(n) => Expr::int(*n),
            AbsExpr::Str(s) => Expr::str(s.clone()),
            AbsExpr::Bool(b) => Expr::bool(*b),
            AbsExpr::Var(x) => Expr::var(x.clone()),
            AbsExpr::Arith(op, l, r) => Expr::arith(*op, l.to_expr()?, r.to_expr()?),
            AbsExpr::Cmp(op, l, r) => Expr::cmp(*op, l.to_expr()?, r.to_expr()?),
            AbsExpr::And(l, r) => Expr::and(l.to_expr()?, r.to_expr()?),
            AbsExpr::Not(i) => Expr::not(i.to_expr()?),
            AbsExpr::Concat(l, r) => Expr::concat(l.to_expr()?, r.to_expr()?),
            AbsExpr::Substr(s, a, b) => Expr::substr(s.to_expr()?, a.to_expr()?, b.to_expr()?),
            _ => return None,
        })
    }

    /// Same node kind and operator, ignoring children.
    pub fn shape_op_eq(&self, other: &AbsExpr) -> bool {
        match (self, other) {
            (AbsExpr::Arith(a, ..), AbsExpr::Arith(b, ..)) => a == b,
            (AbsExpr::Cmp(a, ..), AbsExpr::Cmp(b, ..)) => a == b,
            _ => std::mem::discriminant(self) == std::mem::discriminant(other),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children().is_empty()
    }

    pub fn children(&self) -> Vec<&AbsExpr> {
        match self {
            AbsExpr::Arith(_, l, r) | AbsExpr::Cmp(_, l, r) | AbsExpr::And(l, r) | AbsExpr::Concat(l, r) => {
                vec![l, r]
            }
            AbsExpr::Not(i) => vec![i],
            AbsExpr::Substr(s, a, b) => vec![s, a, b],
            _ => Vec::new(),
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&AbsExpr> {
        if self.is_leaf() {
            return vec![self];
        }
        self.children().into_iter().flat_map(AbsExpr::leaves).collect()
    }

    /// Rebuilds the tree with every leaf replaced by `f(leaf)`.
    pub fn map_leaves(&self, f: &mut impl FnMut(&AbsExpr) -> AbsExpr) -> AbsExpr {
        let mut g = |x: &AbsExpr| Box::new(x.map_leaves(f));
        match self {
            AbsExpr::Arith(op, l, r) => {
                let l = g(l);
                AbsExpr::Arith(*op, l, g(r))
            }
            AbsExpr::Cmp(op, l, r) => {
                let l = g(l);
                AbsExpr::Cmp(*op, l, g(r))
            }
            AbsExpr::And(l, r) => {
                let l = g(l);
                AbsExpr::And(l, g(r))
            }
            AbsExpr::Not(i) => AbsExpr::Not(g(i)),
            AbsExpr::Concat(l, r) => {
                let l = g(l);
                AbsExpr::Concat(l, g(r))
            }
            AbsExpr::Substr(s, a, b) => {
                let s = g(s);
                let a = g(a);
                AbsExpr::Substr(s, a, g(b))
            }
            leaf => f(leaf),
        }
    }

    /// The operator skeleton: the same tree with every leaf other than a
    /// variable blanked out.
    pub fn shape(&self) -> AbsExpr {
        self.map_leaves(&mut |l| match l {
            AbsExpr::Var(x) => AbsExpr::Var(x.clone()),
            _ => AbsExpr::AbsBool(BoolVal::BOT),
        })
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for l in self.leaves() {
            if let AbsExpr::Var(x) = l {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
        }
        out
    }

    fn prec(&self) -> u8 {
        match self {
            AbsExpr::And(..) => 1,
            AbsExpr::Cmp(..) => 2,
            AbsExpr::Arith(ArithOp::Mul, ..) => 4,
            AbsExpr::Arith(..) | AbsExpr::Concat(..) => 3,
            AbsExpr::Not(_) => 5,
            AbsExpr::Int(n) if *n < 0 => 5,
            _ => 6,
        }
    }

    pub fn render(&self) -> String {
        let wrap = |e: &AbsExpr, parens: bool| if parens { format!("({})", e.render()) } else { e.render() };
        let bin = |p: u8, l: &AbsExpr, sym: &str, r: &AbsExpr, assoc: bool| {
            let lp = if assoc { l.prec() < p } else { l.prec() <= p };
            format!("{}{}{}", wrap(l, lp), sym, wrap(r, r.prec() <= p))
        };
        match self {
            AbsExpr::Int(n) => n.to_string(),
            AbsExpr::Str(s) => format!("\"{s}\""),
            AbsExpr::Bool(b) => b.to_string(),
            AbsExpr::Var(x) => x.clone(),
            AbsExpr::AbsNum(s) => s.leaf().to_string(),
            AbsExpr::AbsBool(b) => b.to_string(),
            AbsExpr::AbsStr(d) => format!("⟨{}⟩", d.to_regex()),
            AbsExpr::BulkNum(d) => d.to_regex(),
            AbsExpr::BulkStr(d) => format!("\"{}\"", d.to_regex()),
            AbsExpr::Arith(op, l, r) => bin(self.prec(), l, op.symbol(), r, true),
            AbsExpr::Cmp(op, l, r) => bin(2, l, op.symbol(), r, false),
            AbsExpr::And(l, r) => bin(1, l, "&&", r, true),
            AbsExpr::Not(i) => format!("!{}", wrap(i, i.prec() < 5)),
            AbsExpr::Concat(l, r) => bin(3, l, "+", r, true),
            AbsExpr::Substr(s, a, b) => format!("substr({},{},{})", s.render(), a.render(), b.render()),
        }
    }
}

impl fmt::Display for AbsExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imp::parse_expr;

    #[test]
    fn round_trip_through_plain_expressions() {
        let e = parse_expr("x+1<3 && !(substr(s,0,2)=\"a\")").unwrap();
        assert_eq!(AbsExpr::from(&e).to_expr(), Some(e));
    }

    #[test]
    fn renders_sign_leaves() {
        let e = AbsExpr::Cmp(CmpOp::Lt, Box::new(AbsExpr::Var("x".into())), Box::new(AbsExpr::AbsNum(Sign::Pos)));
        assert_eq!(e.render(), "x<Z+");
    }
}
