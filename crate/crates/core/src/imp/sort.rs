//! Sort inference. Each variable carries a single sort across the program;
//! `+` is resolved to string concatenation when its operands are strings
//! and defaults to integer addition otherwise.

use std::collections::HashMap;

use serde::Serialize;

use super::ast::{ArithOp, CmpOp, Expr, Stmt};
use super::lexer::Pos;
use super::SyntaxError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sort {
    Int,
    Bool,
    Str,
}

struct Infer {
    parent: Vec<usize>,
    sort: Vec<Option<Sort>>,
    no_bool: Vec<bool>,
    vars: HashMap<String, usize>,
    plus: Vec<usize>,
}

impl Infer {
    fn fresh(&mut self, s: Option<Sort>) -> usize {
        self.parent.push(self.parent.len());
        self.sort.push(s);
        self.no_bool.push(false);
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn check(s: Option<Sort>, no_bool: bool) -> Result<(), String> {
        if no_bool && s == Some(Sort::Bool) {
            return Err("operator expects integers or strings, found a boolean".into());
        }
        Ok(())
    }

    fn unify(&mut self, a: usize, b: usize) -> Result<(), String> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return Ok(());
        }
        let s = match (self.sort[ra], self.sort[rb]) {
            (Some(x), Some(y)) if x != y => return Err(format!("sort mismatch: {x:?} versus {y:?}")),
            (x, y) => x.or(y),
        };
        let nb = self.no_bool[ra] || self.no_bool[rb];
        Self::check(s, nb)?;
        self.parent[rb] = ra;
        self.sort[ra] = s;
        self.no_bool[ra] = nb;
        Ok(())
    }

    fn expect(&mut self, a: usize, s: Sort) -> Result<(), String> {
        let t = self.fresh(Some(s));
        self.unify(a, t)
    }

    fn restrict(&mut self, a: usize) -> Result<(), String> {
        let r = self.find(a);
        self.no_bool[r] = true;
        Self::check(self.sort[r], true)
    }

    fn var(&mut self, name: &str) -> usize {
        if let Some(&c) = self.vars.get(name) {
            return c;
        }
        let c = self.fresh(None);
        self.vars.insert(name.to_string(), c);
        c
    }

    fn expr(&mut self, e: &Expr) -> Result<usize, String> {
        Ok(match e {
            Expr::Int { .. } => self.fresh(Some(Sort::Int)),
            Expr::Str { .. } => self.fresh(Some(Sort::Str)),
            Expr::Bool { .. } => self.fresh(Some(Sort::Bool)),
            Expr::Var { name } => self.var(name),
            Expr::Arith { op, left, right } => {
                let l = self.expr(left)?;
                let r = self.expr(right)?;
                if *op == ArithOp::Add {
                    self.unify(l, r)?;
                    self.restrict(l)?;
                    self.plus.push(l);
                    l
                } else {
                    self.expect(l, Sort::Int)?;
                    self.expect(r, Sort::Int)?;
                    self.fresh(Some(Sort::Int))
                }
            }
            Expr::Cmp { op, left, right } => {
                let l = self.expr(left)?;
                let r = self.expr(right)?;
                self.unify(l, r)?;
                if *op != CmpOp::Eq {
                    self.restrict(l)?;
                }
                self.fresh(Some(Sort::Bool))
            }
            Expr::And { left, right } => {
                let l = self.expr(left)?;
                let r = self.expr(right)?;
                self.expect(l, Sort::Bool)?;
                self.expect(r, Sort::Bool)?;
                self.fresh(Some(Sort::Bool))
            }
            Expr::Not { inner } => {
                let i = self.expr(inner)?;
                self.expect(i, Sort::Bool)?;
                self.fresh(Some(Sort::Bool))
            }
            Expr::Concat { left, right } => {
                let l = self.expr(left)?;
                let r = self.expr(right)?;
                self.expect(l, Sort::Str)?;
                self.expect(r, Sort::Str)?;
                self.fresh(Some(Sort::Str))
            }
            Expr::Substr { subject, from, to } => {
                let s = self.expr(subject)?;
                let a = self.expr(from)?;
                let b = self.expr(to)?;
                self.expect(s, Sort::Str)?;
                self.expect(a, Sort::Int)?;
                self.expect(b, Sort::Int)?;
                self.fresh(Some(Sort::Str))
            }
        })
    }

    fn stmt(&mut self, s: &Stmt, pos: &[Pos], k: &mut usize) -> Result<(), SyntaxError> {
        if let Stmt::Seq { first, second } = s {
            self.stmt(first, pos, k)?;
            return self.stmt(second, pos, k);
        }
        let here = pos.get(*k).copied().unwrap_or(Pos { line: 1, column: 1 });
        *k += 1;
        let wrap = |message: String| SyntaxError { line: here.line, column: here.column, message, expected: Vec::new() };
        match s {
            Stmt::Skip | Stmt::Seq { .. } => {}
            Stmt::Assign { target, rhs } => {
                let r = self.expr(rhs).map_err(wrap)?;
                let v = self.var(target);
                self.unify(v, r).map_err(|m| wrap(format!("{m} in assignment to `{target}`")))?;
            }
            Stmt::If { cond, then_branch, else_branch } => {
                let c = self.expr(cond).map_err(wrap)?;
                self.expect(c, Sort::Bool).map_err(|m| wrap(format!("{m} in condition")))?;
                self.stmt(then_branch, pos, k)?;
                self.stmt(else_branch, pos, k)?;
            }
            Stmt::While { cond, body } => {
                let c = self.expr(cond).map_err(wrap)?;
                self.expect(c, Sort::Bool).map_err(|m| wrap(format!("{m} in condition")))?;
                self.stmt(body, pos, k)?;
            }
            Stmt::Eval { arg } => {
                let a = self.expr(arg).map_err(wrap)?;
                self.expect(a, Sort::Str).map_err(|m| wrap(format!("{m} in eval argument")))?;
            }
        }
        Ok(())
    }
}

/// Result of sort inference: the rewritten statement and the sort of every
/// variable.
pub struct Sorted {
    pub stmt: Stmt,
    pub vars: HashMap<String, Sort>,
}

pub(crate) fn resolve(stmt: Stmt, pos: &[Pos]) -> Result<Sorted, SyntaxError> {
    let mut inf = Infer { parent: Vec::new(), sort: Vec::new(), no_bool: Vec::new(), vars: HashMap::new(), plus: Vec::new() };
    inf.stmt(&stmt, pos, &mut 0)?;
    let plus: Vec<bool> = inf
        .plus
        .clone()
        .into_iter()
        .map(|c| {
            let r = inf.find(c);
            inf.sort[r] == Some(Sort::Str)
        })
        .collect();
    let mut idx = 0;
    let stmt = rewrite_stmt(stmt, &plus, &mut idx);
    let names: Vec<(String, usize)> = inf.vars.iter().map(|(k, v)| (k.clone(), *v)).collect();
    let vars = names
        .into_iter()
        .map(|(k, c)| {
            let r = inf.find(c);
            (k, inf.sort[r].unwrap_or(Sort::Int))
        })
        .collect();
    Ok(Sorted { stmt, vars })
}

fn rewrite_stmt(s: Stmt, plus: &[bool], idx: &mut usize) -> Stmt {
    match s {
        Stmt::Skip => Stmt::Skip,
        Stmt::Assign { target, rhs } => Stmt::Assign { target, rhs: rewrite_expr(rhs, plus, idx) },
        Stmt::Seq { first, second } => {
            let f = rewrite_stmt(*first, plus, idx);
            let s = rewrite_stmt(*second, plus, idx);
            Stmt::Seq { first: Box::new(f), second: Box::new(s) }
        }
        Stmt::If { cond, then_branch, else_branch } => {
            let c = rewrite_expr(cond, plus, idx);
            let t = rewrite_stmt(*then_branch, plus, idx);
            let e = rewrite_stmt(*else_branch, plus, idx);
            Stmt::if_(c, t, e)
        }
        Stmt::While { cond, body } => {
            let c = rewrite_expr(cond, plus, idx);
            Stmt::while_(c, rewrite_stmt(*body, plus, idx))
        }
        Stmt::Eval { arg } => Stmt::eval(rewrite_expr(arg, plus, idx)),
    }
}

fn rewrite_expr(e: Expr, plus: &[bool], idx: &mut usize) -> Expr {
    match e {
        Expr::Arith { op, left, right } => {
            let l = rewrite_expr(*left, plus, idx);
            let r = rewrite_expr(*right, plus, idx);
            if op == ArithOp::Add {
                let is_str = plus[*idx];
                *idx += 1;
                if is_str {
                    return Expr::concat(l, r);
                }
            }
            Expr::arith(op, l, r)
        }
        Expr::Cmp { op, left, right } => {
            let l = rewrite_expr(*left, plus, idx);
            Expr::cmp(op, l, rewrite_expr(*right, plus, idx))
        }
        Expr::And { left, right } => {
            let l = rewrite_expr(*left, plus, idx);
            Expr::and(l, rewrite_expr(*right, plus, idx))
        }
        Expr::Not { inner } => Expr::not(rewrite_expr(*inner, plus, idx)),
        Expr::Concat { left, right } => {
            let l = rewrite_expr(*left, plus, idx);
            Expr::concat(l, rewrite_expr(*right, plus, idx))
        }
        Expr::Substr { subject, from, to } => {
            let s = rewrite_expr(*subject, plus, idx);
            let a = rewrite_expr(*from, plus, idx);
            Expr::substr(s, a, rewrite_expr(*to, plus, idx))
        }
        leaf => leaf,
    }
}
