#![allow(dead_code)]

use std::collections::BTreeSet;

use codeabs::automata::Dfa;
use codeabs::domains::{AbsExpr, ConcreteValue};
use codeabs::imp::{render, ArithOp, CmpOp, Expr, Stmt};
use codeabs::label::AbsLabel;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn corpus(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

pub const CORPUS: &[&str] = &["grow_assign.imp", "count_loop.imp", "grow_branch.imp", "straight.imp", "nested_eval.imp"];

/// Random well-sorted terms over `x`, `y` (integers), `b` (boolean) and
/// `s` (string).
pub struct Gen {
    pub rng: ChaCha8Rng,
    /// Allow string literals.
    pub strings: bool,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), strings: true }
    }

    fn pick<T: Clone>(&mut self, xs: &[T]) -> T {
        xs.choose(&mut self.rng).unwrap().clone()
    }

    pub fn int(&mut self, depth: u32) -> Expr {
        if depth == 0 || self.rng.gen_bool(0.35) {
            return if self.rng.gen_bool(0.5) { Expr::int(self.rng.gen_range(-3..=3)) } else { Expr::var(self.pick(&["x", "y"])) };
        }
        let op = self.pick(&[ArithOp::Add, ArithOp::Sub, ArithOp::Mul]);
        Expr::arith(op, self.int(depth - 1), self.int(depth - 1))
    }

    pub fn boolean(&mut self, depth: u32) -> Expr {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return match self.rng.gen_range(0..3) {
                0 => Expr::bool(self.rng.gen_bool(0.5)),
                _ => Expr::var("b"),
            };
        }
        match self.rng.gen_range(0..4) {
            0 => Expr::and(self.boolean(depth - 1), self.boolean(depth - 1)),
            1 => Expr::not(self.boolean(depth - 1)),
            _ => {
                let op = self.pick(&[CmpOp::Lt, CmpOp::Gt, CmpOp::Eq]);
                Expr::cmp(op, self.int(depth - 1), self.int(depth - 1))
            }
        }
    }

    pub fn string(&mut self, depth: u32) -> Expr {
        if depth == 0 || self.rng.gen_bool(0.4) {
            return if self.strings && self.rng.gen_bool(0.5) {
                Expr::str(self.pick(&["", "a", "5", "a5"]))
            } else {
                Expr::var("s")
            };
        }
        Expr::concat(self.string(depth - 1), self.string(depth - 1))
    }

    /// An expression of any sort, with its sort index (0 int, 1 bool, 2 string).
    pub fn expr(&mut self, depth: u32) -> (Expr, usize) {
        match self.rng.gen_range(0..3) {
            0 => (self.int(depth), 0),
            1 => (self.boolean(depth), 1),
            _ => (self.string(depth), 2),
        }
    }

    pub fn assign(&mut self) -> Stmt {
        match self.rng.gen_range(0..4) {
            0 | 1 => {
                let x = self.pick(&["x", "y"]);
                Stmt::assign(x, self.int(2))
            }
            2 => Stmt::assign("b", self.boolean(2)),
            _ => Stmt::assign("s", self.string(2)),
        }
    }

    /// Loop-free statement; `evals` allows `eval` of rendered constant code.
    pub fn stmt(&mut self, depth: u32, evals: bool) -> Stmt {
        if depth == 0 {
            return self.assign();
        }
        match self.rng.gen_range(0..6) {
            0 | 1 => Stmt::seq(self.stmt(depth - 1, evals), self.stmt(depth - 1, evals)),
            2 => Stmt::if_(self.boolean(1), self.stmt(depth - 1, evals), self.stmt(depth - 1, evals)),
            3 if evals => {
                let saved = self.strings;
                self.strings = false;
                let inner = self.stmt(depth - 1, false);
                self.strings = saved;
                Stmt::eval(Expr::str(render(&inner)))
            }
            _ => self.assign(),
        }
    }

    /// Program that first binds `b` and `s`, so that sorts are fixed;
    /// `x` and `y` stay free.
    pub fn program(&mut self, depth: u32, evals: bool) -> Stmt {
        let init = Stmt::seq(Stmt::assign("b", Expr::bool(self.rng.gen_bool(0.5))), Stmt::assign("s", Expr::str(self.pick(&["", "a", "5"]))));
        Stmt::seq(init, self.stmt(depth, evals))
    }

    /// Concrete label over `x`, `y`.
    pub fn label(&mut self) -> AbsLabel {
        let e = |g: &mut Gen| {
            if g.rng.gen_bool(0.5) {
                Expr::int(g.rng.gen_range(-3..=3))
            } else {
                Expr::arith(ArithOp::Add, Expr::var("y"), Expr::int(g.rng.gen_range(-3..=3)))
            }
        };
        match self.rng.gen_range(0..3) {
            0 | 1 => {
                let rhs = e(self);
                AbsLabel::Assign { target: self.pick(&["x", "y"]).into(), rhs: AbsExpr::from(&rhs) }
            }
            _ => {
                let c = Expr::cmp(CmpOp::Lt, Expr::var("x"), e(self));
                AbsLabel::Guard { cond: AbsExpr::from(&c), positive: self.rng.gen_bool(0.5) }
            }
        }
    }

    /// Automaton of candidate programs: a chain of statements, some
    /// with a numeral growing in a loop, some alternatives, and at most
    /// one iterated statement.
    pub fn automaton(&mut self) -> Dfa {
        let lit = |s: &str| Dfa::from_literal(s).unwrap();
        let mut d = Dfa::epsilon();
        let mut starred = false;
        for _ in 0..self.rng.gen_range(1..=3) {
            let x = self.pick(&["x", "y"]);
            let part = match self.rng.gen_range(0..5) {
                0 => lit(&format!("{x}:={};", self.rng.gen_range(0..10))),
                1 => {
                    let digit = self.rng.gen_range(1..10).to_string();
                    lit(&format!("{x}:={digit}")).concat(&lit(&self.rng.gen_range(0..10).to_string()).star()).concat(&lit(";"))
                }
                2 => lit(&format!("{x}:=1;")).union(&lit(&format!("{x}:=-2;"))),
                3 => {
                    let n = self.rng.gen_range(0..5);
                    lit(&format!("if({x}<{n}){{{x}:=1}}else{{{x}:={x}+"))
                        .concat(&lit("1").plus())
                        .concat(&lit("};"))
                }
                _ if !starred => {
                    starred = true;
                    lit(&format!("{x}:={x}+1;")).star()
                }
                _ => lit(&format!("{x}:=0;")),
            };
            d = d.concat(&part);
        }
        d
    }
}

/// Concrete value set rendered for messages.
pub fn show(s: &BTreeSet<ConcreteValue>) -> String {
    s.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}
