//! Statement recognition over automaton states. Every parse function
//! returns all the ways the input can be read from a position.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use super::lex::{At, Lexer, PTok, Prev};
use crate::domains::AbsExpr;
use crate::imp::{is_keyword, ArithOp, CmpOp};
use crate::label::AbsLabel;

/// Program point of a fragment: an automaton state, or the end of the
/// statement being recognised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    At(usize),
    Exit,
}

pub type Fragment = Vec<(Node, AbsLabel, Node)>;

fn link(f: &Fragment, to: usize) -> Fragment {
    let fix = |n: Node| if n == Node::Exit { Node::At(to) } else { n };
    f.iter().map(|(u, l, v)| (fix(*u), l.clone(), fix(*v))).collect()
}

type Exprs = Rc<Vec<(AbsExpr, At)>>;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Level {
    And,
    Cmp,
    Add,
    Mul,
    Unary,
}

pub(crate) struct StmtParser<'a> {
    pub lx: Lexer<'a>,
    heads: &'a BTreeSet<usize>,
    exprs: RefCell<HashMap<(At, Level), Exprs>>,
    seqs: RefCell<HashMap<At, Rc<Vec<(Fragment, At)>>>>,
}

impl<'a> StmtParser<'a> {
    pub fn new(lx: Lexer<'a>, heads: &'a BTreeSet<usize>) -> Self {
        StmtParser { lx, heads, exprs: RefCell::default(), seqs: RefCell::default() }
    }

    fn sym(&self, at: At, s: &str) -> Vec<At> {
        self.lx.tokens(at).iter().filter(|(t, _)| matches!(t, PTok::Sym(x) if *x == s)).map(|(_, p)| *p).collect()
    }

    fn word(&self, at: At, w: &str) -> Vec<At> {
        self.lx.tokens(at).iter().filter(|(t, _)| matches!(t, PTok::Word(x) if x == w)).map(|(_, p)| *p).collect()
    }

    fn level(&self, at: At, lv: Level) -> Exprs {
        if let Some(r) = self.exprs.borrow().get(&(at, lv)) {
            return r.clone();
        }
        let r: BTreeSet<(AbsExpr, At)> = match lv {
            Level::And => self.chain(at, Level::Cmp, &[("&&", None)]),
            Level::Cmp => {
                let mut out = BTreeSet::new();
                for (l, p) in self.level(at, Level::Add).iter() {
                    out.insert((l.clone(), *p));
                    for (name, op) in [("=", CmpOp::Eq), ("<", CmpOp::Lt), (">", CmpOp::Gt)] {
                        for p2 in self.sym(*p, name) {
                            for (r, p3) in self.level(p2, Level::Add).iter() {
                                out.insert((AbsExpr::Cmp(op, Box::new(l.clone()), Box::new(r.clone())), *p3));
                            }
                        }
                    }
                }
                out
            }
            Level::Add => self.chain(at, Level::Mul, &[("+", Some(ArithOp::Add)), ("-", Some(ArithOp::Sub))]),
            Level::Mul => self.chain(at, Level::Unary, &[("*", Some(ArithOp::Mul))]),
            Level::Unary => self.unary(at),
        };
        let r = Rc::new(r.into_iter().collect::<Vec<_>>());
        self.exprs.borrow_mut().insert((at, lv), r.clone());
        r
    }

    /// Left-associative chains `e (op e)*`; `None` stands for `&&`.
    fn chain(&self, at: At, sub: Level, ops: &[(&str, Option<ArithOp>)]) -> BTreeSet<(AbsExpr, At)> {
        let mut out = BTreeSet::new();
        let mut frontier: Vec<(AbsExpr, At)> = self.level(at, sub).iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (e, p) in frontier {
                for (name, op) in ops {
                    for p2 in self.sym(p, name) {
                        for (r, p3) in self.level(p2, sub).iter() {
                            let (l, r) = (Box::new(e.clone()), Box::new(r.clone()));
                            let combined = match op {
                                Some(op) => AbsExpr::Arith(*op, l, r),
                                None => AbsExpr::And(l, r),
                            };
                            next.push((combined, *p3));
                        }
                    }
                }
                out.insert((e, p));
            }
            frontier = next;
        }
        out
    }

    fn unary(&self, at: At) -> BTreeSet<(AbsExpr, At)> {
        let mut out = BTreeSet::new();
        for (tok, p) in self.lx.tokens(at).iter() {
            match tok {
                PTok::Sym("!") => {
                    for (e, p2) in self.level(*p, Level::Unary).iter() {
                        out.insert((AbsExpr::Not(Box::new(e.clone())), *p2));
                    }
                }
                PTok::Sym("-") => {
                    for (t, p2) in self.lx.tokens(*p).iter() {
                        match t {
                            PTok::Num(AbsExpr::Int(n)) => {
                                out.insert((AbsExpr::Int(-n), *p2));
                            }
                            PTok::Num(bulk) => {
                                let neg = AbsExpr::Arith(ArithOp::Sub, Box::new(AbsExpr::Int(0)), Box::new(bulk.clone()));
                                out.insert((neg, *p2));
                            }
                            _ => {}
                        }
                    }
                }
                _ => out.extend(self.primary(tok, *p)),
            }
        }
        out
    }

    fn primary(&self, tok: &PTok, p: At) -> Vec<(AbsExpr, At)> {
        let mut out = Vec::new();
        match tok {
            PTok::Num(e) | PTok::Text(e) => out.push((e.clone(), p)),
            PTok::Sym("(") => {
                for (e, p2) in self.level(p, Level::And).iter() {
                    for p3 in self.sym(*p2, ")") {
                        out.push((e.clone(), p3));
                    }
                }
            }
            PTok::Word(w) if w == "true" || w == "false" => out.push((AbsExpr::Bool(w == "true"), p)),
            PTok::Word(w) if w == "substr" => {
                for args in self.call(p, 3) {
                    let (e, q) = args;
                    let [s, a, b]: [AbsExpr; 3] = e.try_into().expect("three arguments");
                    out.push((AbsExpr::Substr(Box::new(s), Box::new(a), Box::new(b)), q));
                }
            }
            PTok::Word(w) if w == "concat" => {
                for (e, q) in self.call(p, 2) {
                    let [a, b]: [AbsExpr; 2] = e.try_into().expect("two arguments");
                    out.push((AbsExpr::Concat(Box::new(a), Box::new(b)), q));
                }
            }
            PTok::Word(w) if !is_keyword(w) => out.push((AbsExpr::Var(w.clone()), p)),
            _ => {}
        }
        out
    }

    /// `( e , .. , e )` with `n` arguments.
    fn call(&self, at: At, n: usize) -> Vec<(Vec<AbsExpr>, At)> {
        let mut partial: Vec<(Vec<AbsExpr>, At)> = self.sym(at, "(").into_iter().map(|p| (Vec::new(), p)).collect();
        for i in 0..n {
            let mut next = Vec::new();
            for (args, p) in partial {
                for (e, p2) in self.level(p, Level::And).iter() {
                    let sep = if i + 1 == n { ")" } else { "," };
                    for p3 in self.sym(*p2, sep) {
                        let mut a = args.clone();
                        a.push(e.clone());
                        next.push((a, p3));
                    }
                }
            }
            partial = next;
        }
        partial
    }

    fn expr(&self, at: At) -> Exprs {
        self.level(at, Level::And)
    }

    /// `( e )` as used by `if`, `while` and `eval`.
    fn paren(&self, at: At) -> Vec<(AbsExpr, At)> {
        let mut out = Vec::new();
        for p in self.sym(at, "(") {
            for (e, p2) in self.expr(p).iter() {
                for p3 in self.sym(*p2, ")") {
                    out.push((e.clone(), p3));
                }
            }
        }
        out
    }

    /// `{ seq }`: the body, the state where it starts and the position after
    /// the closing brace.
    fn block(&self, at: At) -> Vec<(Fragment, usize, At)> {
        let mut out = Vec::new();
        for p in self.sym(at, "{") {
            for (f, p2) in self.seq(p).iter() {
                for p3 in self.sym(*p2, "}") {
                    out.push((f.clone(), p.0, p3));
                }
            }
        }
        out
    }

    /// One statement. The flag tells whether it ended with a block.
    pub fn stmt(&self, at: At) -> Vec<(Fragment, At, bool)> {
        let q = Node::At(at.0);
        let mut out = Vec::new();
        for (tok, p) in self.lx.tokens(at).iter() {
            let PTok::Word(w) = tok else {
                continue;
            };
            match w.as_str() {
                "skip" => out.push((vec![(q, AbsLabel::skip(), Node::Exit)], *p, false)),
                "eval" => {
                    for (e, p2) in self.paren(*p) {
                        out.push((vec![(q, AbsLabel::Eval { arg: e }, Node::Exit)], p2, false));
                    }
                }
                "if" => {
                    for (c, p2) in self.paren(*p) {
                        for (then_f, a, p3) in self.block(p2) {
                            let mut else_at = vec![p3];
                            else_at.extend(self.word(p3, "else"));
                            for p4 in else_at {
                                for (else_f, b, p5) in self.block(p4) {
                                    let mut f = vec![
                                        (q, AbsLabel::Guard { cond: c.clone(), positive: true }, Node::At(a)),
                                        (q, AbsLabel::Guard { cond: c.clone(), positive: false }, Node::At(b)),
                                    ];
                                    f.extend(then_f.iter().cloned());
                                    f.extend(else_f);
                                    out.push((f, p5, true));
                                }
                            }
                        }
                    }
                }
                "while" => {
                    for (c, p2) in self.paren(*p) {
                        let star = self.heads.contains(&at.0) && c == AbsExpr::Bool(true);
                        let (enter, leave) = if star {
                            (AbsLabel::skip(), AbsLabel::skip())
                        } else {
                            (
                                AbsLabel::Guard { cond: c.clone(), positive: true },
                                AbsLabel::Guard { cond: c.clone(), positive: false },
                            )
                        };
                        for (body, a, p3) in self.block(p2) {
                            let mut f = vec![(q, enter.clone(), Node::At(a)), (q, leave.clone(), Node::Exit)];
                            f.extend(link(&body, at.0));
                            out.push((f, p3, true));
                        }
                    }
                }
                x if is_keyword(x) => {}
                target => {
                    let mut after = self.sym(*p, ":=");
                    after.extend(self.sym(*p, "="));
                    for p2 in after {
                        for (e, p3) in self.expr(p2).iter() {
                            let l = AbsLabel::Assign { target: target.to_string(), rhs: e.clone() };
                            out.push((vec![(q, l, Node::Exit)], *p3, false));
                        }
                    }
                }
            }
        }
        out
    }

    /// Statement sequences, ending anywhere a `}` or the input end could
    /// follow.
    fn seq(&self, at: At) -> Rc<Vec<(Fragment, At)>> {
        if let Some(r) = self.seqs.borrow().get(&at) {
            return r.clone();
        }
        let mut out = Vec::new();
        for (f, p, block_end) in self.stmt(at) {
            let mut next = Vec::new();
            for p2 in self.sym(p, ";") {
                out.push((f.clone(), p2));
                next.push(p2);
            }
            if block_end {
                next.push(p);
            }
            for n in next {
                for (rest, p3) in self.seq(n).iter() {
                    let mut g = link(&f, n.0);
                    g.extend(rest.iter().cloned());
                    out.push((g, *p3));
                }
            }
            out.push((f, p));
        }
        let r = Rc::new(out);
        self.seqs.borrow_mut().insert(at, r.clone());
        r
    }

    /// Statements read from `q` at top level, each with the state after
    /// its optional `;`.
    pub fn reduce_stmts(&self, q: usize) -> Vec<(Fragment, usize)> {
        let mut out = Vec::new();
        for (f, p, block_end) in self.stmt((q, Prev::Other)) {
            for p2 in self.sym(p, ";") {
                out.push((f.clone(), p2.0));
            }
            if block_end || self.lx.is_end(p.0) {
                out.push((f, p.0));
            }
        }
        out
    }
}
