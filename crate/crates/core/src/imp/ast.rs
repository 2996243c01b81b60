use std::fmt;

use serde::Serialize;

/// A program point. Host programs use positive labels; code synthesized
/// from automata uses negative ones.
pub type Label = i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
        }
    }

    pub fn apply(self, a: i64, b: i64) -> Option<i64> {
        match self {
            ArithOp::Add => a.checked_add(b),
            ArithOp::Sub => a.checked_sub(b),
            ArithOp::Mul => a.checked_mul(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CmpOp {
    Eq,
    Lt,
    Gt,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
        }
    }
}

/// Expressions of the core language. `+` on strings is represented as
/// [`Expr::Concat`] once sorts have been resolved.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind")]
pub enum Expr {
    Int { value: i64 },
    Str { value: String },
    Bool { value: bool },
    Var { name: String },
    Arith { op: ArithOp, left: Box<Expr>, right: Box<Expr> },
    Cmp { op: CmpOp, left: Box<Expr>, right: Box<Expr> },
    And { left: Box<Expr>, right: Box<Expr> },
    Not { inner: Box<Expr> },
    Concat { left: Box<Expr>, right: Box<Expr> },
    Substr { subject: Box<Expr>, from: Box<Expr>, to: Box<Expr> },
}

impl Expr {
    pub fn int(value: i64) -> Self {
        Expr::Int { value }
    }

    pub fn str(value: impl Into<String>) -> Self {
        Expr::Str { value: value.into() }
    }

    pub fn bool(value: bool) -> Self {
        Expr::Bool { value }
    }

    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var { name: name.into() }
    }

    pub fn arith(op: ArithOp, left: Expr, right: Expr) -> Self {
        Expr::Arith { op, left: Box::new(left), right: Box::new(right) }
    }

    pub fn cmp(op: CmpOp, left: Expr, right: Expr) -> Self {
        Expr::Cmp { op, left: Box::new(left), right: Box::new(right) }
    }

    pub fn and(left: Expr, right: Expr) -> Self {
        Expr::And { left: Box::new(left), right: Box::new(right) }
    }

    pub fn not(inner: Expr) -> Self {
        Expr::Not { inner: Box::new(inner) }
    }

    pub fn concat(left: Expr, right: Expr) -> Self {
        Expr::Concat { left: Box::new(left), right: Box::new(right) }
    }

    pub fn substr(subject: Expr, from: Expr, to: Expr) -> Self {
        Expr::Substr { subject: Box::new(subject), from: Box::new(from), to: Box::new(to) }
    }

    /// Variables read by the expression, in first-occurrence order.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var { name } => {
                if !out.contains(name) {
                    out.push(name.clone());
                }
            }
            Expr::Int { .. } | Expr::Str { .. } | Expr::Bool { .. } => {}
            Expr::Arith { left, right, .. }
            | Expr::Cmp { left, right, .. }
            | Expr::And { left, right }
            | Expr::Concat { left, right } => {
                left.collect_vars(out);
                right.collect_vars(out);
            }
            Expr::Not { inner } => inner.collect_vars(out),
            Expr::Substr { subject, from, to } => {
                subject.collect_vars(out);
                from.collect_vars(out);
                to.collect_vars(out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render::render_expr(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind")]
pub enum Stmt {
    Skip,
    Assign { target: String, rhs: Expr },
    Seq { first: Box<Stmt>, second: Box<Stmt> },
    If { cond: Expr, then_branch: Box<Stmt>, else_branch: Box<Stmt> },
    While { cond: Expr, body: Box<Stmt> },
    Eval { arg: Expr },
}

impl Stmt {
    pub fn assign(target: impl Into<String>, rhs: Expr) -> Self {
        Stmt::Assign { target: target.into(), rhs }
    }

    /// Sequential composition, kept right-nested so that rendering and
    /// re-parsing yield the same tree.
    pub fn seq(first: Stmt, second: Stmt) -> Self {
        match first {
            Stmt::Seq { first: a, second: b } => Stmt::Seq { first: a, second: Box::new(Stmt::seq(*b, second)) },
            other => Stmt::Seq { first: Box::new(other), second: Box::new(second) },
        }
    }

    pub fn if_(cond: Expr, then_branch: Stmt, else_branch: Stmt) -> Self {
        Stmt::If { cond, then_branch: Box::new(then_branch), else_branch: Box::new(else_branch) }
    }

    pub fn while_(cond: Expr, body: Stmt) -> Self {
        Stmt::While { cond, body: Box::new(body) }
    }

    pub fn eval(arg: Expr) -> Self {
        Stmt::Eval { arg }
    }

    /// Every variable mentioned (read or written), first-occurrence order.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        let push = |v: String, out: &mut Vec<String>| {
            if !out.contains(&v) {
                out.push(v);
            }
        };
        match self {
            Stmt::Skip => {}
            Stmt::Assign { target, rhs } => {
                for v in rhs.vars() {
                    push(v, out);
                }
                push(target.clone(), out);
            }
            Stmt::Seq { first, second } => {
                first.collect_vars(out);
                second.collect_vars(out);
            }
            Stmt::If { cond, then_branch, else_branch } => {
                for v in cond.vars() {
                    push(v, out);
                }
                then_branch.collect_vars(out);
                else_branch.collect_vars(out);
            }
            Stmt::While { cond, body } => {
                for v in cond.vars() {
                    push(v, out);
                }
                body.collect_vars(out);
            }
            Stmt::Eval { arg } => {
                for v in arg.vars() {
                    push(v, out);
                }
            }
        }
    }

    /// Variables that may be read before any assignment on some path.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, assigned: &mut Vec<String>, out: &mut Vec<String>) {
        let read = |e: &Expr, assigned: &Vec<String>, out: &mut Vec<String>| {
            for v in e.vars() {
                if !assigned.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Stmt::Skip => {}
            Stmt::Assign { target, rhs } => {
                read(rhs, assigned, out);
                if !assigned.contains(target) {
                    assigned.push(target.clone());
                }
            }
            Stmt::Seq { first, second } => {
                first.collect_free(assigned, out);
                second.collect_free(assigned, out);
            }
            Stmt::If { cond, then_branch, else_branch } => {
                read(cond, assigned, out);
                let mut a1 = assigned.clone();
                let mut a2 = assigned.clone();
                then_branch.collect_free(&mut a1, out);
                else_branch.collect_free(&mut a2, out);
                for v in a1 {
                    if a2.contains(&v) && !assigned.contains(&v) {
                        assigned.push(v);
                    }
                }
            }
            Stmt::While { cond, body } => {
                read(cond, assigned, out);
                let mut inner = assigned.clone();
                body.collect_free(&mut inner, out);
            }
            Stmt::Eval { arg } => read(arg, assigned, out),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render::render(self))
    }
}

/// A statement annotated with its entry and exit program points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledStmt {
    pub pre: Label,
    pub post: Label,
    #[serde(flatten)]
    pub node: LabeledNode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum LabeledNode {
    Skip,
    Assign { target: String, rhs: Expr },
    Seq { first: Box<LabeledStmt>, second: Box<LabeledStmt> },
    If { cond: Expr, then_branch: Box<LabeledStmt>, else_branch: Box<LabeledStmt> },
    While { cond: Expr, body: Box<LabeledStmt> },
    Eval { arg: Expr },
}

impl LabeledStmt {
    /// Labels a statement in left-to-right preorder, handing out fresh
    /// labels from `next`.
    pub fn label(stmt: &Stmt, next: &mut Label) -> LabeledStmt {
        let pre = fresh(next);
        Self::label_from(stmt, pre, next)
    }

    fn label_from(stmt: &Stmt, pre: Label, next: &mut Label) -> LabeledStmt {
        let (node, post) = match stmt {
            Stmt::Skip => (LabeledNode::Skip, fresh(next)),
            Stmt::Assign { target, rhs } => {
                (LabeledNode::Assign { target: target.clone(), rhs: rhs.clone() }, fresh(next))
            }
            Stmt::Eval { arg } => (LabeledNode::Eval { arg: arg.clone() }, fresh(next)),
            Stmt::Seq { first, second } => {
                let first = Self::label_from(first, pre, next);
                let second = Self::label_from(second, first.post, next);
                let post = second.post;
                (LabeledNode::Seq { first: Box::new(first), second: Box::new(second) }, post)
            }
            Stmt::If { cond, then_branch, else_branch } => {
                let then_branch = Self::label(then_branch, next);
                let else_branch = Self::label(else_branch, next);
                let node = LabeledNode::If {
                    cond: cond.clone(),
                    then_branch: Box::new(then_branch),
                    else_branch: Box::new(else_branch),
                };
                (node, fresh(next))
            }
            Stmt::While { cond, body } => {
                let body = Self::label(body, next);
                (LabeledNode::While { cond: cond.clone(), body: Box::new(body) }, fresh(next))
            }
        };
        LabeledStmt { pre, post, node }
    }

    /// All distinct labels of the tree in ascending order.
    pub fn labels(&self) -> Vec<Label> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_labels(&self, out: &mut Vec<Label>) {
        out.push(self.pre);
        out.push(self.post);
        match &self.node {
            LabeledNode::Seq { first, second } => {
                first.collect_labels(out);
                second.collect_labels(out);
            }
            LabeledNode::If { then_branch, else_branch, .. } => {
                then_branch.collect_labels(out);
                else_branch.collect_labels(out);
            }
            LabeledNode::While { body, .. } => body.collect_labels(out),
            _ => {}
        }
    }

    /// Pairs of (pre, post) for every statement node; used to check
    /// freshness of the labeling.
    pub fn fresh_label_list(&self) -> Vec<Label> {
        let mut out = Vec::new();
        self.collect_fresh(&mut out, true);
        out
    }

    fn collect_fresh(&self, out: &mut Vec<Label>, with_pre: bool) {
        if with_pre {
            out.push(self.pre);
        }
        match &self.node {
            LabeledNode::Seq { first, second } => {
                first.collect_fresh(out, false);
                second.collect_fresh(out, false);
                return;
            }
            LabeledNode::If { then_branch, else_branch, .. } => {
                then_branch.collect_fresh(out, true);
                else_branch.collect_fresh(out, true);
            }
            LabeledNode::While { body, .. } => body.collect_fresh(out, true),
            _ => {}
        }
        out.push(self.post);
    }

    /// Finds the statement whose pre-label is `label` and is not a sequence.
    pub fn find(&self, label: Label) -> Option<&LabeledStmt> {
        match &self.node {
            LabeledNode::Seq { first, second } => first.find(label).or_else(|| second.find(label)),
            LabeledNode::If { then_branch, else_branch, .. } => {
                if self.pre == label {
                    return Some(self);
                }
                then_branch.find(label).or_else(|| else_branch.find(label))
            }
            LabeledNode::While { body, .. } => {
                if self.pre == label {
                    return Some(self);
                }
                body.find(label)
            }
            _ => (self.pre == label).then_some(self),
        }
    }
}

fn fresh(next: &mut Label) -> Label {
    let l = *next;
    *next += 1;
    l
}

/// A parsed program with a fresh label at every statement boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledProgram {
    #[serde(skip)]
    pub root: Stmt,
    #[serde(rename = "ast")]
    pub tree: LabeledStmt,
    pub entry: Label,
    pub exit: Label,
}

impl LabeledProgram {
    pub fn new(root: Stmt) -> Self {
        let mut next = 1;
        let tree = LabeledStmt::label(&root, &mut next);
        LabeledProgram { entry: tree.pre, exit: tree.post, root, tree }
    }

    pub fn labels(&self) -> Vec<Label> {
        self.tree.labels()
    }
}
