//! Control-flow graphs over program points.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write};

use serde_json::{json, Value as Json};

use crate::imp::{render_expr, Expr, Label, LabeledNode, LabeledProgram, LabeledStmt};

/// Edge labels: assignments, guards and eval statements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeLabel {
    Assign { target: String, rhs: Expr },
    Guard { cond: Expr, positive: bool },
    Eval { arg: Expr },
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLabel::Assign { target, rhs } => write!(f, "{target}:={}", render_expr(rhs)),
            EdgeLabel::Guard { cond, positive: true } => write!(f, "{}", render_expr(cond)),
            EdgeLabel::Guard { cond, positive: false } => write!(f, "¬({})", render_expr(cond)),
            EdgeLabel::Eval { arg } => write!(f, "eval({})", render_expr(arg)),
        }
    }
}

/// A graph of program points whose edges carry labels of type `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cfg<L> {
    pub nodes: BTreeSet<Label>,
    pub edges: Vec<(Label, L, Label)>,
    pub entry: Label,
    pub exits: BTreeSet<Label>,
}

impl<L> Cfg<L> {
    pub fn successors(&self) -> BTreeMap<Label, Vec<usize>> {
        let mut out: BTreeMap<Label, Vec<usize>> = self.nodes.iter().map(|&n| (n, Vec::new())).collect();
        for (i, (u, _, _)) in self.edges.iter().enumerate() {
            out.entry(*u).or_default().push(i);
        }
        out
    }

    pub fn map_labels<M>(&self, mut f: impl FnMut(&L) -> M) -> Cfg<M> {
        Cfg {
            nodes: self.nodes.clone(),
            edges: self.edges.iter().map(|(u, l, v)| (*u, f(l), *v)).collect(),
            entry: self.entry,
            exits: self.exits.clone(),
        }
    }

    /// Nodes in reverse post-order of a depth-first walk from the entry,
    /// followed by any unreachable nodes in ascending order.
    pub fn reverse_post_order(&self) -> Vec<Label> {
        let succ = self.successors();
        let mut seen = BTreeSet::new();
        let mut post = Vec::new();
        let mut stack: Vec<(Label, usize)> = vec![(self.entry, 0)];
        seen.insert(self.entry);
        while let Some(top) = stack.last_mut() {
            let (n, i) = *top;
            let out = succ.get(&n).map(Vec::as_slice).unwrap_or(&[]);
            if i < out.len() {
                top.1 += 1;
                let v = self.edges[out[i]].2;
                if seen.insert(v) {
                    stack.push((v, 0));
                }
            } else {
                post.push(n);
                stack.pop();
            }
        }
        post.reverse();
        post.extend(self.nodes.iter().filter(|n| !seen.contains(n)));
        post
    }

    /// Targets of back edges with respect to the reverse post-order.
    pub fn loop_heads(&self) -> BTreeSet<Label> {
        let order: BTreeMap<Label, usize> = self.reverse_post_order().into_iter().enumerate().map(|(i, n)| (n, i)).collect();
        self.edges.iter().filter(|(u, _, v)| order[v] <= order[u]).map(|(_, _, v)| *v).collect()
    }
}

impl<L: fmt::Display> Cfg<L> {
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n");
        for n in &self.nodes {
            let shape = if self.exits.contains(n) { "doublecircle" } else { "circle" };
            writeln!(out, "  n{} [label=\"{n}\", shape={shape}];", node_id(*n)).unwrap();
        }
        writeln!(out, "  start [shape=point];\n  start -> n{};", node_id(self.entry)).unwrap();
        for (u, l, v) in &self.edges {
            let text = l.to_string().replace('\\', "\\\\").replace('"', "\\\"");
            writeln!(out, "  n{} -> n{} [label=\"{text}\"];", node_id(*u), node_id(*v)).unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> Json {
        let edges: Vec<Json> = self.edges.iter().map(|(u, l, v)| json!({"from": u, "label": l.to_string(), "to": v})).collect();
        json!({
            "nodes": self.nodes.iter().collect::<Vec<_>>(),
            "entry": self.entry,
            "exits": self.exits.iter().collect::<Vec<_>>(),
            "edges": edges,
        })
    }
}

fn node_id(n: Label) -> String {
    if n < 0 {
        format!("m{}", -n)
    } else {
        n.to_string()
    }
}

struct UnionFind(BTreeMap<Label, Label>);

impl UnionFind {
    fn find(&mut self, x: Label) -> Label {
        let p = *self.0.get(&x).unwrap_or(&x);
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0.insert(x, r);
        r
    }

    fn union(&mut self, a: Label, b: Label) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0.insert(hi, lo);
        }
    }
}

fn collect(s: &LabeledStmt, uf: &mut UnionFind, edges: &mut Vec<(Label, EdgeLabel, Label)>) {
    match &s.node {
        LabeledNode::Skip => uf.union(s.pre, s.post),
        LabeledNode::Assign { target, rhs } => {
            edges.push((s.pre, EdgeLabel::Assign { target: target.clone(), rhs: rhs.clone() }, s.post))
        }
        LabeledNode::Eval { arg } => edges.push((s.pre, EdgeLabel::Eval { arg: arg.clone() }, s.post)),
        LabeledNode::Seq { first, second } => {
            collect(first, uf, edges);
            collect(second, uf, edges);
        }
        LabeledNode::If { cond, then_branch, else_branch } => {
            edges.push((s.pre, EdgeLabel::Guard { cond: cond.clone(), positive: true }, then_branch.pre));
            edges.push((s.pre, EdgeLabel::Guard { cond: cond.clone(), positive: false }, else_branch.pre));
            collect(then_branch, uf, edges);
            collect(else_branch, uf, edges);
            uf.union(then_branch.post, s.post);
            uf.union(else_branch.post, s.post);
        }
        LabeledNode::While { cond, body } => {
            edges.push((s.pre, EdgeLabel::Guard { cond: cond.clone(), positive: true }, body.pre));
            edges.push((s.pre, EdgeLabel::Guard { cond: cond.clone(), positive: false }, s.post));
            collect(body, uf, edges);
            uf.union(body.post, s.pre);
        }
    }
}

/// Builds the control-flow graph of a labelled program. Skip statements
/// and block ends are contracted into the surrounding program points.
pub fn build_cfg(p: &LabeledProgram) -> Cfg<EdgeLabel> {
    let mut uf = UnionFind(BTreeMap::new());
    let mut raw = Vec::new();
    collect(&p.tree, &mut uf, &mut raw);
    let edges: Vec<(Label, EdgeLabel, Label)> = raw.into_iter().map(|(u, l, v)| (uf.find(u), l, uf.find(v))).collect();
    let mut nodes: BTreeSet<Label> = p.labels().into_iter().map(|l| uf.find(l)).collect();
    let entry = uf.find(p.entry);
    let exit = uf.find(p.exit);
    nodes.insert(entry);
    Cfg { nodes, edges, entry, exits: BTreeSet::from([exit]) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imp::parse_program;

    #[test]
    fn loop_program_has_five_edges() {
        let p = parse_program("x := 0; while (x<5) {x := x + 1}; x:=7").unwrap();
        let g = build_cfg(&p);
        assert_eq!(g.edges.len(), 5);
        let back = g.edges.iter().find(|(_, l, _)| l.to_string() == "x:=x+1").unwrap();
        assert_eq!(back.2, 2);
        assert!(g.edges.iter().any(|(_, l, _)| l.to_string() == "¬(x<5)"));
        assert_eq!(g.loop_heads(), BTreeSet::from([2]));
    }

    #[test]
    fn skips_collapse() {
        let g = build_cfg(&parse_program("skip;skip").unwrap());
        assert!(g.edges.is_empty());
        assert!(g.exits.contains(&g.entry));
        let g = build_cfg(&parse_program("x:=1").unwrap());
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.to_dot("g").lines().filter(|l| l.contains("label=\"x:=1\"")).count(), 1);
    }
}
