//! Code abstractions over the labels of a synthesized graph: the partition
//! read off the graph, the label abstraction induced by a value
//! abstraction, and their composition.

mod check;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value as Json};

pub use check::{check_completeness, concrete_label, CompletenessReport, Grid, Violation};

use crate::automata::Dfa;
use crate::cfg::Cfg;
use crate::domains::{bulk_sign, AbsExpr, BoolVal, Sign};
use crate::imp::Label;
use crate::label::AbsLabel;

/// Value abstraction used to abstract literals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rho {
    #[default]
    Sign,
    Identity,
}

pub fn rho_hat(e: &AbsExpr, rho: Rho) -> AbsExpr {
    if rho == Rho::Identity {
        return e.clone();
    }
    e.map_leaves(&mut |l| match l {
        AbsExpr::Int(n) => AbsExpr::AbsNum(Sign::of(*n)),
        AbsExpr::Bool(b) => AbsExpr::AbsBool(BoolVal::of(*b)),
        AbsExpr::Str(s) => AbsExpr::AbsStr(Dfa::from_literal(s).unwrap_or_else(|_| Dfa::universe())),
        AbsExpr::BulkNum(d) => AbsExpr::AbsNum(bulk_sign(d)),
        AbsExpr::BulkStr(d) => AbsExpr::AbsStr(d.clone()),
        other => other.clone(),
    })
}

pub fn upsilon(l: &AbsLabel, rho: Rho) -> AbsLabel {
    l.with_expr(rho_hat(l.expr(), rho))
}

/// Labels an abstract edge stands for; its effect is their join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractEdge(pub Vec<AbsLabel>);

impl fmt::Display for AbstractEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" | "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Indices into the universe.
    pub members: BTreeSet<usize>,
    /// Labels denoting (at least) the members.
    pub labels: Vec<AbsLabel>,
}

/// A closure on sets of labels given by disjoint blocks. Labels outside
/// every block are sent to the whole universe, represented by `top`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelPartition {
    pub universe: Vec<AbsLabel>,
    pub blocks: Vec<Block>,
    pub top: Vec<AbsLabel>,
}

impl LabelPartition {
    /// Partition with the given member sets; each block is represented by
    /// its own members.
    pub fn from_blocks(universe: Vec<AbsLabel>, sets: impl IntoIterator<Item = BTreeSet<usize>>) -> Self {
        let blocks = sets
            .into_iter()
            .map(|members| Block { labels: members.iter().map(|&i| universe[i].clone()).collect(), members })
            .collect();
        let top = maximal(universe.iter().cloned());
        LabelPartition { universe, blocks, top }
    }

    pub fn block_of(&self, i: usize) -> Option<&Block> {
        self.blocks.iter().find(|b| b.members.contains(&i))
    }

    pub fn uncovered(&self) -> Vec<usize> {
        (0..self.universe.len()).filter(|&i| self.block_of(i).is_none()).collect()
    }

    pub fn image_of(&self, l: &AbsLabel) -> AbstractEdge {
        let block = self.universe.iter().position(|u| u == l).and_then(|i| self.block_of(i));
        AbstractEdge(block.map_or_else(|| self.top.clone(), |b| b.labels.clone()))
    }

    /// Distinct images of universe labels: every block, plus the top
    /// element when some label is uncovered.
    pub fn images(&self) -> Vec<Vec<AbsLabel>> {
        let mut out: Vec<Vec<AbsLabel>> = self.blocks.iter().map(|b| b.labels.clone()).collect();
        if !self.uncovered().is_empty() {
            out.push(self.top.clone());
        }
        out
    }

    /// Blocks as sets of universe labels, for comparisons.
    pub fn member_sets(&self) -> BTreeSet<BTreeSet<AbsLabel>> {
        self.blocks.iter().map(|b| b.members.iter().map(|&i| self.universe[i].clone()).collect()).collect()
    }

    pub fn to_json(&self) -> Json {
        let names = |ls: &[AbsLabel]| ls.iter().map(|l| l.to_string()).collect::<Vec<_>>();
        json!({
            "universe": names(&self.universe),
            "blocks": self.blocks.iter().map(|b| json!({
                "members": b.members.iter().map(|&i| self.universe[i].to_string()).collect::<Vec<_>>(),
                "labels": names(&b.labels),
            })).collect::<Vec<_>>(),
            "uncovered": self.uncovered().iter().map(|&i| self.universe[i].to_string()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for LabelPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            let members: Vec<String> = b.members.iter().map(|&i| self.universe[i].to_string()).collect();
            writeln!(f, "{{{}}} => {}", members.join(", "), AbstractEdge(b.labels.clone()))?;
        }
        for i in self.uncovered() {
            writeln!(f, "{} => ⊤", self.universe[i])?;
        }
        Ok(())
    }
}

/// Distinct labels not subsumed by another one.
fn maximal(ls: impl IntoIterator<Item = AbsLabel>) -> Vec<AbsLabel> {
    let mut out: Vec<AbsLabel> = Vec::new();
    for l in ls {
        if out.iter().any(|k| k.subsumes(&l)) {
            continue;
        }
        out.retain(|k| !l.subsumes(k));
        out.push(l);
    }
    out
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let r = self.find(self.0[i]);
            self.0[i] = r;
        }
        self.0[i]
    }

    fn union_all(&mut self, set: &BTreeSet<usize>) {
        let mut it = set.iter();
        if let Some(&first) = it.next() {
            for &j in it {
                let (a, b) = (self.find(first), self.find(j));
                self.0[b] = a;
            }
        }
    }

    fn components(&mut self) -> BTreeMap<usize, BTreeSet<usize>> {
        let mut out: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for i in 0..self.0.len() {
            let r = self.find(i);
            out.entry(r).or_default().insert(i);
        }
        out
    }
}

/// Label sets found between pairs of nodes; those disjoint from every
/// other set become blocks.
pub fn eta_from_cfg(g: &Cfg<AbsLabel>) -> LabelPartition {
    let mut universe: Vec<AbsLabel> = Vec::new();
    let mut between: BTreeMap<(Label, Label), BTreeSet<usize>> = BTreeMap::new();
    for (u, l, v) in &g.edges {
        let i = universe.iter().position(|k| k == l).unwrap_or_else(|| {
            universe.push(l.clone());
            universe.len() - 1
        });
        between.entry((*u, *v)).or_default().insert(i);
    }
    let merge: Vec<BTreeSet<usize>> = between.into_values().collect::<BTreeSet<_>>().into_iter().collect();
    let meets = |x: &BTreeSet<usize>, y: &BTreeSet<usize>| {
        x.iter().any(|&i| y.iter().any(|&j| universe[i].overlaps(&universe[j])))
    };
    let blocks: Vec<BTreeSet<usize>> = merge
        .iter()
        .filter(|x| merge.iter().all(|y| y == *x || !meets(x, y)))
        .cloned()
        .collect();
    LabelPartition::from_blocks(universe, blocks)
}

/// Closures of single labels under the label abstraction, merged where they overlap.
fn upsilon_sets(universe: &[AbsLabel], rho: Rho) -> Vec<BTreeSet<usize>> {
    (0..universe.len())
        .map(|i| {
            let img = upsilon(&universe[i], rho);
            let mut s: BTreeSet<usize> = (0..universe.len()).filter(|&j| img.subsumes(&universe[j])).collect();
            s.insert(i);
            s
        })
        .collect()
}

fn represent(universe: &[AbsLabel], members: &BTreeSet<usize>, rho: Rho) -> Vec<AbsLabel> {
    maximal(members.iter().map(|&i| upsilon(&universe[i], rho)))
}

/// The label abstraction restricted to the universe.
pub fn restrict_upsilon(universe: &[AbsLabel], rho: Rho) -> LabelPartition {
    let mut dsu = Dsu::new(universe.len());
    for s in upsilon_sets(universe, rho) {
        dsu.union_all(&s);
    }
    let blocks = dsu
        .components()
        .into_values()
        .map(|members| Block { labels: represent(universe, &members, rho), members })
        .collect();
    let all: BTreeSet<usize> = (0..universe.len()).collect();
    LabelPartition { universe: universe.to_vec(), blocks, top: represent(universe, &all, rho) }
}

/// Closes the blocks of `eta` under the label abstraction. Blocks whose
/// closures meet are merged; a block reaching a label `eta` leaves
/// uncovered is uncovered as well.
pub fn compose_complete(eta: &LabelPartition, rho: Rho) -> LabelPartition {
    let u = &eta.universe;
    let mut dsu = Dsu::new(u.len());
    for b in &eta.blocks {
        dsu.union_all(&b.members);
    }
    for s in upsilon_sets(u, rho) {
        dsu.union_all(&s);
    }
    let loose: BTreeSet<usize> = eta.uncovered().into_iter().collect();
    let blocks = dsu
        .components()
        .into_values()
        .filter(|c| c.is_disjoint(&loose))
        .map(|members| Block { labels: represent(u, &members, rho), members })
        .collect();
    let all: BTreeSet<usize> = (0..u.len()).collect();
    LabelPartition { universe: u.clone(), blocks, top: represent(u, &all, rho) }
}

/// Same nodes, each label replaced by its image under `part`.
pub fn abstract_cfg(g: &Cfg<AbsLabel>, part: &LabelPartition) -> Cfg<AbstractEdge> {
    g.map_labels(|l| part.image_of(l))
}
