//! Worklist fixpoint over control-flow graphs, with `eval` handled by
//! synthesizing, abstracting and analysing the code it may run.

mod oracle;
mod transfer;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::{json, Value as Json};

pub use oracle::{soundness_check, OracleGrid, SoundnessReport, SoundnessViolation};
pub use transfer::{guard, value, Effect};

use crate::automata::Dfa;
use crate::cfg::Cfg;
use crate::code_abs::{abstract_cfg, compose_complete, eta_from_cfg, AbstractEdge, LabelPartition, Rho};
use crate::domains::{AbsExpr, AbstractMemory, Transfer, Value};
use crate::imp::Label;
use crate::synth::{synthesize, SynthError, SynthesizedCfg};

#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub widening_k: usize,
    /// Plain joins at a loop head before widening kicks in.
    pub widen_delay: usize,
    /// Nesting bound for `eval`.
    pub eval_depth: usize,
    pub transfer: Transfer,
    pub rho: Rho,
}

impl Default for Config {
    fn default() -> Self {
        Config { widening_k: 2, widen_delay: 2, eval_depth: 3, transfer: Transfer::default(), rho: Rho::Sign }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Diagnostic {
    /// Remaining eval depth where the diagnostic arose; the host program
    /// is at the configured depth.
    pub depth: usize,
    pub node: Label,
    pub message: String,
}

/// Intermediate results of the eval pipeline at one site.
#[derive(Debug, Clone)]
pub struct EvalArtifact {
    pub depth: usize,
    pub node: Label,
    pub dfa: Option<Dfa>,
    pub synth: Option<SynthesizedCfg>,
    pub eta: Option<LabelPartition>,
    pub eta_up: Option<LabelPartition>,
    pub acfg: Option<Cfg<AbstractEdge>>,
    pub error: Option<String>,
}

impl EvalArtifact {
    fn new(depth: usize, node: Label) -> Self {
        EvalArtifact { depth, node, dfa: None, synth: None, eta: None, eta_up: None, acfg: None, error: None }
    }

    pub fn to_json(&self) -> Json {
        json!({
            "depth": self.depth,
            "node": self.node,
            "automaton": self.dfa.as_ref().map(|d| d.to_regex()),
            "cfg": self.synth.as_ref().map(|s| s.graph.to_json()),
            "eta": self.eta.as_ref().map(|p| p.to_json()),
            "eta_up": self.eta_up.as_ref().map(|p| p.to_json()),
            "abstract_cfg": self.acfg.as_ref().map(|g| g.to_json()),
            "error": self.error,
        })
    }
}

/// State threaded through an analysis and its nested eval analyses.
pub struct Cx<'a> {
    pub config: &'a Config,
    pub depth: usize,
    /// Source node of the edge being interpreted.
    pub node: Label,
    pub diagnostics: BTreeSet<Diagnostic>,
    pub artifacts: BTreeMap<(usize, Label), EvalArtifact>,
}

impl<'a> Cx<'a> {
    pub fn new(config: &'a Config, depth: usize) -> Self {
        Cx { config, depth, node: 0, diagnostics: BTreeSet::new(), artifacts: BTreeMap::new() }
    }

    fn diagnose(&mut self, message: impl Into<String>) {
        self.diagnostics.insert(Diagnostic { depth: self.depth, node: self.node, message: message.into() });
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisResult {
    pub memories: BTreeMap<Label, AbstractMemory>,
    pub exits: BTreeSet<Label>,
    pub diagnostics: Vec<Diagnostic>,
    pub artifacts: Vec<EvalArtifact>,
}

impl AnalysisResult {
    pub fn at(&self, n: Label) -> AbstractMemory {
        self.memories.get(&n).cloned().unwrap_or(AbstractMemory::Bot)
    }

    /// Join of the memories at the exits.
    pub fn exit(&self) -> AbstractMemory {
        self.exits.iter().fold(AbstractMemory::Bot, |acc, n| acc.join(&self.at(*n)))
    }

    pub fn to_json(&self) -> Json {
        let points: serde_json::Map<String, Json> =
            self.memories.iter().map(|(n, m)| (n.to_string(), m.to_json())).collect();
        json!({
            "points": points,
            "exit": self.exit().to_json(),
            "diagnostics": self.diagnostics,
            "evals": self.artifacts.iter().map(EvalArtifact::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn analyze<L: Effect>(g: &Cfg<L>, m0: AbstractMemory, config: &Config) -> AnalysisResult {
    let mut cx = Cx::new(config, config.eval_depth);
    let memories = fixpoint(g, m0, &mut cx);
    AnalysisResult {
        memories,
        exits: g.exits.clone(),
        diagnostics: cx.diagnostics.into_iter().collect(),
        artifacts: cx.artifacts.into_values().collect(),
    }
}

/// Memories at every node, iterating in reverse post-order and widening
/// at loop heads once they changed `widen_delay` times.
pub fn fixpoint<L: Effect>(g: &Cfg<L>, m0: AbstractMemory, cx: &mut Cx) -> BTreeMap<Label, AbstractMemory> {
    let rank: BTreeMap<Label, usize> = g.reverse_post_order().into_iter().enumerate().map(|(i, n)| (n, i)).collect();
    let heads = g.loop_heads();
    let succ = g.successors();
    let mut mem: BTreeMap<Label, AbstractMemory> = g.nodes.iter().map(|&n| (n, AbstractMemory::Bot)).collect();
    mem.insert(g.entry, m0);
    let mut changes: BTreeMap<Label, usize> = BTreeMap::new();
    let mut work = BTreeSet::from([(rank[&g.entry], g.entry)]);
    while let Some((_, u)) = work.pop_first() {
        let m = mem[&u].clone();
        if m.is_bot() {
            continue;
        }
        for &e in succ.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            let (_, l, v) = &g.edges[e];
            cx.node = u;
            let out = l.apply(&m, cx);
            let old = &mem[v];
            if out.leq(old) {
                continue;
            }
            let mut new = old.join(&out);
            if heads.contains(v) {
                let c = changes.entry(*v).or_default();
                if *c >= cx.config.widen_delay {
                    new = old.widen(&new, cx.config.widening_k);
                }
                *c += 1;
            }
            mem.insert(*v, new);
            work.insert((rank[v], *v));
        }
    }
    mem
}

/// Abstract effect of `eval(arg)`: the code the argument may denote is
/// synthesized, abstracted and analysed from `m`. Anything that cannot be
/// analysed sends the memory to ⊤.
pub fn eval_transfer(arg: &AbsExpr, m: &AbstractMemory, cx: &mut Cx) -> AbstractMemory {
    let mut art = EvalArtifact::new(cx.depth, cx.node);
    let out = eval_pipeline(arg, m, cx, &mut art);
    if let Some(e) = &art.error {
        cx.diagnose(e.clone());
    }
    cx.artifacts.insert((art.depth, art.node), art);
    out
}

fn eval_pipeline(arg: &AbsExpr, m: &AbstractMemory, cx: &mut Cx, art: &mut EvalArtifact) -> AbstractMemory {
    if cx.depth == 0 {
        art.error = Some("eval nesting bound reached; memory set to ⊤".into());
        return AbstractMemory::top();
    }
    let d = match value(arg, m, &cx.config.transfer) {
        Value::Bot => return AbstractMemory::Bot,
        Value::Str(d) => d,
        v => {
            art.error = Some(format!("eval argument is {v}, not a string automaton; memory set to ⊤"));
            return AbstractMemory::top();
        }
    };
    art.dfa = Some(d.clone());
    let syn = match synthesize(&d) {
        Ok(s) => s,
        Err(SynthError::NoExecutablePath) => {
            art.error = Some(SynthError::NoExecutablePath.to_string());
            return AbstractMemory::Bot;
        }
        Err(e) => {
            art.error = Some(format!("{e}; memory set to ⊤"));
            return AbstractMemory::top();
        }
    };
    let eta = eta_from_cfg(&syn.graph);
    let up = compose_complete(&eta, cx.config.rho);
    let acfg = abstract_cfg(&syn.graph, &up);
    let node = cx.node;
    cx.depth -= 1;
    let mems = fixpoint(&acfg, m.clone(), cx);
    cx.depth += 1;
    cx.node = node;
    let out = acfg.exits.iter().fold(AbstractMemory::Bot, |acc, n| acc.join(&mems[n]));
    art.synth = Some(syn);
    art.eta = Some(eta);
    art.eta_up = Some(up);
    art.acfg = Some(acfg);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfg::build_cfg;
    use crate::domains::Sign;
    use crate::imp::parse_program;

    fn run(src: &str, m0: AbstractMemory) -> AnalysisResult {
        let p = parse_program(src).unwrap();
        analyze(&build_cfg(&p), m0, &Config::default())
    }

    #[test]
    fn loop_program() {
        let r = run("x := 0; while (x<5) {x := x + 1}; x:=7", AbstractMemory::top());
        assert_eq!(r.exit().get("x"), Value::Int(Sign::Pos));
    }

    #[test]
    fn straight_line() {
        let r = run("x:=1; y:=x+1", AbstractMemory::top());
        assert_eq!(r.exit().get("x"), Value::Int(Sign::Pos));
        assert_eq!(r.exit().get("y"), Value::Int(Sign::Pos));
    }

    #[test]
    fn constant_eval_matches_direct_code() {
        let a = run("s := \"x:=5;\"; eval(s)", AbstractMemory::top());
        assert_eq!(a.exit().get("x"), Value::Int(Sign::Pos));
        assert!(a.diagnostics.is_empty());
        assert_eq!(a.artifacts.len(), 1);
    }

    #[test]
    fn depth_zero_falls_back_to_top() {
        let p = parse_program("x:=1; eval(\"x:=5;\")").unwrap();
        let c = Config { eval_depth: 0, ..Config::default() };
        let r = analyze(&build_cfg(&p), AbstractMemory::top(), &c);
        assert_eq!(r.exit(), AbstractMemory::top());
        assert_eq!(r.diagnostics.len(), 1);
    }

    #[test]
    fn non_program_is_unreachable() {
        let r = run("eval(\"not code\")", AbstractMemory::top());
        assert!(r.exit().is_bot());
        assert_eq!(r.diagnostics.len(), 1);
    }
}
