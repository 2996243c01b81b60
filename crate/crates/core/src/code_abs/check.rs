//! Executable completeness check: on every grid memory, an image must
//! compute exactly what its abstraction computes.

use serde::Serialize;

use super::{upsilon, LabelPartition, Rho};
use crate::automata::Dfa;
use crate::concrete::{exec, FuelExhausted};
use crate::domains::{
    eval_abstract, eval_collecting, AbstractMemory, BoolVal, Bounds, CollectingMemory, ConcreteValue, Sign, Transfer,
    Value,
};
use crate::imp::parse_fragment;
use crate::label::AbsLabel;
use crate::par::{self, Execution};

/// Bounds of the exhaustive check.
#[derive(Debug, Clone)]
pub struct Grid {
    /// Values that grid memories and abstract leaves expand to. The check
    /// runs again with the integer range doubled, so that a finite result
    /// cannot pass for an unbounded one.
    pub bounds: Bounds,
    /// Blocks reading more variables are skipped.
    pub max_vars: usize,
    pub fuel: u64,
    pub execution: Execution,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { bounds: Bounds { lo: -12, hi: 12, ..Bounds::default() }, max_vars: 3, fuel: 2_000, execution: Execution::default() }
    }
}

impl Grid {
    fn windows(&self) -> [Bounds; 2] {
        let b = &self.bounds;
        [b.clone(), Bounds { lo: 2 * b.lo, hi: 2 * b.hi, ..b.clone() }]
    }

    /// Abstract values tried for each variable.
    fn values(&self) -> Vec<Value> {
        let mut out: Vec<Value> = [Sign::Neg, Sign::Zero, Sign::Pos, Sign::Top].map(Value::Int).into();
        out.extend([BoolVal::of(true), BoolVal::of(false), BoolVal::TOP].map(Value::Bool));
        let a = self.bounds.chars.first().copied().unwrap_or('a');
        out.push(Value::Str(Dfa::from_literal(&a.to_string()).unwrap_or_else(|_| Dfa::universe())));
        out.push(Value::Str(Dfa::from_literal(&a.to_string()).unwrap_or_else(|_| Dfa::universe()).star()));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub label: String,
    pub memory: String,
    pub concrete: String,
    #[serde(rename = "abstract")]
    pub abstract_: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<Violation>,
}

/// Concrete effect of one label on a collecting memory; `None` when no
/// store survives. `Err` when an eval'd program runs out of fuel.
pub fn concrete_label(l: &AbsLabel, m: &CollectingMemory, b: &Bounds, fuel: u64) -> Result<Option<CollectingMemory>, FuelExhausted> {
    match l {
        AbsLabel::Assign { target, rhs } => {
            let vs = eval_collecting(rhs, m, b);
            if vs.is_empty() {
                return Ok(None);
            }
            let mut out = m.clone();
            out.vars.insert(target.clone(), vs);
            Ok(Some(out))
        }
        AbsLabel::Guard { cond, positive } => {
            let want = ConcreteValue::Bool(*positive);
            let kept: Vec<_> = m
                .stores()
                .into_iter()
                .filter(|st| eval_collecting(cond, &CollectingMemory::from_store(st), b).contains(&want))
                .collect();
            Ok((!kept.is_empty()).then(|| CollectingMemory::from_stores(&kept)))
        }
        AbsLabel::Eval { arg } => {
            let mut ends = Vec::new();
            for st in m.stores() {
                for v in eval_collecting(arg, &CollectingMemory::from_store(&st), b) {
                    let ConcreteValue::Str(text) = v else { continue };
                    let Ok(prog) = parse_fragment(&text) else { continue };
                    let mut f = fuel;
                    if let Some(end) = exec(&prog, st.clone(), &mut f)? {
                        ends.push(end);
                    }
                }
            }
            Ok((!ends.is_empty()).then(|| CollectingMemory::from_stores(&ends)))
        }
    }
}

fn concrete_image(ls: &[AbsLabel], m: &CollectingMemory, b: &Bounds, fuel: u64) -> Result<Option<CollectingMemory>, FuelExhausted> {
    let mut out: Option<CollectingMemory> = None;
    for l in ls {
        if let Some(r) = concrete_label(l, m, b, fuel)? {
            out = Some(match out {
                Some(o) => o.join(&r),
                None => r,
            });
        }
    }
    Ok(out)
}

fn gamma(m: &AbstractMemory, vars: &[String], b: &Bounds) -> CollectingMemory {
    let mut out = CollectingMemory::new();
    for x in vars {
        out = out.with(x, m.get(x).gamma_bounded(b));
    }
    out
}

fn grid_memories(vars: &[String], values: &[Value]) -> Vec<AbstractMemory> {
    let mut out = vec![AbstractMemory::top()];
    for x in vars {
        out = out.iter().flat_map(|m| values.iter().map(move |v| m.set(x, v.clone()))).collect();
    }
    out
}

enum Outcome {
    Skipped,
    Checked(Vec<Violation>),
}

/// Compares, for every image of `part` and every grid memory over the
/// variables it reads, the collecting semantics of the image's labels with
/// that of their abstractions, where every literal denotes its abstract
/// value. Both are computed in two input windows, so that a finite result
/// cannot pass for an unbounded one.
pub fn check_completeness(part: &LabelPartition, rho: Rho, grid: &Grid) -> CompletenessReport {
    let mut report = CompletenessReport::default();
    let values = grid.values();
    for labels in part.images() {
        let mut vars: Vec<String> = Vec::new();
        for l in &labels {
            for v in l.expr().vars() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        if vars.len() > grid.max_vars {
            report.skipped += 1;
            continue;
        }
        let mems = grid_memories(&vars, &values);
        let outcomes = par::map_with(grid.execution, &mems, |m| check_one(&labels, m, &vars, rho, grid));
        for o in outcomes {
            match o {
                Outcome::Skipped => report.skipped += 1,
                Outcome::Checked(vs) => {
                    report.checked += 1;
                    report.violations.extend(vs);
                }
            }
        }
    }
    report
}

fn check_one(labels: &[AbsLabel], m: &AbstractMemory, vars: &[String], rho: Rho, grid: &Grid) -> Outcome {
    let strict = Transfer { permissive: false, ..Transfer::default() };
    if labels.iter().any(|l| eval_abstract(l.expr(), m, &strict).is_err()) {
        return Outcome::Skipped;
    }
    let abstracted: Vec<AbsLabel> = labels.iter().map(|l| upsilon(l, rho)).collect();
    for b in grid.windows() {
        let g = gamma(m, vars, &b);
        let (Ok(c), Ok(a)) = (concrete_image(labels, &g, &b, grid.fuel), concrete_image(&abstracted, &g, &b, grid.fuel)) else {
            return Outcome::Skipped;
        };
        if c != a {
            return Outcome::Checked(vec![Violation {
                label: super::AbstractEdge(labels.to_vec()).to_string(),
                memory: m.to_string(),
                concrete: fmt_collecting(&c),
                abstract_: fmt_collecting(&a),
            }]);
        }
    }
    Outcome::Checked(Vec::new())
}

fn fmt_collecting(m: &Option<CollectingMemory>) -> String {
    m.as_ref().map_or_else(|| "∅".into(), |m| m.to_string())
}
