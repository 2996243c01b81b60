//! Soundness oracle: concrete runs from grid stores must end inside the
//! concretisation of the analysis result.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{analyze, Config};
use crate::automata::Dfa;
use crate::cfg::build_cfg;
use crate::concrete::exec;
use crate::domains::{Bounds, CollectingMemory, ConcreteValue, Store, Value};
use crate::imp::{parse_sorted, render, LabeledProgram, Sort};
use crate::par::{self, Execution};

/// Initial stores: every free variable ranges over the values of its sort
/// inside the bounds.
#[derive(Debug, Clone)]
pub struct OracleGrid {
    pub bounds: Bounds,
    pub fuel: u64,
    /// Variables read only by eval'd code, which the host program does
    /// not mention.
    pub extra: Vec<(String, Sort)>,
    pub execution: Execution,
}

impl Default for OracleGrid {
    fn default() -> Self {
        OracleGrid { bounds: Bounds::default(), fuel: 20_000, extra: Vec::new(), execution: Execution::default() }
    }
}

impl OracleGrid {
    fn values(&self, s: Sort) -> Vec<ConcreteValue> {
        let v = match s {
            Sort::Int => Value::Int(crate::domains::Sign::Top),
            Sort::Bool => Value::Bool(crate::domains::BoolVal::TOP),
            Sort::Str => Value::Str(Dfa::universe()),
        };
        v.gamma_bounded(&self.bounds).into_iter().collect()
    }

    pub fn stores(&self, p: &LabeledProgram) -> Vec<Store> {
        let sorts = parse_sorted(&render(&p.root)).map(|(_, s)| s).unwrap_or_default();
        let mut vars: Vec<(String, Sort)> =
            p.root.free_vars().into_iter().map(|x| (x.clone(), sorts.get(&x).copied().unwrap_or(Sort::Int))).collect();
        for e in &self.extra {
            if !vars.iter().any(|(y, _)| *y == e.0) {
                vars.push(e.clone());
            }
        }
        let mut out = vec![Store::new()];
        for (x, sort) in vars {
            let vs = self.values(sort);
            out = out
                .iter()
                .flat_map(|st| {
                    vs.iter().map(|v| {
                        let mut st = st.clone();
                        st.insert(x.clone(), v.clone());
                        st
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoundnessViolation {
    pub store: BTreeMap<String, String>,
    pub variable: String,
    pub concrete: String,
    #[serde(rename = "abstract")]
    pub abstract_: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    pub checked: usize,
    /// Runs that exhausted their fuel.
    pub skipped: usize,
    pub violations: Vec<SoundnessViolation>,
}

enum Run {
    Diverged,
    Checked(Vec<SoundnessViolation>),
}

/// Runs `p` from every grid store and checks the final store against the
/// exit memory of the analysis started from the store's abstraction.
pub fn soundness_check(p: &LabeledProgram, grid: &OracleGrid, config: &Config) -> SoundnessReport {
    let g = build_cfg(p);
    let stores = grid.stores(p);
    let runs = par::map_with(grid.execution, &stores, |st| {
        let mut fuel = grid.fuel;
        let end = match exec(&p.root, st.clone(), &mut fuel) {
            Err(_) => return Run::Diverged,
            Ok(None) => return Run::Checked(Vec::new()),
            Ok(Some(end)) => end,
        };
        let m0 = CollectingMemory::from_store(st).alpha();
        let exit = analyze(&g, m0, config).exit();
        let shown = st.iter().map(|(k, v)| (k.clone(), v.to_string())).collect::<BTreeMap<_, _>>();
        let bad = end
            .iter()
            .filter(|(x, c)| !exit.get(x).contains(c))
            .map(|(x, c)| SoundnessViolation {
                store: shown.clone(),
                variable: x.clone(),
                concrete: c.to_string(),
                abstract_: exit.get(x).to_string(),
            })
            .collect();
        Run::Checked(bad)
    });
    let mut report = SoundnessReport::default();
    for r in runs {
        match r {
            Run::Diverged => report.skipped += 1,
            Run::Checked(vs) => {
                report.checked += 1;
                report.violations.extend(vs);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{Sign, Transfer};
    use crate::imp::parse_program;

    fn broken_add(a: Sign, b: Sign) -> Sign {
        if a == Sign::Pos && b == Sign::Pos {
            Sign::Zero
        } else {
            a.add(b)
        }
    }

    #[test]
    fn loop_program_is_sound() {
        let p = parse_program("x := 0; while (x<5) {x := x + 1}; x:=7").unwrap();
        let r = soundness_check(&p, &OracleGrid::default(), &Config::default());
        assert_eq!(r.checked, 1);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn broken_addition_is_caught() {
        let p = parse_program("y := x + x").unwrap();
        let c = Config { transfer: Transfer { sign_add: broken_add, ..Transfer::default() }, ..Config::default() };
        let r = soundness_check(&p, &OracleGrid::default(), &c);
        assert_eq!(r.checked, 7);
        assert!(!r.violations.is_empty());
        assert!(soundness_check(&p, &OracleGrid::default(), &Config::default()).violations.is_empty());
    }
}
