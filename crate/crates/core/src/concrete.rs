//! Reference interpreter: the standard semantics on single stores and its
//! lift to finite sets of stores.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::domains::{eval_concrete, CollectingMemory, ConcreteValue, Store};
use crate::imp::{parse_fragment, Stmt};

/// The step budget ran out; the run neither terminated nor got stuck.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("fuel exhausted")]
pub struct FuelExhausted;

/// Runs `s` from `st`. `Ok(None)` means evaluation got stuck: a type
/// error, an unbound variable, an overflow, or an `eval` of a string that
/// is not a program.
pub fn exec(s: &Stmt, st: Store, fuel: &mut u64) -> Result<Option<Store>, FuelExhausted> {
    if *fuel == 0 {
        return Err(FuelExhausted);
    }
    *fuel -= 1;
    match s {
        Stmt::Skip => Ok(Some(st)),
        Stmt::Assign { target, rhs } => Ok(eval_concrete(rhs, &st).map(|v| {
            let mut st = st;
            st.insert(target.clone(), v);
            st
        })),
        Stmt::Seq { first, second } => match exec(first, st, fuel)? {
            Some(mid) => exec(second, mid, fuel),
            None => Ok(None),
        },
        Stmt::If { cond, then_branch, else_branch } => match eval_concrete(cond, &st) {
            Some(ConcreteValue::Bool(true)) => exec(then_branch, st, fuel),
            Some(ConcreteValue::Bool(false)) => exec(else_branch, st, fuel),
            _ => Ok(None),
        },
        Stmt::While { cond, body } => {
            let mut st = st;
            loop {
                match eval_concrete(cond, &st) {
                    Some(ConcreteValue::Bool(true)) => match exec(body, st, fuel)? {
                        Some(next) => st = next,
                        None => return Ok(None),
                    },
                    Some(ConcreteValue::Bool(false)) => return Ok(Some(st)),
                    _ => return Ok(None),
                }
                if *fuel == 0 {
                    return Err(FuelExhausted);
                }
                *fuel -= 1;
            }
        }
        Stmt::Eval { arg } => match eval_concrete(arg, &st) {
            Some(ConcreteValue::Str(text)) => match parse_fragment(&text) {
                Ok(prog) => exec(&prog, st, fuel),
                Err(_) => Ok(None),
            },
            _ => Ok(None),
        },
    }
}

/// Final stores of all runs from the stores of `m`, each run with its own
/// budget.
pub fn run_stores(s: &Stmt, stores: &[Store], fuel: u64) -> Result<BTreeSet<Store>, FuelExhausted> {
    let mut out = BTreeSet::new();
    for st in stores {
        let mut f = fuel;
        if let Some(end) = exec(s, st.clone(), &mut f)? {
            out.insert(end);
        }
    }
    Ok(out)
}

/// Collecting semantics of a statement. When no run terminates, every
/// variable of `m` is bound to the empty set.
pub fn collecting_run(s: &Stmt, m: &CollectingMemory, fuel: u64) -> Result<CollectingMemory, FuelExhausted> {
    let ends = run_stores(s, &m.stores(), fuel)?;
    if ends.is_empty() {
        return Ok(CollectingMemory { vars: m.vars.keys().map(|k| (k.clone(), BTreeSet::new())).collect() });
    }
    Ok(CollectingMemory::from_stores(&ends))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imp::parse_fragment;

    fn int(n: i64) -> ConcreteValue {
        ConcreteValue::Int(n)
    }

    #[test]
    fn loop_program_ends_with_seven() {
        let s = parse_fragment("x := 0; while (x<5) {x := x + 1}; x:=7").unwrap();
        let m = CollectingMemory::new().with("x", [int(0)]);
        assert_eq!(collecting_run(&s, &m, 1000).unwrap(), CollectingMemory::new().with("x", [int(7)]));
    }

    #[test]
    fn eval_discards_non_programs() {
        let s = parse_fragment("eval(s)").unwrap();
        let m = CollectingMemory::new()
            .with("x", [int(0)])
            .with("s", [ConcreteValue::Str("x:=5;".into()), ConcreteValue::Str("not code".into())]);
        let out = collecting_run(&s, &m, 1000).unwrap();
        assert_eq!(out.get("x"), BTreeSet::from([int(5)]));
    }

    #[test]
    fn divergence_exhausts_fuel() {
        let s = parse_fragment("while(true){skip}").unwrap();
        assert_eq!(collecting_run(&s, &CollectingMemory::new(), 100), Err(FuelExhausted));
    }
}
