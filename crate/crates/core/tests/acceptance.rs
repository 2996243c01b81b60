//! One line per acceptance criterion. Run with `--nocapture` to see them.

mod common;

use std::collections::{BTreeSet, VecDeque};
use std::time::{Duration, Instant};

use codeabs::analyzer::{analyze, soundness_check, AnalysisResult, Config, OracleGrid};
use codeabs::automata::Dfa;
use codeabs::cfg::{build_cfg, Cfg};
use codeabs::code_abs::{
    check_completeness, compose_complete, concrete_label, rho_hat, upsilon, Grid, LabelPartition, Rho,
};
use codeabs::domains::{
    eval_abstract, eval_collecting, AbsExpr, AbstractMemory, BoolVal, Bounds, CollectingMemory, ConcreteValue, Sign,
    Store, Transfer, Value,
};
use codeabs::imp::{parse_fragment, parse_program, CmpOp, LabeledProgram, Sort, Stmt};
use codeabs::label::AbsLabel;
use codeabs::synth::synthesize;
use common::{corpus, Gen, CORPUS};
use rand::seq::SliceRandom;

const PIPELINE_BUDGET: Duration = Duration::from_secs(5);
const COUNTEREXAMPLE_BUDGET: Duration = Duration::from_secs(60);
const TERMINATION_BUDGET: Duration = Duration::from_secs(5);
const LEAF_EXPRS: usize = 500;
const LABEL_SETS: usize = 200;
const AUTOMATA: usize = 50;
const MAX_PROGRAM_LEN: usize = 20;
const STRINGS_PER_AUTOMATON: usize = 40;
const LOOP_FREE_PROGRAMS: usize = 100;
const DEGENERATE_PROGRAMS: usize = 20;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn run(src: &str) -> AnalysisResult {
    let p = parse_program(src).unwrap();
    analyze(&build_cfg(&p), AbstractMemory::top(), &Config::default())
}

fn lit(s: &str) -> Dfa {
    Dfa::from_literal(s).unwrap()
}

fn x_lt_5() -> AbsExpr {
    AbsExpr::Cmp(CmpOp::Lt, Box::new(AbsExpr::Var("x".into())), Box::new(AbsExpr::Int(5)))
}

fn worked_example() -> Outcome {
    let t = Instant::now();
    let r = run(&corpus("grow_branch.imp"));
    let elapsed = t.elapsed();
    let Some(art) = r.artifacts.first() else { return outcome(false, "no eval site reached") };
    let expected = lit("if(x<5){x:=5").concat(&lit("5").star()).concat(&lit("}else{x:=1};"));
    let automaton = art.dfa.as_ref().is_some_and(|d| d.equivalent(&expected));
    let syn = art.synth.as_ref().unwrap();
    let edges: BTreeSet<AbsLabel> = syn.graph.edges.iter().map(|(_, l, _)| l.clone()).collect();
    let assign = |rhs| AbsLabel::Assign { target: "x".into(), rhs };
    let want: BTreeSet<AbsLabel> = [
        AbsLabel::Guard { cond: x_lt_5(), positive: true },
        AbsLabel::Guard { cond: x_lt_5(), positive: false },
        assign(AbsExpr::Int(1)),
        assign(AbsExpr::BulkNum(lit("5").plus())),
    ]
    .into();
    let cfg_ok = syn.graph.edges.len() == 4 && edges == want;
    let eta = art.eta.as_ref().unwrap();
    let blocks: BTreeSet<BTreeSet<AbsLabel>> = want.iter().map(|l| BTreeSet::from([l.clone()])).collect();
    let eta_ok = eta.member_sets() == blocks && eta.uncovered().is_empty();
    let acfg = art.acfg.as_ref().unwrap();
    let shown: BTreeSet<String> = acfg.edges.iter().map(|(_, e, _)| e.to_string()).collect();
    let acfg_ok = shown == BTreeSet::from(["x:=Z+".to_string(), "x<Z+".into(), "¬(x<Z+)".into()]);
    let sign_ok = r.exit().get("x") == Value::Int(Sign::Pos);
    let pass = automaton && cfg_ok && eta_ok && acfg_ok && sign_ok && elapsed < PIPELINE_BUDGET;
    outcome(
        pass,
        format!(
            "automaton={automaton} cfg={cfg_ok} eta={eta_ok} abstract_cfg={acfg_ok} x_pos={sign_ok} time={elapsed:.2?}"
        ),
    )
}

fn labels_of(text: &str) -> Vec<AbsLabel> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| AbsLabel::of_stmt(&parse_fragment(l).unwrap()).unwrap())
        .collect()
}

fn counterexample() -> Outcome {
    let t = Instant::now();
    let universe = labels_of(&corpus("expect_fail/small_literals.block"));
    let n = universe.len();
    let eta = LabelPartition::from_blocks(universe, [(0..n).collect()]);
    let grid = Grid::default();
    let before = check_completeness(&eta, Rho::Sign, &grid);
    let after = check_completeness(&compose_complete(&eta, Rho::Sign), Rho::Sign, &grid);
    let elapsed = t.elapsed();
    let pass = !before.violations.is_empty() && after.violations.is_empty() && after.checked > 0 && elapsed < COUNTEREXAMPLE_BUDGET;
    outcome(
        pass,
        format!("violations before={} after={} time={elapsed:.2?}", before.violations.len(), after.violations.len()),
    )
}

/// Test-side concretisation of the grid: all values of a sort in the
/// default bounds.
fn window_strings() -> Vec<String> {
    let b = Bounds::default();
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..b.max_len {
        layer = layer.iter().flat_map(|s| b.chars.iter().map(move |c| format!("{s}{c}"))).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Concrete literals denoted by an abstract leaf inside the default bounds.
fn leaf_oracle(e: &AbsExpr) -> Vec<AbsExpr> {
    let b = Bounds::default();
    match e {
        AbsExpr::AbsNum(s) => (b.lo..=b.hi).filter(|n| s.contains(*n)).map(AbsExpr::Int).collect(),
        AbsExpr::AbsBool(v) => [true, false].into_iter().filter(|x| v.contains(*x)).map(AbsExpr::Bool).collect(),
        AbsExpr::AbsStr(d) => window_strings().into_iter().filter(|s| d.accepts(s)).map(AbsExpr::Str).collect(),
        other => vec![other.clone()],
    }
}

/// Every concrete expression obtained by choosing one literal per
/// abstract leaf, or `None` past `cap` instances.
fn instances(e: &AbsExpr, cap: usize) -> Option<Vec<AbsExpr>> {
    let two = |l: &AbsExpr, r: &AbsExpr, f: &dyn Fn(Box<AbsExpr>, Box<AbsExpr>) -> AbsExpr| {
        let (ls, rs) = (instances(l, cap)?, instances(r, cap)?);
        if ls.len() * rs.len() > cap {
            return None;
        }
        Some(ls.iter().flat_map(|x| rs.iter().map(|y| f(Box::new(x.clone()), Box::new(y.clone())))).collect())
    };
    match e {
        AbsExpr::Arith(op, l, r) => two(l, r, &|x, y| AbsExpr::Arith(*op, x, y)),
        AbsExpr::Cmp(op, l, r) => two(l, r, &|x, y| AbsExpr::Cmp(*op, x, y)),
        AbsExpr::And(l, r) => two(l, r, &AbsExpr::And),
        AbsExpr::Concat(l, r) => two(l, r, &AbsExpr::Concat),
        AbsExpr::Not(i) => Some(instances(i, cap)?.into_iter().map(|x| AbsExpr::Not(Box::new(x))).collect()),
        leaf => Some(leaf_oracle(leaf)),
    }
}

const INSTANCE_CAP: usize = 4096;

fn sort_values(sort: usize) -> Vec<Value> {
    match sort {
        0 => [Sign::Neg, Sign::Zero, Sign::Pos, Sign::Top].map(Value::Int).into(),
        1 => [BoolVal::of(true), BoolVal::of(false), BoolVal::TOP].map(Value::Bool).into(),
        _ => vec![Value::Str(lit("a")), Value::Str(lit("a").star())],
    }
}

fn var_sort(x: &str) -> usize {
    match x {
        "x" | "y" => 0,
        "b" => 1,
        _ => 2,
    }
}

fn memories(vars: &[String]) -> Vec<AbstractMemory> {
    let mut out = vec![AbstractMemory::top()];
    for x in vars {
        out = out.iter().flat_map(|m| sort_values(var_sort(x)).into_iter().map(move |v| m.set(x, v))).collect();
    }
    out
}

/// The join over the concrete instances of the abstracted expression
/// equals its evaluation with set-valued leaves. The sign evaluation of
/// the original expression must cover both.
fn leaf_abstraction() -> Outcome {
    let mut g = Gen::new(1);
    let b = Bounds::default();
    let (mut exprs, mut drawn, mut checks, mut mismatches) = (0usize, 0usize, 0usize, Vec::new());
    while exprs < LEAF_EXPRS {
        drawn += 1;
        let (e, sort) = g.expr(3);
        let abs = AbsExpr::from(&e);
        let hat = rho_hat(&abs, Rho::Sign);
        let Some(inst) = instances(&hat, INSTANCE_CAP) else { continue };
        exprs += 1;
        let vars = abs.vars();
        for m in memories(&vars) {
            let cm = vars.iter().fold(CollectingMemory::new(), |acc, x| acc.with(x, m.get(x).gamma_bounded(&b)));
            let joined: BTreeSet<ConcreteValue> = inst.iter().flat_map(|i| eval_collecting(i, &cm, &b)).collect();
            let intensional = eval_collecting(&hat, &cm, &b);
            let abstract_ = eval_abstract(&abs, &m, &Transfer::default()).unwrap();
            let covered = match sort {
                2 => joined
                    .iter()
                    .filter(|c| matches!(c, ConcreteValue::Str(s) if s.len() <= b.max_len))
                    .all(|c| abstract_.contains(c)),
                _ => Value::alpha(&joined).leq(&abstract_),
            };
            checks += 1;
            if joined != intensional || !covered {
                mismatches.push(format!("{} under {m}", e_str(&e)));
            }
        }
    }
    if let Some(first) = mismatches.first() {
        eprintln!("first leaf abstraction mismatch: {first}");
    }
    outcome(
        mismatches.is_empty(),
        format!("{exprs} expressions ({} over the instance cap), {checks} memory checks, {} mismatches", drawn - exprs, mismatches.len()),
    )
}

fn e_str(e: &codeabs::imp::Expr) -> String {
    codeabs::imp::render_expr(e)
}

/// Whether `l` is denoted by the abstraction of `src`: same skeleton, and
/// literals of the same sign at every integer leaf.
fn same_sign_shape(src: &AbsExpr, l: &AbsExpr) -> bool {
    match (src, l) {
        (AbsExpr::Int(a), AbsExpr::Int(b)) => Sign::of(*a) == Sign::of(*b),
        (AbsExpr::Var(a), AbsExpr::Var(b)) => a == b,
        (AbsExpr::Arith(o, a1, a2), AbsExpr::Arith(p, b1, b2)) => o == p && same_sign_shape(a1, b1) && same_sign_shape(a2, b2),
        (AbsExpr::Cmp(o, a1, a2), AbsExpr::Cmp(p, b1, b2)) => o == p && same_sign_shape(a1, b1) && same_sign_shape(a2, b2),
        _ => false,
    }
}

fn denoted(src: &AbsLabel, l: &AbsLabel) -> bool {
    match (src, l) {
        (AbsLabel::Assign { target: a, rhs: e }, AbsLabel::Assign { target: b, rhs: f }) => a == b && same_sign_shape(e, f),
        (AbsLabel::Guard { cond: e, positive: p }, AbsLabel::Guard { cond: f, positive: q }) => p == q && same_sign_shape(e, f),
        _ => false,
    }
}

fn label_closure() -> Outcome {
    let mut g = Gen::new(2);
    let mut failures = Vec::new();
    for k in 0..LABEL_SETS {
        let mut universe: Vec<AbsLabel> = Vec::new();
        while universe.len() < 8 {
            let l = g.label();
            if !universe.contains(&l) {
                universe.push(l);
            }
        }
        let n = universe.len();
        let close = |phi: &BTreeSet<usize>| -> BTreeSet<usize> {
            (0..n).filter(|&j| phi.iter().any(|&i| upsilon(&universe[i], Rho::Sign).subsumes(&universe[j]))).collect()
        };
        let oracle = |phi: &BTreeSet<usize>| -> BTreeSet<usize> {
            (0..n).filter(|&j| phi.iter().any(|&i| denoted(&universe[i], &universe[j]))).collect()
        };
        let sample = |g: &mut Gen| -> BTreeSet<usize> {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut g.rng);
            let take = rand::Rng::gen_range(&mut g.rng, 0..=n);
            idx.into_iter().take(take).collect()
        };
        let (a, b) = (sample(&mut g), sample(&mut g));
        let ab: BTreeSet<usize> = a.union(&b).copied().collect();
        let (ca, cb, cab) = (close(&a), close(&b), close(&ab));
        let checks = [
            ("oracle", ca == oracle(&a) && cab == oracle(&ab)),
            ("extensive", a.is_subset(&ca)),
            ("idempotent", close(&ca) == ca),
            ("monotone", ca.is_subset(&cab)),
            ("additive", cab == ca.union(&cb).copied().collect()),
            ("label fixpoint", universe.iter().all(|l| {
                let u = upsilon(l, Rho::Sign);
                upsilon(&u, Rho::Sign) == u
            })),
        ];
        for (name, ok) in checks {
            if !ok {
                failures.push(format!("sample {k}: {name}"));
            }
        }
    }
    if let Some(first) = failures.first() {
        eprintln!("first property failure: {first}");
    }
    outcome(failures.is_empty(), format!("{LABEL_SETS} label-set pairs, {} failures", failures.len()))
}

/// Whether some path of `g` from its entry to an exit turns `from` into
/// `target`. Breadth-first over (node, store), bounded.
fn reaches(g: &Cfg<AbsLabel>, from: &Store, target: &Store) -> bool {
    let b = Bounds { max_len: MAX_PROGRAM_LEN, ..Bounds::default() };
    let succ = g.successors();
    let mut seen = BTreeSet::from([(g.entry, from.clone())]);
    let mut queue = VecDeque::from([(g.entry, from.clone())]);
    while let Some((u, st)) = queue.pop_front() {
        if g.exits.contains(&u) && &st == target {
            return true;
        }
        if seen.len() > 20_000 {
            return false;
        }
        for &e in succ.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            let (_, l, v) = &g.edges[e];
            let Ok(Some(m)) = concrete_label(l, &CollectingMemory::from_store(&st), &b, 1_000) else { continue };
            for next in m.stores() {
                if seen.insert((*v, next.clone())) {
                    queue.push_back((*v, next));
                }
            }
        }
    }
    false
}

fn parser_soundness() -> Outcome {
    let mut g = Gen::new(3);
    let start: Store = [("x".to_string(), ConcreteValue::Int(0)), ("y".to_string(), ConcreteValue::Int(0))].into();
    let (mut programs, mut failures) = (0usize, Vec::new());
    for k in 0..AUTOMATA {
        let d = g.automaton();
        let syn = match synthesize(&d) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("automaton {k}: {e} on {}", d.to_regex()));
                continue;
            }
        };
        let mut words: Vec<String> = d.enumerate(MAX_PROGRAM_LEN).into_iter().collect();
        words.shuffle(&mut g.rng);
        for w in words.into_iter().take(STRINGS_PER_AUTOMATON) {
            let Ok(prog) = parse_fragment(&w) else { continue };
            let mut fuel = 10_000;
            let Ok(Some(end)) = codeabs::concrete::exec(&prog, start.clone(), &mut fuel) else { continue };
            programs += 1;
            if !reaches(&syn.graph, &start, &end) {
                failures.push(format!("automaton {k}: {w}"));
            }
        }
    }
    if let Some(first) = failures.first() {
        eprintln!("first parser failure: {first}");
    }
    outcome(
        failures.is_empty() && programs > 0,
        format!("{AUTOMATA} automata, {programs} programs replayed, {} failures", failures.len()),
    )
}

fn broken_add(a: Sign, b: Sign) -> Sign {
    if a == Sign::Pos && b == Sign::Pos {
        Sign::Zero
    } else {
        a.add(b)
    }
}

fn analyzer_soundness() -> Outcome {
    let mut g = Gen::new(4);
    let config = Config::default();
    let mut violations = 0;
    let mut checked = 0;
    for _ in 0..LOOP_FREE_PROGRAMS {
        let p = LabeledProgram::new(g.program(3, true));
        let r = soundness_check(&p, &OracleGrid::default(), &config);
        checked += r.checked;
        violations += r.violations.len();
    }
    let small = OracleGrid {
        bounds: Bounds { lo: 0, hi: 2, ..Bounds::default() },
        extra: vec![("x".into(), Sort::Int)],
        ..OracleGrid::default()
    };
    for f in ["count_loop.imp", "grow_branch.imp"] {
        let r = soundness_check(&parse_program(&corpus(f)).unwrap(), &small, &config);
        checked += r.checked;
        violations += r.violations.len();
    }
    let broken = Config { transfer: Transfer { sign_add: broken_add, ..Transfer::default() }, ..config };
    let caught = !soundness_check(&parse_program(&corpus("straight.imp")).unwrap(), &OracleGrid::default(), &broken)
        .violations
        .is_empty();
    outcome(
        violations == 0 && caught && checked > LOOP_FREE_PROGRAMS,
        format!("{checked} runs checked, {violations} violations, mutation caught={caught}"),
    )
}

fn termination() -> Outcome {
    let mut slowest = Duration::ZERO;
    for f in CORPUS {
        let t = Instant::now();
        run(&corpus(f));
        slowest = slowest.max(t.elapsed());
    }
    outcome(slowest < TERMINATION_BUDGET, format!("{} programs, slowest {slowest:.2?}", CORPUS.len()))
}

fn degenerate_eval() -> Outcome {
    let mut g = Gen::new(5);
    let config = Config::default();
    let mut mismatches = Vec::new();
    for k in 0..DEGENERATE_PROGRAMS {
        let prefix = g.program(2, false);
        g.strings = false;
        let inner = g.stmt(2, false);
        let suffix = g.stmt(1, false);
        g.strings = true;
        let code = codeabs::imp::render(&inner);
        let with_eval = Stmt::seq(prefix.clone(), Stmt::seq(Stmt::eval(codeabs::imp::Expr::str(code)), suffix.clone()));
        let inlined = Stmt::seq(prefix.clone(), Stmt::seq(inner, suffix));
        let shared = LabeledProgram::new(prefix).labels().into_iter().max().unwrap();
        let a = analyze(&build_cfg(&LabeledProgram::new(with_eval)), AbstractMemory::top(), &config);
        let b = analyze(&build_cfg(&LabeledProgram::new(inlined)), AbstractMemory::top(), &config);
        let points_agree = (1..=shared).all(|n| a.at(n) == b.at(n));
        if !points_agree || a.exit() != b.exit() || !a.diagnostics.is_empty() {
            mismatches.push(format!("program {k}: {} vs {}", a.exit(), b.exit()));
        }
    }
    if let Some(first) = mismatches.first() {
        eprintln!("first degenerate mismatch: {first}");
    }
    outcome(mismatches.is_empty(), format!("{DEGENERATE_PROGRAMS} programs, {} mismatches", mismatches.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("worked example pipeline", worked_example),
        ("completeness counterexample", counterexample),
        ("expression leaf abstraction", leaf_abstraction),
        ("label abstraction closure", label_closure),
        ("abstract parser soundness", parser_soundness),
        ("analyzer soundness", analyzer_soundness),
        ("termination", termination),
        ("degenerate eval", degenerate_eval),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("{} {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.pass {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
