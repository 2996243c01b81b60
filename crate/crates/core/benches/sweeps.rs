use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use codeabs::analyzer::{soundness_check, Config, OracleGrid};
use codeabs::automata::Dfa;
use codeabs::code_abs::{check_completeness, compose_complete, eta_from_cfg, Grid, Rho};
use codeabs::domains::Bounds;
use codeabs::imp::parse_program;
use codeabs::par::Execution;
use codeabs::synth::synthesize;

const STRATEGIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn completeness(c: &mut Criterion) {
    let lit = |s: &str| Dfa::from_literal(s).unwrap();
    let d = lit("if(x<y){x:=y+")
        .concat(&lit("1").plus())
        .concat(&lit("}else{y:=x-"))
        .concat(&lit("2").plus())
        .concat(&lit("};"));
    let syn = synthesize(&d).unwrap();
    let up = compose_complete(&eta_from_cfg(&syn.graph), Rho::Sign);
    let mut group = c.benchmark_group("completeness");
    group.sample_size(10);
    for (name, execution) in STRATEGIES {
        let grid = Grid { execution, ..Grid::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &grid, |b, g| b.iter(|| check_completeness(&up, Rho::Sign, g)));
    }
    group.finish();
}

fn soundness(c: &mut Criterion) {
    let p = parse_program("if (x < y) { z := x * y; s := \"y:=x;\" } else { z := y - x; s := \"x:=y;\" }; eval(s); w := x + y + z").unwrap();
    let mut group = c.benchmark_group("soundness");
    group.sample_size(10);
    for (name, execution) in STRATEGIES {
        let grid = OracleGrid { bounds: Bounds { lo: -6, hi: 6, ..Bounds::default() }, execution, ..OracleGrid::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &grid, |b, g| {
            b.iter(|| soundness_check(&p, g, &Config::default()))
        });
    }
    group.finish();
}

criterion_group!(benches, completeness, soundness);
criterion_main!(benches);
