use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use codeabs::analyzer::{analyze, soundness_check, AnalysisResult, Config, OracleGrid, SoundnessReport};
use codeabs::cfg::build_cfg;
use codeabs::code_abs::{check_completeness, CompletenessReport, Grid, LabelPartition, Rho};
use codeabs::domains::AbstractMemory;
use codeabs::imp::{parse_fragment, parse_program, Label};
use codeabs::label::AbsLabel;
use codeabs::par;

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "codeabs", version, about = "Sign analysis of Imp programs, including the code they pass to eval")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse one program.
    Analyze(AnalyzeArgs),
    /// Analyse every `.imp` file under a directory and check soundness and
    /// completeness; `.block` files are checked as one label block.
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct Knobs {
    /// Automaton widening parameter.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    widening_k: u64,
    /// How many nested evals are analysed before giving up with ⊤.
    #[arg(long, default_value_t = 3)]
    eval_depth: usize,
    /// Integer range of the oracle and completeness grids, as `lo:hi`.
    #[arg(long, value_parser = parse_range)]
    grid_int: Option<(i64, i64)>,
    /// Longest string in the grids.
    #[arg(long)]
    grid_strlen: Option<usize>,
}

#[derive(Args)]
struct AnalyzeArgs {
    input: PathBuf,
    #[command(flatten)]
    knobs: Knobs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "report-text")]
    emit: Vec<Emit>,
    /// Also run the program from every grid store and check the result.
    #[arg(long)]
    oracle: bool,
    /// Directory for DOT and artifact files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct CorpusArgs {
    dir: PathBuf,
    #[command(flatten)]
    knobs: Knobs,
    /// Print the summary as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    ReportJson,
    ReportText,
    CfgDot,
    EvalArtifacts,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{lo}: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{hi}: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

enum Failure {
    Syntax(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Syntax(_) => 1,
            Failure::Internal(_) => 2,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl Knobs {
    fn config(&self) -> Config {
        Config { widening_k: self.widening_k as usize, eval_depth: self.eval_depth, ..Config::default() }
    }

    fn oracle_grid(&self) -> OracleGrid {
        let mut g = OracleGrid::default();
        if let Some((lo, hi)) = self.grid_int {
            g.bounds.lo = lo;
            g.bounds.hi = hi;
        }
        if let Some(n) = self.grid_strlen {
            g.bounds.max_len = n;
        }
        g
    }

    fn completeness_grid(&self) -> Grid {
        let mut g = Grid::default();
        if let Some((lo, hi)) = self.grid_int {
            g.bounds.lo = lo;
            g.bounds.hi = hi;
        }
        if let Some(n) = self.grid_strlen {
            g.bounds.max_len = n;
        }
        g
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => run_analyze(&a),
        Command::Corpus(c) => run_corpus(&c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Syntax(m) => eprintln!("syntax error: {m}"),
                Failure::Internal(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn node_name(n: Label) -> String {
    if n < 0 {
        format!("m{}", -n)
    } else {
        n.to_string()
    }
}

fn run_analyze(a: &AnalyzeArgs) -> Result<(), Failure> {
    let src = fs::read_to_string(&a.input)?;
    let p = parse_program(&src).map_err(|e| Failure::Syntax(format!("{}: {e}", a.input.display())))?;
    let g = build_cfg(&p);
    let config = a.knobs.config();
    let r = analyze(&g, AbstractMemory::top(), &config);
    let oracle = a.oracle.then(|| soundness_check(&p, &a.knobs.oracle_grid(), &config));
    let stem = a.input.file_stem().map_or("program".into(), |s| s.to_string_lossy().into_owned());
    if a.emit.contains(&Emit::CfgDot) || a.emit.contains(&Emit::EvalArtifacts) {
        fs::create_dir_all(&a.out)?;
    }
    if a.emit.contains(&Emit::CfgDot) {
        fs::write(a.out.join(format!("{stem}.cfg.dot")), g.to_dot("cfg"))?;
    }
    if a.emit.contains(&Emit::EvalArtifacts) {
        write_artifacts(&a.out, &stem, &r)?;
    }
    if a.emit.contains(&Emit::ReportJson) {
        let mut report = json!({"schema": SCHEMA, "input": a.input.display().to_string(), "analysis": r.to_json()});
        if let Some(o) = &oracle {
            report["soundness"] = serde_json::to_value(o).map_err(|e| Failure::Internal(e.to_string()))?;
        }
        println!("{}", serde_json::to_string_pretty(&report).map_err(|e| Failure::Internal(e.to_string()))?);
    }
    if a.emit.contains(&Emit::ReportText) {
        print!("{}", text_report(&r, oracle.as_ref()));
    }
    match oracle {
        Some(o) if !o.violations.is_empty() => {
            Err(Failure::Internal(format!("{} soundness violations", o.violations.len())))
        }
        _ => Ok(()),
    }
}

fn write_artifacts(out: &Path, stem: &str, r: &AnalysisResult) -> Result<(), Failure> {
    for art in &r.artifacts {
        let prefix = format!("{stem}.eval_d{}_n{}", art.depth, node_name(art.node));
        if let Some(d) = &art.dfa {
            fs::write(out.join(format!("{prefix}.automaton.dot")), d.to_dot())?;
        }
        if let Some(s) = &art.synth {
            fs::write(out.join(format!("{prefix}.cfg.dot")), s.graph.to_dot("synthesized"))?;
        }
        if let Some(g) = &art.acfg {
            fs::write(out.join(format!("{prefix}.abstract_cfg.dot")), g.to_dot("abstract"))?;
        }
    }
    let evals: Vec<Json> = r.artifacts.iter().map(|a| a.to_json()).collect();
    let doc = json!({"schema": SCHEMA, "evals": evals});
    fs::write(
        out.join(format!("{stem}.evals.json")),
        serde_json::to_string_pretty(&doc).map_err(|e| Failure::Internal(e.to_string()))?,
    )?;
    Ok(())
}

fn text_report(r: &AnalysisResult, oracle: Option<&SoundnessReport>) -> String {
    let mut out = String::new();
    for (n, m) in &r.memories {
        out.push_str(&format!("{n}: {m}\n"));
    }
    out.push_str(&format!("exit: {}\n", r.exit()));
    for a in &r.artifacts {
        out.push_str(&format!("eval at {} (depth {})", node_name(a.node), a.depth));
        if let Some(d) = &a.dfa {
            out.push_str(&format!(": {}", d.to_regex()));
        }
        out.push('\n');
        if let Some(g) = &a.acfg {
            for (u, l, v) in &g.edges {
                out.push_str(&format!("  {} -> {}: {l}\n", node_name(*u), node_name(*v)));
            }
        }
    }
    for d in &r.diagnostics {
        out.push_str(&format!("warning at {} (depth {}): {}\n", node_name(d.node), d.depth, d.message));
    }
    if let Some(o) = oracle {
        out.push_str(&format!("soundness: {} runs, {} skipped, {} violations\n", o.checked, o.skipped, o.violations.len()));
        for v in &o.violations {
            out.push_str(&format!("  from {:?}: {} = {} not in {}\n", v.store, v.variable, v.concrete, v.abstract_));
        }
    }
    out
}

fn corpus_files(dir: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            corpus_files(&path, out)?;
        } else if matches!(path.extension().and_then(|e| e.to_str()), Some("imp" | "block")) {
            out.push(path);
        }
    }
    Ok(())
}

/// Outcome of one corpus entry.
struct Entry {
    path: String,
    expect_violation: bool,
    error: Option<Failure>,
    millis: u128,
    soundness: Option<SoundnessReport>,
    completeness: CompletenessReport,
}

impl Entry {
    fn violations(&self) -> usize {
        self.soundness.as_ref().map_or(0, |s| s.violations.len()) + self.completeness.violations.len()
    }

    fn ok(&self) -> bool {
        self.error.is_none() && (self.violations() > 0) == self.expect_violation
    }

    fn to_json(&self) -> Json {
        json!({
            "path": self.path,
            "expect_violation": self.expect_violation,
            "ok": self.ok(),
            "error": self.error.as_ref().map(|e| match e {
                Failure::Syntax(m) | Failure::Internal(m) => m.clone(),
            }),
            "millis": self.millis,
            "soundness": self.soundness,
            "completeness": self.completeness,
        })
    }
}

fn merge(into: &mut CompletenessReport, r: CompletenessReport) {
    into.checked += r.checked;
    into.skipped += r.skipped;
    into.violations.extend(r.violations);
}

fn check_entry(path: &Path, root: &Path, knobs: &Knobs) -> Entry {
    let rel = path.strip_prefix(root).unwrap_or(path);
    let mut e = Entry {
        path: rel.display().to_string(),
        expect_violation: rel.components().any(|c| c.as_os_str() == "expect_fail"),
        error: None,
        millis: 0,
        soundness: None,
        completeness: CompletenessReport::default(),
    };
    let src = match fs::read_to_string(path) {
        Ok(s) => s,
        Err(err) => {
            e.error = Some(err.into());
            return e;
        }
    };
    let t = Instant::now();
    let config = knobs.config();
    let grid = knobs.completeness_grid();
    if path.extension().is_some_and(|x| x == "block") {
        let mut labels = Vec::new();
        for line in src.lines().filter(|l| !l.trim().is_empty()) {
            match parse_fragment(line).ok().and_then(|s| AbsLabel::of_stmt(&s)) {
                Some(l) => labels.push(l),
                None => {
                    e.error = Some(Failure::Syntax(format!("not a single assignment or eval: {line}")));
                    return e;
                }
            }
        }
        let n = labels.len();
        let block = LabelPartition::from_blocks(labels, [(0..n).collect()]);
        e.completeness = check_completeness(&block, config.rho, &grid);
    } else {
        let p = match parse_program(&src) {
            Ok(p) => p,
            Err(err) => {
                e.error = Some(Failure::Syntax(err.to_string()));
                return e;
            }
        };
        let r = analyze(&build_cfg(&p), AbstractMemory::top(), &config);
        for a in &r.artifacts {
            if let Some(up) = &a.eta_up {
                merge(&mut e.completeness, check_completeness(up, config.rho, &grid));
            }
        }
        e.soundness = Some(soundness_check(&p, &knobs.oracle_grid(), &config));
    }
    e.millis = t.elapsed().as_millis();
    e
}

fn run_corpus(c: &CorpusArgs) -> Result<(), Failure> {
    let mut files = Vec::new();
    corpus_files(&c.dir, &mut files)?;
    files.sort();
    let entries = par::map(&files, |f| check_entry(f, &c.dir, &c.knobs));
    if c.json {
        let doc = json!({
            "schema": SCHEMA,
            "rho": format!("{:?}", Rho::default()),
            "entries": entries.iter().map(Entry::to_json).collect::<Vec<_>>(),
            "ok": entries.iter().all(Entry::ok),
        });
        println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| Failure::Internal(e.to_string()))?);
    } else {
        for e in &entries {
            let status = if e.ok() { "ok" } else { "FAIL" };
            let detail = match &e.error {
                Some(Failure::Syntax(m)) => format!("syntax error: {m}"),
                Some(Failure::Internal(m)) => format!("error: {m}"),
                None => {
                    let sound = e.soundness.as_ref().map_or(String::new(), |s| {
                        format!("soundness {} runs, {} violations; ", s.checked, s.violations.len())
                    });
                    let expect = if e.expect_violation { " (violation expected)" } else { "" };
                    format!(
                        "{sound}completeness {} checks, {} violations{expect}; {} ms",
                        e.completeness.checked,
                        e.completeness.violations.len(),
                        e.millis
                    )
                }
            };
            println!("{status} {}: {detail}", e.path);
        }
        println!("{} entries, {} failed", entries.len(), entries.iter().filter(|e| !e.ok()).count());
    }
    let worst = entries.iter().filter(|e| !e.ok()).map(|e| e.error.as_ref().map_or(2, Failure::code)).max();
    match worst {
        None => Ok(()),
        Some(1) => Err(Failure::Syntax("corpus contains unparsable entries".into())),
        Some(_) => Err(Failure::Internal("corpus checks failed".into())),
    }
}
