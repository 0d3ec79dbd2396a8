use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graphbandit::config::{Experiment, SweepAxis};
use graphbandit::graphs::{DirectedGraph, ALPHA_EXACT_CAP, GAMMA_EXACT_CAP, MAS_EXACT_CAP};
use graphbandit::harness::{regret_bound_overlay, run_batch, BatchResult};
use graphbandit::oracles::{run_suite, OracleReport, Suite, SuiteParams};
use graphbandit::report::{fmt6, write_results_csv, write_sweep_summary, ResultEnvelope, SweepRow};
use serde_json::json;

#[derive(Parser)]
#[command(name = "graphbandit", version, about = "Bandits with graph-structured feedback")]
struct Cli {
    /// Worker threads for batches and oracle checks (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its results CSV and JSON envelope
    Run(RunArgs),
    /// Rerun an experiment for each value of one parameter
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Parameter to vary: eta, r, T or K
        #[arg(long)]
        axis: SweepAxis,
        /// Comma-separated values
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Print independence, domination and acyclic-subgraph numbers of a graph file
    GraphStats {
        graph: PathBuf,
    },
    /// Run oracle checks
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the base seed in the config
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: paths from the config, else the current directory)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`
    #[arg(value_name = "SUITE", conflicts_with = "suite")]
    name: Option<String>,
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// JSON report path
    #[arg(long, default_value = "verify-report.json")]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Failed(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Sweep { run, axis, values } => cmd_sweep(&run, axis, &values),
        Command::GraphStats { graph } => cmd_graph_stats(&graph),
        Command::Verify(args) => cmd_verify(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load(args: &RunArgs) -> Result<Experiment, Failure> {
    let usage = |e: graphbandit::ConfigError| Failure::Usage(format!("{}: {e}", args.config.display()));
    let exp = Experiment::load(&args.config).map_err(usage)?;
    match args.seed {
        Some(seed) => exp.with_seed(seed).map_err(usage),
        None => Ok(exp),
    }
}

fn output_paths(args: &RunArgs, exp: &Experiment, stem: &str) -> (PathBuf, PathBuf) {
    if let Some(dir) = &args.out {
        return (dir.join(format!("{stem}.csv")), dir.join(format!("{stem}.json")));
    }
    let configured = |p: &Option<PathBuf>| p.as_ref().map(|p| exp.base_dir.join(p));
    (
        configured(&exp.config.output.csv).unwrap_or_else(|| PathBuf::from(format!("{stem}.csv"))),
        configured(&exp.config.output.json).unwrap_or_else(|| PathBuf::from(format!("{stem}.json"))),
    )
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let f = File::create(path).map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))?;
    Ok(BufWriter::new(f))
}

fn execute(exp: &Experiment) -> Result<(BatchResult, Option<Vec<f64>>), Failure> {
    let batch = run_batch(exp, exp.config.repetitions).map_err(|e| Failure::Failed(e.to_string()))?;
    let bound = regret_bound_overlay(exp).ok();
    Ok((batch, bound))
}

fn write_outputs(exp: &Experiment, batch: &BatchResult, bound: Option<&[f64]>, csv: &Path, json: &Path) -> Result<(), Failure> {
    let mut w = create(csv)?;
    write_results_csv(&mut w, batch, bound, &exp.digest)?;
    w.flush()?;
    let mut w = create(json)?;
    ResultEnvelope::new(&exp.config, &exp.digest, batch, bound).write(&mut w)?;
    w.flush()?;
    Ok(())
}

fn cmd_run(args: &RunArgs) -> Result<(), Failure> {
    let exp = load(args)?;
    let (batch, bound) = execute(&exp)?;
    let (csv, json) = output_paths(args, &exp, "results");
    write_outputs(&exp, &batch, bound.as_deref(), &csv, &json)?;
    println!("digest {}", exp.digest);
    println!("seed {}", exp.config.seed);
    println!("repetitions {}", batch.repetitions);
    println!("regret {} ± {}", fmt6(batch.mean_regret), fmt6(batch.std_regret));
    if let Some(b) = bound.as_ref().and_then(|b| b.last()) {
        println!("bound {}", fmt6(*b));
    }
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(())
}

fn axis_name(axis: SweepAxis) -> &'static str {
    match axis {
        SweepAxis::Eta => "eta",
        SweepAxis::R => "r",
        SweepAxis::T => "T",
        SweepAxis::K => "K",
    }
}

fn cmd_sweep(args: &RunArgs, axis: SweepAxis, values: &[f64]) -> Result<(), Failure> {
    let base = load(args)?;
    let name = axis_name(axis);
    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        let exp = base
            .with_axis(axis, value)
            .map_err(|e| Failure::Usage(format!("{}: {name}={value}: {e}", args.config.display())))?;
        let (batch, bound) = execute(&exp)?;
        let stem = format!("sweep_{name}_{value}");
        let (csv, json) = match &args.out {
            Some(dir) => (dir.join(format!("{stem}.csv")), dir.join(format!("{stem}.json"))),
            None => (PathBuf::from(format!("{stem}.csv")), PathBuf::from(format!("{stem}.json"))),
        };
        write_outputs(&exp, &batch, bound.as_deref(), &csv, &json)?;
        let row = SweepRow {
            value,
            final_regret_mean: batch.mean_regret,
            final_regret_std: batch.std_regret,
            bound: bound.as_ref().and_then(|b| b.last().copied()),
        };
        println!(
            "{name}={} regret {} ± {} bound {}",
            fmt6(value),
            fmt6(row.final_regret_mean),
            fmt6(row.final_regret_std),
            row.bound.map_or("-".into(), fmt6)
        );
        rows.push(row);
    }
    let summary = match &args.out {
        Some(dir) => dir.join(format!("sweep_{name}.csv")),
        None => PathBuf::from(format!("sweep_{name}.csv")),
    };
    let mut w = create(&summary)?;
    write_sweep_summary(&mut w, &rows, &base.digest, base.config.seed)?;
    w.flush()?;
    println!("digest {}", base.digest);
    println!("wrote {}", summary.display());
    Ok(())
}

fn exact_or(label: &str, value: Option<usize>, cap: usize, k: usize, fallback: String) {
    match value {
        Some(v) => println!("{label}: {v} (exact)"),
        None => println!("{label}: {fallback} (K={k} exceeds exact cap {cap})"),
    }
}

fn cmd_graph_stats(path: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let g = DirectedGraph::parse_literal(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let s = g.stats();
    let k = g.num_nodes();
    println!("K: {k}");
    println!("arcs: {}", g.num_arcs());
    println!("symmetric: {}", s.symmetric);
    exact_or("alpha", s.independence_number, ALPHA_EXACT_CAP, k, "not computed".into());
    exact_or(
        "gamma",
        s.domination_number,
        GAMMA_EXACT_CAP,
        k,
        format!("<= {} (greedy)", s.greedy_dominating_set_size),
    );
    exact_or("mas", s.mas, MAS_EXACT_CAP, k, format!(">= {} (greedy witness)", s.mas_witness_size));
    println!("greedy dominating set size: {}", s.greedy_dominating_set_size);
    println!("indegrees: {:?}", s.indegrees);
    println!("outdegrees: {:?}", s.outdegrees);
    Ok(())
}

fn report_line(r: &OracleReport) -> String {
    let mut line = format!(
        "{} {} instances={} min_slack={} max_slack={}",
        if r.passed() { "PASS" } else { "FAIL" },
        r.check,
        r.instances,
        fmt6(r.min_slack),
        fmt6(r.max_slack),
    );
    if let Some(v) = r.value {
        line.push_str(&format!(" value={}", fmt6(v)));
    }
    line.push_str(&format!(" runtime={:.3}s", r.runtime));
    line
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let name = args.name.as_deref().or(args.suite.as_deref()).unwrap_or("all");
    let suites = Suite::parse_selection(name).map_err(Failure::Usage)?;
    if args.k.is_some_and(|k| k < 2) && suites.contains(&Suite::Fact1) {
        return Err(Failure::Usage("fact1 needs --K of at least 2".into()));
    }
    if args.r.is_some_and(|r| !(0.0..=1.0).contains(&r)) {
        return Err(Failure::Usage("--r must lie in [0, 1]".into()));
    }
    let params = SuiteParams { k: args.k, r: args.r, trials: args.trials, samples: args.samples };
    let mut reports = Vec::new();
    for suite in &suites {
        let rs = run_suite(*suite, params, args.seed).map_err(|e| Failure::Usage(e.to_string()))?;
        for r in &rs {
            println!("{}", report_line(r));
            for v in r.violations.iter().take(5) {
                println!("  {v}");
            }
        }
        reports.extend(rs);
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let doc = json!({
        "seed": args.seed,
        "suites": suites.iter().map(|s| s.name()).collect::<Vec<_>>(),
        "passed": failed == 0,
        "reports": reports,
    });
    let mut w = create(&args.out)?;
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| Failure::Failed(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    println!("{} checks, {} failed; report {}", reports.len(), failed, args.out.display());
    if failed > 0 {
        return Err(Failure::Failed(format!("{failed} oracle checks reported violations")));
    }
    Ok(())
}
