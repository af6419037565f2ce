use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gdn_core::baselines::{exact_chromatic, greedy_clique};
use gdn_core::generate::{gnp, myciel, queen, random_regular};
use gdn_core::harness::{
    bench, bench_csv, bench_json, chromatic_search, init_thread_pool, parse_manifest, solve,
    threads_from_env, BenchConfig, Method, SolveConfig, SolveReport,
};
use gdn_core::io::{read_graph, write_assignment, write_dimacs, write_edge_list};
use gdn_core::model::{GdnParams, PinSet};
use gdn_core::refine::DEFAULT_BUDGET;
use gdn_core::train::{train, AdamConfig, TrainConfig, TrainReport};
use gdn_core::{ColorAssignment, Error, Graph};

#[derive(Parser)]
#[command(name = "gdn", version, about = "Graph coloring with a color-equivariant linear GNN")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Color a graph with a fixed palette.
    Solve(SolveArgs),
    /// Find the smallest palette the solver colors without conflicts.
    Chromatic(ChromaticArgs),
    /// Fit layer scalars on a directory of graphs.
    Train(TrainArgs),
    /// Run several methods over a manifest of instances.
    Bench(BenchArgs),
    /// Write a generated graph.
    Gen(GenArgs),
}

#[derive(Args, Clone)]
struct PipelineArgs {
    #[arg(long, default_value_t = 20)]
    depth: usize,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Peel nodes of degree below k first.
    #[arg(long)]
    pre: bool,
    /// Local-search repair of each restart.
    #[arg(long)]
    post: bool,
    /// Exact completion when conflicts remain.
    #[arg(long)]
    hybrid: bool,
    /// Trained parameters (JSON from `gdn train`).
    #[arg(long, value_name = "FILE")]
    params: Option<PathBuf>,
    #[arg(long, default_value = "gdn", value_parser = parse_method)]
    method: Method,
    /// Pre-color a node; repeatable.
    #[arg(long = "pin", value_name = "NODE:COLOR", value_parser = parse_pin)]
    pins: Vec<(usize, usize)>,
    /// Re-impose pinned rows after every layer.
    #[arg(long)]
    pin_clamp: bool,
    /// Expansion budget for exact search.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

impl PipelineArgs {
    fn config(&self, k: usize) -> anyhow::Result<SolveConfig> {
        let params = match &self.params {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                Some(GdnParams::from_json(&text)?)
            }
            None => None,
        };
        Ok(SolveConfig {
            k,
            depth: self.depth,
            restarts: self.restarts,
            seed: self.seed,
            pre: self.pre,
            post: self.post,
            hybrid: self.hybrid,
            params,
            method: self.method,
            pins: self.pins.iter().copied().collect::<PinSet>(),
            pin_clamp: self.pin_clamp,
            budget: self.budget,
        })
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Assignment file, one color per line.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ChromaticArgs {
    #[arg(long)]
    graph: PathBuf,
    /// First palette tried; defaults to the size of a greedily found clique.
    #[arg(long)]
    k_start: Option<usize>,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// Directory of graph files (.col, .dimacs, .txt, .edges, .el).
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = 10)]
    epochs: usize,
    #[arg(long, default_value_t = 20)]
    depth: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    margin: f64,
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    /// Palette for every instance; defaults to each graph's chromatic number
    /// (greedy count if the exact search runs out of budget).
    #[arg(long)]
    k: Option<usize>,
    /// Starting parameters instead of the default init.
    #[arg(long, value_name = "FILE")]
    init: Option<PathBuf>,
    #[arg(long, default_value_t = 1_000_000)]
    chi_budget: u64,
    /// Trained parameters, loadable by `--params`.
    #[arg(long, default_value = "params.json")]
    out: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Lines of `path [k] [name]`, paths relative to the manifest.
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "gdn,greedy-dynamic,tabucol", value_parser = parse_method)]
    methods: Vec<Method>,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long, default_value_t = 1_000_000)]
    chi_budget: u64,
    /// `.json` writes JSON, anything else CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Regular,
    Gnp,
    Queen,
    Myciel,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Node count; board rows for `queen`; order for `myciel`.
    #[arg(long)]
    n: usize,
    /// Degree for `regular`; board columns for `queen`.
    #[arg(long)]
    d: Option<usize>,
    /// Edge probability for `gnp`.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `.col`/`.dimacs` writes DIMACS, anything else an edge list.
    #[arg(long)]
    out: PathBuf,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

fn parse_pin(s: &str) -> Result<(usize, usize), String> {
    let (node, color) = s.split_once(':').ok_or("expected NODE:COLOR")?;
    let node = node.trim().parse().map_err(|_| format!("bad node in {s:?}"))?;
    let color = color.trim().parse().map_err(|_| format!("bad color in {s:?}"))?;
    Ok((node, color))
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn load(path: &Path) -> anyhow::Result<Graph> {
    read_graph(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(
    a: &ColorAssignment,
    report: &SolveReport,
    out: Option<&Path>,
    report_path: Option<&Path>,
    budget: u64,
) -> anyhow::Result<()> {
    if let Some(path) = out {
        fs::write(path, write_assignment(a)).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = report_path {
        fs::write(path, serde_json::to_string_pretty(report)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    println!(
        "{} k={} method={} conflicts={} solved_ratio={:.6} colors_used={} wall_ms={:.1}",
        report.instance,
        report.k,
        report.method,
        report.conflicts,
        report.solved_ratio,
        report.colors_used,
        report.wall_ms
    );
    if report.budget_exceeded {
        return Err(Error::BudgetExceeded { budget }.into());
    }
    Ok(())
}

fn run_solve(args: SolveArgs) -> anyhow::Result<()> {
    let g = load(&args.graph)?;
    let cfg = args.pipeline.config(args.k)?;
    let (a, mut report) = solve(&g, &cfg)?;
    report.instance = instance_name(&args.graph);
    emit(&a, &report, args.out.as_deref(), args.report.as_deref(), cfg.budget)
}

fn run_chromatic(args: ChromaticArgs) -> anyhow::Result<()> {
    let g = load(&args.graph)?;
    let k_start = args.k_start.unwrap_or_else(|| greedy_clique(&g).len().max(1));
    let cfg = args.pipeline.config(k_start)?;
    let (k, a, mut report) = chromatic_search(&g, &cfg, k_start)?;
    report.instance = instance_name(&args.graph);
    println!("k_min={k}");
    emit(&a, &report, args.out.as_deref(), args.report.as_deref(), cfg.budget)
}

fn corpus_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && matches!(
                    p.extension().and_then(|e| e.to_str()),
                    Some("col" | "dimacs" | "txt" | "edges" | "el")
                )
        })
        .collect();
    files.sort();
    Ok(files)
}

fn run_train(args: TrainArgs) -> anyhow::Result<()> {
    let files = corpus_files(&args.corpus)?;
    if files.is_empty() {
        bail!("no graph files in {}", args.corpus.display());
    }
    let mut corpus = Vec::with_capacity(files.len());
    for path in &files {
        let g = load(path)?;
        let k = match args.k {
            Some(k) => k,
            None => match exact_chromatic(&g, args.chi_budget) {
                gdn_core::baselines::ChromaticOutcome::Exact { chi, .. } => chi,
                gdn_core::baselines::ChromaticOutcome::BudgetExceeded { upper, .. } => upper,
            },
        }
        .max(2);
        corpus.push((g, k));
    }
    let params0 = match &args.init {
        Some(path) => GdnParams::from_json(
            &fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        )?,
        None => GdnParams::default_init(args.depth)?,
    };
    let cfg = TrainConfig {
        epochs: args.epochs,
        seed: args.seed,
        margin: args.margin,
        adam: AdamConfig {
            lr: args.lr,
            ..AdamConfig::default()
        },
    };
    let outcome = train(&corpus, params0, &cfg)?;
    fs::write(&args.out, outcome.params.to_json() + "\n")
        .with_context(|| format!("writing {}", args.out.display()))?;
    let desc = format!("{} ({} graphs)", args.corpus.display(), corpus.len());
    let report = TrainReport::new(desc, corpus.len(), &cfg, &outcome);
    if let Some(path) = &args.report {
        fs::write(path, serde_json::to_string_pretty(&report)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    for (epoch, loss) in outcome.epoch_losses.iter().enumerate() {
        println!("epoch {epoch} mean_loss={loss:.6}");
    }
    println!("params {} fingerprint={}", args.out.display(), outcome.params.fingerprint());
    Ok(())
}

fn run_bench(args: BenchArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(&args.manifest)
        .with_context(|| format!("reading {}", args.manifest.display()))?;
    let base = args.manifest.parent().unwrap_or(Path::new("."));
    let entries = parse_manifest(&text, base)?;
    let cfg = BenchConfig {
        solve: args.pipeline.config(1)?,
        chi_budget: args.chi_budget,
        threads: threads_from_env(),
    };
    let rows = bench(&entries, &args.methods, &cfg)?;
    let body = if args.out.extension().is_some_and(|e| e == "json") {
        bench_json(&rows)? + "\n"
    } else {
        bench_csv(&rows)?
    };
    fs::write(&args.out, body).with_context(|| format!("writing {}", args.out.display()))?;
    let failed = rows.iter().filter(|r| r.status.starts_with("failed")).count();
    println!("{} rows, {failed} failed -> {}", rows.len(), args.out.display());
    Ok(())
}

fn run_gen(args: GenArgs) -> anyhow::Result<()> {
    let g = match args.model {
        Model::Regular => {
            let d = args.d.context("--d is required for --model regular")?;
            random_regular(args.n, d, args.seed)?
        }
        Model::Gnp => {
            let p = args.p.context("--p is required for --model gnp")?;
            gnp(args.n, p, args.seed)?
        }
        Model::Queen => queen(args.n, args.d.unwrap_or(args.n)),
        Model::Myciel => {
            if args.n < 2 {
                bail!("myciel order starts at 2");
            }
            myciel(args.n)
        }
    };
    let text = match args.out.extension().and_then(|e| e.to_str()) {
        Some("col" | "dimacs") => write_dimacs(&g),
        _ => write_edge_list(&g),
    };
    fs::write(&args.out, text).with_context(|| format!("writing {}", args.out.display()))?;
    println!("n={} m={} -> {}", g.n(), g.m(), args.out.display());
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Parse { .. } | Error::InvalidGraph(_) | Error::Json(_)) => 2,
        Some(Error::BudgetExceeded { .. }) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_thread_pool();
    let result = match cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Chromatic(a) => run_chromatic(a),
        Command::Train(a) => run_train(a),
        Command::Bench(a) => run_bench(a),
        Command::Gen(a) => run_gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code(&err);
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}
