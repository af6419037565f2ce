//! Experiment drivers: the solve pipeline, chromatic search, fixed-color
//! runs, depth sweeps and manifest benchmarks.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{
    bp_color, exact_chromatic, greedy, tabucol, BpConfig, ChromaticOutcome, GreedyOrder, TabuConfig,
};
use crate::error::{Error, Result};
use crate::generate::{derive_seed, rng_from_seed};
use crate::graph::{conflict_count, count_conflicts, ColorAssignment, Graph};
use crate::io::read_graph;
use crate::model::{
    classify_argmax, forward_with, init_attributes, EmbeddingMatrix, ForwardOptions, GdnParams,
    PinSet,
};
use crate::refine::{
    exact_complete, postprocess_with_frozen, preprocess_peel, reinsert, threshold_partial,
    Completion, PartialAssignment, PeelResult, DEFAULT_BUDGET,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Gdn,
    GreedyStatic,
    GreedySorted,
    GreedyDynamic,
    Tabucol,
    Bp,
    Exact,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Gdn,
        Method::GreedyStatic,
        Method::GreedySorted,
        Method::GreedyDynamic,
        Method::Tabucol,
        Method::Bp,
        Method::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Gdn => "gdn",
            Method::GreedyStatic => "greedy-static",
            Method::GreedySorted => "greedy-sorted",
            Method::GreedyDynamic => "greedy-dynamic",
            Method::Tabucol => "tabucol",
            Method::Bp => "bp",
            Method::Exact => "exact",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub k: usize,
    pub depth: usize,
    pub restarts: usize,
    pub seed: u64,
    pub pre: bool,
    pub post: bool,
    pub hybrid: bool,
    /// Trained parameters; `None` means default init at `depth`.
    pub params: Option<GdnParams<f64>>,
    pub method: Method,
    pub pins: PinSet,
    /// Re-impose pinned rows after every layer instead of only at input.
    pub pin_clamp: bool,
    /// Expansion budget for each exact search.
    pub budget: u64,
}

impl SolveConfig {
    pub fn new(k: usize) -> Self {
        SolveConfig {
            k,
            depth: 20,
            restarts: 10,
            seed: 0,
            pre: false,
            post: false,
            hybrid: false,
            params: None,
            method: Method::Gdn,
            pins: PinSet::new(),
            pin_clamp: false,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("restarts must be at least 1".into()));
        }
        if self.depth == 0 && self.params.is_none() {
            return Err(Error::InvalidArgument("depth must be at least 1".into()));
        }
        self.pins.validate(n, self.k)
    }

    fn resolved_params(&self) -> Result<GdnParams<f64>> {
        match &self.params {
            Some(p) => Ok(p.clone()),
            None => GdnParams::default_init(self.depth),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub method: Method,
    pub conflicts: usize,
    pub solved_ratio: f64,
    pub colors_used: usize,
    pub restarts_used: usize,
    pub wall_ms: f64,
    pub seed: u64,
    pub params_fingerprint: Option<String>,
    pub depth: Option<usize>,
    pub peeled: usize,
    /// Last exact-search outcome when one ran: `colored`, `unsat` or `budget`.
    pub exact: Option<String>,
    /// Fraction of (node, color) cells fixed by the threshold partial.
    pub reduction_ratio: Option<f64>,
    pub budget_exceeded: bool,
    pub pins_honored: bool,
}

/// A solve on the working graph before reinsertion.
struct Inner {
    assignment: ColorAssignment,
    restarts_used: usize,
    embedding: Option<EmbeddingMatrix<f64>>,
}

fn pins_frozen(pins: &PinSet, colors: &[usize], n: usize) -> Vec<bool> {
    let mut frozen = vec![false; n];
    for (v, c) in pins.iter() {
        frozen[v] = colors[v] == c;
    }
    frozen
}

fn maybe_post(g: &Graph, a: ColorAssignment, cfg: &SolveConfig) -> ColorAssignment {
    if !cfg.post {
        return a;
    }
    let frozen = pins_frozen(&cfg.pins, a.colors(), g.n());
    postprocess_with_frozen(g, &a, &frozen)
}

fn keep_best<T>(best: &mut Option<(usize, T)>, conflicts: usize, value: T) {
    if best.as_ref().is_none_or(|(c, _)| conflicts < *c) {
        *best = Some((conflicts, value));
    }
}

fn run_gdn(g: &Graph, cfg: &SolveConfig, params: &GdnParams<f64>) -> Result<Inner> {
    let opts = ForwardOptions {
        clamp: cfg.pin_clamp.then(|| cfg.pins.clone()),
    };
    let mut best: Option<(usize, (ColorAssignment, EmbeddingMatrix<f64>))> = None;
    let mut used = 0;
    for r in 0..cfg.restarts {
        used = r + 1;
        let x = init_attributes::<f64>(g, cfg.k, &cfg.pins, derive_seed(cfg.seed, r as u64, 0))?;
        let h = forward_with(&x, g, params, &opts)?.into_output();
        let a = maybe_post(g, classify_argmax(&h), cfg);
        let c = conflict_count(g, a.colors());
        keep_best(&mut best, c, (a, h));
        if c == 0 {
            break;
        }
    }
    let (_, (assignment, h)) = best.expect("at least one restart");
    Ok(Inner {
        assignment,
        restarts_used: used,
        embedding: Some(h),
    })
}

fn random_assignment(n: usize, k: usize, seed: u64) -> ColorAssignment {
    let mut rng = rng_from_seed(seed);
    let colors = (0..n).map(|_| rng.gen_range(0..k)).collect();
    ColorAssignment::new(colors, k).expect("colors drawn below k")
}

fn with_pins(a: ColorAssignment, pins: &PinSet) -> ColorAssignment {
    let mut a = a;
    for (v, c) in pins.iter() {
        a.set(v, c);
    }
    a
}

fn run_baseline(g: &Graph, cfg: &SolveConfig) -> Result<(Inner, Option<Completion>)> {
    let k = cfg.k;
    let single = |a: ColorAssignment| Inner {
        assignment: a,
        restarts_used: 1,
        embedding: None,
    };
    let order = match cfg.method {
        Method::GreedyStatic => Some(GreedyOrder::Static),
        Method::GreedySorted => Some(GreedyOrder::Sorted),
        Method::GreedyDynamic => Some(GreedyOrder::Dynamic),
        _ => None,
    };
    if let Some(order) = order {
        let a = maybe_post(g, greedy(g, order, Some(k)), cfg);
        return Ok((single(a), None));
    }
    match cfg.method {
        Method::Tabucol => {
            let mut best = None;
            let mut used = 0;
            for r in 0..cfg.restarts {
                used = r + 1;
                let seed = derive_seed(cfg.seed, r as u64, 1);
                let init = with_pins(random_assignment(g.n(), k, seed), &cfg.pins);
                let out = tabucol(g, &init, &TabuConfig::for_graph(g, seed));
                let a = maybe_post(g, out.assignment, cfg);
                let c = conflict_count(g, a.colors());
                keep_best(&mut best, c, a);
                if c == 0 {
                    break;
                }
            }
            let (_, a) = best.expect("at least one restart");
            Ok((
                Inner {
                    assignment: a,
                    restarts_used: used,
                    embedding: None,
                },
                None,
            ))
        }
        Method::Bp => {
            let mut best = None;
            let mut used = 0;
            for r in 0..cfg.restarts {
                used = r + 1;
                let bp = BpConfig {
                    seed: derive_seed(cfg.seed, r as u64, 2),
                    ..BpConfig::default()
                };
                let a = maybe_post(g, bp_color(g, k, &bp)?, cfg);
                let c = conflict_count(g, a.colors());
                keep_best(&mut best, c, a);
                if c == 0 {
                    break;
                }
            }
            let (_, a) = best.expect("at least one restart");
            Ok((
                Inner {
                    assignment: a,
                    restarts_used: used,
                    embedding: None,
                },
                None,
            ))
        }
        Method::Exact => {
            let pa = hard_pins(&cfg.pins);
            let outcome = exact_complete(g, k, &pa, cfg.budget);
            let a = match outcome.coloring() {
                Some(a) => a.clone(),
                None => maybe_post(g, with_pins(greedy(g, GreedyOrder::Dynamic, Some(k)), &cfg.pins), cfg),
            };
            Ok((single(a), Some(outcome)))
        }
        _ => unreachable!("gdn handled by run_gdn"),
    }
}

fn hard_pins(pins: &PinSet) -> PartialAssignment {
    let mut pa = PartialAssignment::default();
    for (v, c) in pins.iter() {
        pa.pinned.insert(v, c);
    }
    pa
}

/// Overlays the user's pins on a threshold partial, dropping any threshold
/// decision on those nodes.
fn merge_pins(mut pa: PartialAssignment, pins: &PinSet) -> PartialAssignment {
    for (v, c) in pins.iter() {
        pa.pinned.insert(v, c);
        pa.forbidden.remove(&v);
    }
    pa
}

/// Exact completion cascade: the full threshold partial, then only those
/// pins the repaired heuristic assignment agrees with on conflict-free nodes,
/// then the user's pins alone.
fn hybrid(
    g: &Graph,
    cfg: &SolveConfig,
    inner: &Inner,
    reduction: &mut Option<f64>,
) -> (Option<ColorAssignment>, Completion) {
    let mut stages = Vec::new();
    if let Some(h) = &inner.embedding {
        let partial = threshold_partial(&h.softmax_rows());
        *reduction = Some(partial.reduction_ratio(g.n(), cfg.k));
        let colors = inner.assignment.colors();
        let mut trusted = PartialAssignment::default();
        for (&v, &c) in &partial.pinned {
            let clean = g.neighbors(v).iter().all(|&u| colors[u] != colors[v]);
            if clean && colors[v] == c {
                trusted.pinned.insert(v, c);
            }
        }
        stages.push(merge_pins(partial, &cfg.pins));
        stages.push(merge_pins(trusted, &cfg.pins));
    }
    stages.push(hard_pins(&cfg.pins));
    stages.dedup();
    let mut last = Completion::Unsat;
    for pa in stages {
        if pa.validate(g.n(), cfg.k).is_err() {
            continue;
        }
        last = exact_complete(g, cfg.k, &pa, cfg.budget);
        if let Completion::Colored(a) = &last {
            return (Some(a.clone()), last);
        }
    }
    (None, last)
}

fn outcome_name(c: &Completion) -> String {
    match c {
        Completion::Colored(_) => "colored",
        Completion::Unsat => "unsat",
        Completion::BudgetExceeded => "budget",
    }
    .to_string()
}

/// Full pipeline: optional peel, restarts of the chosen method with optional
/// local search, optional exact completion, reinsertion, report.
pub fn solve(g: &Graph, cfg: &SolveConfig) -> Result<(ColorAssignment, SolveReport)> {
    cfg.validate(g.n())?;
    let start = Instant::now();
    let params = match cfg.method {
        Method::Gdn => Some(cfg.resolved_params()?),
        _ => None,
    };
    // peeling renumbers nodes, so it is skipped when pins are given
    let peel: Option<PeelResult> = (cfg.pre && cfg.pins.is_empty()).then(|| preprocess_peel(g, cfg.k));
    let work = peel.as_ref().map_or(g, |p| &p.reduced);

    let mut exact_outcome = None;
    let mut reduction = None;
    let mut inner = if work.n() == 0 || cfg.k == 1 {
        Inner {
            assignment: with_pins(ColorAssignment::uniform(work.n(), cfg.k), &cfg.pins),
            restarts_used: 1,
            embedding: None,
        }
    } else if let Some(p) = &params {
        run_gdn(work, cfg, p)?
    } else {
        let (inner, outcome) = run_baseline(work, cfg)?;
        exact_outcome = outcome;
        inner
    };

    if cfg.hybrid && conflict_count(work, inner.assignment.colors()) > 0 {
        let (found, outcome) = hybrid(work, cfg, &inner, &mut reduction);
        if let Some(a) = found {
            inner.assignment = a;
        }
        exact_outcome = Some(outcome);
    }

    let mut assignment = match &peel {
        Some(p) => reinsert(p, &inner.assignment)?,
        None => inner.assignment,
    };
    for v in 0..g.n() {
        if g.degree(v) == 0 && cfg.pins.get(v).is_none() {
            assignment.set(v, 0);
        }
    }
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let report = count_conflicts(g, &assignment)?;
    let budget_exceeded = matches!(exact_outcome, Some(Completion::BudgetExceeded)) && report.conflicts > 0;
    let pins_honored = cfg.pins.iter().all(|(v, c)| assignment.get(v) == c);
    let solve_report = SolveReport {
        instance: String::from("graph"),
        n: g.n(),
        m: g.m(),
        k: cfg.k,
        method: cfg.method,
        conflicts: report.conflicts,
        solved_ratio: report.solved_ratio,
        colors_used: assignment.colors_used(),
        restarts_used: inner.restarts_used,
        wall_ms,
        seed: cfg.seed,
        params_fingerprint: params.as_ref().map(|p| p.fingerprint()),
        depth: params.as_ref().map(|p| p.depth()),
        peeled: peel.as_ref().map_or(0, |p| p.peeled()),
        exact: exact_outcome.as_ref().map(outcome_name),
        reduction_ratio: reduction,
        budget_exceeded,
        pins_honored,
    };
    Ok((assignment, solve_report))
}

/// Smallest `k >= k_start` at which [`solve`] reaches zero conflicts, capped
/// at `max_degree + 1` where greedy coloring always succeeds.
pub fn chromatic_search(
    g: &Graph,
    cfg: &SolveConfig,
    k_start: usize,
) -> Result<(usize, ColorAssignment, SolveReport)> {
    let pin_floor = cfg.pins.iter().map(|(_, c)| c + 1).max().unwrap_or(1);
    let cap = g.max_degree() + 1;
    let mut k = k_start.max(1).max(pin_floor);
    loop {
        let mut round = cfg.clone();
        round.k = k;
        let (a, report) = solve(g, &round)?;
        if report.conflicts == 0 {
            return Ok((k, a, report));
        }
        if k >= cap {
            let start = Instant::now();
            let a = greedy(g, GreedyOrder::Dynamic, Some(k));
            let mut report = report;
            let check = count_conflicts(g, &a)?;
            report.conflicts = check.conflicts;
            report.solved_ratio = check.solved_ratio;
            report.colors_used = a.colors_used();
            report.wall_ms += start.elapsed().as_secs_f64() * 1e3;
            report.method = Method::GreedyDynamic;
            report.pins_honored = cfg.pins.iter().all(|(v, c)| a.get(v) == c);
            return Ok((k, a, report));
        }
        k += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedColorOutcome {
    pub fixed: usize,
    pub total: usize,
    pub ratio: f64,
}

/// Pins a random (node, color) in every instance and counts the instances
/// whose final coloring is proper and keeps the pin.
pub fn fixed_color_experiment(
    corpus: &[(Graph, usize)],
    cfg: &SolveConfig,
    seed: u64,
) -> Result<FixedColorOutcome> {
    if corpus.is_empty() {
        return Err(Error::InvalidArgument("fixed-color corpus is empty".into()));
    }
    let mut fixed = 0;
    for (i, (g, k)) in corpus.iter().enumerate() {
        if g.n() == 0 {
            return Err(Error::InvalidArgument(format!("instance {i} has no nodes")));
        }
        let mut rng = rng_from_seed(derive_seed(seed, i as u64, 3));
        let node = rng.gen_range(0..g.n());
        let color = rng.gen_range(0..*k);
        let mut run = cfg.clone();
        run.k = *k;
        run.pins = [(node, color)].into_iter().collect();
        let (a, report) = solve(g, &run)?;
        if report.conflicts == 0 && a.get(node) == color {
            fixed += 1;
        }
    }
    Ok(FixedColorOutcome {
        fixed,
        total: corpus.len(),
        ratio: fixed as f64 / corpus.len() as f64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthRow {
    pub depth: usize,
    pub mean_solved_ratio: f64,
}

/// Mean solved ratio per depth with default-init parameters. Instance `i`
/// gets the same seed at every depth.
pub fn depth_sweep(corpus: &[(Graph, usize)], depths: &[usize], cfg: &SolveConfig) -> Result<Vec<DepthRow>> {
    if corpus.is_empty() || depths.is_empty() {
        return Err(Error::InvalidArgument("depth sweep needs instances and depths".into()));
    }
    depths
        .iter()
        .map(|&depth| {
            let ratios = corpus
                .par_iter()
                .enumerate()
                .map(|(i, (g, k))| {
                    let mut run = cfg.clone();
                    run.k = *k;
                    run.depth = depth;
                    run.params = None;
                    run.method = Method::Gdn;
                    run.seed = derive_seed(cfg.seed, i as u64, 4);
                    solve(g, &run).map(|(_, r)| r.solved_ratio)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(DepthRow {
                depth,
                mean_solved_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    /// Palette size; `None` asks for the exact chromatic number, falling
    /// back to the greedy count when the budget runs out.
    pub k: Option<usize>,
    pub name: String,
}

/// Manifest lines are `path [k] [name]`; `#` starts a comment and relative
/// paths resolve against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let file = fields.next().expect("non-empty line");
        let path = base.join(file);
        let k = match fields.next() {
            Some(tok) => Some(tok.parse::<usize>().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("palette size {tok:?} is not a non-negative integer"),
            })?),
            None => None,
        };
        let name = fields.next().map(str::to_string).unwrap_or_else(|| {
            Path::new(file)
                .file_stem()
                .map_or_else(|| file.to_string(), |s| s.to_string_lossy().into_owned())
        });
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: i + 1,
                msg: "expected `path [k] [name]`".into(),
            });
        }
        out.push(ManifestEntry { path, k, name });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub method: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub conflicts: Option<usize>,
    pub solved_ratio: Option<f64>,
    pub colors_used: Option<usize>,
    pub restarts_used: Option<usize>,
    pub wall_ms: Option<f64>,
    pub seed: u64,
    pub chi: Option<usize>,
    pub status: String,
}

impl BenchRow {
    fn failed(instance: &str, method: Method, seed: u64, msg: String) -> Self {
        BenchRow {
            instance: instance.to_string(),
            method: method.to_string(),
            n: None,
            m: None,
            k: None,
            conflicts: None,
            solved_ratio: None,
            colors_used: None,
            restarts_used: None,
            wall_ms: None,
            seed,
            chi: None,
            status: format!("failed: {msg}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub solve: SolveConfig,
    /// Expansion budget for the chromatic-number column.
    pub chi_budget: u64,
    /// Worker count; `None` lets the pool decide.
    pub threads: Option<usize>,
}

/// Worker cap from `GDN_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("GDN_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
}

/// Caps the global rayon pool at `GDN_THREADS` workers. Has no effect once
/// the pool already exists.
pub fn init_thread_pool() {
    if let Some(t) = threads_from_env() {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}

fn bench_instance(entry: &ManifestEntry, methods: &[Method], cfg: &BenchConfig) -> Vec<BenchRow> {
    let seed = cfg.solve.seed;
    let g = match read_graph(&entry.path) {
        Ok(g) => g,
        Err(e) => {
            return methods
                .iter()
                .map(|&m| BenchRow::failed(&entry.name, m, seed, e.to_string()))
                .collect()
        }
    };
    let chi_outcome = exact_chromatic(&g, cfg.chi_budget);
    let chi = chi_outcome.chi();
    let k = entry.k.unwrap_or_else(|| match &chi_outcome {
        ChromaticOutcome::Exact { chi, .. } => (*chi).max(1),
        ChromaticOutcome::BudgetExceeded { upper, .. } => *upper,
    });
    methods
        .iter()
        .map(|&method| {
            let mut run = cfg.solve.clone();
            run.k = k;
            run.method = method;
            match solve(&g, &run) {
                Ok((_, r)) => BenchRow {
                    instance: entry.name.clone(),
                    method: method.to_string(),
                    n: Some(r.n),
                    m: Some(r.m),
                    k: Some(k),
                    conflicts: Some(r.conflicts),
                    solved_ratio: Some(r.solved_ratio),
                    colors_used: Some(r.colors_used),
                    restarts_used: Some(r.restarts_used),
                    wall_ms: Some(r.wall_ms),
                    seed,
                    chi,
                    status: if r.budget_exceeded { "budget" } else { "ok" }.to_string(),
                },
                Err(e) => BenchRow::failed(&entry.name, method, seed, e.to_string()),
            }
        })
        .collect()
}

/// One row per (instance, method) in manifest order. Unreadable instances
/// and failed solves yield rows marked `failed`.
pub fn bench(entries: &[ManifestEntry], methods: &[Method], cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let rows: Vec<Vec<BenchRow>> = pool.install(|| {
        entries
            .par_iter()
            .map(|e| bench_instance(e, methods, cfg))
            .collect()
    });
    Ok(rows.into_iter().flatten().collect())
}

/// CSV with a header line even when `rows` is empty.
pub fn bench_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record([
        "instance",
        "method",
        "n",
        "m",
        "k",
        "conflicts",
        "solved_ratio",
        "colors_used",
        "restarts_used",
        "wall_ms",
        "seed",
        "chi",
        "status",
    ])
    .map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invariant(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Invariant(format!("csv: {e}"))
}

pub fn bench_json(rows: &[BenchRow]) -> Result<String> {
    Ok(serde_json::to_string_pretty(rows)?)
}
