//! Command-line front door: summarization pipelines, subset selection,
//! active-learning simulation, evaluation measures, the memoization
//! benchmark, and kernel precomputation.
//!
//! Exit codes: 0 success, 2 usage error (bad flags or an incompatible
//! model/algorithm pair, detected before any I/O), 1 runtime error. All
//! errors print as one line: `ERROR <Code>: <message>`.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use sumsel::error::Error;
use sumsel::functions::{ModelKind, Psi};
use sumsel::ingest;
use sumsel::metrics::{self, AnnotationKind};
use sumsel::optimize::{check_compatibility, Constraint, SolverConfig};
use sumsel::pipelines::{
    self, canonical_json, dal_simulate, AuxInputs, DalConfig, DalStrategy, ModelConfig,
    PipelineRequest, Provenance, SelectionManifest,
};
use sumsel::similarity::{DistanceMetric, SimilarityMetric};

#[derive(Parser)]
#[command(name = "sumsel", version, about = "Submodular data selection and summarization")]
struct Cli {
    /// Worker threads for kernel construction and gain scans.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extractive summarization over item features or a PPM frame directory.
    Summarize(SummarizeArgs),
    /// Query-driven snippet summarization.
    Query(QueryArgs),
    /// Entity summarization over pre-cropped entity features.
    Entity(SummarizeArgs),
    /// Training-data subset selection.
    Subset(SubsetArgs),
    /// Diversified active-learning simulation.
    Dal(DalArgs),
    /// Evaluation measures over a manifest and annotations.
    Eval(EvalArgs),
    /// Memoized-vs-scratch timing benchmark.
    Bench(BenchArgs),
    /// Precompute a kernel or distance matrix to the binary feature format.
    Kernel(KernelArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Model name (snake_case), e.g. facility_location.
    #[arg(long)]
    model: String,
    /// Saturation fraction for saturated_coverage.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Graph-cut trade-off; >= 2 keeps the model monotone.
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
    /// Concave transform for feature_based: sqrt | log1p | inverse.
    #[arg(long, default_value = "sqrt")]
    psi: String,
    /// Relevance weight for max_marginal_relevance.
    #[arg(long, default_value_t = 0.7)]
    theta: f64,
    /// Similarity/distance metric: cosine | gaussian | euclidean | one_minus_cosine.
    #[arg(long)]
    metric: Option<String>,
    /// Bandwidth for the gaussian metric.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Sparsify the kernel to this many nearest neighbors per row.
    #[arg(long)]
    knn: Option<usize>,
    /// Relevance scores CSV (one value per line), for modular and
    /// max_marginal_relevance.
    #[arg(long)]
    scores: Option<PathBuf>,
    /// Concept sets JSON-lines, for set_cover.
    #[arg(long)]
    concepts: Option<PathBuf>,
    /// Concept probability CSV, for probabilistic_set_cover.
    #[arg(long)]
    probs: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Algorithm: greedy | lazy | budgeted | cover | stream.
    #[arg(long, default_value = "lazy")]
    algo: String,
    /// Summary size for greedy/lazy.
    #[arg(long)]
    k: Option<usize>,
    /// Knapsack budget for budgeted.
    #[arg(long)]
    budget: Option<f64>,
    /// Coverage fraction for cover.
    #[arg(long)]
    rho: Option<f64>,
    /// Gain threshold for stream.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SummarizeArgs {
    /// Feature matrix (.csv, or VDSF binary by extension .vdsf/.bin).
    #[arg(long)]
    features: Option<PathBuf>,
    /// Directory of .ppm frames; hue/saturation histograms become features.
    #[arg(long)]
    frames: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Manifest output path.
    #[arg(long)]
    out: PathBuf,
    /// Write a PPM montage of the selected frames (requires --frames).
    #[arg(long)]
    montage: Option<PathBuf>,
    /// Montage grid columns.
    #[arg(long, default_value_t = 3)]
    cols: usize,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    base: SummarizeArgs,
    /// Snippet index JSON-lines.
    #[arg(long)]
    snippets: PathBuf,
    /// Frame tag table JSON-lines.
    #[arg(long)]
    tags: PathBuf,
    /// Tag to retain snippets by.
    #[arg(long)]
    query: String,
    /// Minimum tag confidence.
    #[arg(long, default_value_t = 0.5)]
    min_conf: f64,
}

#[derive(Args)]
struct SubsetArgs {
    #[arg(long)]
    features: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
    /// Subset size as a fraction of the ground set.
    #[arg(long)]
    fraction: f64,
    /// Optional integer class labels (one per line) for per-class counts.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// greedy | lazy.
    #[arg(long, default_value = "lazy")]
    algo: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DalArgs {
    #[arg(long)]
    features: PathBuf,
    /// Integer class labels, one per line.
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    rounds: usize,
    #[arg(long)]
    batch: usize,
    /// random | uncertainty | submodular.
    #[arg(long)]
    strategy: String,
    /// Model for the submodular strategy.
    #[arg(long, default_value = "disparity_min")]
    model: String,
    #[arg(long, default_value_t = 0.25)]
    holdout: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output base path; writes <base>.csv and <base>.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Manifest produced by a summarization run.
    #[arg(long)]
    manifest: PathBuf,
    /// JSON-lines segment annotations.
    #[arg(long)]
    annotations: PathBuf,
    /// Concept sets for the coverage measure.
    #[arg(long)]
    concepts: Option<PathBuf>,
    /// Snippet index to expand snippet selections to frame sets for F1.
    #[arg(long)]
    snippets: Option<PathBuf>,
    /// Frame universe size for F1 (inferred when omitted).
    #[arg(long)]
    total_frames: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated model names, or `all` for the reference eight.
    #[arg(long, default_value = "all")]
    models: String,
    /// Ground-set size. The scratch baseline for the dispersion models
    /// costs O(n k^2) per round, so large n with high fractions is slow.
    #[arg(long, default_value_t = 500)]
    n: usize,
    /// Comma-separated budget fractions.
    #[arg(long, default_value = "0.05,0.15,0.30")]
    fractions: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wall-clock repetitions per cell (median reported).
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON records instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long)]
    features: PathBuf,
    /// cosine | gaussian | euclidean | one_minus_cosine.
    #[arg(long, default_value = "cosine")]
    metric: String,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Sparsify a similarity kernel before saving (densified on disk).
    #[arg(long)]
    knn: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

/// Errors split by exit code: usage problems are detectable before any I/O.
enum CliError {
    Usage(Error),
    Runtime(Error),
}

impl CliError {
    fn report_and_code(&self) -> i32 {
        let (err, code) = match self {
            CliError::Usage(e) => (e, 2),
            CliError::Runtime(e) => (e, 1),
        };
        let message: String = err.to_string().split_whitespace().collect::<Vec<_>>().join(" ");
        eprintln!("ERROR {}: {}", err.code(), message);
        code
    }
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e)
}

fn runtime(e: Error) -> CliError {
    CliError::Runtime(e)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("bad arguments").to_string();
            eprintln!("ERROR Usage: {first}");
            std::process::exit(2);
        }
    };
    let code = match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => e.report_and_code(),
    };
    std::process::exit(code);
}

#[allow(clippy::needless_return)]
fn dispatch(cli: Cli) -> Result<(), CliError> {
    if cli.threads == 0 {
        return Err(usage(Error::InvalidParam("--threads must be >= 1".into())));
    }
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build()
            .map_err(|e| runtime(Error::InvalidParam(format!("thread pool: {e}"))))?;
        let threads = cli.threads;
        return pool.install(|| run_command(cli.command, threads));
    }
    #[cfg(not(feature = "parallel"))]
    {
        if cli.threads > 1 {
            eprintln!("note: built without the `parallel` feature; running single-threaded");
        }
        run_command(cli.command, 1)
    }
}

fn run_command(command: Command, threads: usize) -> Result<(), CliError> {
    match command {
        Command::Summarize(args) => summarize(args, threads, "extractive"),
        Command::Entity(args) => summarize(args, threads, "entity"),
        Command::Query(args) => query(args, threads),
        Command::Subset(args) => subset(args, threads),
        Command::Dal(args) => dal(args),
        Command::Eval(args) => eval(args),
        Command::Bench(args) => bench(args),
        Command::Kernel(args) => kernel(args),
    }
}

fn parse_psi(name: &str) -> Result<Psi, CliError> {
    Psi::from_name(name).map_err(usage)
}

fn parse_metric(
    name: Option<&str>,
    kind: ModelKind,
    sigma: f64,
) -> Result<(SimilarityMetric, DistanceMetric), CliError> {
    let mut sim = SimilarityMetric::Cosine;
    let mut dist = DistanceMetric::Euclidean;
    if let Some(name) = name {
        match name {
            "cosine" => sim = SimilarityMetric::Cosine,
            "gaussian" => sim = SimilarityMetric::Gaussian { sigma },
            "euclidean" => dist = DistanceMetric::Euclidean,
            "one_minus_cosine" => dist = DistanceMetric::OneMinusCosine,
            other => {
                return Err(usage(Error::InvalidParam(format!(
                    "unknown metric `{other}` (available: cosine, gaussian, euclidean, one_minus_cosine)"
                ))))
            }
        }
        let distance_model = matches!(
            kind,
            ModelKind::DisparityMin | ModelKind::DisparitySum | ModelKind::DisparityMinSum
        );
        let named_distance = matches!(name, "euclidean" | "one_minus_cosine");
        if distance_model != named_distance {
            return Err(usage(Error::InvalidParam(format!(
                "metric `{name}` does not apply to model `{}`",
                kind.name()
            ))));
        }
    }
    Ok((sim, dist))
}

/// Builds a [`ModelConfig`] from flags and checks its aux-file requirements
/// without touching the filesystem.
fn model_config(args: &ModelArgs) -> Result<(ModelConfig, ModelKind), CliError> {
    let kind = ModelKind::from_name(&args.model).map_err(usage)?;
    let (metric, dist_metric) = parse_metric(args.metric.as_deref(), kind, args.sigma)?;
    let mut cfg = ModelConfig::new(kind);
    cfg.alpha = args.alpha;
    cfg.lambda = args.lambda;
    cfg.psi = parse_psi(&args.psi)?;
    cfg.theta = args.theta;
    cfg.metric = metric;
    cfg.dist_metric = dist_metric;
    cfg.knn = args.knn;
    match kind {
        ModelKind::SetCover if args.concepts.is_none() => {
            return Err(usage(Error::InvalidParam("set_cover requires --concepts".into())))
        }
        ModelKind::ProbabilisticSetCover if args.probs.is_none() => {
            return Err(usage(Error::InvalidParam("probabilistic_set_cover requires --probs".into())))
        }
        ModelKind::Modular | ModelKind::MaxMarginalRelevance if args.scores.is_none() => {
            return Err(usage(Error::InvalidParam(format!("{} requires --scores", kind.name()))))
        }
        _ => {}
    }
    Ok((cfg, kind))
}

fn constraint_from(args: &SolverArgs) -> Result<(Constraint, bool), CliError> {
    let lazy = match args.algo.as_str() {
        "lazy" => true,
        "greedy" | "budgeted" | "cover" | "stream" => false,
        other => {
            return Err(usage(Error::InvalidParam(format!(
                "unknown algorithm `{other}` (available: greedy, lazy, budgeted, cover, stream)"
            ))))
        }
    };
    let need = |flag: &str, ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(usage(Error::InvalidParam(format!("--algo {} requires {flag}", args.algo))))
        }
    };
    let constraint = match args.algo.as_str() {
        "greedy" | "lazy" => {
            need("--k", args.k.is_some())?;
            Constraint::Cardinality { k: args.k.unwrap() }
        }
        "budgeted" => {
            need("--budget", args.budget.is_some())?;
            Constraint::Knapsack { budget: args.budget.unwrap() }
        }
        "cover" => {
            need("--rho", args.rho.is_some())?;
            Constraint::Cover { rho: args.rho.unwrap() }
        }
        "stream" => {
            need("--tau", args.tau.is_some())?;
            Constraint::Stream { tau: args.tau.unwrap(), seed: None }
        }
        _ => unreachable!(),
    };
    Ok((constraint, lazy))
}

/// Pre-I/O validation of the model/algorithm pair against the
/// compatibility matrix.
fn check_pair(kind: ModelKind, lambda: f64, constraint: &Constraint) -> Result<(), CliError> {
    let info = kind.static_info(lambda);
    check_compatibility(&info, constraint).map_err(usage)
}

fn load_features(
    features: Option<&Path>,
    frames: Option<&Path>,
    provenance: &mut Provenance,
) -> Result<ingest::FeatureMatrix, CliError> {
    match (features, frames) {
        (Some(path), None) => {
            provenance
                .digests
                .insert(format!("features:{}", path.display()), pipelines::file_digest(path).map_err(runtime)?);
            let by_ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
            let fm = if matches!(by_ext, "vdsf" | "bin") {
                ingest::load_features_binary(path)
            } else {
                ingest::load_features_csv(path)
            };
            fm.map_err(runtime)
        }
        (None, Some(dir)) => ingest::load_frames_dir(dir, 16, 16).map_err(runtime),
        _ => Err(usage(Error::InvalidParam(
            "exactly one of --features and --frames is required".into(),
        ))),
    }
}

fn load_aux(args: &ModelArgs, n: usize, ids: Option<&[String]>, provenance: &mut Provenance) -> Result<AuxInputs, CliError> {
    let mut aux = AuxInputs::default();
    if let Some(path) = &args.concepts {
        provenance
            .digests
            .insert(format!("concepts:{}", path.display()), pipelines::file_digest(path).map_err(runtime)?);
        aux.concepts = Some(ingest::load_concepts(path, n, ids).map_err(runtime)?);
    }
    if let Some(path) = &args.probs {
        provenance
            .digests
            .insert(format!("probs:{}", path.display()), pipelines::file_digest(path).map_err(runtime)?);
        aux.probs = Some(ingest::load_probabilities(path).map_err(runtime)?);
    }
    if let Some(path) = &args.scores {
        provenance
            .digests
            .insert(format!("scores:{}", path.display()), pipelines::file_digest(path).map_err(runtime)?);
        aux.scores = Some(ingest::load_scores(path).map_err(runtime)?);
    }
    Ok(aux)
}

fn write_manifest(manifest: &SelectionManifest, out: &Path) -> Result<(), CliError> {
    let json = manifest.to_canonical_json().map_err(runtime)?;
    std::fs::write(out, json).map_err(|e| runtime(e.into()))?;
    println!(
        "wrote {} manifest: {} ({} items, objective {:.6})",
        manifest.kind,
        out.display(),
        manifest.selected.indices.len(),
        manifest.selected.objective
    );
    Ok(())
}

fn write_montage(
    manifest: &SelectionManifest,
    frames_dir: &Path,
    montage_path: &Path,
    cols: usize,
) -> Result<(), CliError> {
    let mut frames = Vec::new();
    for id in &manifest.selected.ids {
        let bytes = std::fs::read(frames_dir.join(id)).map_err(|e| runtime(e.into()))?;
        frames.push(ingest::ppm::parse_ppm(&bytes).map_err(runtime)?);
    }
    let grid = pipelines::montage(&frames, cols).map_err(runtime)?;
    std::fs::write(montage_path, ingest::ppm::write_ppm(&grid)).map_err(|e| runtime(e.into()))?;
    println!("wrote montage: {}", montage_path.display());
    Ok(())
}

fn summarize(args: SummarizeArgs, threads: usize, kind: &str) -> Result<(), CliError> {
    let (model_cfg, model_kind) = model_config(&args.model)?;
    let (constraint, lazy) = constraint_from(&args.solver)?;
    check_pair(model_kind, model_cfg.lambda, &constraint)?;
    if args.montage.is_some() && args.frames.is_none() {
        return Err(usage(Error::InvalidParam("--montage requires --frames".into())));
    }
    if args.cols < 1 {
        return Err(usage(Error::InvalidParam("--cols must be >= 1".into())));
    }

    let mut provenance = Provenance::default();
    let features = load_features(args.features.as_deref(), args.frames.as_deref(), &mut provenance)?;
    let aux = load_aux(&args.model, features.n(), features.ids(), &mut provenance)?;
    let request = PipelineRequest {
        model: model_cfg,
        solver: SolverConfig {
            constraint,
            lazy,
            stop_at_zero: None,
            parallel: threads > 1,
        },
        seed: args.solver.seed,
    };
    let manifest = if kind == "entity" {
        pipelines::entity_summarize(&features, &request, &aux, provenance).map_err(runtime)?
    } else {
        pipelines::extractive_summarize(&features, &request, &aux, provenance).map_err(runtime)?
    };
    write_manifest(&manifest, &args.out)?;
    if let Some(montage_path) = &args.montage {
        write_montage(&manifest, args.frames.as_deref().unwrap(), montage_path, args.cols)?;
    }
    Ok(())
}

fn query(args: QueryArgs, threads: usize) -> Result<(), CliError> {
    let base = args.base;
    let (model_cfg, model_kind) = model_config(&base.model)?;
    let (constraint, lazy) = constraint_from(&base.solver)?;
    check_pair(model_kind, model_cfg.lambda, &constraint)?;
    if args.query.trim().is_empty() {
        return Err(usage(Error::InvalidParam("--query must be non-empty".into())));
    }

    let mut provenance = Provenance::default();
    let frame_features = load_features(base.features.as_deref(), base.frames.as_deref(), &mut provenance)?;
    for (label, path) in [("snippets", &args.snippets), ("tags", &args.tags)] {
        provenance
            .digests
            .insert(format!("{label}:{}", path.display()), pipelines::file_digest(path).map_err(runtime)?);
    }
    let snippets = ingest::load_snippets(&args.snippets, frame_features.n()).map_err(runtime)?;
    let tags = ingest::load_tags(&args.tags, frame_features.n(), frame_features.ids()).map_err(runtime)?;
    let aux = load_aux(&base.model, snippets.snippets.len(), None, &mut provenance)?;
    let request = PipelineRequest {
        model: model_cfg,
        solver: SolverConfig { constraint, lazy, stop_at_zero: None, parallel: threads > 1 },
        seed: base.solver.seed,
    };
    let manifest = pipelines::query_summarize(
        &frame_features,
        &snippets,
        &tags,
        &args.query,
        args.min_conf,
        &request,
        &aux,
        provenance,
    )
    .map_err(runtime)?;
    write_manifest(&manifest, &base.out)
}

fn subset(args: SubsetArgs, threads: usize) -> Result<(), CliError> {
    let (model_cfg, model_kind) = model_config(&args.model)?;
    let lazy = match args.algo.as_str() {
        "lazy" => true,
        "greedy" => false,
        other => {
            return Err(usage(Error::InvalidParam(format!(
                "subset selection supports --algo greedy|lazy, got `{other}`"
            ))))
        }
    };
    if !(args.fraction > 0.0 && args.fraction <= 1.0) {
        return Err(usage(Error::InvalidParam(format!(
            "--fraction {} must lie in (0, 1]",
            args.fraction
        ))));
    }
    check_pair(model_kind, model_cfg.lambda, &Constraint::Cardinality { k: 1 })?;

    let mut provenance = Provenance::default();
    let features = load_features(Some(&args.features), None, &mut provenance)?;
    let labels = match &args.labels {
        Some(path) => {
            provenance
                .digests
                .insert(format!("labels:{}", path.display()), pipelines::file_digest(path).map_err(runtime)?);
            Some(ingest::load_labels(path).map_err(runtime)?)
        }
        None => None,
    };
    let aux = load_aux(&args.model, features.n(), features.ids(), &mut provenance)?;
    let request = PipelineRequest {
        model: model_cfg,
        solver: SolverConfig {
            constraint: Constraint::Cardinality { k: 1 },
            lazy,
            stop_at_zero: None,
            parallel: threads > 1,
        },
        seed: args.seed,
    };
    let manifest = pipelines::subset_select(
        &features,
        labels.as_deref(),
        args.fraction,
        &request,
        &aux,
        provenance,
    )
    .map_err(runtime)?;
    write_manifest(&manifest, &args.out)
}

fn dal(args: DalArgs) -> Result<(), CliError> {
    let strategy = match args.strategy.as_str() {
        "random" => DalStrategy::Random,
        "uncertainty" => DalStrategy::Uncertainty,
        "submodular" => {
            let kind = ModelKind::from_name(&args.model).map_err(usage)?;
            DalStrategy::Submodular(kind)
        }
        other => {
            return Err(usage(Error::InvalidParam(format!(
                "unknown strategy `{other}` (available: random, uncertainty, submodular)"
            ))))
        }
    };
    let features = ingest::load_features_csv(&args.features)
        .or_else(|_| ingest::load_features_binary(&args.features))
        .map_err(runtime)?;
    let labels = ingest::load_labels(&args.labels).map_err(runtime)?;
    let mut cfg = DalConfig::new(strategy, args.rounds, args.batch, args.seed);
    cfg.holdout_fraction = args.holdout;
    let log = dal_simulate(&features, &labels, &cfg).map_err(runtime)?;

    let base = args.out.clone();
    let csv_path = base.with_extension("csv");
    let json_path = base.with_extension("json");
    std::fs::write(&csv_path, log.to_csv()).map_err(|e| runtime(e.into()))?;
    std::fs::write(&json_path, canonical_json(&log).map_err(runtime)?).map_err(|e| runtime(e.into()))?;
    let last = log.rounds.last().expect("at least one round");
    println!(
        "wrote {} and {} ({} rounds, final holdout accuracy {:.4})",
        csv_path.display(),
        json_path.display(),
        log.rounds.len(),
        last.holdout_acc
    );
    Ok(())
}

fn eval(args: EvalArgs) -> Result<(), CliError> {
    let manifest_text = std::fs::read_to_string(&args.manifest).map_err(|e| runtime(e.into()))?;
    let manifest: serde_json::Value = serde_json::from_str(&manifest_text)
        .map_err(|e| runtime(Error::ParseError(format!("manifest: {e}"))))?;
    let selected: Vec<usize> = manifest["selected"]["indices"]
        .as_array()
        .ok_or_else(|| runtime(Error::ParseError("manifest lacks selected.indices".into())))?
        .iter()
        .filter_map(|v| v.as_u64().map(|v| v as usize))
        .collect();

    let annotations = metrics::load_annotations(&args.annotations).map_err(runtime)?;
    let mut printed = 0;
    for ann in &annotations {
        match ann.kind {
            AnnotationKind::Scene => {
                let r = metrics::representation_score(&selected, ann).map_err(runtime)?;
                println!("R(X) = {r:.4}");
                printed += 1;
            }
            AnnotationKind::Cluster => {
                let m = metrics::cluster_diversity_score(&selected, ann).map_err(runtime)?;
                println!("M(X) (cluster hit fraction) = {m:.4}");
                printed += 1;
            }
            AnnotationKind::OutlierEvent => {
                let d = metrics::outlier_score(&selected, ann).map_err(runtime)?;
                let dn = metrics::outlier_score_normalized(&selected, ann).map_err(runtime)?;
                println!("D(X) = {d} (normalized {dn:.4})");
                printed += 1;
            }
            AnnotationKind::GroundtruthSummary => {
                let gt: Vec<usize> = ann
                    .segments
                    .iter()
                    .flat_map(|s| s.items.iter().copied())
                    .collect();
                // snippet selections expand to their member frames
                let frames: Vec<usize> = match &args.snippets {
                    Some(path) => {
                        // frame ranges were validated when the file was produced
                        let idx = ingest::load_snippets(path, usize::MAX).map_err(runtime)?;
                        selected
                            .iter()
                            .flat_map(|&s| idx.snippets.get(s).map(|s| s.frames.clone()).unwrap_or_default())
                            .collect()
                    }
                    None => selected.clone(),
                };
                let total = args.total_frames.unwrap_or_else(|| {
                    frames.iter().chain(gt.iter()).copied().max().map(|m| m + 1).unwrap_or(1)
                });
                let (p, r, f1) = metrics::f1_score(&frames, &gt, total).map_err(runtime)?;
                println!("F1: precision = {p:.4}, recall = {r:.4}, f1 = {f1:.4}");
                printed += 1;
            }
        }
    }
    if let Some(concepts_path) = &args.concepts {
        let n = manifest["ground_set"]["n"]
            .as_u64()
            .ok_or_else(|| runtime(Error::ParseError("manifest lacks ground_set.n".into())))? as usize;
        let concepts = ingest::load_concepts(concepts_path, n, None).map_err(runtime)?;
        let c = metrics::coverage_score(&selected, &concepts.items).map_err(runtime)?;
        println!("C(X) = {c:.4}");
        printed += 1;
    }
    if printed == 0 {
        println!("no applicable annotation kinds found");
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), CliError> {
    let kinds: Vec<ModelKind> = if args.models == "all" {
        sumsel::bench::default_bench_models()
    } else {
        args.models
            .split(',')
            .map(|name| ModelKind::from_name(name.trim()).map_err(usage))
            .collect::<Result<_, _>>()?
    };
    let fractions: Vec<f64> = args
        .fractions
        .split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| usage(Error::InvalidParam(format!("bad fraction `{f}`"))))
        })
        .collect::<Result<_, _>>()?;
    let reports = sumsel::bench::bench_matrix(&kinds, args.n, &fractions, args.seed, args.reps)
        .map_err(runtime)?;
    for r in &reports {
        println!(
            "{} n={} {:.0}%: memoized {:.4}s, scratch {:.4}s, speedup {:.1}x",
            r.function,
            r.n,
            r.fraction * 100.0,
            r.memoized_secs,
            r.naive_secs,
            r.speedup
        );
    }
    let body = if args.json {
        canonical_json(&reports).map_err(runtime)?
    } else {
        sumsel::bench::reports_to_csv(&reports)
    };
    match &args.out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| runtime(e.into()))?;
            println!("wrote report: {}", path.display());
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn kernel(args: KernelArgs) -> Result<(), CliError> {
    let features = ingest::load_features_csv(&args.features)
        .or_else(|_| ingest::load_features_binary(&args.features))
        .map_err(runtime)?;
    let payload = match args.metric.as_str() {
        "cosine" | "gaussian" => {
            let metric = if args.metric == "cosine" {
                SimilarityMetric::Cosine
            } else {
                SimilarityMetric::Gaussian { sigma: args.sigma }
            };
            let mut kernel = sumsel::similarity::compute_kernel(&features, metric).map_err(runtime)?;
            if let Some(k) = args.knn {
                kernel = sumsel::similarity::sparsify_knn(&kernel, k).map_err(runtime)?;
            }
            kernel.to_feature_matrix()
        }
        "euclidean" | "one_minus_cosine" => {
            if args.knn.is_some() {
                return Err(usage(Error::InvalidParam("--knn applies to similarity kernels only".into())));
            }
            let metric = if args.metric == "euclidean" {
                DistanceMetric::Euclidean
            } else {
                DistanceMetric::OneMinusCosine
            };
            sumsel::similarity::compute_distances(&features, metric)
                .map_err(runtime)?
                .to_feature_matrix()
        }
        other => {
            return Err(usage(Error::InvalidParam(format!(
                "unknown metric `{other}` (available: cosine, gaussian, euclidean, one_minus_cosine)"
            ))))
        }
    };
    ingest::save_features_binary(&payload, &args.out).map_err(runtime)?;
    println!("wrote {}x{} matrix: {}", payload.n(), payload.d(), args.out.display());
    Ok(())
}
