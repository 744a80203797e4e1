//! End-to-end flows: extractive, query, and entity summarization over
//! ingested features; training-data subset selection; diversified active
//! learning; and montage assembly.

pub mod dal;
pub mod manifest;

pub use dal::{dal_simulate, ALRoundLog, DalConfig, DalStrategy, RoundRecord};
pub use manifest::{canonical_json, SelectionManifest};

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::functions::{
    DisparityMin, DisparityMinSum, DisparitySum, FacilityLocation, FeatureBased, GraphCut,
    MaxMarginalRelevance, Model, ModelKind, Modular, ProbabilisticSetCover, Psi, SetCover,
};
use crate::ground::{GroundSet, Objective};
use crate::ingest::{
    aggregate_snippets, filter_by_query, ppm::Ppm, ConceptData, FeatureMatrix, ProbabilityTable,
    SnippetIndex, TagTable,
};
use crate::optimize::{solve, Constraint, SolverConfig};
use crate::similarity::{
    compute_distances, compute_kernel, sparsify_knn, DistanceMetric, SimilarityMetric,
};
use manifest::{
    AlgorithmSection, GroundSetSection, ModelSection, ParamsSection, SelectedSection, TimingsSection,
};

/// Model choice plus every tunable the eleven objectives consume.
#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub kind: ModelKind,
    /// Saturation fraction for saturated coverage.
    pub alpha: f64,
    /// Trade-off for graph cut; lambda >= 2 keeps it monotone.
    pub lambda: f64,
    /// Concave transform for the feature-based objective.
    pub psi: Psi,
    /// Relevance/redundancy trade-off for max marginal relevance.
    pub theta: f64,
    pub metric: SimilarityMetric,
    pub dist_metric: DistanceMetric,
    /// Sparsify the kernel to k nearest neighbors per row.
    pub knn: Option<usize>,
}

impl ModelConfig {
    pub fn new(kind: ModelKind) -> Self {
        ModelConfig {
            kind,
            alpha: 0.5,
            lambda: 2.0,
            psi: Psi::Sqrt,
            theta: 0.7,
            metric: SimilarityMetric::Cosine,
            dist_metric: DistanceMetric::Euclidean,
            knn: None,
        }
    }

    fn params_section(&self) -> ParamsSection {
        let mut p = ParamsSection::default();
        match self.kind {
            ModelKind::SaturatedCoverage => p.alpha = Some(self.alpha),
            ModelKind::GraphCut => p.lambda = Some(self.lambda),
            ModelKind::FeatureBased => p.psi = Some(self.psi.name().to_string()),
            ModelKind::MaxMarginalRelevance => p.theta = Some(self.theta),
            _ => {}
        }
        match self.kind {
            ModelKind::FacilityLocation
            | ModelKind::SaturatedCoverage
            | ModelKind::GraphCut
            | ModelKind::MaxMarginalRelevance => {
                p.metric = Some(match self.metric {
                    SimilarityMetric::Cosine => "cosine".to_string(),
                    SimilarityMetric::Gaussian { sigma } => format!("gaussian(sigma={sigma})"),
                });
                p.knn = self.knn;
            }
            ModelKind::DisparityMin | ModelKind::DisparitySum | ModelKind::DisparityMinSum => {
                p.metric = Some(match self.dist_metric {
                    DistanceMetric::Euclidean => "euclidean".to_string(),
                    DistanceMetric::OneMinusCosine => "one_minus_cosine".to_string(),
                });
            }
            _ => {}
        }
        p
    }
}

/// Side inputs consumed by the coverage and relevance models.
#[derive(Debug, Clone, Default)]
pub struct AuxInputs {
    pub concepts: Option<ConceptData>,
    pub probs: Option<ProbabilityTable>,
    pub scores: Option<Vec<f64>>,
}

/// A constructed model plus its build timing and convention notes.
pub struct ModelBuild {
    pub model: Model,
    pub kernel_seconds: f64,
    pub notes: Vec<String>,
}

/// Builds the configured model over `features`, computing the kernel or
/// distance matrix it needs.
pub fn build_model(cfg: &ModelConfig, features: &FeatureMatrix, aux: &AuxInputs) -> Result<ModelBuild> {
    let n = features.n();
    let mut notes = Vec::new();
    let mut kernel_seconds = 0.0;
    let mut timed_kernel = |metric: SimilarityMetric, knn: Option<usize>| {
        let start = Instant::now();
        let mut kernel = compute_kernel(features, metric)?;
        if let Some(k) = knn {
            kernel = sparsify_knn(&kernel, k)?;
        }
        kernel_seconds = start.elapsed().as_secs_f64();
        Ok::<_, Error>(Arc::new(kernel))
    };
    let model = match cfg.kind {
        ModelKind::FacilityLocation => {
            Model::FacilityLocation(FacilityLocation::new(timed_kernel(cfg.metric, cfg.knn)?))
        }
        ModelKind::SaturatedCoverage => Model::SaturatedCoverage(
            crate::functions::SaturatedCoverage::new(timed_kernel(cfg.metric, cfg.knn)?, cfg.alpha)?,
        ),
        ModelKind::GraphCut => {
            Model::GraphCut(GraphCut::new(timed_kernel(cfg.metric, cfg.knn)?, cfg.lambda)?)
        }
        ModelKind::MaxMarginalRelevance => {
            let scores = aux
                .scores
                .clone()
                .ok_or_else(|| Error::InvalidParam("max_marginal_relevance requires relevance scores".into()))?;
            notes.push(
                "max marginal relevance gain is theta*rel(j) - (1-theta)*max similarity to the \
                 selection; the objective value is the sum of gains in selection order"
                    .to_string(),
            );
            Model::MaxMarginalRelevance(MaxMarginalRelevance::new(
                timed_kernel(cfg.metric, cfg.knn)?,
                scores,
                cfg.theta,
            )?)
        }
        ModelKind::DisparityMin | ModelKind::DisparitySum | ModelKind::DisparityMinSum => {
            let start = Instant::now();
            let distances = Arc::new(compute_distances(features, cfg.dist_metric)?);
            kernel_seconds = start.elapsed().as_secs_f64();
            match cfg.kind {
                ModelKind::DisparityMin => Model::DisparityMin(DisparityMin::new(distances)),
                ModelKind::DisparitySum => {
                    notes.push(
                        "dispersion sum counts each unordered pair once (half the ordered-pair sum)"
                            .to_string(),
                    );
                    Model::DisparitySum(DisparitySum::new(distances))
                }
                _ => Model::DisparityMinSum(DisparityMinSum::new(distances)),
            }
        }
        ModelKind::FeatureBased => {
            Model::FeatureBased(FeatureBased::new(Arc::new(features.clone()), cfg.psi))
        }
        ModelKind::SetCover => {
            let concepts = aux
                .concepts
                .as_ref()
                .ok_or_else(|| Error::InvalidParam("set_cover requires concept sets".into()))?;
            if concepts.items.len() != n {
                return Err(Error::InvalidParam(format!(
                    "concepts cover {} items, features have {n}",
                    concepts.items.len()
                )));
            }
            Model::SetCover(SetCover::new(concepts.items.clone(), concepts.weights.clone())?)
        }
        ModelKind::ProbabilisticSetCover => {
            let probs = aux
                .probs
                .as_ref()
                .ok_or_else(|| Error::InvalidParam("probabilistic_set_cover requires a probability table".into()))?;
            if probs.n != n {
                return Err(Error::InvalidParam(format!(
                    "probability table covers {} items, features have {n}",
                    probs.n
                )));
            }
            let m = probs.concepts.len();
            Model::ProbabilisticSetCover(ProbabilisticSetCover::new(n, m, probs.probs.clone(), vec![1.0; m])?)
        }
        ModelKind::Modular => {
            let scores = aux
                .scores
                .clone()
                .ok_or_else(|| Error::InvalidParam("modular requires relevance scores".into()))?;
            if scores.len() != n {
                return Err(Error::InvalidParam(format!(
                    "{} scores for {n} items",
                    scores.len()
                )));
            }
            Model::Modular(Modular::new(scores)?)
        }
    };
    Ok(ModelBuild { model, kernel_seconds, notes })
}

/// One summarization request: model, solver, seed.
#[derive(Debug, Clone)]
pub struct PipelineRequest {
    pub model: ModelConfig,
    pub solver: SolverConfig,
    pub seed: Option<u64>,
}

/// Input-file digests and warnings that ride along into the manifest.
#[derive(Debug, Clone, Default)]
pub struct Provenance {
    pub digests: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

/// SHA-256 digest of a file, hex-encoded, for manifest provenance.
pub fn file_digest(path: impl AsRef<Path>) -> Result<String> {
    let bytes = std::fs::read(path)?;
    let hash = Sha256::digest(&bytes);
    Ok(hash.iter().map(|b| format!("{b:02x}")).collect())
}

#[allow(clippy::too_many_arguments)]
fn run_to_manifest(
    kind: &str,
    features: &FeatureMatrix,
    costs: Option<Vec<f64>>,
    request: &PipelineRequest,
    aux: &AuxInputs,
    provenance: Provenance,
    ground_section: GroundSetSection,
    class_counts: BTreeMap<String, usize>,
) -> Result<SelectionManifest> {
    let construction_start = Instant::now();
    let ids: Vec<String> = match features.ids() {
        Some(ids) => ids.to_vec(),
        None => (0..features.n()).map(|i| i.to_string()).collect(),
    };
    let gs = GroundSet::new(ids, costs)?;
    let build = build_model(&request.model, features, aux)?;
    let mut model = build.model;
    let construction_s = construction_start.elapsed().as_secs_f64();

    let mut solver = request.solver;
    if let Constraint::Stream { tau, seed: None } = solver.constraint {
        // thread the request seed into the stream permutation
        solver.constraint = Constraint::Stream { tau, seed: request.seed };
    }
    let solve_start = Instant::now();
    let report = solve(&mut model, &gs, &solver)?;
    let solve_s = solve_start.elapsed().as_secs_f64();

    let mut warnings = provenance.warnings;
    if report.lazy_fallback {
        warnings.push(format!(
            "lazy greedy requested but `{}` is not submodular; ran the exact scan",
            request.model.kind.name()
        ));
    }
    let info = model.info();
    let selected_ids = report.selection.indices.iter().map(|&i| gs.ids()[i].clone()).collect();
    let total_cost = report.selection.total_cost(&gs)?;
    Ok(SelectionManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        kind: kind.to_string(),
        model: ModelSection {
            name: info.name.to_string(),
            family: info.family,
            monotone: info.monotone,
            submodular: info.submodular,
            params: request.model.params_section(),
        },
        algorithm: AlgorithmSection {
            requested: constraint_name(&request.solver.constraint, request.solver.lazy).to_string(),
            executed: report.algorithm.to_string(),
            constraint: solver.constraint,
            lazy: request.solver.lazy,
            lazy_resorts: report.lazy_resorts,
            lazy_fallback: report.lazy_fallback,
            stop_at_zero: request.solver.stop_at_zero.unwrap_or(!info.monotone),
            tie_break: "lowest_index".to_string(),
            parallel: request.solver.parallel,
            seed: request.seed,
        },
        ground_set: ground_section,
        selected: SelectedSection {
            indices: report.selection.indices.clone(),
            ids: selected_ids,
            objective: report.selection.objective(),
            total_cost,
        },
        objective_trace: report.selection.objective_trace,
        class_counts,
        notes: build.notes,
        warnings,
        provenance: provenance.digests,
        timings: TimingsSection { construction_s, kernel_s: build.kernel_seconds, solve_s },
    })
}

fn constraint_name(constraint: &Constraint, lazy: bool) -> &'static str {
    match constraint {
        Constraint::Cardinality { .. } => {
            if lazy {
                "lazy_greedy"
            } else {
                "greedy"
            }
        }
        Constraint::Knapsack { .. } => "budgeted_greedy",
        Constraint::Cover { .. } => "cover_greedy",
        Constraint::Stream { .. } => "stream_greedy",
    }
}

/// Extractive summarization: the configured model over raw item features.
pub fn extractive_summarize(
    features: &FeatureMatrix,
    request: &PipelineRequest,
    aux: &AuxInputs,
    provenance: Provenance,
) -> Result<SelectionManifest> {
    let ground = GroundSetSection { n: features.n(), pre_filter_n: None, query: None, provenance_map: None };
    run_to_manifest("extractive", features, None, request, aux, provenance, ground, BTreeMap::new())
}

/// Entity summarization: the extractive engine over pre-cropped entity
/// features.
pub fn entity_summarize(
    features: &FeatureMatrix,
    request: &PipelineRequest,
    aux: &AuxInputs,
    provenance: Provenance,
) -> Result<SelectionManifest> {
    let ground = GroundSetSection { n: features.n(), pre_filter_n: None, query: None, provenance_map: None };
    run_to_manifest("entity", features, None, request, aux, provenance, ground, BTreeMap::new())
}

/// Query summarization: filter snippets by tag, mean-pool frame features
/// per surviving snippet, then solve over the snippet ground set.
#[allow(clippy::too_many_arguments)]
pub fn query_summarize(
    frame_features: &FeatureMatrix,
    snippets: &SnippetIndex,
    tags: &TagTable,
    query: &str,
    min_conf: f64,
    request: &PipelineRequest,
    aux: &AuxInputs,
    provenance: Provenance,
) -> Result<SelectionManifest> {
    let filtered = filter_by_query(snippets, tags, query, min_conf)?;
    if filtered.index.snippets.is_empty() {
        return Err(Error::EmptyGroundSet(format!("query `{query}` matched no snippets")));
    }
    let (features, costs) = aggregate_snippets(frame_features, &filtered.index)?;
    let ground = GroundSetSection {
        n: features.n(),
        pre_filter_n: Some(snippets.snippets.len()),
        query: Some(query.to_string()),
        provenance_map: Some(filtered.provenance),
    };
    run_to_manifest("query", &features, Some(costs), request, aux, provenance, ground, BTreeMap::new())
}

/// Training-data subset selection: k = ceil(fraction * n) under the
/// cardinality constraint; per-class counts reported when labels are given.
pub fn subset_select(
    features: &FeatureMatrix,
    labels: Option<&[usize]>,
    fraction: f64,
    request: &PipelineRequest,
    aux: &AuxInputs,
    provenance: Provenance,
) -> Result<SelectionManifest> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidParam(format!("fraction {fraction} must lie in (0, 1]")));
    }
    if let Some(labels) = labels {
        if labels.len() != features.n() {
            return Err(Error::InvalidParam(format!(
                "{} labels for {} items",
                labels.len(),
                features.n()
            )));
        }
    }
    let k = ((fraction * features.n() as f64).ceil() as usize).clamp(1, features.n());
    let mut request = request.clone();
    request.solver.constraint = Constraint::Cardinality { k };
    let ground = GroundSetSection { n: features.n(), pre_filter_n: None, query: None, provenance_map: None };
    let mut manifest =
        run_to_manifest("subset", features, None, &request, aux, provenance, ground, BTreeMap::new())?;
    if let Some(labels) = labels {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for &i in &manifest.selected.indices {
            *counts.entry(labels[i].to_string()).or_insert(0) += 1;
        }
        manifest.class_counts = counts;
    }
    Ok(manifest)
}

/// Row-major grid composite of equally sized frames; the last row pads with
/// black cells.
pub fn montage(frames: &[Ppm], columns: usize) -> Result<Ppm> {
    if frames.is_empty() {
        return Err(Error::InvalidParam("montage needs at least one frame".into()));
    }
    if columns < 1 {
        return Err(Error::InvalidParam("columns must be >= 1".into()));
    }
    let (w, h) = (frames[0].width, frames[0].height);
    for (i, f) in frames.iter().enumerate() {
        if (f.width, f.height) != (w, h) {
            return Err(Error::DimensionMismatch(format!(
                "frame {i} is {}x{}, expected {w}x{h}",
                f.width, f.height
            )));
        }
    }
    let columns = columns.min(frames.len());
    let rows = frames.len().div_ceil(columns);
    let (out_w, out_h) = (columns * w, rows * h);
    let mut rgb = vec![0u8; 3 * out_w * out_h];
    for (i, frame) in frames.iter().enumerate() {
        let (cell_x, cell_y) = ((i % columns) * w, (i / columns) * h);
        for y in 0..h {
            let src = 3 * y * w;
            let dst = 3 * ((cell_y + y) * out_w + cell_x);
            rgb[dst..dst + 3 * w].copy_from_slice(&frame.rgb[src..src + 3 * w]);
        }
    }
    Ppm::new(out_w, out_h, rgb)
}
