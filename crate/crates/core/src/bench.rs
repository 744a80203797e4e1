//! Timing harness for the memoization claim: runs the same greedy twice,
//! once with memoized gains and once forcing scratch recomputation of
//! f(X ∪ {j}) − f(X), asserts the selections agree, and reports both times.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::functions::ModelKind;
use crate::ground::{GroundSet, ModelInfo, Objective, Selection};
use crate::optimize::lazy_greedy;
use crate::synth::synthetic_model;

/// Forces the scratch gain route: every `gain` recomputes the definition
/// twice instead of consulting the inner statistics. The inner oracle still
/// tracks the committed selection, so both routes see identical state.
#[derive(Debug, Clone)]
pub struct ScratchGains<O: Objective> {
    inner: O,
}

impl<O: Objective> ScratchGains<O> {
    pub fn new(inner: O) -> Self {
        ScratchGains { inner }
    }
}

impl<O: Objective> Objective for ScratchGains<O> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn info(&self) -> ModelInfo {
        self.inner.info()
    }

    fn eval(&self, items: &[usize]) -> Result<f64> {
        self.inner.eval(items)
    }

    fn gain(&self, item: usize) -> f64 {
        let selected = self.inner.selection();
        let mut with_item = Vec::with_capacity(selected.len() + 1);
        with_item.extend_from_slice(selected);
        with_item.push(item);
        let after = self.inner.eval(&with_item).expect("valid selection");
        let before = self.inner.eval(selected).expect("valid selection");
        after - before
    }

    fn commit(&mut self, item: usize) -> Result<()> {
        self.inner.commit(item)
    }

    fn reset(&mut self) {
        self.inner.reset()
    }

    fn selection(&self) -> &[usize] {
        self.inner.selection()
    }

    fn is_selected(&self, item: usize) -> bool {
        self.inner.is_selected(item)
    }

    fn current_value(&self) -> f64 {
        self.inner.eval(self.inner.selection()).expect("valid selection")
    }
}

/// One memoized-vs-scratch comparison row.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BenchReport {
    pub function: String,
    pub n: usize,
    pub fraction: f64,
    pub memoized_secs: f64,
    pub naive_secs: f64,
    pub speedup: f64,
    pub selections_equal: bool,
    pub environment: String,
}

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub n: usize,
    /// Budget as a fraction of n; k = ceil(fraction * n).
    pub fraction: f64,
    pub seed: u64,
    /// Wall-clock repetitions; the median is reported.
    pub repetitions: usize,
}

impl BenchConfig {
    pub fn new(n: usize, fraction: f64, seed: u64) -> Self {
        BenchConfig { n, fraction, seed, repetitions: 3 }
    }
}

fn environment_note() -> String {
    let threads = std::thread::available_parallelism().map(|t| t.get()).unwrap_or(1);
    format!(
        "{}-{}; {} hw threads; single-threaded lazy greedy; scratch baseline recomputes \
         eval(X+j)-eval(X); stop-at-zero disabled so every run selects k items",
        std::env::consts::OS,
        std::env::consts::ARCH,
        threads
    )
}

fn timed_run<O: Objective>(oracle: &mut O, gs: &GroundSet, k: usize, reps: usize) -> Result<(Selection, Duration)> {
    let mut durations = Vec::with_capacity(reps);
    let mut selection = None;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        // stop-at-zero off: non-monotone models must still take k items for
        // the two routes to do comparable work
        let outcome = lazy_greedy(oracle, gs, k, Some(false), false)?;
        durations.push(start.elapsed());
        if let Some(prev) = &selection {
            if *prev != outcome.selection {
                return Err(Error::BenchInvalid("repetitions diverged".into()));
            }
        }
        selection = Some(outcome.selection);
    }
    durations.sort();
    Ok((selection.expect("at least one repetition"), durations[durations.len() / 2]))
}

/// Benchmarks one model at one budget fraction on a seeded synthetic
/// instance. Errors with `BenchInvalid` if the memoized and scratch runs
/// select different items, which would indicate a memoization bug.
pub fn bench_function(kind: ModelKind, cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.n < 100 {
        return Err(Error::InvalidParam(format!("bench n = {} must be >= 100", cfg.n)));
    }
    if !(cfg.fraction > 0.0 && cfg.fraction <= 1.0) {
        return Err(Error::InvalidParam(format!("fraction {} must lie in (0, 1]", cfg.fraction)));
    }
    let k = ((cfg.fraction * cfg.n as f64).ceil() as usize).clamp(1, cfg.n);
    let gs = GroundSet::indexed(cfg.n)?;

    let mut memoized = synthetic_model(kind, cfg.n, cfg.seed)?;
    let (memo_sel, memo_time) = timed_run(&mut memoized, &gs, k, cfg.repetitions)?;

    let mut scratch = ScratchGains::new(synthetic_model(kind, cfg.n, cfg.seed)?);
    let (scratch_sel, scratch_time) = timed_run(&mut scratch, &gs, k, cfg.repetitions)?;

    let selections_equal = memo_sel.indices == scratch_sel.indices;
    if !selections_equal {
        return Err(Error::BenchInvalid(format!(
            "memoized and scratch selections diverged for {}",
            kind.name()
        )));
    }
    let memoized_secs = memo_time.as_secs_f64();
    let naive_secs = scratch_time.as_secs_f64();
    Ok(BenchReport {
        function: kind.name().to_string(),
        n: cfg.n,
        fraction: cfg.fraction,
        memoized_secs,
        naive_secs,
        speedup: naive_secs / memoized_secs.max(1e-12),
        selections_equal,
        environment: environment_note(),
    })
}

/// Cross-product run over models and budget fractions.
pub fn bench_matrix(
    kinds: &[ModelKind],
    n: usize,
    fractions: &[f64],
    seed: u64,
    repetitions: usize,
) -> Result<Vec<BenchReport>> {
    let mut out = Vec::with_capacity(kinds.len() * fractions.len());
    for &kind in kinds {
        for &fraction in fractions {
            let cfg = BenchConfig { n, fraction, seed, repetitions };
            out.push(bench_function(kind, &cfg)?);
        }
    }
    Ok(out)
}

/// The eight models timed in the reference comparison table.
pub fn default_bench_models() -> Vec<ModelKind> {
    vec![
        ModelKind::FacilityLocation,
        ModelKind::SaturatedCoverage,
        ModelKind::GraphCut,
        ModelKind::FeatureBased,
        ModelKind::SetCover,
        ModelKind::ProbabilisticSetCover,
        ModelKind::DisparityMin,
        ModelKind::DisparitySum,
    ]
}

/// CSV rows loadable by the ingest CSV reader (first column is an id
/// column, the rest are numeric).
pub fn reports_to_csv(reports: &[BenchReport]) -> String {
    let mut out = String::from("function,n,fraction,memoized_s,naive_s,speedup,selections_equal\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{:.6},{:.6},{:.3},{}\n",
            r.function,
            r.n,
            r.fraction,
            r.memoized_secs,
            r.naive_secs,
            r.speedup,
            u8::from(r.selections_equal)
        ));
    }
    out
}
