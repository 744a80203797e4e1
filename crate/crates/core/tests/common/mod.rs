#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sumsel::functions::{Model, ModelKind};
use sumsel::synth::synthetic_model;
use sumsel::Objective;

pub const SUBMODULAR_SIX: [ModelKind; 6] = [
    ModelKind::FacilityLocation,
    ModelKind::SaturatedCoverage,
    ModelKind::GraphCut,
    ModelKind::FeatureBased,
    ModelKind::SetCover,
    ModelKind::ProbabilisticSetCover,
];

pub const MONOTONE_MODELS: [ModelKind; 7] = [
    ModelKind::FacilityLocation,
    ModelKind::SaturatedCoverage,
    ModelKind::FeatureBased,
    ModelKind::SetCover,
    ModelKind::ProbabilisticSetCover,
    ModelKind::Modular,
    ModelKind::DisparitySum,
];

/// Every model whose `submodular` flag is set, i.e. the models the lazy
/// queue is valid for.
pub fn submodular_flagged() -> Vec<ModelKind> {
    ModelKind::ALL
        .into_iter()
        .filter(|k| k.static_info(2.0).submodular)
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random subset of `0..n` with size in `0..=max_size`, in random order.
pub fn random_subset(n: usize, max_size: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let size = rng.random_range(0..=max_size.min(n));
    idx.truncate(size);
    idx
}

/// A fresh model of `kind` with `items` committed in order.
pub fn committed(kind: ModelKind, n: usize, seed: u64, items: &[usize]) -> Model {
    let mut model = synthetic_model(kind, n, seed).expect("synthetic model");
    for &i in items {
        model.commit(i).expect("valid commit");
    }
    model
}
