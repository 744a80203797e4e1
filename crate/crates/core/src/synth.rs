//! Seeded synthetic instances for the benchmark harness, the active-learning
//! simulator, and the verification suites. Everything here is deterministic
//! in the seed.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::functions::{
    DisparityMin, DisparityMinSum, DisparitySum, FacilityLocation, FeatureBased, GraphCut,
    MaxMarginalRelevance, Model, ModelKind, Modular, ProbabilisticSetCover, SetCover, Psi,
};
use crate::ingest::FeatureMatrix;
use crate::similarity::{compute_distances, compute_kernel, DistanceMetric, Kernel, SimilarityMetric};

/// Uniform features in [0.05, 1.05); strictly positive rows keep cosine
/// kernels well-defined.
pub fn uniform_features(n: usize, d: usize, seed: u64) -> FeatureMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n * d).map(|_| 0.05 + rng.random::<f64>()).collect();
    FeatureMatrix::from_parts(n, d, data, None).expect("generated features are valid")
}

pub fn random_kernel(n: usize, seed: u64) -> Arc<Kernel> {
    let features = uniform_features(n, 16, seed);
    Arc::new(compute_kernel(&features, SimilarityMetric::Cosine).expect("valid features"))
}

pub fn random_distances(n: usize, seed: u64) -> Arc<crate::similarity::DistanceMatrix> {
    let features = uniform_features(n, 8, seed);
    Arc::new(compute_distances(&features, DistanceMetric::Euclidean).expect("valid features"))
}

/// Random concept sets over a universe of `universe` concepts, unit weights.
pub fn random_concept_sets(n: usize, universe: usize, max_set: usize, seed: u64) -> (Vec<Vec<u32>>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items = (0..n)
        .map(|_| {
            let size = rng.random_range(1..=max_set.max(1));
            let mut set: Vec<u32> = (0..size).map(|_| rng.random_range(0..universe as u32)).collect();
            set.sort_unstable();
            set.dedup();
            set
        })
        .collect();
    (items, vec![1.0; universe])
}

pub fn random_probabilities(n: usize, m: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n * m).map(|_| rng.random::<f64>() * 0.5).collect()
}

pub fn random_scores(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random::<f64>()).collect()
}

/// Builds any of the eleven models over a seeded synthetic instance of size
/// `n`, with the default parameters. Kernel models share one cosine kernel;
/// distance models share one euclidean matrix.
pub fn synthetic_model(kind: ModelKind, n: usize, seed: u64) -> Result<Model> {
    Ok(match kind {
        ModelKind::FacilityLocation => Model::FacilityLocation(FacilityLocation::new(random_kernel(n, seed))),
        ModelKind::SaturatedCoverage => {
            Model::SaturatedCoverage(crate::functions::SaturatedCoverage::new(random_kernel(n, seed), 0.5)?)
        }
        ModelKind::GraphCut => Model::GraphCut(GraphCut::new(random_kernel(n, seed), 2.0)?),
        ModelKind::FeatureBased => {
            Model::FeatureBased(FeatureBased::new(Arc::new(uniform_features(n, 32, seed)), Psi::Sqrt))
        }
        ModelKind::SetCover => {
            let universe = (n / 4).clamp(8, 256);
            let (items, weights) = random_concept_sets(n, universe, 6, seed);
            Model::SetCover(SetCover::new(items, weights)?)
        }
        ModelKind::ProbabilisticSetCover => {
            let m = 64.min(n.max(2));
            Model::ProbabilisticSetCover(ProbabilisticSetCover::new(
                n,
                m,
                random_probabilities(n, m, seed),
                vec![1.0; m],
            )?)
        }
        ModelKind::DisparityMin => Model::DisparityMin(DisparityMin::new(random_distances(n, seed))),
        ModelKind::DisparitySum => Model::DisparitySum(DisparitySum::new(random_distances(n, seed))),
        ModelKind::DisparityMinSum => Model::DisparityMinSum(DisparityMinSum::new(random_distances(n, seed))),
        ModelKind::Modular => Model::Modular(Modular::new(random_scores(n, seed))?),
        ModelKind::MaxMarginalRelevance => Model::MaxMarginalRelevance(MaxMarginalRelevance::new(
            random_kernel(n, seed),
            random_scores(n, seed ^ 0x9e37_79b9),
            0.7,
        )?),
    })
}

/// The planted-cluster family: five tight clusters of twenty points each on
/// distant axes, plus one far outlier. Representation models should pick
/// one item per cluster; dispersion models should pick the outlier.
#[derive(Debug, Clone)]
pub struct ClusterOutlierInstance {
    pub features: FeatureMatrix,
    /// Cluster id per item; `None` marks the outlier.
    pub cluster_of: Vec<Option<usize>>,
    pub outlier: usize,
    pub clusters: usize,
}

pub fn cluster_outlier_instance(seed: u64) -> ClusterOutlierInstance {
    const CLUSTERS: usize = 5;
    const PER_CLUSTER: usize = 20;
    const D: usize = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = CLUSTERS * PER_CLUSTER + 1;
    let mut data = Vec::with_capacity(n * D);
    let mut cluster_of = Vec::with_capacity(n);
    for c in 0..CLUSTERS {
        for _ in 0..PER_CLUSTER {
            for dim in 0..D {
                let center = if dim == c { 6.0 } else { 0.0 };
                data.push(center + 0.5 * rng.random::<f64>());
            }
            cluster_of.push(Some(c));
        }
    }
    // the outlier sits far outside every cluster
    for _ in 0..D {
        data.push(20.0 + 0.5 * rng.random::<f64>());
    }
    cluster_of.push(None);
    ClusterOutlierInstance {
        features: FeatureMatrix::from_parts(n, D, data, None).expect("valid features"),
        cluster_of,
        outlier: n - 1,
        clusters: CLUSTERS,
    }
}

/// Two-class instance with two Gaussian-like clusters per class. The minor
/// clusters (15% of each class) sit so that a nearest-class-centroid probe
/// misclassifies them until they appear in the labeled pool.
#[derive(Debug, Clone)]
pub struct DalInstance {
    pub features: FeatureMatrix,
    pub labels: Vec<usize>,
}

pub fn dal_instance(seed: u64) -> DalInstance {
    const MAJOR: usize = 85;
    const MINOR: usize = 15;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // pre-shift centers: class 0 at (0,0) and (7,7); class 1 at (10,0) and
    // (3,-7); shifted (+1, +8) to stay non-negative under the blob noise
    let centers: [([f64; 2], usize, usize); 4] = [
        ([1.0, 8.0], 0, MAJOR),
        ([8.0, 15.0], 0, MINOR),
        ([11.0, 8.0], 1, MAJOR),
        ([4.0, 1.0], 1, MINOR),
    ];
    let mut data = Vec::new();
    let mut labels = Vec::new();
    for (center, class, count) in centers {
        for _ in 0..count {
            data.push(center[0] + 0.8 * (rng.random::<f64>() - 0.5));
            data.push(center[1] + 0.8 * (rng.random::<f64>() - 0.5));
            labels.push(class);
        }
    }
    DalInstance {
        features: FeatureMatrix::from_parts(labels.len(), 2, data, None).expect("valid features"),
        labels,
    }
}
