//! Cross-module contracts: memoized gains against scratch recomputation,
//! curvature (diminishing returns / supermodularity), monotonicity, lazy
//! versus exact greedy equivalence, and kernel geometry.

mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;

use sumsel::functions::{Model, ModelKind, ProbabilisticSetCover, SetCover};
use sumsel::ground::{GroundSet, Objective};
use sumsel::ingest::FeatureMatrix;
use sumsel::optimize::{
    brute_force_opt, budgeted_greedy, cover_greedy, lazy_greedy, naive_greedy, stream_greedy,
};
use sumsel::similarity::{compute_distances, compute_kernel, sparsify_knn, DistanceMetric, SimilarityMetric};
use sumsel::synth::{random_concept_sets, synthetic_model, uniform_features};
use sumsel::{nearly_equal, Error};

#[test]
fn memoized_gain_matches_scratch_for_every_model() {
    for kind in ModelKind::ALL {
        let mut rng = rng(0xface ^ kind as u64);
        for probe in 0..200 {
            let n = rng.random_range(8..32);
            let seed = probe as u64;
            let committed_set = random_subset(n, n / 2, &mut rng);
            let model = committed(kind, n, seed, &committed_set);
            let free: Vec<usize> = (0..n).filter(|j| !model.is_selected(*j)).collect();
            if free.is_empty() {
                continue;
            }
            let j = free[rng.random_range(0..free.len())];

            let memoized = model.try_gain(j).unwrap();
            let mut with_j = committed_set.clone();
            with_j.push(j);
            let scratch = model.eval(&with_j).unwrap() - model.eval(&committed_set).unwrap();
            assert!(
                nearly_equal(memoized, scratch),
                "{kind:?}: memoized {memoized} vs scratch {scratch} (X = {committed_set:?}, j = {j})"
            );
        }
    }
}

#[test]
fn committed_stats_value_matches_definition() {
    for kind in ModelKind::ALL {
        let mut rng = rng(0xbeef ^ kind as u64);
        for probe in 0..50 {
            let n = rng.random_range(6..24);
            let items = random_subset(n, n, &mut rng);
            let model = committed(kind, n, probe, &items);
            let from_stats = model.current_value();
            let from_definition = model.eval(&items).unwrap();
            assert!(
                nearly_equal(from_stats, from_definition),
                "{kind:?}: stats {from_stats} vs definition {from_definition}"
            );
        }
    }
}

#[test]
fn eval_of_empty_selection_is_zero() {
    for kind in ModelKind::ALL {
        let model = synthetic_model(kind, 12, 1).unwrap();
        assert_eq!(model.eval(&[]).unwrap(), 0.0, "{kind:?}");
    }
}

#[test]
fn gain_rejects_selected_and_out_of_range_items() {
    let model = committed(ModelKind::FacilityLocation, 8, 0, &[3]);
    assert!(matches!(model.try_gain(3), Err(Error::AlreadySelected(3))));
    assert!(matches!(model.try_gain(99), Err(Error::InvalidSelection(_))));
}

/// Diminishing returns on random nested pairs X ⊆ Y for the six submodular
/// models; the reverse inequality for the supermodular dispersion sum.
#[test]
fn curvature_on_random_nested_pairs() {
    let check = |kind: ModelKind, supermodular: bool| {
        let mut rng = rng(0x5eed ^ kind as u64);
        for probe in 0..300 {
            let n = rng.random_range(8..28);
            let seed = probe as u64;
            let y = {
                let mut y = random_subset(n, n - 2, &mut rng);
                if y.is_empty() {
                    y.push(rng.random_range(0..n));
                }
                y
            };
            let cut = rng.random_range(0..=y.len());
            let x = &y[..cut];
            let free: Vec<usize> = (0..n).filter(|j| !y.contains(j)).collect();
            if free.is_empty() {
                continue;
            }
            let j = free[rng.random_range(0..free.len())];
            let small = committed(kind, n, seed, x);
            let large = committed(kind, n, seed, &y);
            let (gx, gy) = (small.gain(j), large.gain(j));
            if supermodular {
                assert!(gx <= gy + 1e-9, "{kind:?}: gain grew smaller with the larger set");
            } else {
                assert!(gx >= gy - 1e-9, "{kind:?}: diminishing returns violated ({gx} < {gy})");
            }
        }
    };
    for kind in SUBMODULAR_SIX {
        check(kind, false);
    }
    check(ModelKind::Modular, false);
    check(ModelKind::DisparitySum, true);
}

#[test]
fn monotone_models_have_non_decreasing_eval() {
    for kind in MONOTONE_MODELS {
        let mut rng = rng(0xaaaa ^ kind as u64);
        for probe in 0..60 {
            let n = rng.random_range(6..20);
            let model = synthetic_model(kind, n, probe).unwrap();
            let order = random_subset(n, n, &mut rng);
            let mut prev = 0.0;
            for t in 1..=order.len() {
                let value = model.eval(&order[..t]).unwrap();
                assert!(value >= prev - 1e-9, "{kind:?}: eval decreased along a chain");
                prev = value;
            }
        }
    }
}

#[test]
fn lazy_and_naive_greedy_select_identically() {
    for kind in submodular_flagged() {
        let mut rng = rng(0x1a2b ^ kind as u64);
        for probe in 0..40 {
            let n = rng.random_range(10..80);
            let k = rng.random_range(1..=10.min(n));
            let mut a = synthetic_model(kind, n, probe).unwrap();
            let mut b = a.clone();
            let gs = GroundSet::indexed(n).unwrap();
            let naive = naive_greedy(&mut a, &gs, k, None, false).unwrap();
            let lazy = lazy_greedy(&mut b, &gs, k, None, false).unwrap();
            assert!(!lazy.fell_back, "{kind:?} is submodular-flagged");
            assert_eq!(naive.indices, lazy.selection.indices, "{kind:?} diverged");
            assert!(lazy.max_round_resorts <= n, "{kind:?}: more refreshes than items in one round");
        }
    }
}

#[cfg(feature = "parallel")]
#[test]
fn parallel_gain_scan_matches_sequential() {
    for kind in [ModelKind::FacilityLocation, ModelKind::SetCover, ModelKind::DisparitySum] {
        for probe in 0..20 {
            let n = 40;
            let mut a = synthetic_model(kind, n, probe).unwrap();
            let mut b = a.clone();
            let gs = GroundSet::indexed(n).unwrap();
            let seq = naive_greedy(&mut a, &gs, 8, Some(false), false).unwrap();
            let par = naive_greedy(&mut b, &gs, 8, Some(false), true).unwrap();
            assert_eq!(seq.indices, par.indices, "{kind:?} parallel scan diverged");
        }
    }
}

#[test]
fn greedy_is_near_optimal_on_small_instances() {
    let bound = 1.0 - (-1.0f64).exp();
    for kind in [ModelKind::FacilityLocation, ModelKind::SetCover, ModelKind::FeatureBased] {
        for probe in 0..10 {
            let n = 10;
            let mut model = synthetic_model(kind, n, probe).unwrap();
            let gs = GroundSet::indexed(n).unwrap();
            let greedy = lazy_greedy(&mut model, &gs, 3, None, false).unwrap();
            let (_, opt) = brute_force_opt(&model, &gs, 3).unwrap();
            assert!(
                greedy.selection.objective() >= bound * opt - 1e-9,
                "{kind:?}: {} < {} * {opt}",
                greedy.selection.objective(),
                bound
            );
        }
    }
}

#[test]
fn probabilistic_set_cover_reduces_to_set_cover_on_hard_labels() {
    let mut rng = rng(77);
    for probe in 0..40 {
        let n = rng.random_range(4..16);
        let universe = rng.random_range(3..12);
        let (items, weights) = random_concept_sets(n, universe, 4, probe);
        let sc = SetCover::new(items.clone(), weights.clone()).unwrap();
        let mut probs = vec![0.0; n * universe];
        for (i, set) in items.iter().enumerate() {
            for &u in set {
                probs[i * universe + u as usize] = 1.0;
            }
        }
        let psc = ProbabilisticSetCover::new(n, universe, probs, weights).unwrap();
        for _ in 0..10 {
            let x = random_subset(n, n, &mut rng);
            let a = sc.eval(&x).unwrap();
            let b = psc.eval(&x).unwrap();
            assert!(nearly_equal(a, b), "set cover {a} vs hard-label psc {b}");
        }
    }
}

#[test]
fn knapsack_beats_every_feasible_singleton() {
    let mut rng = rng(0xc0de);
    for probe in 0..25 {
        let n = rng.random_range(6..16);
        let mut model = synthetic_model(ModelKind::FacilityLocation, n, probe).unwrap();
        let costs: Vec<f64> = (0..n).map(|_| 0.5 + rng.random::<f64>() * 2.0).collect();
        let budget = 2.0;
        let gs = GroundSet::new((0..n).map(|i| i.to_string()).collect(), Some(costs.clone())).unwrap();
        let sel = budgeted_greedy(&mut model, &gs, budget, None, false).unwrap();
        let knapsack_value = sel.objective();
        for (j, &cost) in costs.iter().enumerate() {
            if cost <= budget {
                let singleton = model.eval(&[j]).unwrap();
                assert!(
                    knapsack_value >= singleton - 1e-9,
                    "knapsack {knapsack_value} lost to singleton {j} = {singleton}"
                );
            }
        }
        assert!(sel.total_cost(&gs).unwrap() <= budget + 1e-12);
    }
}

#[test]
fn cover_greedy_meets_its_fraction() {
    let mut rng = rng(0xabcd);
    for probe in 0..25 {
        let n = rng.random_range(6..20);
        let mut model = synthetic_model(ModelKind::FacilityLocation, n, probe).unwrap();
        let gs = GroundSet::indexed(n).unwrap();
        let rho = 0.5 + 0.5 * rng.random::<f64>();
        let sel = cover_greedy(&mut model, &gs, rho, false).unwrap();
        let full: Vec<usize> = (0..n).collect();
        let target = rho * model.eval(&full).unwrap();
        assert!(model.eval(&sel.indices).unwrap() >= target - 1e-9);
    }
}

#[test]
fn stream_greedy_is_deterministic_per_seed() {
    for probe in 0..10 {
        let n = 30;
        let mut a = synthetic_model(ModelKind::FacilityLocation, n, probe).unwrap();
        let mut b = a.clone();
        let gs = GroundSet::indexed(n).unwrap();
        let s1 = stream_greedy(&mut a, &gs, 1.0, Some(42)).unwrap();
        let s2 = stream_greedy(&mut b, &gs, 1.0, Some(42)).unwrap();
        assert_eq!(s1.indices, s2.indices);
    }
}

#[test]
fn knn_full_neighbor_kernel_preserves_facility_location() {
    let mut rng = rng(0x88);
    for probe in 0..10 {
        let features = uniform_features(8, 6, probe);
        let dense = compute_kernel(&features, SimilarityMetric::Cosine).unwrap();
        let sparse = sparsify_knn(&dense, 7).unwrap();
        let a = Model::FacilityLocation(sumsel::functions::FacilityLocation::new(dense.into()));
        let b = Model::FacilityLocation(sumsel::functions::FacilityLocation::new(sparse.into()));
        for _ in 0..5 {
            let x = random_subset(8, 8, &mut rng);
            assert!(nearly_equal(a.eval(&x).unwrap(), b.eval(&x).unwrap()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_symmetric_with_dominant_diagonal(
        rows in prop::collection::vec(prop::collection::vec(0.01f64..1.0, 4), 2..10)
    ) {
        let n = rows.len();
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        let fm = FeatureMatrix::from_parts(n, 4, data, None).unwrap();
        let kernel = compute_kernel(&fm, SimilarityMetric::Cosine).unwrap();
        for i in 0..n {
            prop_assert_eq!(kernel.get(i, i), 1.0);
            for j in 0..n {
                prop_assert_eq!(kernel.get(i, j), kernel.get(j, i));
                prop_assert!(kernel.get(i, i) >= kernel.get(i, j));
                prop_assert!((0.0..=1.0).contains(&kernel.get(i, j)));
            }
        }
    }

    #[test]
    fn euclidean_distances_satisfy_triangle_inequality(
        rows in prop::collection::vec(prop::collection::vec(0.0f64..5.0, 3), 3..8)
    ) {
        let n = rows.len();
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        let fm = FeatureMatrix::from_parts(n, 3, data, None).unwrap();
        let d = compute_distances(&fm, DistanceMetric::Euclidean).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(d.get(i, j), d.get(j, i));
                for k in 0..n {
                    prop_assert!(d.get(i, j) <= d.get(i, k) + d.get(k, j) + 1e-9);
                }
            }
        }
    }

    #[test]
    fn f1_is_symmetric_under_swap(
        x in prop::collection::btree_set(0usize..30, 0..12),
        gt in prop::collection::btree_set(0usize..30, 0..12)
    ) {
        let x: Vec<usize> = x.into_iter().collect();
        let gt: Vec<usize> = gt.into_iter().collect();
        let (p1, r1, f1a) = sumsel::metrics::f1_score(&x, &gt, 30).unwrap();
        let (p2, r2, f1b) = sumsel::metrics::f1_score(&gt, &x, 30).unwrap();
        prop_assert_eq!(p1, r2);
        prop_assert_eq!(r1, p2);
        prop_assert!((f1a - f1b).abs() <= 1e-12);
        if x.len() == gt.len() {
            prop_assert_eq!(p1, p2);
        }
    }
}
