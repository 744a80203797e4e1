//! Acceptance suite. Each test prints one `criterion N: PASS/FAIL` line
//! (visible with `cargo test --test acceptance -- --nocapture`) and fails
//! the build when its contract does not hold.
//!
//! Tolerances are pinned here: gain consistency and curvature at 1e-9,
//! greedy near-optimality at 1 - 1/e, the memoization speedup floor at 10x.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sumsel::bench::{bench_function, BenchConfig};
use sumsel::functions::{ModelKind, SetCover};
use sumsel::ground::{GroundSet, Objective};
use sumsel::metrics::{self, AnnotationKind, Segment, SegmentAnnotation};
use sumsel::optimize::{brute_force_opt, cover_greedy, lazy_greedy, naive_greedy};
use sumsel::pipelines::{
    dal_simulate, extractive_summarize, AuxInputs, DalConfig, DalStrategy, ModelConfig,
    PipelineRequest, Provenance,
};
use sumsel::similarity::SimilarityMetric;
use sumsel::synth::{cluster_outlier_instance, dal_instance, random_concept_sets, synthetic_model};
use sumsel::nearly_equal;

fn report(criterion: u32, ok: bool, description: &str) {
    println!(
        "criterion {criterion}: {} — {description}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} failed — {description}");
}

fn random_subset(n: usize, max_size: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    idx.truncate(rng.random_range(0..=max_size.min(n)));
    idx
}

/// 1. Memoized gain equals scratch gain within 1e-9: 1000 probes per model.
#[test]
fn criterion_1_memoization_correctness() {
    let mut violations = 0usize;
    for kind in ModelKind::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(0x11 ^ kind as u64);
        for instance in 0..10u64 {
            let n = 16 + 2 * instance as usize;
            let mut model = synthetic_model(kind, n, instance).unwrap();
            for _ in 0..100 {
                model.reset();
                let committed = random_subset(n, n - 1, &mut rng);
                for &i in &committed {
                    model.commit(i).unwrap();
                }
                let free: Vec<usize> = (0..n).filter(|&j| !model.is_selected(j)).collect();
                let j = free[rng.random_range(0..free.len())];
                let memoized = model.try_gain(j).unwrap();
                let mut with_j = committed.clone();
                with_j.push(j);
                let scratch = model.eval(&with_j).unwrap() - model.eval(&committed).unwrap();
                if !nearly_equal(memoized, scratch) {
                    violations += 1;
                }
            }
        }
    }
    report(
        1,
        violations == 0,
        "memoized gains equal scratch recomputation (11 models x 1000 probes, tol 1e-9)",
    );
}

/// 2. Lazy and naive greedy produce identical selection sequences on 100
///    random instances (n <= 200, k <= 20) per submodular-flagged model.
#[test]
fn criterion_2_lazy_equals_naive() {
    let flagged: Vec<ModelKind> = ModelKind::ALL
        .into_iter()
        .filter(|k| k.static_info(2.0).submodular)
        .collect();
    let mut divergences = 0usize;
    for &kind in &flagged {
        let mut rng = ChaCha8Rng::seed_from_u64(0x22 ^ kind as u64);
        for instance in 0..100u64 {
            let n = rng.random_range(20..=200);
            let k = rng.random_range(1..=20.min(n));
            let mut a = synthetic_model(kind, n, instance).unwrap();
            let mut b = a.clone();
            let gs = GroundSet::indexed(n).unwrap();
            let naive = naive_greedy(&mut a, &gs, k, None, false).unwrap();
            let lazy = lazy_greedy(&mut b, &gs, k, None, false).unwrap();
            if lazy.fell_back || naive.indices != lazy.selection.indices {
                divergences += 1;
            }
        }
    }
    report(
        2,
        divergences == 0,
        "lazy greedy matches exact greedy selections (100 instances per submodular model)",
    );
}

/// 3. Greedy reaches at least (1 - 1/e) of the brute-force optimum on 50
///    random instances with n = 12, k = 3 for the five monotone submodular
///    models.
#[test]
fn criterion_3_near_optimality() {
    let bound = 1.0 - (-1.0f64).exp();
    let models = [
        ModelKind::FacilityLocation,
        ModelKind::SaturatedCoverage,
        ModelKind::SetCover,
        ModelKind::ProbabilisticSetCover,
        ModelKind::FeatureBased,
    ];
    let mut worst = f64::INFINITY;
    for kind in models {
        for instance in 0..50u64 {
            let mut model = synthetic_model(kind, 12, instance).unwrap();
            let gs = GroundSet::indexed(12).unwrap();
            let greedy = lazy_greedy(&mut model, &gs, 3, None, false).unwrap();
            let (_, opt) = brute_force_opt(&model, &gs, 3).unwrap();
            if opt > 0.0 {
                worst = worst.min(greedy.selection.objective() / opt);
            }
        }
    }
    report(
        3,
        worst >= bound - 1e-9,
        &format!("greedy/OPT ratio >= 1 - 1/e on 250 small instances (worst {worst:.4})"),
    );
}

/// 4. Diminishing returns holds on 1000 random triples for each of the six
///    submodular models; the dispersion sum is supermodular. No violation
///    beyond 1e-9.
#[test]
fn criterion_4_curvature_suite() {
    let six = [
        ModelKind::FacilityLocation,
        ModelKind::SaturatedCoverage,
        ModelKind::GraphCut,
        ModelKind::FeatureBased,
        ModelKind::SetCover,
        ModelKind::ProbabilisticSetCover,
    ];
    let mut violations = 0usize;
    let mut run = |kind: ModelKind, supermodular: bool| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x44 ^ kind as u64);
        for instance in 0..10u64 {
            let n = 18 + 2 * instance as usize;
            let mut model = synthetic_model(kind, n, instance).unwrap();
            for _ in 0..100 {
                model.reset();
                let y = {
                    let mut y = random_subset(n, n - 2, &mut rng);
                    if y.is_empty() {
                        y.push(rng.random_range(0..n));
                    }
                    y
                };
                let cut = rng.random_range(0..=y.len());
                let free: Vec<usize> = (0..n).filter(|j| !y.contains(j)).collect();
                let j = free[rng.random_range(0..free.len())];
                for &i in &y[..cut] {
                    model.commit(i).unwrap();
                }
                let gain_small = model.gain(j);
                for &i in &y[cut..] {
                    model.commit(i).unwrap();
                }
                let gain_large = model.gain(j);
                let bad = if supermodular {
                    gain_small > gain_large + 1e-9
                } else {
                    gain_small < gain_large - 1e-9
                };
                if bad {
                    violations += 1;
                }
            }
        }
    };
    for kind in six {
        run(kind, false);
    }
    run(ModelKind::DisparitySum, true);
    report(
        4,
        violations == 0,
        "diminishing returns on 1000 triples per submodular model; supermodular dispersion sum",
    );
}

/// 5. Memoization speedup >= 10x for the three kernel models at n = 2000,
///    5% budget, with identical selections.
#[test]
fn criterion_5_memoization_speedup() {
    let mut all_ok = true;
    let mut summary = String::new();
    for kind in [ModelKind::FacilityLocation, ModelKind::SaturatedCoverage, ModelKind::GraphCut] {
        let cfg = BenchConfig { n: 2000, fraction: 0.05, seed: 5, repetitions: 1 };
        let r = bench_function(kind, &cfg).unwrap();
        summary.push_str(&format!("{} {:.1}x ", r.function, r.speedup));
        if !(r.selections_equal && r.speedup >= 10.0) {
            all_ok = false;
        }
    }
    report(
        5,
        all_ok,
        &format!("memoized lazy greedy >= 10x over scratch at n=2000, 5% budget ({})", summary.trim()),
    );
}

/// 6. On the 5-cluster + outlier synthetic, facility location picks one
///    item per cluster and never the outlier; dispersion min always picks
///    the outlier. 20/20 seeds.
#[test]
fn criterion_6_behavioral_contract() {
    let mut good_seeds = 0;
    for seed in 0..20u64 {
        let inst = cluster_outlier_instance(seed);
        let request = |kind: ModelKind| {
            let mut model = ModelConfig::new(kind);
            model.metric = SimilarityMetric::Gaussian { sigma: 3.0 };
            PipelineRequest {
                model,
                solver: sumsel::optimize::SolverConfig::new(sumsel::optimize::Constraint::Cardinality { k: 5 }),
                seed: Some(seed),
            }
        };
        let fl = extractive_summarize(
            &inst.features,
            &request(ModelKind::FacilityLocation),
            &AuxInputs::default(),
            Provenance::default(),
        )
        .unwrap();
        let fl_clusters: std::collections::BTreeSet<usize> = fl
            .selected
            .indices
            .iter()
            .filter_map(|&i| inst.cluster_of[i])
            .collect();
        let fl_ok = !fl.selected.indices.contains(&inst.outlier) && fl_clusters.len() == inst.clusters;

        let dm = extractive_summarize(
            &inst.features,
            &request(ModelKind::DisparityMin),
            &AuxInputs::default(),
            Provenance::default(),
        )
        .unwrap();
        let dm_ok = dm.selected.indices.contains(&inst.outlier);
        if fl_ok && dm_ok {
            good_seeds += 1;
        }
    }
    report(
        6,
        good_seeds == 20,
        &format!("cluster/outlier separation between representation and diversity ({good_seeds}/20 seeds)"),
    );
}

/// 7. Cover greedy at rho = 1 terminates with eval(X) exactly equal to
///    eval(V) on random weighted set-cover instances, and the selection is
///    minimal under greedy order.
#[test]
fn criterion_7_cover_greedy_exactness() {
    let mut ok = true;
    let mut rng = ChaCha8Rng::seed_from_u64(0x77);
    for instance in 0..30u64 {
        let n = rng.random_range(6..24);
        let universe = rng.random_range(4..16);
        let (items, mut weights) = random_concept_sets(n, universe, 5, instance);
        for w in &mut weights {
            *w = 0.5 + rng.random::<f64>() * 2.0;
        }
        let mut sc = SetCover::new(items, weights).unwrap();
        let gs = GroundSet::indexed(n).unwrap();
        let sel = cover_greedy(&mut sc, &gs, 1.0, false).unwrap();
        let full: Vec<usize> = (0..n).collect();
        let full_value = sc.eval(&full).unwrap();
        let reached = sc.eval(&sel.indices).unwrap();
        // exact equality: both sums run in universe order
        if reached != full_value {
            ok = false;
        }
        if !sel.indices.is_empty() && full_value > 0.0 {
            let without_last = &sel.indices[..sel.indices.len() - 1];
            if sc.eval(without_last).unwrap() >= full_value {
                ok = false;
            }
        }
    }
    report(7, ok, "cover greedy reaches f(V) exactly at rho = 1 and is minimal under greedy order");
}

/// 8. The evaluation measures reproduce their closed-form examples exactly,
///    and R and M are monotone under item addition on 100 random cases.
#[test]
fn criterion_8_metrics() {
    let mut ok = true;

    let scenes = SegmentAnnotation::new(
        AnnotationKind::Scene,
        vec![
            Segment { id: "s0".into(), items: vec![0, 1] },
            Segment { id: "s1".into(), items: vec![2, 3] },
        ],
    )
    .unwrap();
    ok &= metrics::representation_score(&[0, 2], &scenes).unwrap() == 1.0;
    ok &= metrics::representation_score(&[0, 1], &scenes).unwrap() == 0.5;
    ok &= metrics::representation_score(&[], &scenes).unwrap() == 0.0;

    let concepts = vec![vec![0, 1], vec![2], vec![3]];
    ok &= metrics::coverage_score(&[0, 1], &concepts).unwrap() == 0.75;
    ok &= metrics::coverage_score(&[], &concepts).unwrap() == 0.0;
    ok &= metrics::coverage_score(&[0, 1, 2], &concepts).unwrap() == 1.0;

    let events = SegmentAnnotation::new(
        AnnotationKind::OutlierEvent,
        vec![
            Segment { id: "e0".into(), items: vec![5] },
            Segment { id: "e1".into(), items: vec![9] },
        ],
    )
    .unwrap();
    ok &= metrics::outlier_score(&[5, 9, 1], &events).unwrap() == 2;
    ok &= metrics::outlier_score(&[1], &events).unwrap() == 0;
    let merged = SegmentAnnotation::new(
        AnnotationKind::OutlierEvent,
        vec![Segment { id: "e".into(), items: vec![5, 6] }],
    )
    .unwrap();
    ok &= metrics::outlier_score(&[5, 6], &merged).unwrap() == 1;

    let gt: Vec<usize> = (0..10).collect();
    let half: Vec<usize> = (0..5).collect();
    let (p, r, f1) = metrics::f1_score(&half, &gt, 20).unwrap();
    ok &= p == 1.0 && r == 0.5 && (f1 - 2.0 / 3.0).abs() <= 1e-12;
    ok &= metrics::f1_score(&[], &gt, 20).unwrap() == (0.0, 0.0, 0.0);
    ok &= metrics::f1_score(&gt, &gt, 20).unwrap() == (1.0, 1.0, 1.0);

    let clusters = SegmentAnnotation::new(
        AnnotationKind::Cluster,
        vec![
            Segment { id: "c0".into(), items: vec![0, 1] },
            Segment { id: "c1".into(), items: vec![2] },
            Segment { id: "c2".into(), items: vec![3] },
        ],
    )
    .unwrap();
    ok &= metrics::cluster_diversity_score(&[0, 2, 3], &clusters).unwrap() == 1.0;
    ok &= (metrics::cluster_diversity_score(&[0, 1], &clusters).unwrap() - 1.0 / 3.0).abs() <= 1e-12;
    ok &= metrics::cluster_diversity_score(&[], &clusters).unwrap() == 0.0;

    // monotonicity of R and M under item addition
    let mut rng = ChaCha8Rng::seed_from_u64(0x88);
    for case in 0..100 {
        let n = rng.random_range(6..30);
        let mut items: Vec<usize> = (0..n).collect();
        items.shuffle(&mut rng);
        let mut segments = Vec::new();
        for (s, chunk) in items.chunks(rng.random_range(1..5)).enumerate() {
            segments.push(Segment { id: format!("g{s}"), items: chunk.to_vec() });
        }
        let kind = if case % 2 == 0 { AnnotationKind::Scene } else { AnnotationKind::Cluster };
        let ann = SegmentAnnotation::new(kind, segments).unwrap();
        let score = |x: &[usize]| match kind {
            AnnotationKind::Scene => metrics::representation_score(x, &ann).unwrap(),
            _ => metrics::cluster_diversity_score(x, &ann).unwrap(),
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut prev = 0.0;
        for t in 1..=n {
            let s = score(&order[..t]);
            if s < prev {
                ok = false;
            }
            prev = s;
        }
    }

    report(8, ok, "R, C, D, F1, M reproduce closed-form examples; R and M monotone on 100 random chains");
}

/// 9. Dispersion-min batch selection reaches the holdout-accuracy target in
///    no more rounds than the median of random selection, over 20 seeds.
#[test]
fn criterion_9_dal_directional() {
    const TARGET: f64 = 0.95;
    let mut dm_rounds = Vec::new();
    let mut random_rounds = Vec::new();
    for seed in 0..20u64 {
        let inst = dal_instance(3000 + seed);
        for (strategy, bucket) in [
            (DalStrategy::Submodular(ModelKind::DisparityMin), &mut dm_rounds),
            (DalStrategy::Random, &mut random_rounds),
        ] {
            let cfg = DalConfig::new(strategy, 12, 5, seed);
            let log = dal_simulate(&inst.features, &inst.labels, &cfg).unwrap();
            bucket.push(log.rounds_to_accuracy(TARGET).unwrap_or(13));
        }
    }
    dm_rounds.sort_unstable();
    random_rounds.sort_unstable();
    let (dm_med, rnd_med) = (dm_rounds[10], random_rounds[10]);
    report(
        9,
        dm_med <= rnd_med,
        &format!("dispersion-min batches reach {TARGET} holdout accuracy no slower than random (median {dm_med} vs {rnd_med} rounds, 20 seeds)"),
    );
}

/// 10. Format round-trips: VDSF save/load identity and CLI manifest
///     byte-stability across two identically seeded runs.
#[test]
fn criterion_10_format_round_trips() {
    let dir = tempfile::tempdir().unwrap();

    // VDSF identity at float32 precision
    let mut rng = ChaCha8Rng::seed_from_u64(0xaa);
    let values: Vec<f64> = (0..60).map(|_| (rng.random::<f32>()) as f64).collect();
    let fm = sumsel::ingest::FeatureMatrix::from_parts(10, 6, values.clone(), None).unwrap();
    let vdsf = dir.path().join("m.vdsf");
    sumsel::ingest::save_features_binary(&fm, &vdsf).unwrap();
    let back = sumsel::ingest::load_features_binary(&vdsf).unwrap();
    let vdsf_ok = back.values() == fm.values();

    // CLI golden manifest: two runs, identical seed, byte-identical outside
    // the timing section
    let csv = dir.path().join("f.csv");
    let mut text = String::new();
    for _ in 0..25 {
        let row: Vec<String> = (0..5).map(|_| format!("{:.6}", rng.random::<f64>())).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    std::fs::write(&csv, text).unwrap();
    let run = |out: &std::path::Path| {
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_sumsel"))
            .args([
                "summarize",
                "--features",
                csv.to_str().unwrap(),
                "--model",
                "facility_location",
                "--algo",
                "lazy",
                "--k",
                "5",
                "--seed",
                "7",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timings");
        serde_json::to_string_pretty(&v).unwrap()
    };
    let a = run(&dir.path().join("m1.json"));
    let b = run(&dir.path().join("m2.json"));
    let manifest_ok = a == b;

    report(
        10,
        vdsf_ok && manifest_ok,
        "VDSF round-trip identity; CLI manifest byte-stable across seeded runs (timings excluded)",
    );
}
