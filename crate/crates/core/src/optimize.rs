//! Greedy maximization: exact (naive) greedy, lazy greedy over a stale-bound
//! priority queue, budgeted (knapsack) greedy, cover greedy, stream greedy,
//! the max-min dispersion heuristic, and a brute-force verifier for small
//! instances.
//!
//! All solvers break ties toward the lowest item index and are fully
//! deterministic for a given seed, so lazy and naive runs of a submodular
//! objective produce identical selection sequences.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::functions::Model;
use crate::ground::{Family, GroundSet, ModelInfo, Objective, Selection};
use crate::par;

/// Constraint mode for a solver run.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Constraint {
    Cardinality { k: usize },
    Knapsack { budget: f64 },
    Cover { rho: f64 },
    Stream { tau: f64, seed: Option<u64> },
}

/// Full solver configuration. Ties always break toward the lowest index.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub constraint: Constraint,
    /// Use the lazy priority queue where valid (cardinality mode,
    /// submodular objective). Non-submodular objectives silently fall back
    /// to the exact scan.
    pub lazy: bool,
    /// Stop once the best gain drops to <= 0. Defaults to on for
    /// non-monotone objectives and off for monotone ones.
    pub stop_at_zero: Option<bool>,
    /// Fan the fresh-gain scan out over threads.
    pub parallel: bool,
}

impl SolverConfig {
    pub fn new(constraint: Constraint) -> Self {
        SolverConfig { constraint, lazy: true, stop_at_zero: None, parallel: false }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self.constraint {
            Constraint::Cardinality { k } => {
                if k < 1 || k > n {
                    return Err(Error::InvalidParam(format!("k = {k} must satisfy 1 <= k <= n = {n}")));
                }
            }
            Constraint::Knapsack { budget } => {
                if !budget.is_finite() || budget <= 0.0 {
                    return Err(Error::InvalidParam(format!("budget {budget} must be > 0")));
                }
            }
            Constraint::Cover { rho } => {
                if !(rho > 0.0 && rho <= 1.0) {
                    return Err(Error::InvalidParam(format!("rho {rho} must lie in (0, 1]")));
                }
            }
            Constraint::Stream { tau, .. } => {
                if tau.is_nan() {
                    return Err(Error::InvalidParam("tau is NaN".into()));
                }
            }
        }
        Ok(())
    }
}

/// Outcome of a dispatched solver run.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub selection: Selection,
    /// Algorithm actually executed (after fallbacks and dispatch).
    pub algorithm: &'static str,
    /// Lazy-queue refresh count, when the lazy path ran.
    pub lazy_resorts: Option<usize>,
    /// True when lazy was requested but the objective is not submodular.
    pub lazy_fallback: bool,
}

/// Checks the model/algorithm compatibility matrix: stream greedy is only
/// available to similarity- and distance-based objectives, cover greedy
/// requires monotonicity.
pub fn check_compatibility(info: &ModelInfo, constraint: &Constraint) -> Result<()> {
    match constraint {
        Constraint::Cardinality { .. } | Constraint::Knapsack { .. } => Ok(()),
        Constraint::Cover { .. } => {
            if info.monotone {
                Ok(())
            } else {
                Err(Error::Unsupported(format!(
                    "cover greedy requires a monotone objective; `{}` is not monotone \
                     (see the model/algorithm compatibility matrix)",
                    info.name
                )))
            }
        }
        Constraint::Stream { .. } => match info.family {
            Family::Similarity | Family::Distance => Ok(()),
            Family::Coverage | Family::Modular => Err(Error::Unsupported(format!(
                "stream greedy supports similarity- and distance-based objectives only; \
                 `{}` is not one (see the model/algorithm compatibility matrix)",
                info.name
            ))),
        },
    }
}

fn check_ground(oracle: &impl Objective, gs: &GroundSet) -> Result<()> {
    if oracle.ground_size() != gs.len() {
        return Err(Error::InvalidSelection(format!(
            "objective over {} items, ground set has {}",
            oracle.ground_size(),
            gs.len()
        )));
    }
    Ok(())
}

fn stop_at_zero(opt: Option<bool>, info: &ModelInfo) -> bool {
    opt.unwrap_or(!info.monotone)
}

fn unselected(oracle: &impl Objective) -> Vec<usize> {
    (0..oracle.ground_size())
        .filter(|&j| !oracle.is_selected(j))
        .collect()
}

/// Exact greedy: k rounds of argmax over freshly computed gains.
pub fn naive_greedy<O: Objective>(
    oracle: &mut O,
    gs: &GroundSet,
    k: usize,
    stop: Option<bool>,
    parallel: bool,
) -> Result<Selection> {
    check_ground(oracle, gs)?;
    let n = oracle.ground_size();
    if k < 1 || k > n {
        return Err(Error::InvalidParam(format!("k = {k} must satisfy 1 <= k <= n = {n}")));
    }
    oracle.reset();
    let stop = stop_at_zero(stop, &oracle.info());
    let mut selection = Selection::new();
    let mut value = 0.0;
    for _ in 0..k {
        let candidates = unselected(&*oracle);
        let Some((best, gain)) = par::argmax_scored(&candidates, |j| oracle.gain(j), parallel) else {
            break;
        };
        if stop && gain <= 0.0 {
            break;
        }
        oracle.commit(best)?;
        value += gain;
        selection.push(best, value);
    }
    Ok(selection)
}

#[derive(Debug)]
struct QueueEntry {
    item: usize,
    bound: f64,
    round: usize,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.item == other.item
    }
}

impl Eq for QueueEntry {}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap: larger bound first, then smaller index
        self.bound
            .partial_cmp(&other.bound)
            .expect("gain must not be NaN")
            .then_with(|| other.item.cmp(&self.item))
    }
}

/// Result of a lazy-greedy run.
#[derive(Debug, Clone)]
pub struct LazyOutcome {
    pub selection: Selection,
    /// Total number of stale-bound refreshes across all rounds.
    pub resorts: usize,
    /// Largest refresh count within a single round (always <= n).
    pub max_round_resorts: usize,
    /// True when the objective was not submodular and the exact scan ran
    /// instead.
    pub fell_back: bool,
}

/// Lazy greedy: maintains a priority queue of stale upper bounds `rho(j)`
/// and only refreshes the queue head. Valid for submodular objectives,
/// where stale bounds still dominate true gains; other objectives fall
/// back to [`naive_greedy`] and produce the identical selection either way.
pub fn lazy_greedy<O: Objective>(
    oracle: &mut O,
    gs: &GroundSet,
    k: usize,
    stop: Option<bool>,
    parallel: bool,
) -> Result<LazyOutcome> {
    check_ground(oracle, gs)?;
    if !oracle.info().submodular {
        let selection = naive_greedy(oracle, gs, k, stop, parallel)?;
        return Ok(LazyOutcome { selection, resorts: 0, max_round_resorts: 0, fell_back: true });
    }
    let n = oracle.ground_size();
    if k < 1 || k > n {
        return Err(Error::InvalidParam(format!("k = {k} must satisfy 1 <= k <= n = {n}")));
    }
    oracle.reset();
    let stop = stop_at_zero(stop, &oracle.info());

    // singleton gains are exact for round 0
    let initial = par::map_indexed(n, |j| oracle.gain(j), parallel);
    let mut heap: BinaryHeap<QueueEntry> = initial
        .into_iter()
        .enumerate()
        .map(|(item, bound)| QueueEntry { item, bound, round: 0 })
        .collect();

    let mut selection = Selection::new();
    let mut value = 0.0;
    let mut resorts = 0;
    let mut max_round_resorts = 0;
    for round in 0..k {
        let mut round_resorts = 0;
        loop {
            let Some(top) = heap.pop() else {
                return Ok(LazyOutcome { selection, resorts, max_round_resorts, fell_back: false });
            };
            if top.round == round {
                // a fresh head dominates every remaining bound, so it is
                // the true argmax of this round
                if stop && top.bound <= 0.0 {
                    return Ok(LazyOutcome { selection, resorts, max_round_resorts, fell_back: false });
                }
                oracle.commit(top.item)?;
                value += top.bound;
                selection.push(top.item, value);
                break;
            }
            let bound = oracle.gain(top.item);
            resorts += 1;
            round_resorts += 1;
            heap.push(QueueEntry { item: top.item, bound, round });
        }
        max_round_resorts = max_round_resorts.max(round_resorts);
    }
    Ok(LazyOutcome { selection, resorts, max_round_resorts, fell_back: false })
}

/// Budgeted (knapsack) greedy: argmax of cost-normalized gain among items
/// that still fit, until nothing fits. The cost-ratio sequence alone can
/// lose to one expensive high-value item, so the better of the greedy set
/// and the best feasible singleton is returned.
pub fn budgeted_greedy<O: Objective>(
    oracle: &mut O,
    gs: &GroundSet,
    budget: f64,
    stop: Option<bool>,
    parallel: bool,
) -> Result<Selection> {
    check_ground(oracle, gs)?;
    if !budget.is_finite() || budget <= 0.0 {
        return Err(Error::InvalidParam(format!("budget {budget} must be > 0")));
    }
    if let Some(zero) = gs.costs().iter().position(|&c| c == 0.0) {
        return Err(Error::InvalidCost(format!("item {zero} has zero cost")));
    }
    oracle.reset();
    let stop = stop_at_zero(stop, &oracle.info());
    let mut selection = Selection::new();
    let mut value = 0.0;
    let mut remaining = budget;
    loop {
        let candidates: Vec<usize> = (0..oracle.ground_size())
            .filter(|&j| !oracle.is_selected(j) && gs.cost(j) <= remaining)
            .collect();
        let Some((best, _ratio)) =
            par::argmax_scored(&candidates, |j| oracle.gain(j) / gs.cost(j), parallel)
        else {
            break;
        };
        let gain = oracle.gain(best);
        if stop && gain <= 0.0 {
            break;
        }
        oracle.commit(best)?;
        value += gain;
        remaining -= gs.cost(best);
        selection.push(best, value);
    }

    let feasible: Vec<usize> = (0..oracle.ground_size()).filter(|&j| gs.cost(j) <= budget).collect();
    let singleton = par::argmax_scored(
        &feasible,
        |j| oracle.eval(&[j]).expect("singleton is valid"),
        parallel,
    );
    if let Some((j, singleton_value)) = singleton {
        if singleton_value > value {
            oracle.reset();
            oracle.commit(j)?;
            let mut best_single = Selection::new();
            best_single.push(j, singleton_value);
            return Ok(best_single);
        }
    }
    Ok(selection)
}

/// Cover greedy: adds argmax-gain items until the committed value reaches
/// `rho * f(V)` (within 1e-9). With rho = 1 this is the classical stopping
/// rule f(X) = f(V).
pub fn cover_greedy<O: Objective>(
    oracle: &mut O,
    gs: &GroundSet,
    rho: f64,
    parallel: bool,
) -> Result<Selection> {
    check_ground(oracle, gs)?;
    let info = oracle.info();
    check_compatibility(&info, &Constraint::Cover { rho })?;
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidParam(format!("rho {rho} must lie in (0, 1]")));
    }
    let n = oracle.ground_size();
    let full: Vec<usize> = (0..n).collect();
    let full_value = oracle.eval(&full)?;
    let target = rho * full_value;
    oracle.reset();
    let mut selection = Selection::new();
    while oracle.current_value() < target - 1e-9 {
        let candidates = unselected(&*oracle);
        let Some((best, _gain)) = par::argmax_scored(&candidates, |j| oracle.gain(j), parallel) else {
            break;
        };
        oracle.commit(best)?;
        selection.push(best, oracle.current_value());
    }
    Ok(selection)
}

/// Stream greedy: one pass over a permutation, adding any item whose gain
/// meets the threshold. The permutation is the natural order, or a seeded
/// shuffle when a seed is given.
pub fn stream_greedy<O: Objective>(
    oracle: &mut O,
    gs: &GroundSet,
    tau: f64,
    seed: Option<u64>,
) -> Result<Selection> {
    check_ground(oracle, gs)?;
    let info = oracle.info();
    check_compatibility(&info, &Constraint::Stream { tau, seed })?;
    if tau.is_nan() {
        return Err(Error::InvalidParam("tau is NaN".into()));
    }
    oracle.reset();
    let mut order: Vec<usize> = (0..oracle.ground_size()).collect();
    if let Some(seed) = seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut selection = Selection::new();
    let mut value = 0.0;
    for j in order {
        let gain = oracle.gain(j);
        if gain >= tau {
            oracle.commit(j)?;
            value += gain;
            selection.push(j, value);
        }
    }
    Ok(selection)
}

/// Max-min dispersion heuristic for [`crate::functions::DisparityMin`]:
/// seeds with the farthest pair, then repeatedly adds the item maximizing
/// the distance to its nearest selected neighbor.
pub fn disparity_min_greedy(
    oracle: &mut crate::functions::DisparityMin,
    gs: &GroundSet,
    k: usize,
) -> Result<Selection> {
    check_ground(oracle, gs)?;
    let n = oracle.ground_size();
    if k < 2 || k > n {
        return Err(Error::InvalidParam(format!("k = {k} must satisfy 2 <= k <= n = {n}")));
    }
    oracle.reset();
    let distances = oracle.distances().clone();
    let (mut si, mut sj, mut best) = (0, 1, f64::NEG_INFINITY);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = distances.get(i, j);
            if d > best {
                (si, sj, best) = (i, j, d);
            }
        }
    }
    let mut selection = Selection::new();
    oracle.commit(si)?;
    selection.push(si, oracle.current_value());
    oracle.commit(sj)?;
    selection.push(sj, oracle.current_value());
    while selection.len() < k {
        let candidates = unselected(&*oracle);
        let nearest = |j: usize| {
            oracle
                .selection()
                .iter()
                .map(|&l| distances.get(j, l))
                .fold(f64::INFINITY, f64::min)
        };
        let Some((next, _)) = par::argmax_scored(&candidates, nearest, false) else {
            break;
        };
        oracle.commit(next)?;
        selection.push(next, oracle.current_value());
    }
    Ok(selection)
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k.min(n));
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Exact maximizer over all k-subsets, for verification on small instances.
/// Ties go to the lexicographically smallest set.
pub fn brute_force_opt<O: Objective>(oracle: &O, gs: &GroundSet, k: usize) -> Result<(Vec<usize>, f64)> {
    check_ground(oracle, gs)?;
    let n = oracle.ground_size();
    if k < 1 || k > n {
        return Err(Error::InvalidParam(format!("k = {k} must satisfy 1 <= k <= n = {n}")));
    }
    if binomial(n, k) > 1e6 {
        return Err(Error::TooLarge(format!("C({n}, {k}) exceeds 1e6 subsets")));
    }
    use itertools::Itertools;
    let mut best_set = Vec::new();
    let mut best_value = f64::NEG_INFINITY;
    for combo in (0..n).combinations(k) {
        let value = oracle.eval(&combo)?;
        if value > best_value {
            best_value = value;
            best_set = combo;
        }
    }
    Ok((best_set, best_value))
}

/// Dispatches a configured run: validates the compatibility matrix, routes
/// cardinality-constrained dispersion-min to its dedicated heuristic, and
/// otherwise picks the constraint's greedy (lazy where requested and valid).
pub fn solve(model: &mut Model, gs: &GroundSet, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate(gs.len())?;
    let info = model.info();
    check_compatibility(&info, &cfg.constraint)?;
    match cfg.constraint {
        Constraint::Cardinality { k } => {
            if let Model::DisparityMin(dm) = model {
                let selection = disparity_min_greedy(dm, gs, k)?;
                return Ok(SolveReport {
                    selection,
                    algorithm: "disparity_min_greedy",
                    lazy_resorts: None,
                    lazy_fallback: false,
                });
            }
            if cfg.lazy {
                let outcome = lazy_greedy(model, gs, k, cfg.stop_at_zero, cfg.parallel)?;
                Ok(SolveReport {
                    selection: outcome.selection,
                    algorithm: if outcome.fell_back { "greedy" } else { "lazy_greedy" },
                    lazy_resorts: (!outcome.fell_back).then_some(outcome.resorts),
                    lazy_fallback: outcome.fell_back,
                })
            } else {
                let selection = naive_greedy(model, gs, k, cfg.stop_at_zero, cfg.parallel)?;
                Ok(SolveReport { selection, algorithm: "greedy", lazy_resorts: None, lazy_fallback: false })
            }
        }
        Constraint::Knapsack { budget } => {
            let selection = budgeted_greedy(model, gs, budget, cfg.stop_at_zero, cfg.parallel)?;
            Ok(SolveReport { selection, algorithm: "budgeted_greedy", lazy_resorts: None, lazy_fallback: false })
        }
        Constraint::Cover { rho } => {
            let selection = cover_greedy(model, gs, rho, cfg.parallel)?;
            Ok(SolveReport { selection, algorithm: "cover_greedy", lazy_resorts: None, lazy_fallback: false })
        }
        Constraint::Stream { tau, seed } => {
            let selection = stream_greedy(model, gs, tau, seed)?;
            Ok(SolveReport { selection, algorithm: "stream_greedy", lazy_resorts: None, lazy_fallback: false })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{DisparityMin, FacilityLocation, SetCover};
    use crate::similarity::{DistanceMatrix, Kernel};
    use std::sync::Arc;

    fn three_item_kernel() -> Arc<Kernel> {
        Arc::new(
            Kernel::from_dense(
                3,
                vec![
                    1.0, 0.9, 0.0, //
                    0.9, 1.0, 0.0, //
                    0.0, 0.0, 1.0,
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn naive_greedy_tie_breaks_low_index() {
        let gs = GroundSet::indexed(3).unwrap();
        let mut fl = FacilityLocation::new(three_item_kernel());
        let sel = naive_greedy(&mut fl, &gs, 1, None, false).unwrap();
        // singleton gains: 1.9, 1.9, 1.0 -> tie between 0 and 1 -> 0
        assert_eq!(sel.indices, vec![0]);
    }

    #[test]
    fn naive_greedy_matches_brute_force_pair() {
        let gs = GroundSet::indexed(3).unwrap();
        let mut fl = FacilityLocation::new(three_item_kernel());
        let sel = naive_greedy(&mut fl, &gs, 2, None, false).unwrap();
        assert_eq!(sel.indices, vec![0, 2]);
        assert!((sel.objective() - 2.9).abs() <= 1e-12);
        let (opt_set, opt_val) = brute_force_opt(&fl, &gs, 2).unwrap();
        assert_eq!(opt_set, vec![0, 2]);
        assert!((opt_val - 2.9).abs() <= 1e-12);
    }

    #[test]
    fn full_selection_reaches_full_value() {
        let gs = GroundSet::indexed(3).unwrap();
        let mut fl = FacilityLocation::new(three_item_kernel());
        let sel = naive_greedy(&mut fl, &gs, 3, None, false).unwrap();
        let full = fl.eval(&[0, 1, 2]).unwrap();
        assert!((sel.objective() - full).abs() <= 1e-9);
    }

    #[test]
    fn lazy_falls_back_for_non_submodular() {
        let d = Arc::new(
            DistanceMatrix::from_dense(3, vec![0.0, 3.0, 1.0, 3.0, 0.0, 2.0, 1.0, 2.0, 0.0]).unwrap(),
        );
        let gs = GroundSet::indexed(3).unwrap();
        let mut a = DisparityMin::new(d.clone());
        let lazy = lazy_greedy(&mut a, &gs, 2, None, false).unwrap();
        assert!(lazy.fell_back);
        let mut b = DisparityMin::new(d);
        let naive = naive_greedy(&mut b, &gs, 2, None, false).unwrap();
        assert_eq!(lazy.selection.indices, naive.indices);
    }

    #[test]
    fn budgeted_reduces_to_cardinality_with_unit_costs() {
        let gs = GroundSet::indexed(3).unwrap();
        let mut fl = FacilityLocation::new(three_item_kernel());
        let sel = budgeted_greedy(&mut fl, &gs, 2.0, None, false).unwrap();
        assert_eq!(sel.indices, vec![0, 2]);
    }

    #[test]
    fn budgeted_skips_infeasible_items() {
        let gs = GroundSet::new(
            (0..3).map(|i| i.to_string()).collect(),
            Some(vec![1.0, 1.0, 10.0]),
        )
        .unwrap();
        let mut fl = FacilityLocation::new(three_item_kernel());
        let sel = budgeted_greedy(&mut fl, &gs, 2.0, None, false).unwrap();
        assert!(!sel.indices.contains(&2));
        assert!(sel.total_cost(&gs).unwrap() <= 2.0);
    }

    #[test]
    fn budgeted_rejects_zero_cost() {
        let gs = GroundSet::new(
            (0..3).map(|i| i.to_string()).collect(),
            Some(vec![1.0, 0.0, 1.0]),
        )
        .unwrap();
        let mut fl = FacilityLocation::new(three_item_kernel());
        assert!(matches!(
            budgeted_greedy(&mut fl, &gs, 2.0, None, false),
            Err(Error::InvalidCost(_))
        ));
    }

    #[test]
    fn cover_greedy_set_cover_trace() {
        let gs = GroundSet::indexed(3).unwrap();
        let mut sc = SetCover::new(vec![vec![0, 1], vec![1, 2], vec![0]], vec![1.0; 3]).unwrap();
        let sel = cover_greedy(&mut sc, &gs, 1.0, false).unwrap();
        assert_eq!(sel.indices, vec![0, 1]);
        assert_eq!(sel.objective(), 3.0);
    }

    #[test]
    fn cover_greedy_zero_objective_selects_nothing() {
        let gs = GroundSet::indexed(2).unwrap();
        let mut sc = SetCover::new(vec![vec![], vec![]], vec![]).unwrap();
        let sel = cover_greedy(&mut sc, &gs, 1.0, false).unwrap();
        assert!(sel.indices.is_empty());
    }

    #[test]
    fn stream_greedy_threshold_trace() {
        let gs = GroundSet::indexed(3).unwrap();
        let mut fl = FacilityLocation::new(three_item_kernel());
        let sel = stream_greedy(&mut fl, &gs, 1.5, None).unwrap();
        // gains in natural order: 1.9 (add 0), then 0.1 and 1.0, both below
        assert_eq!(sel.indices, vec![0]);

        let mut fl = FacilityLocation::new(three_item_kernel());
        let all = stream_greedy(&mut fl, &gs, f64::NEG_INFINITY, None).unwrap();
        assert_eq!(all.indices, vec![0, 1, 2]);

        let mut fl = FacilityLocation::new(three_item_kernel());
        let none = stream_greedy(&mut fl, &gs, 100.0, None).unwrap();
        assert!(none.indices.is_empty());
    }

    #[test]
    fn stream_rejects_coverage_models() {
        let gs = GroundSet::indexed(2).unwrap();
        let mut sc = SetCover::new(vec![vec![0], vec![1]], vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            stream_greedy(&mut sc, &gs, 0.5, None),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn cover_rejects_non_monotone() {
        let d = Arc::new(DistanceMatrix::from_dense(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap());
        let gs = GroundSet::indexed(2).unwrap();
        let mut dm = DisparityMin::new(d);
        assert!(matches!(
            cover_greedy(&mut dm, &gs, 1.0, false),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn disparity_heuristic_examples() {
        let d = Arc::new(
            DistanceMatrix::from_dense(3, vec![0.0, 3.0, 1.0, 3.0, 0.0, 2.0, 1.0, 2.0, 0.0]).unwrap(),
        );
        let gs = GroundSet::indexed(3).unwrap();

        let mut dm = DisparityMin::new(d.clone());
        let pair = disparity_min_greedy(&mut dm, &gs, 2).unwrap();
        assert_eq!(pair.indices, vec![0, 1]);

        let mut dm = DisparityMin::new(d);
        let all = disparity_min_greedy(&mut dm, &gs, 3).unwrap();
        assert_eq!(all.indices.len(), 3);
        assert_eq!(all.objective(), 1.0);
    }

    #[test]
    fn disparity_heuristic_picks_extremes_on_a_line() {
        // points 0, 1, 10 on a line
        let coords = [0.0f64, 1.0, 10.0];
        let mut v = vec![0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                v[i * 3 + j] = (coords[i] - coords[j]).abs();
            }
        }
        let d = Arc::new(DistanceMatrix::from_dense(3, v).unwrap());
        let gs = GroundSet::indexed(3).unwrap();
        let mut dm = DisparityMin::new(d);
        let sel = disparity_min_greedy(&mut dm, &gs, 2).unwrap();
        assert_eq!(sel.indices, vec![0, 2]);
    }

    #[test]
    fn brute_force_identity_kernel_tie() {
        let mut v = vec![0.0; 16];
        for i in 0..4 {
            v[i * 4 + i] = 1.0;
        }
        let kernel = Arc::new(Kernel::from_dense(4, v).unwrap());
        let gs = GroundSet::indexed(4).unwrap();
        let fl = FacilityLocation::new(kernel);
        let (set, value) = brute_force_opt(&fl, &gs, 2).unwrap();
        assert_eq!(set, vec![0, 1]);
        assert_eq!(value, 2.0);
    }

    #[test]
    fn brute_force_full_set_is_the_only_candidate() {
        let gs = GroundSet::indexed(3).unwrap();
        let fl = FacilityLocation::new(three_item_kernel());
        let (set, value) = brute_force_opt(&fl, &gs, 3).unwrap();
        assert_eq!(set, vec![0, 1, 2]);
        assert_eq!(value, fl.eval(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn brute_force_guards_instance_size() {
        let kernel = Arc::new(Kernel::from_dense(64, {
            let mut v = vec![0.0; 64 * 64];
            for i in 0..64 {
                v[i * 64 + i] = 1.0;
            }
            v
        })
        .unwrap());
        let gs = GroundSet::indexed(64).unwrap();
        let fl = FacilityLocation::new(kernel);
        assert!(matches!(brute_force_opt(&fl, &gs, 10), Err(Error::TooLarge(_))));
    }
}
