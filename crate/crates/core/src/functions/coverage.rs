//! Coverage models: weighted set cover, probabilistic set cover, and the
//! concave feature-based objective.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ground::{check_eval_indices, ModelInfo, Objective, SelState};
use crate::ingest::FeatureMatrix;

use super::{ModelKind, Psi};

/// f(X) = total weight of the concepts covered by X.
#[derive(Debug, Clone)]
pub struct SetCover {
    item_concepts: Vec<Vec<u32>>,
    weights: Vec<f64>,
    covered: Vec<bool>,
    sel: SelState,
}

impl SetCover {
    pub fn new(item_concepts: Vec<Vec<u32>>, weights: Vec<f64>) -> Result<Self> {
        for (u, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight(format!("concept {u} has weight {w}")));
            }
        }
        let m = weights.len();
        let mut item_concepts = item_concepts;
        for (i, cs) in item_concepts.iter_mut().enumerate() {
            cs.sort_unstable();
            cs.dedup();
            if let Some(&bad) = cs.iter().find(|&&u| u as usize >= m) {
                return Err(Error::InvalidParam(format!(
                    "item {i} references concept {bad}, universe has {m}"
                )));
            }
        }
        let n = item_concepts.len();
        Ok(SetCover { item_concepts, weights: weights.clone(), covered: vec![false; weights.len()], sel: SelState::new(n) })
    }

    /// Covered weight summed in universe order; with a complete cover this
    /// is bit-identical to `eval` of the full ground set.
    fn weight_of(&self, covered: &[bool]) -> f64 {
        covered
            .iter()
            .zip(&self.weights)
            .filter(|(&c, _)| c)
            .map(|(_, &w)| w)
            .sum()
    }
}

impl Objective for SetCover {
    fn ground_size(&self) -> usize {
        self.item_concepts.len()
    }

    fn info(&self) -> ModelInfo {
        ModelKind::SetCover.static_info(0.0)
    }

    fn eval(&self, items: &[usize]) -> Result<f64> {
        check_eval_indices(items, self.ground_size())?;
        let mut covered = vec![false; self.weights.len()];
        for &i in items {
            for &u in &self.item_concepts[i] {
                covered[u as usize] = true;
            }
        }
        Ok(self.weight_of(&covered))
    }

    fn gain(&self, item: usize) -> f64 {
        debug_assert!(!self.sel.contains(item));
        self.item_concepts[item]
            .iter()
            .filter(|&&u| !self.covered[u as usize])
            .map(|&u| self.weights[u as usize])
            .sum()
    }

    fn commit(&mut self, item: usize) -> Result<()> {
        self.check_free(item)?;
        for &u in &self.item_concepts[item] {
            self.covered[u as usize] = true;
        }
        self.sel.push(item);
        Ok(())
    }

    fn reset(&mut self) {
        self.covered.fill(false);
        self.sel.reset();
    }

    fn selection(&self) -> &[usize] {
        self.sel.order()
    }

    fn is_selected(&self, item: usize) -> bool {
        self.sel.contains(item)
    }

    fn current_value(&self) -> f64 {
        self.weight_of(&self.covered)
    }
}

/// f(X) = sum_u w_u (1 - prod_{k in X} (1 - p_ku)). Statistics: the
/// residual non-cover probability per concept.
#[derive(Debug, Clone)]
pub struct ProbabilisticSetCover {
    /// Row-major n x m item-covers-concept probabilities.
    probs: Vec<f64>,
    n: usize,
    m: usize,
    weights: Vec<f64>,
    residual: Vec<f64>,
    sel: SelState,
}

impl ProbabilisticSetCover {
    pub fn new(n: usize, m: usize, probs: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if probs.len() != n * m {
            return Err(Error::InvalidParam(format!("{} probabilities for {n} x {m}", probs.len())));
        }
        if weights.len() != m {
            return Err(Error::InvalidParam(format!("{} weights for {m} concepts", weights.len())));
        }
        for &p in &probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p.to_string()));
            }
        }
        for &w in &weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight(w.to_string()));
            }
        }
        Ok(ProbabilisticSetCover { probs, n, m, weights, residual: vec![1.0; m], sel: SelState::new(n) })
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.probs[i * self.m..(i + 1) * self.m]
    }
}

impl Objective for ProbabilisticSetCover {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn info(&self) -> ModelInfo {
        ModelKind::ProbabilisticSetCover.static_info(0.0)
    }

    fn eval(&self, items: &[usize]) -> Result<f64> {
        check_eval_indices(items, self.ground_size())?;
        let mut total = 0.0;
        for u in 0..self.m {
            let residual: f64 = items.iter().map(|&k| 1.0 - self.row(k)[u]).product();
            total += self.weights[u] * (1.0 - residual);
        }
        Ok(total)
    }

    fn gain(&self, item: usize) -> f64 {
        debug_assert!(!self.sel.contains(item));
        self.row(item)
            .iter()
            .zip(&self.residual)
            .zip(&self.weights)
            .map(|((&p, &r), &w)| w * r * p)
            .sum()
    }

    fn commit(&mut self, item: usize) -> Result<()> {
        self.check_free(item)?;
        for (r, &p) in self.residual.iter_mut().zip(self.probs[item * self.m..(item + 1) * self.m].iter()) {
            *r *= 1.0 - p;
        }
        self.sel.push(item);
        Ok(())
    }

    fn reset(&mut self) {
        self.residual.fill(1.0);
        self.sel.reset();
    }

    fn selection(&self) -> &[usize] {
        self.sel.order()
    }

    fn is_selected(&self, item: usize) -> bool {
        self.sel.contains(item)
    }

    fn current_value(&self) -> f64 {
        self.residual
            .iter()
            .zip(&self.weights)
            .map(|(&r, &w)| w * (1.0 - r))
            .sum()
    }
}

/// f(X) = sum_f psi(w_f(X)) with w_f(X) = sum_{j in X} q_jf over non-negative
/// item features. Statistics: accumulated per-feature mass.
#[derive(Debug, Clone)]
pub struct FeatureBased {
    features: Arc<FeatureMatrix>,
    psi: Psi,
    acc: Vec<f64>,
    sel: SelState,
}

impl FeatureBased {
    pub fn new(features: Arc<FeatureMatrix>, psi: Psi) -> Self {
        let (n, d) = (features.n(), features.d());
        FeatureBased { features, psi, acc: vec![0.0; d], sel: SelState::new(n) }
    }

    pub fn psi(&self) -> Psi {
        self.psi
    }
}

impl Objective for FeatureBased {
    fn ground_size(&self) -> usize {
        self.features.n()
    }

    fn info(&self) -> ModelInfo {
        ModelKind::FeatureBased.static_info(0.0)
    }

    fn eval(&self, items: &[usize]) -> Result<f64> {
        check_eval_indices(items, self.ground_size())?;
        let mut acc = vec![0.0; self.features.d()];
        for &j in items {
            for (a, &q) in acc.iter_mut().zip(self.features.row(j)) {
                *a += q;
            }
        }
        Ok(acc.into_iter().map(|w| self.psi.apply(w)).sum())
    }

    fn gain(&self, item: usize) -> f64 {
        debug_assert!(!self.sel.contains(item));
        self.features
            .row(item)
            .iter()
            .zip(&self.acc)
            .map(|(&q, &w)| self.psi.apply(w + q) - self.psi.apply(w))
            .sum()
    }

    fn commit(&mut self, item: usize) -> Result<()> {
        self.check_free(item)?;
        for (a, &q) in self.acc.iter_mut().zip(self.features.row(item)) {
            *a += q;
        }
        self.sel.push(item);
        Ok(())
    }

    fn reset(&mut self) {
        self.acc.fill(0.0);
        self.sel.reset();
    }

    fn selection(&self) -> &[usize] {
        self.sel.order()
    }

    fn is_selected(&self, item: usize) -> bool {
        self.sel.contains(item)
    }

    fn current_value(&self) -> f64 {
        self.acc.iter().map(|&w| self.psi.apply(w)).sum()
    }
}
