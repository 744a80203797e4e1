//! Importance and query-relevance models: the modular importance function
//! and max marginal relevance.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ground::{check_eval_indices, ModelInfo, Objective, SelState};
use crate::similarity::Kernel;

use super::ModelKind;

/// f(X) = sum_{j in X} r_j over non-negative relevance scores. Gains are
/// independent of the selection.
#[derive(Debug, Clone)]
pub struct Modular {
    scores: Vec<f64>,
    sel: SelState,
}

impl Modular {
    pub fn new(scores: Vec<f64>) -> Result<Self> {
        for (i, &r) in scores.iter().enumerate() {
            if !r.is_finite() || r < 0.0 {
                return Err(Error::InvalidParam(format!("relevance score r[{i}] = {r} must be >= 0")));
            }
        }
        let n = scores.len();
        Ok(Modular { scores, sel: SelState::new(n) })
    }
}

impl Objective for Modular {
    fn ground_size(&self) -> usize {
        self.scores.len()
    }

    fn info(&self) -> ModelInfo {
        ModelKind::Modular.static_info(0.0)
    }

    fn eval(&self, items: &[usize]) -> Result<f64> {
        check_eval_indices(items, self.ground_size())?;
        Ok(items.iter().map(|&j| self.scores[j]).sum())
    }

    fn gain(&self, item: usize) -> f64 {
        debug_assert!(!self.sel.contains(item));
        self.scores[item]
    }

    fn commit(&mut self, item: usize) -> Result<()> {
        self.check_free(item)?;
        self.sel.push(item);
        Ok(())
    }

    fn reset(&mut self) {
        self.sel.reset();
    }

    fn selection(&self) -> &[usize] {
        self.sel.order()
    }

    fn is_selected(&self, item: usize) -> bool {
        self.sel.contains(item)
    }

    fn current_value(&self) -> f64 {
        self.sel.order().iter().map(|&j| self.scores[j]).sum()
    }
}

/// Max marginal relevance: gain(j | X) = theta * rel_j - (1 - theta) *
/// max_{k in X} s_kj. The value of a selection is the sum of gains in
/// selection order, which makes the objective order-dependent and
/// non-submodular.
#[derive(Debug, Clone)]
pub struct MaxMarginalRelevance {
    kernel: Arc<Kernel>,
    relevance: Vec<f64>,
    theta: f64,
    best_sim: Vec<f64>,
    value: f64,
    sel: SelState,
}

impl MaxMarginalRelevance {
    pub fn new(kernel: Arc<Kernel>, relevance: Vec<f64>, theta: f64) -> Result<Self> {
        let n = kernel.n();
        if relevance.len() != n {
            return Err(Error::InvalidParam(format!(
                "{} relevance scores for {n} items",
                relevance.len()
            )));
        }
        for (i, &r) in relevance.iter().enumerate() {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::InvalidParam(format!("relevance rel[{i}] = {r} must lie in [0, 1]")));
            }
        }
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidParam(format!("theta {theta} must lie in [0, 1]")));
        }
        Ok(MaxMarginalRelevance {
            kernel,
            relevance,
            theta,
            best_sim: vec![0.0; n],
            value: 0.0,
            sel: SelState::new(n),
        })
    }
}

impl Objective for MaxMarginalRelevance {
    fn ground_size(&self) -> usize {
        self.kernel.n()
    }

    fn info(&self) -> ModelInfo {
        ModelKind::MaxMarginalRelevance.static_info(0.0)
    }

    fn eval(&self, items: &[usize]) -> Result<f64> {
        check_eval_indices(items, self.ground_size())?;
        let mut total = 0.0;
        for (t, &j) in items.iter().enumerate() {
            let redundancy = items[..t]
                .iter()
                .map(|&k| self.kernel.get(k, j))
                .fold(0.0f64, f64::max);
            total += self.theta * self.relevance[j] - (1.0 - self.theta) * redundancy;
        }
        Ok(total)
    }

    fn gain(&self, item: usize) -> f64 {
        debug_assert!(!self.sel.contains(item));
        self.theta * self.relevance[item] - (1.0 - self.theta) * self.best_sim[item]
    }

    fn commit(&mut self, item: usize) -> Result<()> {
        self.check_free(item)?;
        self.value += self.gain(item);
        let best = &mut self.best_sim;
        self.kernel.for_row(item, |i, s| {
            if s > best[i] {
                best[i] = s;
            }
        });
        self.sel.push(item);
        Ok(())
    }

    fn reset(&mut self) {
        self.best_sim.fill(0.0);
        self.value = 0.0;
        self.sel.reset();
    }

    fn selection(&self) -> &[usize] {
        self.sel.order()
    }

    fn is_selected(&self, item: usize) -> bool {
        self.sel.contains(item)
    }

    fn current_value(&self) -> f64 {
        self.value
    }
}
