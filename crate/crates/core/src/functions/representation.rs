//! Representation models over a similarity kernel: facility location,
//! saturated coverage, and the graph cut family.

use std::sync::Arc;

use crate::error::Result;
use crate::ground::{check_eval_indices, ModelInfo, Objective, SelState};
use crate::similarity::Kernel;

use super::ModelKind;

/// f(X) = sum_i max_{k in X} s_ik. Statistics: per-item best similarity to
/// the selection.
#[derive(Debug, Clone)]
pub struct FacilityLocation {
    kernel: Arc<Kernel>,
    best_sim: Vec<f64>,
    sel: SelState,
}

impl FacilityLocation {
    pub fn new(kernel: Arc<Kernel>) -> Self {
        let n = kernel.n();
        FacilityLocation { kernel, best_sim: vec![0.0; n], sel: SelState::new(n) }
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }
}

impl Objective for FacilityLocation {
    fn ground_size(&self) -> usize {
        self.kernel.n()
    }

    fn info(&self) -> ModelInfo {
        ModelKind::FacilityLocation.static_info(0.0)
    }

    fn eval(&self, items: &[usize]) -> Result<f64> {
        check_eval_indices(items, self.ground_size())?;
        if items.is_empty() {
            return Ok(0.0);
        }
        let mut total = 0.0;
        for i in 0..self.ground_size() {
            let mut best = 0.0f64;
            for &k in items {
                best = best.max(self.kernel.get(i, k));
            }
            total += best;
        }
        Ok(total)
    }

    fn gain(&self, item: usize) -> f64 {
        debug_assert!(!self.sel.contains(item));
        let mut delta = 0.0;
        self.kernel.for_row(item, |i, s| {
            if s > self.best_sim[i] {
                delta += s - self.best_sim[i];
            }
        });
        delta
    }

    fn commit(&mut self, item: usize) -> Result<()> {
        self.check_free(item)?;
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
        self.sel.reset();
    }

    fn selection(&self) -> &[usize] {
        self.sel.order()
    }

    fn is_selected(&self, item: usize) -> bool {
        self.sel.contains(item)
    }

    fn current_value(&self) -> f64 {
        if self.sel.len() == 0 {
            0.0
        } else {
            self.best_sim.iter().sum()
        }
    }
}

/// f(X) = sum_i min(sum_{j in X} s_ij, alpha_i) with alpha_i = alpha *
/// sum_{j in V} s_ij. Statistics: per-item accumulated similarity mass.
#[derive(Debug, Clone)]
pub struct SaturatedCoverage {
    kernel: Arc<Kernel>,
    caps: Vec<f64>,
    acc: Vec<f64>,
    sel: SelState,
}

impl SaturatedCoverage {
    pub fn new(kernel: Arc<Kernel>, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(crate::error::Error::InvalidParam(format!(
                "saturation alpha {alpha} must lie in (0, 1]"
            )));
        }
        let n = kernel.n();
        let caps = (0..n).map(|i| alpha * kernel.row_sum(i)).collect();
        Ok(SaturatedCoverage { kernel, caps, acc: vec![0.0; n], sel: SelState::new(n) })
    }
}

impl Objective for SaturatedCoverage {
    fn ground_size(&self) -> usize {
        self.kernel.n()
    }

    fn info(&self) -> ModelInfo {
        ModelKind::SaturatedCoverage.static_info(0.0)
    }

    fn eval(&self, items: &[usize]) -> Result<f64> {
        check_eval_indices(items, self.ground_size())?;
        let mut total = 0.0;
        for i in 0..self.ground_size() {
            let mass: f64 = items.iter().map(|&j| self.kernel.get(i, j)).sum();
            total += mass.min(self.caps[i]);
        }
        Ok(total)
    }

    fn gain(&self, item: usize) -> f64 {
        debug_assert!(!self.sel.contains(item));
        let mut delta = 0.0;
        self.kernel.for_row(item, |i, s| {
            delta += (self.acc[i] + s).min(self.caps[i]) - self.acc[i].min(self.caps[i]);
        });
        delta
    }

    fn commit(&mut self, item: usize) -> Result<()> {
        self.check_free(item)?;
        let acc = &mut self.acc;
        self.kernel.for_row(item, |i, s| acc[i] += s);
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
        self.acc.iter().zip(&self.caps).map(|(&a, &c)| a.min(c)).sum()
    }
}

/// f(X) = lambda * sum_{j in X} T_j - sum_{i,j in X} s_ij with T_j the total
/// similarity mass of j. Statistics: per-item accumulated cut mass
/// p_j = sum_{k in X} s_kj, giving gain(v) = lambda T_v - 2 p_v - s_vv on a
/// symmetric kernel.
#[derive(Debug, Clone)]
pub struct GraphCut {
    kernel: Arc<Kernel>,
    lambda: f64,
    cut: Vec<f64>,
    sel: SelState,
}

impl GraphCut {
    pub fn new(kernel: Arc<Kernel>, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(crate::error::Error::InvalidParam(format!(
                "graph cut lambda {lambda} must be >= 0"
            )));
        }
        let n = kernel.n();
        Ok(GraphCut { kernel, lambda, cut: vec![0.0; n], sel: SelState::new(n) })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl Objective for GraphCut {
    fn ground_size(&self) -> usize {
        self.kernel.n()
    }

    fn info(&self) -> ModelInfo {
        ModelKind::GraphCut.static_info(self.lambda)
    }

    fn eval(&self, items: &[usize]) -> Result<f64> {
        check_eval_indices(items, self.ground_size())?;
        let modular: f64 = items.iter().map(|&j| self.kernel.row_sum(j)).sum();
        let mut cut = 0.0;
        for &i in items {
            for &j in items {
                cut += self.kernel.get(i, j);
            }
        }
        Ok(self.lambda * modular - cut)
    }

    fn gain(&self, item: usize) -> f64 {
        debug_assert!(!self.sel.contains(item));
        self.lambda * self.kernel.row_sum(item) - 2.0 * self.cut[item] - self.kernel.get(item, item)
    }

    fn commit(&mut self, item: usize) -> Result<()> {
        self.check_free(item)?;
        let cut = &mut self.cut;
        self.kernel.for_row(item, |j, s| cut[j] += s);
        self.sel.push(item);
        Ok(())
    }

    fn reset(&mut self) {
        self.cut.fill(0.0);
        self.sel.reset();
    }

    fn selection(&self) -> &[usize] {
        self.sel.order()
    }

    fn is_selected(&self, item: usize) -> bool {
        self.sel.contains(item)
    }

    fn current_value(&self) -> f64 {
        let modular: f64 = self.sel.order().iter().map(|&j| self.kernel.row_sum(j)).sum();
        let cut: f64 = self.sel.order().iter().map(|&j| self.cut[j]).sum();
        self.lambda * modular - cut
    }
}
