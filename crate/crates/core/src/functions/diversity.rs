//! Dispersion (disparity) models over a pairwise distance matrix. All three
//! define f(X) = 0 for |X| <= 1; the min-sum variant excludes l = k in the
//! inner minimum, otherwise the zero diagonal collapses the objective.

use std::sync::Arc;

use crate::error::Result;
use crate::ground::{check_eval_indices, ModelInfo, Objective, SelState};
use crate::similarity::DistanceMatrix;

use super::ModelKind;

/// f(X) = min over distinct pairs of X of d_kl. Not submodular; maximized
/// by the dedicated max-min greedy in the optimizer module.
#[derive(Debug, Clone)]
pub struct DisparityMin {
    distances: Arc<DistanceMatrix>,
    min_dist: f64,
    sel: SelState,
}

impl DisparityMin {
    pub fn new(distances: Arc<DistanceMatrix>) -> Self {
        let n = distances.n();
        DisparityMin { distances, min_dist: f64::INFINITY, sel: SelState::new(n) }
    }

    pub fn distances(&self) -> &Arc<DistanceMatrix> {
        &self.distances
    }

    fn nearest_selected(&self, item: usize) -> f64 {
        self.sel
            .order()
            .iter()
            .map(|&l| self.distances.get(item, l))
            .fold(f64::INFINITY, f64::min)
    }
}

impl Objective for DisparityMin {
    fn ground_size(&self) -> usize {
        self.distances.n()
    }

    fn info(&self) -> ModelInfo {
        ModelKind::DisparityMin.static_info(0.0)
    }

    fn eval(&self, items: &[usize]) -> Result<f64> {
        check_eval_indices(items, self.ground_size())?;
        if items.len() < 2 {
            return Ok(0.0);
        }
        let mut min = f64::INFINITY;
        for (a, &k) in items.iter().enumerate() {
            for &l in &items[a + 1..] {
                min = min.min(self.distances.get(k, l));
            }
        }
        Ok(min)
    }

    fn gain(&self, item: usize) -> f64 {
        debug_assert!(!self.sel.contains(item));
        match self.sel.len() {
            0 => 0.0,
            1 => self.nearest_selected(item),
            _ => self.min_dist.min(self.nearest_selected(item)) - self.min_dist,
        }
    }

    fn commit(&mut self, item: usize) -> Result<()> {
        self.check_free(item)?;
        match self.sel.len() {
            0 => {}
            1 => self.min_dist = self.nearest_selected(item),
            _ => self.min_dist = self.min_dist.min(self.nearest_selected(item)),
        }
        self.sel.push(item);
        Ok(())
    }

    fn reset(&mut self) {
        self.min_dist = f64::INFINITY;
        self.sel.reset();
    }

    fn selection(&self) -> &[usize] {
        self.sel.order()
    }

    fn is_selected(&self, item: usize) -> bool {
        self.sel.contains(item)
    }

    fn current_value(&self) -> f64 {
        if self.sel.len() < 2 {
            0.0
        } else {
            self.min_dist
        }
    }
}

/// f(X) = sum over unordered pairs {k, l} of X of d_kl (half the ordered
/// sum). Supermodular. Statistics: per-selected-item distance sums.
#[derive(Debug, Clone)]
pub struct DisparitySum {
    distances: Arc<DistanceMatrix>,
    /// Aligned with the selection order: sums[t] = sum_{k in X} d(k, x_t).
    sums: Vec<f64>,
    sel: SelState,
}

impl DisparitySum {
    pub fn new(distances: Arc<DistanceMatrix>) -> Self {
        let n = distances.n();
        DisparitySum { distances, sums: Vec::new(), sel: SelState::new(n) }
    }
}

impl Objective for DisparitySum {
    fn ground_size(&self) -> usize {
        self.distances.n()
    }

    fn info(&self) -> ModelInfo {
        ModelKind::DisparitySum.static_info(0.0)
    }

    fn eval(&self, items: &[usize]) -> Result<f64> {
        check_eval_indices(items, self.ground_size())?;
        let mut total = 0.0;
        for (a, &k) in items.iter().enumerate() {
            for &l in &items[a + 1..] {
                total += self.distances.get(k, l);
            }
        }
        Ok(total)
    }

    fn gain(&self, item: usize) -> f64 {
        debug_assert!(!self.sel.contains(item));
        self.sel
            .order()
            .iter()
            .map(|&l| self.distances.get(item, l))
            .sum()
    }

    fn commit(&mut self, item: usize) -> Result<()> {
        self.check_free(item)?;
        let mut own = 0.0;
        for (pos, &l) in self.sel.order().iter().enumerate() {
            let d = self.distances.get(item, l);
            self.sums[pos] += d;
            own += d;
        }
        self.sums.push(own);
        self.sel.push(item);
        Ok(())
    }

    fn reset(&mut self) {
        self.sums.clear();
        self.sel.reset();
    }

    fn selection(&self) -> &[usize] {
        self.sel.order()
    }

    fn is_selected(&self, item: usize) -> bool {
        self.sel.contains(item)
    }

    fn current_value(&self) -> f64 {
        // each unordered pair appears in exactly two per-item sums
        self.sums.iter().sum::<f64>() / 2.0
    }
}

/// f(X) = sum_{k in X} min_{l in X, l != k} d_kl for |X| >= 2. Statistics:
/// per-selected-item nearest-selected-neighbor distance.
#[derive(Debug, Clone)]
pub struct DisparityMinSum {
    distances: Arc<DistanceMatrix>,
    /// Aligned with the selection order; INFINITY while |X| == 1.
    nearest: Vec<f64>,
    sel: SelState,
}

impl DisparityMinSum {
    pub fn new(distances: Arc<DistanceMatrix>) -> Self {
        let n = distances.n();
        DisparityMinSum { distances, nearest: Vec::new(), sel: SelState::new(n) }
    }
}

impl Objective for DisparityMinSum {
    fn ground_size(&self) -> usize {
        self.distances.n()
    }

    fn info(&self) -> ModelInfo {
        ModelKind::DisparityMinSum.static_info(0.0)
    }

    fn eval(&self, items: &[usize]) -> Result<f64> {
        check_eval_indices(items, self.ground_size())?;
        if items.len() < 2 {
            return Ok(0.0);
        }
        let mut total = 0.0;
        for &k in items {
            let nn = items
                .iter()
                .filter(|&&l| l != k)
                .map(|&l| self.distances.get(k, l))
                .fold(f64::INFINITY, f64::min);
            total += nn;
        }
        Ok(total)
    }

    fn gain(&self, item: usize) -> f64 {
        debug_assert!(!self.sel.contains(item));
        match self.sel.len() {
            0 => 0.0,
            1 => 2.0 * self.distances.get(self.sel.order()[0], item),
            _ => {
                let mut delta = 0.0;
                let mut own = f64::INFINITY;
                for (pos, &l) in self.sel.order().iter().enumerate() {
                    let d = self.distances.get(item, l);
                    own = own.min(d);
                    if d < self.nearest[pos] {
                        delta += d - self.nearest[pos];
                    }
                }
                delta + own
            }
        }
    }

    fn commit(&mut self, item: usize) -> Result<()> {
        self.check_free(item)?;
        let mut own = f64::INFINITY;
        for (pos, &l) in self.sel.order().iter().enumerate() {
            let d = self.distances.get(item, l);
            own = own.min(d);
            if d < self.nearest[pos] {
                self.nearest[pos] = d;
            }
        }
        self.nearest.push(own);
        self.sel.push(item);
        Ok(())
    }

    fn reset(&mut self) {
        self.nearest.clear();
        self.sel.reset();
    }

    fn selection(&self) -> &[usize] {
        self.sel.order()
    }

    fn is_selected(&self, item: usize) -> bool {
        self.sel.contains(item)
    }

    fn current_value(&self) -> f64 {
        if self.sel.len() < 2 {
            0.0
        } else {
            self.nearest.iter().sum()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Arc<DistanceMatrix> {
        // d01 = 3, d02 = 1, d12 = 2
        Arc::new(
            DistanceMatrix::from_dense(
                3,
                vec![
                    0.0, 3.0, 1.0, //
                    3.0, 0.0, 2.0, //
                    1.0, 2.0, 0.0,
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn disparity_min_full_set() {
        let dm = DisparityMin::new(triangle());
        assert_eq!(dm.eval(&[0, 1, 2]).unwrap(), 1.0);
        assert_eq!(dm.eval(&[0]).unwrap(), 0.0);
        assert_eq!(dm.eval(&[]).unwrap(), 0.0);
    }

    #[test]
    fn disparity_min_stats_track_min() {
        let mut dm = DisparityMin::new(triangle());
        dm.commit(0).unwrap();
        assert_eq!(dm.current_value(), 0.0);
        dm.commit(1).unwrap();
        assert_eq!(dm.current_value(), 3.0);
        assert_eq!(dm.gain(2), 1.0 - 3.0);
        dm.commit(2).unwrap();
        assert_eq!(dm.current_value(), 1.0);
    }

    #[test]
    fn disparity_sum_counts_each_pair_once() {
        let ds = DisparitySum::new(triangle());
        assert_eq!(ds.eval(&[0, 1, 2]).unwrap(), 6.0);
    }

    #[test]
    fn disparity_min_sum_excludes_self() {
        let dms = DisparityMinSum::new(triangle());
        // nearest neighbors: 0 -> 2 (1), 1 -> 2 (2), 2 -> 0 (1)
        assert_eq!(dms.eval(&[0, 1, 2]).unwrap(), 4.0);
        assert_eq!(dms.eval(&[0, 1]).unwrap(), 6.0);
        assert_eq!(dms.eval(&[1]).unwrap(), 0.0);
    }
}
