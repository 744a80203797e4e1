//! Ground-set abstractions, selection state, and the objective-function
//! interface every summarization model implements.

use crate::error::{Error, Result};

/// The universe of selectable items with external ids and per-item costs.
#[derive(Debug, Clone)]
pub struct GroundSet {
    item_ids: Vec<String>,
    costs: Vec<f64>,
}

impl GroundSet {
    /// Builds a ground set from external ids and optional per-item costs.
    /// Omitted costs default to 1.0.
    pub fn new(item_ids: Vec<String>, costs: Option<Vec<f64>>) -> Result<Self> {
        if item_ids.is_empty() {
            return Err(Error::InvalidParam("ground set must be non-empty".into()));
        }
        let mut seen = std::collections::HashSet::with_capacity(item_ids.len());
        for id in &item_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateItem(id.clone()));
            }
        }
        let costs = match costs {
            Some(c) => {
                if c.len() != item_ids.len() {
                    return Err(Error::InvalidParam(format!(
                        "{} costs for {} items",
                        c.len(),
                        item_ids.len()
                    )));
                }
                for (i, &v) in c.iter().enumerate() {
                    if !v.is_finite() || v < 0.0 {
                        return Err(Error::InvalidCost(format!("cost[{i}] = {v}")));
                    }
                }
                c
            }
            None => vec![1.0; item_ids.len()],
        };
        Ok(GroundSet { item_ids, costs })
    }

    /// Ground set of `n` items with ids "0".."n-1" and unit costs.
    pub fn indexed(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect(), None)
    }

    pub fn len(&self) -> usize {
        self.item_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.item_ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.item_ids
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn cost(&self, i: usize) -> f64 {
        self.costs[i]
    }
}

/// An ordered selection of ground-set indices together with the objective
/// value recorded after each addition.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Selection {
    pub indices: Vec<usize>,
    pub objective_trace: Vec<f64>,
}

impl Selection {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, index: usize, objective: f64) {
        self.indices.push(index);
        self.objective_trace.push(objective);
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Final objective value, 0 for an empty selection.
    pub fn objective(&self) -> f64 {
        self.objective_trace.last().copied().unwrap_or(0.0)
    }

    /// Checks distinctness, index range, and trace alignment against a
    /// ground set of size `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.objective_trace.len() != self.indices.len() {
            return Err(Error::InvalidSelection(format!(
                "trace length {} != selection length {}",
                self.objective_trace.len(),
                self.indices.len()
            )));
        }
        let mut seen = vec![false; n];
        for &i in &self.indices {
            if i >= n {
                return Err(Error::InvalidSelection(format!("index {i} out of range (n = {n})")));
            }
            if seen[i] {
                return Err(Error::InvalidSelection(format!("index {i} selected twice")));
            }
            seen[i] = true;
        }
        Ok(())
    }

    /// Total cost of the selected items.
    pub fn total_cost(&self, gs: &GroundSet) -> Result<f64> {
        let mut sum = 0.0;
        for &i in &self.indices {
            if i >= gs.len() {
                return Err(Error::InvalidSelection(format!(
                    "index {i} out of range (n = {})",
                    gs.len()
                )));
            }
            sum += gs.cost(i);
        }
        Ok(sum)
    }
}

/// Model family, driving the model/algorithm compatibility matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Similarity,
    Coverage,
    Distance,
    Modular,
}

/// Static metadata reported by every objective.
#[derive(Debug, Clone, Copy)]
pub struct ModelInfo {
    pub name: &'static str,
    pub family: Family,
    pub monotone: bool,
    pub submodular: bool,
}

/// Committed-selection bookkeeping shared by all objective implementations.
#[derive(Debug, Clone, Default)]
pub(crate) struct SelState {
    order: Vec<usize>,
    member: Vec<bool>,
}

impl SelState {
    pub fn new(n: usize) -> Self {
        SelState { order: Vec::new(), member: vec![false; n] }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.member[i]
    }

    pub fn push(&mut self, i: usize) {
        debug_assert!(!self.member[i]);
        self.member[i] = true;
        self.order.push(i);
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn reset(&mut self) {
        for &i in &self.order {
            self.member[i] = false;
        }
        self.order.clear();
    }
}

/// The uniform interface over all summarization models.
///
/// Implementations keep two routes to the objective: `eval` computes the
/// value of an arbitrary selection directly from the definition, while
/// `gain`/`commit`/`current_value` work against incrementally maintained
/// precompute statistics. The two routes must agree to 1e-9; the test
/// suites exercise exactly that contract.
pub trait Objective: Send + Sync {
    /// Ground-set size the objective was constructed over.
    fn ground_size(&self) -> usize;

    fn info(&self) -> ModelInfo;

    /// Definition-based objective value of an arbitrary selection.
    /// Never consults the precompute statistics.
    fn eval(&self, items: &[usize]) -> Result<f64>;

    /// Marginal gain of adding `item` to the committed selection, computed
    /// from the precompute statistics. `item` must be unselected and in
    /// range; statistics are left untouched.
    fn gain(&self, item: usize) -> f64;

    /// Adds `item` to the committed selection, updating the statistics.
    fn commit(&mut self, item: usize) -> Result<()>;

    /// Clears the committed selection and statistics.
    fn reset(&mut self);

    /// Committed selection in insertion order.
    fn selection(&self) -> &[usize];

    fn is_selected(&self, item: usize) -> bool;

    /// Objective value of the committed selection, from the statistics.
    fn current_value(&self) -> f64;

    /// Range- and membership-checked `gain`.
    fn try_gain(&self, item: usize) -> Result<f64> {
        self.check_free(item)?;
        Ok(self.gain(item))
    }

    #[doc(hidden)]
    fn check_free(&self, item: usize) -> Result<()> {
        if item >= self.ground_size() {
            return Err(Error::InvalidSelection(format!(
                "index {item} out of range (n = {})",
                self.ground_size()
            )));
        }
        if self.is_selected(item) {
            return Err(Error::AlreadySelected(item));
        }
        Ok(())
    }
}

/// Validates `items` as a selection over a ground set of size `n`:
/// in-range and pairwise distinct.
pub(crate) fn check_eval_indices(items: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &i in items {
        if i >= n {
            return Err(Error::InvalidSelection(format!("index {i} out of range (n = {n})")));
        }
        if seen[i] {
            return Err(Error::InvalidSelection(format!("index {i} appears twice")));
        }
        seen[i] = true;
    }
    Ok(())
}
