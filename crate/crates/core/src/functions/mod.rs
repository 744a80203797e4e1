//! The objective models: coverage (set cover, probabilistic set cover,
//! feature based), representation (facility location, saturated coverage,
//! graph cut), diversity (dispersion min / sum / min-sum), plus modular
//! importance and max marginal relevance. Each implements [`Objective`]
//! with the memoized statistics that make greedy gains cheap.

mod coverage;
mod diversity;
mod relevance;
mod representation;

pub use coverage::{FeatureBased, ProbabilisticSetCover, SetCover};
pub use diversity::{DisparityMin, DisparityMinSum, DisparitySum};
pub use relevance::{MaxMarginalRelevance, Modular};
pub use representation::{FacilityLocation, GraphCut, SaturatedCoverage};

use crate::error::{Error, Result};
use crate::ground::{Family, ModelInfo, Objective};

/// Concave transform for the feature-based objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Psi {
    Sqrt,
    Log1p,
    /// x / (1 + x)
    Inverse,
}

impl Psi {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Psi::Sqrt => x.sqrt(),
            Psi::Log1p => x.ln_1p(),
            Psi::Inverse => x / (1.0 + x),
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "sqrt" => Ok(Psi::Sqrt),
            "log1p" => Ok(Psi::Log1p),
            "inverse" => Ok(Psi::Inverse),
            other => Err(Error::InvalidParam(format!(
                "unknown psi `{other}` (available: sqrt, log1p, inverse)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Psi::Sqrt => "sqrt",
            Psi::Log1p => "log1p",
            Psi::Inverse => "inverse",
        }
    }
}

/// Identifies one of the eleven models by its CLI token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    FacilityLocation,
    SaturatedCoverage,
    GraphCut,
    FeatureBased,
    SetCover,
    ProbabilisticSetCover,
    DisparityMin,
    DisparitySum,
    DisparityMinSum,
    Modular,
    MaxMarginalRelevance,
}

impl ModelKind {
    pub const ALL: [ModelKind; 11] = [
        ModelKind::FacilityLocation,
        ModelKind::SaturatedCoverage,
        ModelKind::GraphCut,
        ModelKind::FeatureBased,
        ModelKind::SetCover,
        ModelKind::ProbabilisticSetCover,
        ModelKind::DisparityMin,
        ModelKind::DisparitySum,
        ModelKind::DisparityMinSum,
        ModelKind::Modular,
        ModelKind::MaxMarginalRelevance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::FacilityLocation => "facility_location",
            ModelKind::SaturatedCoverage => "saturated_coverage",
            ModelKind::GraphCut => "graph_cut",
            ModelKind::FeatureBased => "feature_based",
            ModelKind::SetCover => "set_cover",
            ModelKind::ProbabilisticSetCover => "probabilistic_set_cover",
            ModelKind::DisparityMin => "disparity_min",
            ModelKind::DisparitySum => "disparity_sum",
            ModelKind::DisparityMinSum => "disparity_min_sum",
            ModelKind::Modular => "modular",
            ModelKind::MaxMarginalRelevance => "max_marginal_relevance",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| {
                let available = ModelKind::ALL.map(|k| k.name()).join(", ");
                Error::InvalidParam(format!("unknown model `{name}` (available: {available})"))
            })
    }

    /// Static metadata, available before an oracle is constructed. Graph
    /// cut monotonicity depends on lambda: gains are guaranteed
    /// non-negative iff lambda >= 2 on a symmetric kernel.
    pub fn static_info(self, lambda: f64) -> ModelInfo {
        let (family, monotone, submodular) = match self {
            ModelKind::FacilityLocation | ModelKind::SaturatedCoverage => (Family::Similarity, true, true),
            ModelKind::GraphCut => (Family::Similarity, lambda >= 2.0, true),
            ModelKind::FeatureBased
            | ModelKind::SetCover
            | ModelKind::ProbabilisticSetCover => (Family::Coverage, true, true),
            ModelKind::DisparityMin => (Family::Distance, false, false),
            ModelKind::DisparitySum => (Family::Distance, true, false),
            ModelKind::DisparityMinSum => (Family::Distance, false, false),
            ModelKind::Modular => (Family::Modular, true, true),
            ModelKind::MaxMarginalRelevance => (Family::Similarity, false, false),
        };
        ModelInfo { name: self.name(), family, monotone, submodular }
    }
}

/// An owned instance of any of the eleven models. Static dispatch keeps
/// solver hot loops free of vtable calls.
#[derive(Debug, Clone)]
pub enum Model {
    FacilityLocation(FacilityLocation),
    SaturatedCoverage(SaturatedCoverage),
    GraphCut(GraphCut),
    FeatureBased(FeatureBased),
    SetCover(SetCover),
    ProbabilisticSetCover(ProbabilisticSetCover),
    DisparityMin(DisparityMin),
    DisparitySum(DisparitySum),
    DisparityMinSum(DisparityMinSum),
    Modular(Modular),
    MaxMarginalRelevance(MaxMarginalRelevance),
}

macro_rules! each_model {
    ($self:expr, $m:ident => $body:expr) => {
        match $self {
            Model::FacilityLocation($m) => $body,
            Model::SaturatedCoverage($m) => $body,
            Model::GraphCut($m) => $body,
            Model::FeatureBased($m) => $body,
            Model::SetCover($m) => $body,
            Model::ProbabilisticSetCover($m) => $body,
            Model::DisparityMin($m) => $body,
            Model::DisparitySum($m) => $body,
            Model::DisparityMinSum($m) => $body,
            Model::Modular($m) => $body,
            Model::MaxMarginalRelevance($m) => $body,
        }
    };
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::FacilityLocation(_) => ModelKind::FacilityLocation,
            Model::SaturatedCoverage(_) => ModelKind::SaturatedCoverage,
            Model::GraphCut(_) => ModelKind::GraphCut,
            Model::FeatureBased(_) => ModelKind::FeatureBased,
            Model::SetCover(_) => ModelKind::SetCover,
            Model::ProbabilisticSetCover(_) => ModelKind::ProbabilisticSetCover,
            Model::DisparityMin(_) => ModelKind::DisparityMin,
            Model::DisparitySum(_) => ModelKind::DisparitySum,
            Model::DisparityMinSum(_) => ModelKind::DisparityMinSum,
            Model::Modular(_) => ModelKind::Modular,
            Model::MaxMarginalRelevance(_) => ModelKind::MaxMarginalRelevance,
        }
    }
}

impl Objective for Model {
    fn ground_size(&self) -> usize {
        each_model!(self, m => m.ground_size())
    }

    fn info(&self) -> ModelInfo {
        each_model!(self, m => m.info())
    }

    fn eval(&self, items: &[usize]) -> Result<f64> {
        each_model!(self, m => m.eval(items))
    }

    fn gain(&self, item: usize) -> f64 {
        each_model!(self, m => m.gain(item))
    }

    fn commit(&mut self, item: usize) -> Result<()> {
        each_model!(self, m => m.commit(item))
    }

    fn reset(&mut self) {
        each_model!(self, m => m.reset())
    }

    fn selection(&self) -> &[usize] {
        each_model!(self, m => m.selection())
    }

    fn is_selected(&self, item: usize) -> bool {
        each_model!(self, m => m.is_selected(item))
    }

    fn current_value(&self) -> f64 {
        each_model!(self, m => m.current_value())
    }
}
