//! Model parameters, multiplicative-weights dynamics, and the exact
//! distribution utilities shared by the evaluators and solvers.

mod binomial;
mod experts;
mod normal;
mod params;
mod weights;

pub use binomial::{binomial, BinomialDist};
pub use experts::{mw_step, system_prediction, ExpertState};
pub use normal::std_normal_cdf;
pub use params::{Loss, ModelParams};
pub use weights::{weight_power, weight_update_g, weight_update_g_inv, OffsetWeights, WeightOffset};

pub(crate) use weights::power_unchecked;
