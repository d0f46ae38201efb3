//! Exact expected-loss evaluation of offline policies.

mod numerics;
mod bonus;
mod closed_form;
mod offset;
mod oracle;

pub use numerics::{
    berry_esseen_check, berry_esseen_scale_bound, logistic_step_residuals, BerryEsseen, Residuals,
};
pub use bonus::{bonus_term, BlockMoments, BonusReport, BonusTerm};
pub use closed_form::{value_block_policy, value_false, value_policy, value_true};
pub use offset::{offset_distribution, OffsetDistribution};
pub use oracle::{
    brute_force_value, exhaustive_offline_optimum, MAX_BRUTE_FORCE_HORIZON, MAX_EXHAUSTIVE_HORIZON,
};
