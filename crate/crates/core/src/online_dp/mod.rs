//! The optimal online adversary and the reference systems it is compared
//! against.

mod baseline;
mod k_expert;
mod monte_carlo;
mod two_expert;

pub use baseline::{coin_flip_stage_loss, conditional_losses, no_adversary_value, no_information_baseline};
pub use k_expert::{
    clairvoyant_value, k_expert_state_count, monte_carlo_k_expert, sample_realization, solve_k_expert,
    KExpertParams, Mode, MAX_EXPERTS, MAX_HORIZON, MAX_STATES,
};
pub use monte_carlo::{simulate_online, trial_rng, MCResult};
pub use two_expert::{branch_values, optimal_value, solve_two_expert, ValueTable, TIE_TOLERANCE};
