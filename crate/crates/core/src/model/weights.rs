//! Relative-weight dynamics of the malicious expert.
//!
//! With two experts the adversary's normalized weight `ρ` only ever moves by
//! one application of the update map `g` (adversary wrong, honest right) or
//! its inverse (adversary right, honest wrong). After any history the weight
//! is therefore `g^(j)(ρ₀)` for a signed integer offset `j`, and
//!
//! ```text
//! g^(j)(ρ) = 1 / (1 + (1/ρ - 1) · ε^(-j))
//! ```
//!
//! Everything downstream indexes states by that integer rather than by the
//! floating-point weight.

use crate::error::{Error, Result};
use crate::model::params::ModelParams;

fn check_weight(rho: f64) -> Result<f64> {
    if rho.is_finite() && rho > 0.0 && rho <= 1.0 {
        Ok(rho)
    } else {
        Err(Error::WeightDomain(rho))
    }
}

/// `1 / (1 + e^t)`, evaluated without overflow for any finite `t`.
#[inline]
pub(crate) fn logistic_neg(t: f64) -> f64 {
    if t > 0.0 {
        let e = (-t).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + t.exp())
    }
}

/// One step of the update applied when the adversary is wrong and the honest
/// expert is right.
pub fn weight_update_g(rho: f64, params: &ModelParams) -> Result<f64> {
    let rho = check_weight(rho)?;
    Ok(1.0 / (1.0 + (1.0 / rho - 1.0) / params.epsilon()))
}

/// Inverse of [`weight_update_g`]: adversary right, honest expert wrong.
pub fn weight_update_g_inv(rho: f64, params: &ModelParams) -> Result<f64> {
    let rho = check_weight(rho)?;
    Ok(1.0 / (1.0 + (1.0 / rho - 1.0) * params.epsilon()))
}

/// `j`-fold composition of `g` (or of its inverse when `j < 0`) in closed form.
pub fn weight_power(j: i64, rho: f64, params: &ModelParams) -> Result<f64> {
    let rho = check_weight(rho)?;
    Ok(power_unchecked(j, rho, params.epsilon()))
}

#[inline]
pub(crate) fn power_unchecked(j: i64, rho: f64, epsilon: f64) -> f64 {
    if j == 0 || rho == 1.0 {
        return rho;
    }
    let odds = 1.0 / rho - 1.0;
    // ln(odds · ε^(-j)) stays finite for any realistic |j|.
    logistic_neg(odds.ln() - j as f64 * epsilon.ln())
}

/// Net adversary offset relative to the start of a process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct WeightOffset(pub i64);

impl WeightOffset {
    /// Realized relative weight `g^(j)(ρ₀)`.
    pub fn value(self, params: &ModelParams) -> f64 {
        power_unchecked(self.0, params.rho0(), params.epsilon())
    }

    pub fn after_lie_caught(self) -> Self {
        WeightOffset(self.0 + 1)
    }

    pub fn after_truth_rewarded(self) -> Self {
        WeightOffset(self.0 - 1)
    }
}

/// Cached `g^(j)(ρ₀)` for every `j` in `[-reach, reach]`.
#[derive(Debug, Clone)]
pub struct OffsetWeights {
    reach: i64,
    values: Vec<f64>,
}

impl OffsetWeights {
    pub fn new(params: &ModelParams, reach: usize) -> Self {
        let reach = reach as i64;
        let values = (-reach..=reach)
            .map(|j| power_unchecked(j, params.rho0(), params.epsilon()))
            .collect();
        Self { reach, values }
    }

    #[inline]
    pub fn get(&self, j: i64) -> f64 {
        debug_assert!(j.abs() <= self.reach, "offset {j} outside cached range");
        self.values[(j + self.reach) as usize]
    }

    pub fn reach(&self) -> i64 {
        self.reach
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(eps: f64) -> ModelParams {
        ModelParams::new(eps, 0.5, 10, 0.5).unwrap()
    }

    #[test]
    fn g_examples() {
        let p = params((-1.0f64).exp());
        let e = std::f64::consts::E;
        assert_eq!(weight_update_g(1.0, &p).unwrap(), 1.0);
        assert_relative_eq!(weight_update_g(0.5, &p).unwrap(), 1.0 / (1.0 + e), epsilon = 1e-15);
        assert_eq!(weight_update_g_inv(1.0, &p).unwrap(), 1.0);
        assert_relative_eq!(weight_update_g_inv(0.5, &p).unwrap(), e / (1.0 + e), epsilon = 1e-15);
        let back = weight_update_g_inv(1.0 / (1.0 + e), &p).unwrap();
        assert_relative_eq!(back, 0.5, epsilon = 1e-15);
        assert!((weight_update_g(0.5, &p).unwrap() - 0.268941).abs() < 1e-6);
        assert!((weight_update_g_inv(0.5, &p).unwrap() - 0.731059).abs() < 1e-6);
    }

    #[test]
    fn g_inverse_roundtrip() {
        let p = params(0.3);
        for rho in [0.1, 0.5, 0.9] {
            let there = weight_update_g_inv(rho, &p).unwrap();
            assert_relative_eq!(weight_update_g(there, &p).unwrap(), rho, epsilon = 1e-14);
        }
    }

    #[test]
    fn domain_errors() {
        let p = params(0.3);
        for bad in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(weight_update_g(bad, &p).is_err());
            assert!(weight_update_g_inv(bad, &p).is_err());
            assert!(weight_power(2, bad, &p).is_err());
        }
    }

    #[test]
    fn power_examples() {
        let p = params((-1.0f64).exp());
        let e = std::f64::consts::E;
        for rho in [0.01, 0.5, 0.99, 1.0] {
            assert_eq!(weight_power(0, rho, &p).unwrap(), rho);
        }
        assert_relative_eq!(weight_power(2, 0.5, &p).unwrap(), 1.0 / (1.0 + e * e), epsilon = 1e-15);
        assert!((weight_power(2, 0.5, &p).unwrap() - 0.119203).abs() < 1e-6);

        let p = params(0.4);
        let mut iterated = 0.5;
        for _ in 0..3 {
            iterated = weight_update_g(iterated, &p).unwrap();
        }
        assert!((weight_power(3, 0.5, &p).unwrap() - iterated).abs() < 1e-12);
    }

    #[test]
    fn power_is_safe_for_large_offsets() {
        let p = params(0.1);
        let hi = weight_power(-5000, 0.5, &p).unwrap();
        let lo = weight_power(5000, 0.5, &p).unwrap();
        assert!(hi <= 1.0 && hi > 0.999);
        assert!((0.0..1e-300).contains(&lo));
    }

    #[test]
    fn offset_cache_matches_closed_form() {
        let p = params(0.37);
        let cache = OffsetWeights::new(&p, 12);
        for j in -12..=12 {
            assert_eq!(cache.get(j), WeightOffset(j).value(&p));
            assert_eq!(cache.get(j), weight_power(j, 0.5, &p).unwrap());
        }
    }
}
