use std::f64::consts::FRAC_1_SQRT_2;

/// Standard normal CDF through the complementary error function.
#[inline]
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}
