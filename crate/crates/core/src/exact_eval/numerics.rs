//! Numeric checks behind the bonus analysis: one-step residuals of the
//! log-partition functions, and the quality of the normal approximation to
//! `E[σ(X - Y)]`.

use crate::error::{Error, Result};
use crate::exact_eval::bonus::logistic_base_e;
use crate::exact_eval::offset::offset_distribution;
use crate::model::std_normal_cdf;

fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// One-step residuals of `f(r) = r - ln(1 + a e^r)` and `h(r) = ln(a + e^r)`
/// against their logistic slopes, together with the claimed bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    /// `f(r+1) - f(r) - 1/(1 + a e^r)`, expected in `[eps_bound, 0]`.
    pub eps_r: f64,
    /// `h(r+1) - h(r) - 1/(1 + a e^{-r})`, expected in `[0, delta_bound]`.
    pub delta_r: f64,
    /// `1/(1 + a e^{r+1}) - 1/(1 + a e^r)`.
    pub eps_bound: f64,
    /// `1/(1 + a e^{-(r+1)}) - 1/(1 + a e^{-r})`.
    pub delta_bound: f64,
}

impl Residuals {
    /// Whether both sandwiches hold, allowing `tol` of rounding slack.
    pub fn holds(&self, tol: f64) -> bool {
        self.eps_bound - tol <= self.eps_r
            && self.eps_r <= tol
            && -tol <= self.delta_r
            && self.delta_r <= self.delta_bound + tol
    }
}

/// Residuals at offset `r ≥ 0` for odds `a = 1/ρ - 1 > 0`.
///
/// Written through softplus and logistic terms in `x = r + ln a` and
/// `y = ln a - r` so that nothing cancels catastrophically for large `r`.
pub fn logistic_step_residuals(r: f64, a: f64) -> Result<Residuals> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::invalid("r", r, "must be finite and nonnegative"));
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::invalid("a", a, "must be finite and positive"));
    }
    let x = r + a.ln();
    let y = a.ln() - r;
    let s = logistic_base_e;
    Ok(Residuals {
        eps_r: softplus(-x) - softplus(-x - 1.0) - s(x),
        delta_r: s(-y) - softplus(y) + softplus(y - 1.0),
        eps_bound: -(std::f64::consts::E - 1.0) * s(-x) * s(x + 1.0),
        delta_bound: (1.0 - (-1.0f64).exp()) * s(-y) * s(y - 1.0),
    })
}

/// Exact `E[σ(X - Y)]` for `X ~ Bin(n, μ)`, `Y ~ Bin(m, 1-μ)` against the
/// normal approximation `Φ(-ν/σ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerryEsseen {
    pub exact: f64,
    pub approx: f64,
    pub error: f64,
    pub sigma: f64,
}

pub fn berry_esseen_check(n: usize, m: usize, mu: f64) -> Result<BerryEsseen> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::invalid("mu", mu, "must lie in (0, 1)"));
    }
    let exact = offset_distribution(n, m, mu).expect(|j| logistic_base_e(j as f64));
    let nu = n as f64 * mu - m as f64 * (1.0 - mu);
    let sigma = (mu * (1.0 - mu) * (n + m) as f64).sqrt();
    let approx = if sigma > 0.0 {
        std_normal_cdf(-nu / sigma)
    } else {
        exact
    };
    Ok(BerryEsseen {
        exact,
        approx,
        error: (exact - approx).abs(),
        sigma,
    })
}

/// A concrete bound for `error · σ`, assembled from the Berry–Esseen
/// constant `0.56` and the third absolute moments of the centred Bernoulli
/// summands, which are at most `μ² + (1-μ)²` times their variance.
pub fn berry_esseen_scale_bound(mu: f64) -> f64 {
    let c0 = 0.56;
    let rho3 = mu * mu + (1.0 - mu) * (1.0 - mu);
    let c1 = 1.0 / (2.0 * std::f64::consts::PI).sqrt() + 2.0 * c0 * rho3;
    let e = std::f64::consts::E;
    2.0 * e * c1 / (e - 1.0) + c0 * rho3
}
