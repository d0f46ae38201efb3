use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Grid resolution used to spot-check a custom loss for monotonicity.
const LOSS_CHECK_POINTS: usize = 1000;

/// Loss `Q` applied to the absolute prediction error `|ŷ - y|`.
#[derive(Clone)]
#[derive(Default)]
pub enum Loss {
    /// `Q(e) = e`.
    #[default]
    Absolute,
    /// A caller-supplied nondecreasing `Q` on `[0, 1]` with `Q(0) >= 0`.
    Custom {
        name: String,
        func: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl Loss {
    /// Wraps `func` after checking `Q(0) >= 0` and monotonicity on a uniform grid.
    pub fn custom<F>(name: impl Into<String>, func: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let name = name.into();
        let q0 = func(0.0);
        if !q0.is_finite() || q0 < 0.0 {
            return Err(Error::invalid("loss", &name, "Q(0) must be finite and nonnegative"));
        }
        let mut prev = q0;
        for i in 1..=LOSS_CHECK_POINTS {
            let q = func(i as f64 / LOSS_CHECK_POINTS as f64);
            if !q.is_finite() || q < prev {
                return Err(Error::invalid("loss", &name, "Q must be finite and nondecreasing on [0, 1]"));
            }
            prev = q;
        }
        Ok(Loss::Custom {
            name,
            func: Arc::new(func),
        })
    }

    /// Squared error, `Q(e) = e²`.
    pub fn squared() -> Self {
        Loss::Custom {
            name: "squared".to_string(),
            func: Arc::new(|e| e * e),
        }
    }

    #[inline]
    pub fn eval(&self, err: f64) -> f64 {
        match self {
            Loss::Absolute => err,
            Loss::Custom { func, .. } => func(err),
        }
    }

    pub fn is_absolute(&self) -> bool {
        matches!(self, Loss::Absolute)
    }

    pub fn name(&self) -> &str {
        match self {
            Loss::Absolute => "absolute",
            Loss::Custom { name, .. } => name,
        }
    }
}

impl fmt::Debug for Loss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Loss({})", self.name())
    }
}


/// One problem instance: penalty factor, honest accuracy, horizon, and the
/// adversary's initial relative weight.
#[derive(Debug, Clone)]
pub struct ModelParams {
    epsilon: f64,
    mu: f64,
    horizon: usize,
    rho0: f64,
    loss: Loss,
}

fn open_unit(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(Error::invalid(name, value, "must lie in the open interval (0, 1)"))
    }
}

impl ModelParams {
    pub fn new(epsilon: f64, mu: f64, horizon: usize, rho0: f64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::invalid("horizon", horizon, "must be at least 1"));
        }
        Ok(Self {
            epsilon: open_unit("epsilon", epsilon)?,
            mu: open_unit("mu", mu)?,
            horizon,
            rho0: open_unit("rho0", rho0)?,
            loss: Loss::Absolute,
        })
    }

    /// `ε = 1/e`, `μ = 0.5`, `ρ₀ = 0.5`.
    pub fn standard(horizon: usize) -> Result<Self> {
        Self::new((-1.0f64).exp(), 0.5, horizon, 0.5)
    }

    pub fn with_loss(mut self, loss: Loss) -> Self {
        self.loss = loss;
        self
    }

    pub fn with_horizon(&self, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::invalid("horizon", horizon, "must be at least 1"));
        }
        let mut p = self.clone();
        p.horizon = horizon;
        Ok(p)
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        let mut p = self.clone();
        p.mu = open_unit("mu", mu)?;
        Ok(p)
    }

    pub fn with_rho0(&self, rho0: f64) -> Result<Self> {
        let mut p = self.clone();
        p.rho0 = open_unit("rho0", rho0)?;
        Ok(p)
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        let mut p = self.clone();
        p.epsilon = open_unit("epsilon", epsilon)?;
        Ok(p)
    }

    #[inline]
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    #[inline]
    pub fn mu(&self) -> f64 {
        self.mu
    }

    #[inline]
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    #[inline]
    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    #[inline]
    pub fn loss(&self) -> &Loss {
        &self.loss
    }
}
