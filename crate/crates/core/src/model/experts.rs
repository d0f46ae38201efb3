use crate::error::{Error, Result};

/// Raw (unnormalized) expert weights at some stage of the learning process.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpertState {
    weights: Vec<f64>,
    stage: usize,
}

impl ExpertState {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("weights", "[]", "at least one expert required"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::invalid("weights", w, "weights must be finite and positive"));
        }
        Ok(Self { weights, stage: 0 })
    }

    /// All experts start with weight 1.
    pub fn uniform(experts: usize) -> Result<Self> {
        Self::new(vec![1.0; experts])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn normalized(&self) -> Vec<f64> {
        let total: f64 = self.weights.iter().sum();
        self.weights.iter().map(|w| w / total).collect()
    }
}

fn check_bits(bits: &[u8], expected: usize) -> Result<()> {
    if bits.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: bits.len(),
        });
    }
    match bits.iter().find(|&&b| b > 1) {
        Some(&b) => Err(Error::NotBinary(b)),
        None => Ok(()),
    }
}

/// Weighted-average prediction `ŷ = Σ p̃ⁱ xⁱ`.
pub fn system_prediction(state: &ExpertState, predictions: &[u8]) -> Result<f64> {
    check_bits(predictions, state.len())?;
    let total: f64 = state.weights.iter().sum();
    let voted: f64 = state
        .weights
        .iter()
        .zip(predictions)
        .filter(|(_, &x)| x == 1)
        .map(|(w, _)| w)
        .sum();
    Ok(voted / total)
}

/// Multiplicative update: every expert whose prediction missed `outcome` has
/// its weight multiplied by `epsilon`.
pub fn mw_step(state: &ExpertState, predictions: &[u8], outcome: u8, epsilon: f64) -> Result<ExpertState> {
    check_bits(predictions, state.len())?;
    if outcome > 1 {
        return Err(Error::NotBinary(outcome));
    }
    let weights = state
        .weights
        .iter()
        .zip(predictions)
        .map(|(&w, &x)| if x == outcome { w } else { w * epsilon })
        .collect();
    Ok(ExpertState {
        weights,
        stage: state.stage + 1,
    })
}
