use crate::model::{binomial, BinomialDist};

/// Exact law of an integer weight offset, stored over a contiguous support
/// `support_min ..= support_min + masses.len() - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetDistribution {
    support_min: i64,
    masses: Vec<f64>,
}

impl OffsetDistribution {
    pub fn point(j: i64) -> Self {
        Self {
            support_min: j,
            masses: vec![1.0],
        }
    }

    pub fn support_min(&self) -> i64 {
        self.support_min
    }

    pub fn support_max(&self) -> i64 {
        self.support_min + self.masses.len() as i64 - 1
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn prob(&self, j: i64) -> f64 {
        let i = j - self.support_min;
        if i < 0 {
            0.0
        } else {
            self.masses.get(i as usize).copied().unwrap_or(0.0)
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.masses
            .iter()
            .enumerate()
            .map(move |(i, &m)| (self.support_min + i as i64, m))
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// `E[f(J)]`.
    pub fn expect(&self, mut f: impl FnMut(i64) -> f64) -> f64 {
        self.iter().map(|(j, m)| if m == 0.0 { 0.0 } else { m * f(j) }).sum()
    }

    /// Law of `J + sign · Z` for `Z` independent of `J`.
    fn add_scaled(&self, z: &BinomialDist, sign: i64) -> Self {
        let n = z.trials();
        if n == 0 {
            return self.clone();
        }
        let mut out = vec![0.0; self.masses.len() + n];
        let pmf = z.pmf();
        for (i, &a) in self.masses.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (k, &b) in pmf.iter().enumerate() {
                // sign = -1 places Z = k at output index i + n - k
                let idx = if sign > 0 { i + k } else { i + n - k };
                out[idx] += a * b;
            }
        }
        let support_min = if sign > 0 {
            self.support_min
        } else {
            self.support_min - n as i64
        };
        Self {
            support_min,
            masses: out,
        }
    }

    /// After `n` lies: each lie moves the offset up by one when the honest
    /// expert is right, which happens with probability `mu`.
    pub fn after_lies(&self, n: usize, mu: f64) -> Self {
        self.add_scaled(&binomial(n, mu), 1)
    }

    /// After `m` truths: each truth moves the offset down by one when the
    /// honest expert is wrong, probability `1 - mu`.
    pub fn after_truths(&self, m: usize, mu: f64) -> Self {
        self.add_scaled(&binomial(m, 1.0 - mu), -1)
    }
}

/// Law of `X - Y` with `X ~ Bin(n_lies, μ)` and `Y ~ Bin(m_truths, 1-μ)`
/// independent: the offset after `n_lies` lies and `m_truths` truths in any
/// order.
pub fn offset_distribution(n_lies: usize, m_truths: usize, mu: f64) -> OffsetDistribution {
    OffsetDistribution::point(0)
        .after_lies(n_lies, mu)
        .after_truths(m_truths, mu)
}
