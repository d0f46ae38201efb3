/// Exact probability mass of `Bin(trials, success_prob)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinomialDist {
    trials: usize,
    success_prob: f64,
    pmf: Vec<f64>,
    // tail[j] = P(Z > j) for j in 0..=trials
    tail: Vec<f64>,
}

/// Builds the pmf with the ratio recurrence
/// `pmf(i+1) = pmf(i) · (n-i)/(i+1) · p/(1-p)`, started at the mode and run
/// outward in both directions, then normalized. Starting at the mode keeps
/// every intermediate value near 1, so large `n` does not underflow.
///
/// # Panics
///
/// If `p` is not in `[0, 1]`.
pub fn binomial(trials: usize, p: f64) -> BinomialDist {
    assert!((0.0..=1.0).contains(&p), "success probability {p} outside [0, 1]");
    let n = trials;
    let mut pmf = vec![0.0; n + 1];
    if p == 0.0 {
        pmf[0] = 1.0;
    } else if p == 1.0 {
        pmf[n] = 1.0;
    } else {
        let odds = p / (1.0 - p);
        let mode = (((n + 1) as f64 * p).floor() as usize).min(n);
        pmf[mode] = 1.0;
        for i in mode..n {
            pmf[i + 1] = pmf[i] * ((n - i) as f64 / (i + 1) as f64) * odds;
        }
        for i in (1..=mode).rev() {
            pmf[i - 1] = pmf[i] * (i as f64 / (n - i + 1) as f64) / odds;
        }
        let total: f64 = pmf.iter().sum();
        pmf.iter_mut().for_each(|m| *m /= total);
    }

    let mut tail = vec![0.0; n + 1];
    for j in (0..n).rev() {
        // summation rounding may nudge the top of the tail just past 1
        tail[j] = (tail[j + 1] + pmf[j + 1]).min(1.0);
    }
    BinomialDist {
        trials,
        success_prob: p,
        pmf,
        tail,
    }
}

impl BinomialDist {
    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn success_prob(&self) -> f64 {
        self.success_prob
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// `P(Z > j)`.
    #[inline]
    pub fn tail_gt(&self, j: i64) -> f64 {
        if j < 0 {
            1.0
        } else if j as usize >= self.trials {
            0.0
        } else {
            self.tail[j as usize]
        }
    }

    pub fn mean(&self) -> f64 {
        self.trials as f64 * self.success_prob
    }
}
