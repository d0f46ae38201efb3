//! Offline adversary policies.
//!
//! Decisions are stored relative to the true outcome: [`Decision::Lie`]
//! reports `1 - y_k`, [`Decision::Truth`] reports `y_k`. The expected loss
//! only depends on this relative form, never on the outcome sequence itself.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Default bound on the denominator of the rational approximation used by
/// [`ratio_policy`].
pub const DEFAULT_MAX_DENOMINATOR: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Lie,
    Truth,
}

impl Decision {
    pub fn symbol(self) -> char {
        match self {
            Decision::Lie => 'F',
            Decision::Truth => 'T',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OfflinePolicy {
    decisions: Vec<Decision>,
}

impl OfflinePolicy {
    pub fn new(decisions: Vec<Decision>) -> Self {
        Self { decisions }
    }

    pub fn decisions(&self) -> &[Decision] {
        &self.decisions
    }

    pub fn horizon(&self) -> usize {
        self.decisions.len()
    }

    pub fn lies(&self) -> usize {
        self.decisions.iter().filter(|d| **d == Decision::Lie).count()
    }

    pub fn truths(&self) -> usize {
        self.horizon() - self.lies()
    }

    /// Policy whose `i`-th decision is `Truth` iff bit `i` of `mask` is set.
    pub fn from_mask(mask: u64, horizon: usize) -> Self {
        let decisions = (0..horizon)
            .map(|i| if (mask >> i) & 1 == 1 { Decision::Truth } else { Decision::Lie })
            .collect();
        Self { decisions }
    }

    pub fn block_form(&self) -> BlockForm {
        let mut blocks = Vec::new();
        let mut lies = 0;
        let mut truths = 0;
        for d in &self.decisions {
            match d {
                Decision::Lie if truths > 0 => {
                    blocks.push((lies, truths));
                    lies = 1;
                    truths = 0;
                }
                Decision::Lie => lies += 1,
                Decision::Truth => truths += 1,
            }
        }
        blocks.push((lies, truths));
        BlockForm { blocks }
    }

    pub fn check_horizon(&self, horizon: usize) -> Result<()> {
        if self.horizon() == horizon {
            Ok(())
        } else {
            Err(Error::HorizonMismatch {
                horizon,
                got: self.horizon(),
            })
        }
    }
}

impl fmt::Display for OfflinePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.decisions.iter().try_for_each(|d| write!(f, "{}", d.symbol()))
    }
}

impl FromStr for OfflinePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let decisions = s
            .trim()
            .chars()
            .map(|c| match c {
                'F' => Ok(Decision::Lie),
                'T' => Ok(Decision::Truth),
                other => Err(Error::Parse(format!("unexpected character {other:?}, expected F or T"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if decisions.is_empty() {
            return Err(Error::Parse("empty policy".into()));
        }
        Ok(Self { decisions })
    }
}

/// Alternating lie/truth run lengths `(n₁, m₁), …, (n_k, m_k)`.
///
/// Only `n₁` and the final `m_k` may be zero; every other run is maximal
/// and strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockForm {
    blocks: Vec<(usize, usize)>,
}

impl BlockForm {
    pub fn new(blocks: Vec<(usize, usize)>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidBlocks("no blocks".into()));
        }
        let last = blocks.len() - 1;
        for (i, &(n, m)) in blocks.iter().enumerate() {
            if n == 0 && i > 0 {
                return Err(Error::InvalidBlocks(format!("lie run {} is empty", i + 1)));
            }
            if m == 0 && i < last {
                return Err(Error::InvalidBlocks(format!("truth run {} is empty", i + 1)));
            }
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn total(&self) -> usize {
        self.blocks.iter().map(|(n, m)| n + m).sum()
    }

    pub fn check_horizon(&self, horizon: usize) -> Result<()> {
        if self.total() == horizon {
            Ok(())
        } else {
            Err(Error::HorizonMismatch {
                horizon,
                got: self.total(),
            })
        }
    }

    pub fn to_policy(&self) -> OfflinePolicy {
        let mut decisions = Vec::with_capacity(self.total());
        for &(n, m) in &self.blocks {
            decisions.extend(std::iter::repeat_n(Decision::Lie, n));
            decisions.extend(std::iter::repeat_n(Decision::Truth, m));
        }
        OfflinePolicy { decisions }
    }
}

/// Expands `blocks` into per-stage decisions, checking the total length.
pub fn from_blocks(blocks: &BlockForm, horizon: usize) -> Result<OfflinePolicy> {
    blocks.check_horizon(horizon)?;
    Ok(blocks.to_policy())
}

pub fn false_policy(horizon: usize) -> OfflinePolicy {
    OfflinePolicy::new(vec![Decision::Lie; horizon])
}

pub fn true_policy(horizon: usize) -> OfflinePolicy {
    OfflinePolicy::new(vec![Decision::Truth; horizon])
}

/// I.i.d. decisions, `Truth` with probability `q`, reproducible from `seed`.
pub fn random_policy(horizon: usize, q: f64, seed: u64) -> Result<OfflinePolicy> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid("q", q, "must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let decisions = (0..horizon)
        .map(|_| if rng.gen::<f64>() < q { Decision::Truth } else { Decision::Lie })
        .collect();
    Ok(OfflinePolicy { decisions })
}

/// Best rational approximation `num/den` of `x > 0` among continued-fraction
/// convergents with `den <= max_den`.
pub fn rational_approximation(x: f64, max_den: u64) -> (u64, u64) {
    assert!(x.is_finite() && x > 0.0 && max_den >= 1);
    const SNAP: f64 = 1e-9;
    let (mut h_prev, mut h) = (1u64, x.floor() as u64);
    let (mut k_prev, mut k) = (0u64, 1u64);
    let mut rem = x - x.floor();
    if 1.0 - rem < SNAP {
        return (h + 1, 1);
    }
    while rem > SNAP {
        let inv = 1.0 / rem;
        let mut a = inv.floor();
        let mut frac = inv - a;
        if 1.0 - frac < SNAP {
            a += 1.0;
            frac = 0.0;
        }
        let a = a as u64;
        let k_next = a.saturating_mul(k).saturating_add(k_prev);
        if k_next > max_den {
            break;
        }
        let h_next = a * h + h_prev;
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        rem = frac;
    }
    (h, k)
}

/// Result of [`ratio_policy`].
#[derive(Debug, Clone, PartialEq)]
pub struct RatioPolicy {
    pub policy: OfflinePolicy,
    /// Lie-run length `b` of each repeated prefix pair.
    pub lie_run: usize,
    /// Truth-run length `a` of each repeated prefix pair.
    pub truth_run: usize,
    /// Number of `(b, a)` pairs in the prefix.
    pub pairs: usize,
    /// Set when the horizon cannot hold one pair, in which case `policy` is
    /// the all-lie policy.
    pub fell_back: bool,
}

pub fn ratio_policy(params: &ModelParams) -> RatioPolicy {
    ratio_policy_with(params, DEFAULT_MAX_DENOMINATOR)
}

/// Prefix of `(b, a)` pairs with `a/b ≈ μ/(1-μ)`, filling at most `⌊N/2⌋`
/// stages, followed by one terminal lie run of the remaining length.
pub fn ratio_policy_with(params: &ModelParams, max_den: u64) -> RatioPolicy {
    let n = params.horizon();
    let mu = params.mu();
    let (a, b) = rational_approximation(mu / (1.0 - mu), max_den.max(1));
    // Tiny μ rounds to 0/1; keep at least one truth per pair.
    let (a, b) = (a.max(1) as usize, b as usize);
    let pairs = (n / 2) / (a + b);
    if pairs == 0 {
        return RatioPolicy {
            policy: false_policy(n),
            lie_run: b,
            truth_run: a,
            pairs: 0,
            fell_back: true,
        };
    }
    let mut blocks = vec![(b, a); pairs];
    blocks.push((n - pairs * (a + b), 0));
    let policy = BlockForm { blocks }.to_policy();
    RatioPolicy {
        policy,
        lie_run: b,
        truth_run: a,
        pairs,
        fell_back: false,
    }
}
