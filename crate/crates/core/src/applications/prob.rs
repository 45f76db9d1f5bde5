//! Joint-probability lower bounds for independent random variables.
//!
//! For independent `X_0, X_1, ..., X_k` the events `{X_i >= X_0}` are
//! positively correlated:
//!
//! ```text
//! P(∩_i {X_i >= X_0}) >= ∏_i P(X_i >= X_0)
//! ```
//!
//! and likewise with `<=`. Reducing over the law of `X_0`, the left side
//! is `∫ ∏_i S_i(t) dmu(t)` and each factor on the right is
//! `∫ S_i(t) dmu(t)`, where `mu(A) = P(X_0 ∈ A)` and `S_i(t) = P(X_i >= t)`
//! is the survival function. The `S_i` are monotone in `t` in a common
//! direction, hence correlated and nonnegative, so the bound is exactly
//! the k-function product inequality on the support of `X_0` (there
//! `mu(X) = 1`, so the mass factor drops out).

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chebyshev::{product_inequality, InequalityReport, Tolerance, Verdict};
use crate::family::FunctionFamily;
use crate::measure::MeasureSpace;
use crate::scalar::{Scalar, Tier};
use crate::{Error, Result};

/// Comparison direction for the race events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Geq,
    Leq,
}

/// A finitely supported distribution: strictly increasing support values
/// with probabilities summing to one (exactly in the exact tier, within
/// `1e-9` in the float tier).
#[derive(Debug, Clone)]
pub struct DiscreteDistribution {
    support: Vec<Scalar>,
    probs: Vec<Scalar>,
}

impl DiscreteDistribution {
    pub fn new(support: Vec<Scalar>, probs: Vec<Scalar>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution {
                reason: "empty support".into(),
            });
        }
        if support.len() != probs.len() {
            return Err(Error::InvalidDistribution {
                reason: format!(
                    "support has {} values but {} probabilities",
                    support.len(),
                    probs.len()
                ),
            });
        }
        let tier = support[0].tier();
        for v in support.iter().chain(&probs) {
            if v.tier() != tier {
                return Err(Error::InvalidDistribution {
                    reason: "mixed scalar tiers".into(),
                });
            }
            if !v.is_finite() {
                return Err(Error::InvalidDistribution {
                    reason: "non-finite entry".into(),
                });
            }
        }
        if probs.iter().any(Scalar::is_negative) {
            return Err(Error::InvalidDistribution {
                reason: "negative probability".into(),
            });
        }
        let mut pairs: Vec<(Scalar, Scalar)> = support.into_iter().zip(probs).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidDistribution {
                reason: "duplicate support value".into(),
            });
        }
        let (support, probs): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let total = Scalar::sum(&probs, tier);
        let normalized = match tier {
            Tier::Exact => total == Scalar::one(tier),
            Tier::Float => (total.to_f64() - 1.0).abs() <= 1e-9,
        };
        if !normalized {
            return Err(Error::InvalidDistribution {
                reason: format!("probabilities sum to {total}, expected 1"),
            });
        }
        Ok(DiscreteDistribution { support, probs })
    }

    /// Uniform distribution over the given values.
    pub fn uniform(support: Vec<Scalar>) -> Result<Self> {
        let n = support.len() as i64;
        if n == 0 {
            return Err(Error::InvalidDistribution {
                reason: "empty support".into(),
            });
        }
        let p = match support[0].tier() {
            Tier::Exact => Scalar::ratio(1, n),
            Tier::Float => Scalar::float(1.0 / n as f64),
        };
        Self::new(support, vec![p; n as usize])
    }

    /// Point mass at a single value.
    pub fn point_mass(value: Scalar) -> Self {
        let one = Scalar::one(value.tier());
        DiscreteDistribution {
            support: vec![value],
            probs: vec![one],
        }
    }

    pub fn support(&self) -> &[Scalar] {
        &self.support
    }

    pub fn probs(&self) -> &[Scalar] {
        &self.probs
    }

    pub fn tier(&self) -> Tier {
        self.support[0].tier()
    }

    /// `P(X >= t)` (or `P(X <= t)`), summed in ascending support order.
    pub fn tail_probability(&self, t: &Scalar, direction: Direction) -> Scalar {
        let mut acc = Scalar::zero(self.tier());
        for (s, p) in self.support.iter().zip(&self.probs) {
            let keep = match direction {
                Direction::Geq => s >= t,
                Direction::Leq => s <= t,
            };
            if keep {
                acc = &acc + p;
            }
        }
        acc
    }

    /// Cumulative probabilities as `f64`, for sampling.
    fn cumulative_f64(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.probs
            .iter()
            .map(|p| {
                acc += p.to_f64();
                acc
            })
            .collect()
    }
}

/// Report for one joint-probability bound instance.
#[derive(Debug, Clone, Serialize)]
pub struct WinProbabilityReport {
    pub direction: Direction,
    /// `P(X_i >= X_0)` (or `<=`) per competitor.
    pub pairwise: Vec<Scalar>,
    /// `P(∩_i {X_i >= X_0}) = ∫ ∏_i S_i dmu`.
    pub joint: Scalar,
    /// `∏_i P(X_i >= X_0)`.
    pub product_bound: Scalar,
    /// `joint - product_bound`.
    pub gap: Scalar,
    pub verdict: Verdict,
    /// Underlying product-inequality report (`None` for fewer than two
    /// competitors, where both sides coincide by definition).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inequality: Option<InequalityReport>,
}

/// Lower-bound the probability of beating (or losing to) every
/// independent competitor by the product of the pairwise probabilities.
pub fn win_probability_bounds(
    x0: &DiscreteDistribution,
    competitors: &[DiscreteDistribution],
    direction: Direction,
    tol: &Tolerance,
) -> Result<WinProbabilityReport> {
    let tier = x0.tier();
    if competitors.iter().any(|c| c.tier() != tier) {
        return Err(Error::MixedTier {
            context: "competitor distributions".into(),
        });
    }
    let space = Arc::new(MeasureSpace::new(
        x0.support().iter().map(Scalar::to_string).collect(),
        x0.probs().to_vec(),
    )?);
    let survival_rows: Vec<Vec<Scalar>> = competitors
        .iter()
        .map(|c| {
            x0.support()
                .iter()
                .map(|t| c.tail_probability(t, direction))
                .collect()
        })
        .collect();
    let pairwise: Vec<Scalar> = survival_rows
        .iter()
        .map(|row| space.integrate(row))
        .collect::<Result<_>>()?;

    if competitors.len() < 2 {
        // Zero or one competitor: both sides are the same number.
        let joint = match pairwise.first() {
            Some(p) => p.clone(),
            None => space.total_mass().clone(),
        };
        let product_bound = joint.clone();
        let gap = &joint - &product_bound;
        return Ok(WinProbabilityReport {
            direction,
            pairwise,
            joint,
            product_bound,
            gap,
            verdict: Verdict::HoldsWithEquality,
            inequality: None,
        });
    }

    let names = (1..=competitors.len()).map(|i| format!("S{i}")).collect();
    let fam = FunctionFamily::new(Arc::clone(&space), names, survival_rows)?;
    let joint = space.integrate(&{
        let n = space.len();
        (0..n)
            .map(|p| {
                let mut acc = fam.value(0, p).clone();
                for i in 1..fam.k() {
                    acc = &acc * fam.value(i, p);
                }
                acc
            })
            .collect::<Vec<_>>()
    })?;
    let report = product_inequality(&fam, true, tol)?;
    let product_bound = report.rhs.clone();
    let gap = &joint - &product_bound;
    Ok(WinProbabilityReport {
        direction,
        pairwise,
        joint,
        product_bound,
        gap,
        verdict: report.verdict,
        inequality: Some(report),
    })
}

/// Seeded Monte Carlo estimate of the joint probability with a Wilson
/// 95% confidence interval.
#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloReport {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub successes: u64,
    pub n_samples: u64,
    pub seed: u64,
}

/// Estimate `P(∩_i {X_i >= X_0})` by sampling all variables
/// independently. Deterministic for a fixed seed.
pub fn monte_carlo_joint(
    x0: &DiscreteDistribution,
    competitors: &[DiscreteDistribution],
    direction: Direction,
    n_samples: u64,
    seed: u64,
) -> Result<MonteCarloReport> {
    if n_samples == 0 {
        return Err(Error::InvalidInput {
            reason: "n_samples must be at least 1".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0_cum = x0.cumulative_f64();
    let comp_cum: Vec<Vec<f64>> = competitors.iter().map(|c| c.cumulative_f64()).collect();

    let draw = |cum: &[f64], u: f64| -> usize {
        cum.partition_point(|&c| c <= u).min(cum.len() - 1)
    };

    let mut successes = 0u64;
    for _ in 0..n_samples {
        let t0 = &x0.support()[draw(&x0_cum, rng.random::<f64>())];
        let won = competitors.iter().zip(&comp_cum).all(|(c, cum)| {
            let ti = &c.support()[draw(cum, rng.random::<f64>())];
            match direction {
                Direction::Geq => ti >= t0,
                Direction::Leq => ti <= t0,
            }
        });
        if won {
            successes += 1;
        }
    }

    // Wilson score interval at 95%.
    let z = 1.959_963_984_540_054_f64;
    let n = n_samples as f64;
    let p_hat = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (p_hat + z * z / (2.0 * n)) / denom;
    let half = z * (p_hat * (1.0 - p_hat) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    Ok(MonteCarloReport {
        estimate: p_hat,
        ci_low: (center - half).max(0.0),
        ci_high: (center + half).min(1.0),
        successes,
        n_samples,
        seed,
    })
}
