//! Monotonicity of `z -> (rho - z) f(z)` for power series
//! `f(z) = Σ_{n>=1} a_n z^n` with nonnegative coefficients whose drift
//! `{rho^n a_n}` is monotone.
//!
//! The underlying mechanism is the two-function bound applied to
//! `n -> a_n rho^n` and `n -> (z/gamma)^n` against the weights
//! `(gamma/rho)^n`; chasing the geometric sums through that bound gives
//! monotonicity of the *normalized* form `(rho - z) f(z) / z` on
//! `[0, rho)`, in the same direction as the drift. The widely quoted
//! *plain* form `(rho - z) f(z)` drops a factor `z/gamma` and genuinely
//! moves the wrong way for some inputs (take `a_n = 1`, `rho = 1`:
//! normalized is constant `1`, plain is `z`). Both forms are evaluated
//! and reported; a pinned regression keeps the distinction honest.
//!
//! Truncated evaluations carry certified tail brackets, and monotonicity
//! verdicts are only issued when consecutive brackets separate.

use std::sync::Arc;

use serde::Serialize;

use crate::family::FunctionFamily;
use crate::measure::MeasureSpace;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Direction of the drift sequence `{rho^n a_n}` on the retained prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Drift {
    Nonincreasing,
    Nondecreasing,
    Constant,
}

/// How the series continues past the retained coefficients.
#[derive(Debug, Clone)]
pub enum TailModel {
    /// No tail: the series is exactly the retained polynomial.
    None,
    /// The drift keeps nonincreasing below its last retained value; the
    /// tail is bracketed by `[0, geometric-from-last]`. Rejected for
    /// nondecreasing drift.
    GeometricFromLast,
    /// Certified `sup_n rho^n a_n <= bound` over the tail; the drift is
    /// asserted to stay monotone in the prefix direction.
    SupBound(Scalar),
    /// Exact continuation `a_{N+m} = a_N * ratio^m`; the tail sums in
    /// closed form and the brackets are degenerate.
    ExactGeometric(Scalar),
}

/// Nonnegative coefficients `a_1..a_N`, the evaluation radius `rho`, and
/// a tail model. The drift direction is detected, never assumed.
#[derive(Debug, Clone)]
pub struct PowerSeriesSpec {
    pub coeffs: Vec<Scalar>,
    pub rho: Scalar,
    pub tail: TailModel,
}

/// Certified enclosure of a value.
#[derive(Debug, Clone, Serialize)]
pub struct Bracket {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl Bracket {
    fn point(v: Scalar) -> Self {
        Bracket {
            lo: v.clone(),
            hi: v,
        }
    }

    fn shift_scale(&self, base: &Scalar, factor: &Scalar) -> Bracket {
        // factor = rho - z > 0, so endpoints stay ordered
        Bracket {
            lo: factor * &(base + &self.lo),
            hi: factor * &(base + &self.hi),
        }
    }

    pub fn contains(&self, v: &Scalar) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn width(&self) -> Scalar {
        &self.hi - &self.lo
    }
}

/// One evaluation point: brackets for `f(z)`, the plain form
/// `(rho - z) f(z)` and the normalized form `(rho - z) f(z) / z` (taken
/// as `(rho - z) Σ a_n z^{n-1}`, which extends continuously to `z = 0`).
#[derive(Debug, Clone, Serialize)]
pub struct SeriesGridPoint {
    pub z: Scalar,
    pub f: Bracket,
    pub plain: Bracket,
    pub normalized: Bracket,
}

/// What the bracket sequence certifies about a form on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotoneObservation {
    /// A single value is consistent with every bracket.
    Constant,
    StrictlyDecreasing,
    StrictlyIncreasing,
    Nonincreasing,
    Nondecreasing,
    /// Certified movement in both directions.
    NotMonotone,
    /// Brackets overlap too much to certify anything.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesMonotonicityReport {
    pub drift: Drift,
    /// Predicted direction for both forms (same as the drift), when the
    /// tail model keeps the full drift monotone.
    pub expected: Option<Drift>,
    pub points: Vec<SeriesGridPoint>,
    pub normalized_observed: MonotoneObservation,
    pub plain_observed: MonotoneObservation,
    /// Whether the observation certifies (`Some(true)`) or refutes
    /// (`Some(false)`) the prediction; `None` when inconclusive or when
    /// there is no prediction.
    pub normalized_matches: Option<bool>,
    pub plain_matches: Option<bool>,
}

impl PowerSeriesSpec {
    fn validate(&self) -> Result<Drift> {
        if self.coeffs.is_empty() {
            return Err(Error::InvalidInput {
                reason: "power series needs at least one coefficient".into(),
            });
        }
        let tier = self.rho.tier();
        if !self.rho.is_positive() || !self.rho.is_finite() {
            return Err(Error::InvalidInput {
                reason: "rho must be strictly positive and finite".into(),
            });
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.tier() != tier {
                return Err(Error::MixedTier {
                    context: format!("coefficient a_{}", i + 1),
                });
            }
            if a.is_negative() || !a.is_finite() {
                return Err(Error::InvalidInput {
                    reason: format!("coefficient a_{} must be finite and nonnegative", i + 1),
                });
            }
        }
        let drift = self.detect_drift()?;
        match &self.tail {
            TailModel::None => {}
            TailModel::GeometricFromLast => {
                if drift == Drift::Nondecreasing {
                    return Err(Error::MissingTailCertificate {
                        reason: "drift is nondecreasing; a geometric-from-last tail needs a \
                                 certified sup bound instead"
                            .into(),
                    });
                }
            }
            TailModel::SupBound(bound) => {
                if bound.tier() != tier {
                    return Err(Error::MixedTier {
                        context: "tail sup bound".into(),
                    });
                }
                if bound.is_negative() || !bound.is_finite() {
                    return Err(Error::MissingTailCertificate {
                        reason: "tail sup bound must be finite and nonnegative".into(),
                    });
                }
                if drift == Drift::Nondecreasing && *bound < self.last_drift() {
                    return Err(Error::MissingTailCertificate {
                        reason: format!(
                            "tail sup bound {bound} is below the last retained drift value {}",
                            self.last_drift()
                        ),
                    });
                }
            }
            TailModel::ExactGeometric(ratio) => {
                if ratio.tier() != tier {
                    return Err(Error::MixedTier {
                        context: "tail ratio".into(),
                    });
                }
                if ratio.is_negative() || !ratio.is_finite() {
                    return Err(Error::InvalidInput {
                        reason: "tail ratio must be finite and nonnegative".into(),
                    });
                }
            }
        }
        Ok(drift)
    }

    /// Direction of `{rho^n a_n}` over the retained prefix.
    pub fn detect_drift(&self) -> Result<Drift> {
        let mut prev = &self.coeffs[0] * &self.rho;
        let mut rho_pow = self.rho.clone();
        let mut rose = false;
        let mut fell = false;
        for (i, a) in self.coeffs.iter().enumerate().skip(1) {
            rho_pow = &rho_pow * &self.rho;
            let cur = a * &rho_pow;
            if cur > prev {
                if fell {
                    return Err(Error::DriftNotMonotone { index: i + 1 });
                }
                rose = true;
            } else if cur < prev {
                if rose {
                    return Err(Error::DriftNotMonotone { index: i + 1 });
                }
                fell = true;
            }
            prev = cur;
        }
        Ok(match (rose, fell) {
            (false, false) => Drift::Constant,
            (true, false) => Drift::Nondecreasing,
            (false, true) => Drift::Nonincreasing,
            (true, true) => unreachable!("rejected above"),
        })
    }

    /// `rho^N a_N`, the last retained drift value.
    fn last_drift(&self) -> Scalar {
        let n = self.coeffs.len();
        &self.rho.pow_usize(n) * self.coeffs.last().expect("validated nonempty")
    }

    /// Direction of the full drift sequence implied by prefix and tail
    /// model; `None` when the combination is not monotone.
    fn expected_direction(&self, drift: Drift) -> Option<Drift> {
        let last = self.last_drift();
        match &self.tail {
            TailModel::None => match drift {
                // Zero-padding keeps nonincreasing drift monotone.
                Drift::Nonincreasing => Some(Drift::Nonincreasing),
                Drift::Constant if last.is_zero() => Some(Drift::Constant),
                Drift::Constant => Some(Drift::Nonincreasing),
                Drift::Nondecreasing if last.is_zero() => Some(Drift::Constant),
                Drift::Nondecreasing => None,
            },
            TailModel::GeometricFromLast => Some(Drift::Nonincreasing),
            TailModel::SupBound(_) => match drift {
                Drift::Nonincreasing => Some(Drift::Nonincreasing),
                Drift::Nondecreasing => Some(Drift::Nondecreasing),
                // A bound alone does not pick the continuation direction.
                Drift::Constant => None,
            },
            TailModel::ExactGeometric(ratio) => {
                let one = Scalar::one(ratio.tier());
                let step = &(ratio * &self.rho) - &one;
                let tail_dir = if last.is_zero() || step.is_zero() {
                    Drift::Constant
                } else if step.is_negative() {
                    Drift::Nonincreasing
                } else {
                    Drift::Nondecreasing
                };
                match (drift, tail_dir) {
                    (Drift::Constant, t) => Some(t),
                    (d, Drift::Constant) => Some(d),
                    (d, t) if d == t => Some(d),
                    _ => None,
                }
            }
        }
    }

    /// Tail sums `Σ_{n>N} a_n z^n` (for `f`) and `Σ_{n>N} a_n z^{n-1}`
    /// (for the normalized form), as certified brackets.
    fn tail_brackets(&self, z: &Scalar, drift: Drift) -> Result<(Bracket, Bracket)> {
        let tier = z.tier();
        let zero = Scalar::zero(tier);
        let one = Scalar::one(tier);
        let n = self.coeffs.len();
        let q = z / &self.rho;
        let last = self.last_drift();

        // Σ_{n>N} c rho^-n z^n and Σ_{n>N} c rho^-n z^{n-1} for a drift
        // ceiling c: the geometric envelopes.
        let geo = |c: &Scalar| -> (Scalar, Scalar) {
            let f_tail = &(c * &q.pow_usize(n + 1)) / &(&one - &q);
            let h_tail = &(c * &z.pow_usize(n)) / &(&self.rho.pow_usize(n) * &(&self.rho - z));
            (f_tail, h_tail)
        };

        match &self.tail {
            TailModel::None => Ok((Bracket::point(zero.clone()), Bracket::point(zero))),
            TailModel::GeometricFromLast => {
                let (f_hi, h_hi) = geo(&last);
                Ok((
                    Bracket { lo: zero.clone(), hi: f_hi },
                    Bracket { lo: zero, hi: h_hi },
                ))
            }
            TailModel::SupBound(bound) => {
                let (f_hi, h_hi) = geo(bound);
                let (f_lo, h_lo) = if drift == Drift::Nondecreasing {
                    geo(&last)
                } else {
                    (zero.clone(), zero)
                };
                Ok((
                    Bracket { lo: f_lo, hi: f_hi },
                    Bracket { lo: h_lo, hi: h_hi },
                ))
            }
            TailModel::ExactGeometric(ratio) => {
                let rz = ratio * z;
                if rz >= one {
                    return Err(Error::InvalidGrid {
                        reason: format!("tail diverges at z = {z} (ratio * z >= 1)"),
                    });
                }
                let a_last = self.coeffs.last().expect("validated nonempty");
                let h_tail = &(&(a_last * &z.pow_usize(n - 1)) * &rz) / &(&one - &rz);
                let f_tail = &h_tail * z;
                Ok((Bracket::point(f_tail), Bracket::point(h_tail)))
            }
        }
    }
}

/// Partial sums `Σ a_n z^n` and `Σ a_n z^{n-1}` in ascending-index order.
fn partial_sums(coeffs: &[Scalar], z: &Scalar) -> (Scalar, Scalar) {
    let tier = z.tier();
    let mut f = Scalar::zero(tier);
    let mut h = Scalar::zero(tier);
    let mut z_prev = Scalar::one(tier); // z^{n-1}
    for a in coeffs {
        h = &h + &(a * &z_prev);
        let z_cur = &z_prev * z;
        f = &f + &(a * &z_cur);
        z_prev = z_cur;
    }
    (f, h)
}

fn classify_brackets(brackets: &[&Bracket]) -> MonotoneObservation {
    use MonotoneObservation::*;
    if brackets.len() < 2 {
        return Constant;
    }
    let max_lo = brackets.iter().map(|b| &b.lo).max().expect("nonempty");
    let min_hi = brackets.iter().map(|b| &b.hi).min().expect("nonempty");
    if max_lo <= min_hi {
        return Constant;
    }
    let pairs: Vec<(&Bracket, &Bracket)> =
        brackets.windows(2).map(|w| (w[0], w[1])).collect();
    let strict_down = |(a, b): &(&Bracket, &Bracket)| a.lo > b.hi;
    let weak_down = |(a, b): &(&Bracket, &Bracket)| a.lo >= b.hi;
    let strict_up = |(a, b): &(&Bracket, &Bracket)| a.hi < b.lo;
    let weak_up = |(a, b): &(&Bracket, &Bracket)| a.hi <= b.lo;
    if pairs.iter().all(strict_down) {
        StrictlyDecreasing
    } else if pairs.iter().all(strict_up) {
        StrictlyIncreasing
    } else if pairs.iter().all(weak_down) {
        Nonincreasing
    } else if pairs.iter().all(weak_up) {
        Nondecreasing
    } else if pairs.iter().any(strict_up) && pairs.iter().any(strict_down) {
        NotMonotone
    } else {
        Inconclusive
    }
}

fn matches_expected(expected: Option<Drift>, observed: MonotoneObservation) -> Option<bool> {
    use MonotoneObservation::*;
    let expected = expected?;
    match expected {
        Drift::Nonincreasing => match observed {
            StrictlyDecreasing | Nonincreasing | Constant => Some(true),
            StrictlyIncreasing | Nondecreasing | NotMonotone => Some(false),
            Inconclusive => None,
        },
        Drift::Nondecreasing => match observed {
            StrictlyIncreasing | Nondecreasing | Constant => Some(true),
            StrictlyDecreasing | Nonincreasing | NotMonotone => Some(false),
            Inconclusive => None,
        },
        Drift::Constant => match observed {
            Constant => Some(true),
            Inconclusive => None,
            _ => Some(false),
        },
    }
}

/// Evaluate both forms over a strictly increasing grid in `[0, rho)` and
/// certify their direction against the drift's prediction.
pub fn series_monotonicity(
    spec: &PowerSeriesSpec,
    grid: &[Scalar],
) -> Result<SeriesMonotonicityReport> {
    let drift = spec.validate()?;
    if grid.is_empty() {
        return Err(Error::InvalidGrid {
            reason: "grid is empty".into(),
        });
    }
    let tier = spec.rho.tier();
    for (i, z) in grid.iter().enumerate() {
        if z.tier() != tier {
            return Err(Error::MixedTier {
                context: format!("grid point {i}"),
            });
        }
        if z.is_negative() || *z >= spec.rho {
            return Err(Error::InvalidGrid {
                reason: format!("grid point {z} is outside [0, rho)"),
            });
        }
        if i > 0 && grid[i - 1] >= *z {
            return Err(Error::InvalidGrid {
                reason: format!("grid must be strictly increasing (point {i})"),
            });
        }
    }

    let mut points = Vec::with_capacity(grid.len());
    for z in grid {
        let (f_n, h_n) = partial_sums(&spec.coeffs, z);
        let (f_tail, h_tail) = spec.tail_brackets(z, drift)?;
        let factor = &spec.rho - z;
        points.push(SeriesGridPoint {
            z: z.clone(),
            f: Bracket {
                lo: &f_n + &f_tail.lo,
                hi: &f_n + &f_tail.hi,
            },
            plain: f_tail.shift_scale(&f_n, &factor),
            normalized: h_tail.shift_scale(&h_n, &factor),
        });
    }

    let expected = spec.expected_direction(drift);
    let normalized_observed =
        classify_brackets(&points.iter().map(|p| &p.normalized).collect::<Vec<_>>());
    let plain_observed = classify_brackets(&points.iter().map(|p| &p.plain).collect::<Vec<_>>());
    Ok(SeriesMonotonicityReport {
        drift,
        expected,
        normalized_observed,
        plain_observed,
        normalized_matches: matches_expected(expected, normalized_observed),
        plain_matches: matches_expected(expected, plain_observed),
        points,
    })
}

/// The raw two-function instance behind the series bound, for direct
/// verification: functions `n -> a_n rho^n` and `n -> (z/gamma)^n` on the
/// index points `1..=N` weighted by `(gamma/rho)^n`, for
/// `0 <= z < gamma < rho`. Nonincreasing drift makes the pair correlated,
/// nondecreasing drift makes it anticorrelated.
pub fn series_comparison_family(
    spec: &PowerSeriesSpec,
    z: &Scalar,
    gamma: &Scalar,
) -> Result<FunctionFamily> {
    spec.validate()?;
    if z.is_negative() || z >= gamma || *gamma >= spec.rho {
        return Err(Error::InvalidGrid {
            reason: format!("need 0 <= z < gamma < rho, got z = {z}, gamma = {gamma}"),
        });
    }
    let tier = spec.rho.tier();
    if z.tier() != tier || gamma.tier() != tier {
        return Err(Error::MixedTier {
            context: "comparison points".into(),
        });
    }
    let n = spec.coeffs.len();
    let weight_ratio = gamma / &spec.rho;
    let value_ratio = z / gamma;
    let mut weights = Vec::with_capacity(n);
    let mut drift_row = Vec::with_capacity(n);
    let mut power_row = Vec::with_capacity(n);
    let mut w = Scalar::one(tier);
    let mut rho_pow = Scalar::one(tier);
    let mut v = Scalar::one(tier);
    for a in &spec.coeffs {
        w = &w * &weight_ratio;
        rho_pow = &rho_pow * &spec.rho;
        v = &v * &value_ratio;
        weights.push(w.clone());
        drift_row.push(a * &rho_pow);
        power_row.push(v.clone());
    }
    let space = MeasureSpace::new((1..=n).map(|i| i.to_string()).collect(), weights)?;
    FunctionFamily::new(
        Arc::new(space),
        vec!["drift".into(), "ratio_power".into()],
        vec![drift_row, power_row],
    )
}
