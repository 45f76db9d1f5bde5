//! Finite discrete measure spaces.
//!
//! A space is an ordered list of opaque point labels with nonnegative
//! weights; the sigma-algebra is the power set and the total mass is
//! finite by construction. Zero-weight points model null sets, so
//! "almost everywhere" statements are testable: a property holds a.e.
//! exactly when it holds at every positive-weight point. No order on the
//! points is ever assumed.

use std::sync::Arc;

use serde::Serialize;

use crate::scalar::{Scalar, Tier};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct MeasureSpace {
    points: Vec<String>,
    weights: Vec<Scalar>,
    #[serde(skip)]
    tier: Tier,
    total_mass: Scalar,
}

impl MeasureSpace {
    /// Build a space with strictly positive total mass.
    pub fn new(points: Vec<String>, weights: Vec<Scalar>) -> Result<Self> {
        let space = Self::new_degenerate(points, weights)?;
        if space.total_mass.is_zero() {
            return Err(Error::ZeroTotalMass);
        }
        Ok(space)
    }

    /// Build a space that is explicitly allowed to carry zero total mass
    /// (including the empty space).
    pub fn new_degenerate(points: Vec<String>, weights: Vec<Scalar>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch {
                context: "weights".into(),
                expected: points.len(),
                actual: weights.len(),
            });
        }
        let tier = weights.first().map(Scalar::tier).unwrap_or(Tier::Exact);
        for (label, w) in points.iter().zip(&weights) {
            if w.tier() != tier {
                return Err(Error::MixedTier {
                    context: format!("weight of point `{label}`"),
                });
            }
            if !w.is_finite() {
                return Err(Error::NonFinite {
                    context: format!("weight of point `{label}`"),
                });
            }
            if w.is_negative() {
                return Err(Error::NegativeWeight {
                    label: label.clone(),
                    weight: w.to_string(),
                });
            }
        }
        let mut seen = std::collections::HashSet::new();
        for label in &points {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        // Float-tier sums run in ascending point index so results are
        // deterministic across runs and platforms.
        let total_mass = Scalar::sum(&weights, tier);
        Ok(MeasureSpace {
            points,
            weights,
            tier,
            total_mass,
        })
    }

    pub fn empty(tier: Tier) -> Self {
        MeasureSpace {
            points: Vec::new(),
            weights: Vec::new(),
            tier,
            total_mass: Scalar::zero(tier),
        }
    }

    /// Exact-tier space with integer weights; test and example helper.
    pub fn from_ints(labels: &[&str], weights: &[i64]) -> Result<Arc<Self>> {
        Ok(Arc::new(Self::new(
            labels.iter().map(|s| s.to_string()).collect(),
            weights.iter().map(|&w| Scalar::int(w)).collect(),
        )?))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn tier(&self) -> Tier {
        self.tier
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn label(&self, index: usize) -> &str {
        &self.points[index]
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> &Scalar {
        &self.weights[index]
    }

    /// `mu(X)`, computed eagerly at construction.
    pub fn total_mass(&self) -> &Scalar {
        &self.total_mass
    }

    /// True when the point carries zero weight (a null singleton).
    pub fn is_null(&self, index: usize) -> bool {
        self.weights[index].is_zero()
    }

    /// Indices of positive-weight points, ascending.
    pub fn positive_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.is_null(i)).collect()
    }

    /// `∫ f dmu = Σ_i f(x_i) w_i` for a function tabulated in point order.
    /// Float tier sums in ascending point index.
    pub fn integrate(&self, values: &[Scalar]) -> Result<Scalar> {
        if values.len() != self.len() {
            return Err(Error::LengthMismatch {
                context: "tabulated function".into(),
                expected: self.len(),
                actual: values.len(),
            });
        }
        let mut acc = Scalar::zero(self.tier);
        for (v, w) in values.iter().zip(&self.weights) {
            if v.tier() != self.tier {
                return Err(Error::MixedTier {
                    context: "tabulated function values".into(),
                });
            }
            acc = &acc + &(v * w);
        }
        Ok(acc)
    }
}
