//! JSON input schemas and tier-aware resolution.
//!
//! Numbers may arrive as JSON numbers or as strings; the exact tier
//! rejects non-integer JSON numbers outright (a float literal cannot carry
//! exact intent) but accepts `"p/q"` and decimal strings. Function and
//! sequence maps preserve file order.

use std::sync::Arc;

use serde::Deserialize;
use serde_json::{Map, Value};

use crate::applications::{DiscreteDistribution, PowerSeriesSpec, TailModel};
use crate::chebyshev::{SequenceInstance, TailCertificate};
use crate::family::FunctionFamily;
use crate::measure::MeasureSpace;
use crate::scalar::{Scalar, Tier};
use crate::{Error, Result};

/// A scalar as it appears in a file: number or string, resolved later
/// against the run's tier.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RawScalar {
    Number(serde_json::Number),
    Text(String),
}

impl RawScalar {
    pub fn resolve(&self, tier: Tier) -> Result<Scalar> {
        match self {
            RawScalar::Number(n) => match tier {
                Tier::Exact => {
                    if let Some(i) = n.as_i64() {
                        Ok(Scalar::int(i))
                    } else if n.as_u64().is_some() {
                        // Fits u64 but not i64; go through the string form.
                        Scalar::parse(&n.to_string(), Tier::Exact)
                    } else {
                        Err(Error::FloatLiteralInExactTier {
                            text: n.to_string(),
                        })
                    }
                }
                Tier::Float => {
                    let x = n.as_f64().ok_or_else(|| Error::NonFinite {
                        context: format!("number `{n}`"),
                    })?;
                    if !x.is_finite() {
                        return Err(Error::NonFinite {
                            context: format!("number `{n}`"),
                        });
                    }
                    Ok(Scalar::float(x))
                }
            },
            RawScalar::Text(s) => Scalar::parse(s, tier),
        }
    }
}

fn value_to_scalar(v: &Value, tier: Tier, context: &str) -> Result<Scalar> {
    let raw: RawScalar = serde_json::from_value(v.clone()).map_err(|_| Error::InvalidInput {
        reason: format!("{context}: expected a number or numeric string"),
    })?;
    raw.resolve(tier)
}

fn value_to_row(v: &Value, tier: Tier, context: &str) -> Result<Vec<Scalar>> {
    let items = v.as_array().ok_or_else(|| Error::InvalidInput {
        reason: format!("{context}: expected an array of values"),
    })?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| value_to_scalar(item, tier, &format!("{context}[{i}]")))
        .collect()
}

fn from_json<T: for<'de> Deserialize<'de>>(json: &str) -> Result<T> {
    serde_json::from_str(json).map_err(|e| Error::InvalidInput {
        reason: e.to_string(),
    })
}

/// A measure space plus tabulated functions:
/// `{"points": [...], "weights": [...], "functions": {"f": [...], ...}}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub points: Vec<String>,
    pub weights: Vec<RawScalar>,
    pub functions: Map<String, Value>,
}

impl FamilyFile {
    pub fn parse(json: &str) -> Result<Self> {
        from_json(json)
    }

    pub fn resolve(&self, tier: Tier) -> Result<FunctionFamily> {
        let weights = self
            .weights
            .iter()
            .map(|w| w.resolve(tier))
            .collect::<Result<Vec<_>>>()?;
        let space = Arc::new(MeasureSpace::new_degenerate(self.points.clone(), weights)?);
        let mut names = Vec::with_capacity(self.functions.len());
        let mut table = Vec::with_capacity(self.functions.len());
        for (name, row) in &self.functions {
            names.push(name.clone());
            table.push(value_to_row(row, tier, &format!("functions.{name}"))?);
        }
        FunctionFamily::new(space, names, table)
    }
}

/// Weighted sequences:
/// `{"sequences": {"x": [...], ...}, "weights": [...],
///   "infinite": bool?, "tail": {"mass": ..., "sup_values": {"x": ...}}?}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    pub sequences: Map<String, Value>,
    pub weights: Vec<RawScalar>,
    #[serde(default)]
    pub infinite: bool,
    #[serde(default)]
    pub tail: Option<SequenceTailFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceTailFile {
    pub mass: RawScalar,
    pub sup_values: Map<String, Value>,
}

impl SequenceFile {
    pub fn parse(json: &str) -> Result<Self> {
        from_json(json)
    }

    /// Resolve, optionally truncating every sequence and the weights to
    /// the first `truncate` entries.
    pub fn resolve(&self, tier: Tier, truncate: Option<usize>) -> Result<SequenceInstance> {
        if self.infinite && self.tail.is_none() {
            return Err(Error::MissingTailCertificate {
                reason: "input declares an infinite sequence but carries no tail certificate"
                    .into(),
            });
        }
        let cut = |len: usize| truncate.map_or(len, |n| n.min(len));
        let mut names = Vec::new();
        let mut prefixes = Vec::new();
        for (name, row) in &self.sequences {
            let full = value_to_row(row, tier, &format!("sequences.{name}"))?;
            let keep = cut(full.len());
            names.push(name.clone());
            prefixes.push(full[..keep].to_vec());
        }
        let weights = self
            .weights
            .iter()
            .take(cut(self.weights.len()))
            .map(|w| w.resolve(tier))
            .collect::<Result<Vec<_>>>()?;
        let tail = match &self.tail {
            None => None,
            Some(t) => {
                let mass = t.mass.resolve(tier)?;
                let sup_values = names
                    .iter()
                    .map(|name| {
                        let v = t.sup_values.get(name).ok_or_else(|| {
                            Error::MissingTailCertificate {
                                reason: format!("no tail bound for sequence `{name}`"),
                            }
                        })?;
                        value_to_scalar(v, tier, &format!("tail.sup_values.{name}"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(TailCertificate { mass, sup_values })
            }
        };
        Ok(SequenceInstance {
            names,
            prefixes,
            weights,
            tail,
        })
    }
}

/// One distribution: `{"support": [...], "probs": [...]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionFile {
    pub support: Vec<RawScalar>,
    pub probs: Vec<RawScalar>,
}

impl DistributionFile {
    pub fn resolve(&self, tier: Tier) -> Result<DiscreteDistribution> {
        DiscreteDistribution::new(
            self.support
                .iter()
                .map(|v| v.resolve(tier))
                .collect::<Result<_>>()?,
            self.probs
                .iter()
                .map(|v| v.resolve(tier))
                .collect::<Result<_>>()?,
        )
    }
}

/// A race instance: `{"x0": {...}, "competitors": [{...}, ...]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbBoundFile {
    pub x0: DistributionFile,
    #[serde(default)]
    pub competitors: Vec<DistributionFile>,
}

impl ProbBoundFile {
    pub fn parse(json: &str) -> Result<Self> {
        from_json(json)
    }

    pub fn resolve(&self, tier: Tier) -> Result<(DiscreteDistribution, Vec<DiscreteDistribution>)> {
        Ok((
            self.x0.resolve(tier)?,
            self.competitors
                .iter()
                .map(|c| c.resolve(tier))
                .collect::<Result<_>>()?,
        ))
    }
}

/// Power series coefficients and tail model; `rho` and the grid arrive as
/// run parameters.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesFile {
    pub coeffs: Vec<RawScalar>,
    #[serde(default)]
    pub tail: Option<SeriesTailFile>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeriesTailFile {
    None,
    GeometricFromLast,
    SupBound { bound: RawScalar },
    ExactGeometric { ratio: RawScalar },
}

impl SeriesFile {
    pub fn parse(json: &str) -> Result<Self> {
        from_json(json)
    }

    /// Resolve against `rho`, optionally truncating the coefficient list.
    pub fn resolve(
        &self,
        tier: Tier,
        rho: Scalar,
        truncate: Option<usize>,
    ) -> Result<PowerSeriesSpec> {
        let keep = truncate.map_or(self.coeffs.len(), |n| n.min(self.coeffs.len()));
        let coeffs = self.coeffs[..keep]
            .iter()
            .map(|c| c.resolve(tier))
            .collect::<Result<Vec<_>>>()?;
        let tail = match &self.tail {
            None | Some(SeriesTailFile::None) => TailModel::None,
            Some(SeriesTailFile::GeometricFromLast) => TailModel::GeometricFromLast,
            Some(SeriesTailFile::SupBound { bound }) => TailModel::SupBound(bound.resolve(tier)?),
            Some(SeriesTailFile::ExactGeometric { ratio }) => {
                TailModel::ExactGeometric(ratio.resolve(tier)?)
            }
        };
        Ok(PowerSeriesSpec { coeffs, rho, tail })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_file_resolves_in_exact_tier() {
        let json = r#"{
            "points": ["a", "b"],
            "weights": ["1/2", "1/2"],
            "functions": {"f": [0, 1], "g": ["0", "1/3"]}
        }"#;
        let fam = FamilyFile::parse(json).unwrap().resolve(Tier::Exact).unwrap();
        assert_eq!(fam.k(), 2);
        assert_eq!(fam.names(), &["f".to_string(), "g".to_string()]);
        assert_eq!(fam.value(1, 1), &Scalar::ratio(1, 3));
        assert_eq!(fam.space().total_mass(), &Scalar::int(1));
    }

    #[test]
    fn exact_tier_rejects_float_literals_but_accepts_decimal_strings() {
        let json = r#"{
            "points": ["a"],
            "weights": [0.5],
            "functions": {"f": [1]}
        }"#;
        let err = FamilyFile::parse(json).unwrap().resolve(Tier::Exact).unwrap_err();
        assert!(matches!(err, Error::FloatLiteralInExactTier { .. }));

        let json = r#"{
            "points": ["a"],
            "weights": ["0.5"],
            "functions": {"f": [1]}
        }"#;
        let fam = FamilyFile::parse(json).unwrap().resolve(Tier::Exact).unwrap();
        assert_eq!(fam.space().weight(0), &Scalar::ratio(1, 2));
    }

    #[test]
    fn float_tier_accepts_numbers_and_ratio_strings() {
        let json = r#"{
            "points": ["a", "b"],
            "weights": [0.25, "3/4"],
            "functions": {"f": [1.5, "2"]}
        }"#;
        let fam = FamilyFile::parse(json).unwrap().resolve(Tier::Float).unwrap();
        assert_eq!(fam.space().weight(1), &Scalar::float(0.75));
        assert_eq!(fam.value(0, 0), &Scalar::float(1.5));
    }

    #[test]
    fn unknown_fields_are_schema_errors() {
        let json = r#"{
            "points": ["a"],
            "weights": [1],
            "functions": {"f": [1]},
            "extra": true
        }"#;
        assert!(FamilyFile::parse(json).is_err());
    }

    #[test]
    fn sequence_file_truncates_and_validates_tail() {
        let json = r#"{
            "sequences": {"x": [1, 2, 3, 4], "y": [1, 4, 9, 16]},
            "weights": ["1/2", "1/4", "1/8", "1/16"],
            "tail": {"mass": "1/16", "sup_values": {"x": 4, "y": 16}}
        }"#;
        let inst = SequenceFile::parse(json)
            .unwrap()
            .resolve(Tier::Exact, Some(3))
            .unwrap();
        assert_eq!(inst.prefixes[0].len(), 3);
        assert_eq!(inst.weights.len(), 3);
        assert!(inst.tail.is_some());

        let missing = r#"{
            "sequences": {"x": [1, 2]},
            "weights": [1, 1],
            "infinite": true
        }"#;
        let err = SequenceFile::parse(missing)
            .unwrap()
            .resolve(Tier::Exact, None)
            .unwrap_err();
        assert!(matches!(err, Error::MissingTailCertificate { .. }));
    }

    #[test]
    fn prob_file_resolves() {
        let json = r#"{
            "x0": {"support": [1, 2], "probs": ["1/2", "1/2"]},
            "competitors": [
                {"support": [1, 2], "probs": ["1/2", "1/2"]}
            ]
        }"#;
        let (x0, comps) = ProbBoundFile::parse(json).unwrap().resolve(Tier::Exact).unwrap();
        assert_eq!(x0.support().len(), 2);
        assert_eq!(comps.len(), 1);
    }

    #[test]
    fn series_file_tail_models() {
        let json = r#"{"coeffs": ["1/2", "1/4"], "tail": {"model": "exact_geometric", "ratio": "1/2"}}"#;
        let spec = SeriesFile::parse(json)
            .unwrap()
            .resolve(Tier::Exact, Scalar::int(1), None)
            .unwrap();
        assert!(matches!(spec.tail, TailModel::ExactGeometric(_)));
        assert_eq!(spec.coeffs.len(), 2);
    }
}
