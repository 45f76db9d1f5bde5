//! The inequality engine.
//!
//! For a family `{f_1, ..., f_k}` on a space of finite mass `mu(X)` the
//! quantities compared are
//!
//! ```text
//! lhs = mu(X)^(k-1) * ∫ f_1 ... f_k dmu      rhs = ∏_i ∫ f_i dmu
//! ```
//!
//! For `k = 2` the gap `lhs - rhs` is nonnegative whenever the pair is
//! a.e. correlated (no sign assumption), and it equals the symmetrized
//! double sum
//!
//! ```text
//! gap = Σ_{x > y} (f(x) - f(y)) (g(x) - g(y)) w_x w_y
//! ```
//!
//! unconditionally - that identity is what [`covariance_identity`]
//! cross-checks. For `k > 2` the inequality needs nonnegativity on top of
//! correlation; with signed values it can genuinely fail, which reports
//! flag with a caveat instead of a verdict downgrade. When every integral
//! is positive and finite, equality holds exactly when at least `k - 1`
//! functions are constant a.e.; [`classify_equality`] evaluates both
//! sides of that equivalence independently and treats disagreement as an
//! internal error, so the characterization doubles as a runtime
//! cross-check of the engine.
//!
//! Everything here runs on finite discrete spaces, where every function
//! is summable and every integral finite; the infinite-integral cases of
//! the general theory cannot arise. Unbounded intent enters only through
//! [`sequence_lemma`]'s truncation, which answers with a certified
//! bracket instead of a silent approximation.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::family::{CheckMode, FunctionFamily};
use crate::measure::MeasureSpace;
use crate::scalar::{Scalar, Tier};
use crate::{Error, Result};

/// Comparator for float-tier verdicts. With scale
/// `S = |lhs| + |rhs| + eps_machine`, a gap counts as zero when
/// `|gap| <= rel * S` and the asserted side holds when it clears
/// `-rel * S`. The exact tier ignores it.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9 }
    }
}

impl Tolerance {
    fn band(&self, lhs: &Scalar, rhs: &Scalar) -> f64 {
        self.rel * (lhs.to_f64().abs() + rhs.to_f64().abs() + f64::EPSILON)
    }

    /// Tier-aware "gap is zero".
    pub fn is_equality(&self, lhs: &Scalar, rhs: &Scalar, gap: &Scalar) -> bool {
        match gap.tier() {
            Tier::Exact => gap.is_zero(),
            Tier::Float => gap.to_f64().abs() <= self.band(lhs, rhs),
        }
    }

    fn verdict(&self, lhs: &Scalar, rhs: &Scalar, gap: &Scalar, assert_ge: bool) -> Verdict {
        if self.is_equality(lhs, rhs, gap) {
            return Verdict::HoldsWithEquality;
        }
        let on_asserted_side = match (gap.tier(), assert_ge) {
            (Tier::Exact, true) => gap.is_positive(),
            (Tier::Exact, false) => gap.is_negative(),
            (Tier::Float, true) => gap.to_f64() >= -self.band(lhs, rhs),
            (Tier::Float, false) => gap.to_f64() <= self.band(lhs, rhs),
        };
        if on_asserted_side {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }
}

/// Outcome of comparing `lhs` against `rhs` under the operation's
/// asserted direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    HoldsWithEquality,
    Violated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds"),
            Verdict::HoldsWithEquality => write!(f, "holds_with_equality"),
            Verdict::Violated => write!(f, "violated"),
        }
    }
}

/// Where an instance sits relative to the equality characterization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualityClass {
    /// At least `k - 1` functions are constant a.e.; the gap vanishes.
    AtLeastKMinus1Constant,
    /// Some integral is zero, so both sides vanish trivially and the
    /// characterization's positivity hypothesis is not met.
    SomeIntegralZero,
    /// At least two functions are nonconstant a.e.; the gap is strictly
    /// positive (strictly negative for anticorrelated pairs).
    NonDegenerateStrict,
    /// Hypotheses unmet (family not correlated a.e., or signed values in
    /// the k-function product); no classification is asserted.
    NotApplicable,
}

impl fmt::Display for EqualityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqualityClass::AtLeastKMinus1Constant => write!(f, "at_least_k_minus_1_constant"),
            EqualityClass::SomeIntegralZero => write!(f, "some_integral_zero"),
            EqualityClass::NonDegenerateStrict => write!(f, "non_degenerate_strict"),
            EqualityClass::NotApplicable => write!(f, "not_applicable"),
        }
    }
}

/// Which operation produced a report; also selects the classification
/// route when a report is re-classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    CovarianceGap,
    ProductInequality,
    AnticorrelatedUpperBound,
    SequenceLemma,
}

/// Hypothesis status carried alongside a verdict: the verdict itself is a
/// numeric fact about this instance, the hypotheses say whether the
/// theorem backs it.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Hypotheses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlated_ae: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anticorrelated_ae: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonnegative_ae: Option<bool>,
}

/// Two positive-weight points on which two named functions strictly
/// co-increase; certifies that the gap is strictly nonzero.
#[derive(Debug, Clone, Serialize)]
pub struct StrictnessWitness {
    pub function_a: String,
    pub function_b: String,
    pub point_low: String,
    pub point_high: String,
}

/// Certified interval for the gap of the untruncated instance, produced
/// by [`sequence_lemma`] when a tail certificate is supplied.
#[derive(Debug, Clone, Serialize)]
pub struct GapBracket {
    pub lower: Scalar,
    pub upper: Scalar,
}

/// One verified inequality instance.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub kind: ReportKind,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub gap: Scalar,
    pub verdict: Verdict,
    pub equality_class: EqualityClass,
    pub hypotheses: Hypotheses,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strictness_witness: Option<StrictnessWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub true_gap_bracket: Option<GapBracket>,
}

#[derive(Debug, Clone, Copy)]
enum Route {
    Covariance,
    Product,
    Anticorrelated,
}

/// Pointwise product of all rows, left to right, without reassociation
/// (fixes float-tier determinism).
fn pointwise_product(fam: &FunctionFamily) -> Vec<Scalar> {
    let n = fam.space().len();
    (0..n)
        .map(|p| {
            let mut acc = fam.value(0, p).clone();
            for i in 1..fam.k() {
                acc = &acc * fam.value(i, p);
            }
            acc
        })
        .collect()
}

fn integrals(fam: &FunctionFamily) -> Vec<Scalar> {
    (0..fam.k()).map(|i| fam.integral(i)).collect()
}

/// Lex-minimal and lex-maximal positive-weight points of an a.e.
/// correlated family; on them every a.e.-nonconstant function strictly
/// increases.
fn strictness_witness(fam: &FunctionFamily, nonconstant: &[usize]) -> Option<StrictnessWitness> {
    let positives = fam.space().positive_indices();
    let lo = positives.iter().copied().min_by(|&p, &q| fam.cmp_tuples(p, q))?;
    let hi = positives.iter().copied().max_by(|&p, &q| fam.cmp_tuples(p, q))?;
    let (a, b) = (*nonconstant.first()?, *nonconstant.get(1)?);
    Some(StrictnessWitness {
        function_a: fam.name(a).to_string(),
        function_b: fam.name(b).to_string(),
        point_low: fam.space().label(lo).to_string(),
        point_high: fam.space().label(hi).to_string(),
    })
}

/// Both directions of the equality characterization, checked
/// independently. `witness_source` is the family on which strictness
/// witnesses make sense (differs from `fam` only on the anticorrelated
/// route, where the second function is negated).
fn classify_characterization(
    fam: &FunctionFamily,
    witness_source: &FunctionFamily,
    lhs: &Scalar,
    rhs: &Scalar,
    gap: &Scalar,
    tol: &Tolerance,
) -> Result<(EqualityClass, Option<StrictnessWitness>, Option<String>)> {
    let k = fam.k();
    let gap_zero = tol.is_equality(lhs, rhs, gap);
    let nonconstant = fam.nonconstant_ae();
    let enough_constants = k - nonconstant.len() >= k - 1;
    if gap_zero == enough_constants {
        return if gap_zero {
            Ok((EqualityClass::AtLeastKMinus1Constant, None, None))
        } else {
            Ok((
                EqualityClass::NonDegenerateStrict,
                strictness_witness(witness_source, &nonconstant),
                None,
            ))
        };
    }
    match gap.tier() {
        Tier::Exact => Err(Error::Inconsistent {
            details: format!(
                "gap {} is {}zero but {} of {} functions are nonconstant a.e.",
                gap,
                if gap_zero { "" } else { "non" },
                nonconstant.len(),
                k
            ),
        }),
        // Knife-edge float instances can put the tolerance comparator and
        // the bit-exact constancy check on opposite sides; constancy is
        // the reliable one, so report it and flag the disagreement.
        Tier::Float => {
            let class = if enough_constants {
                EqualityClass::AtLeastKMinus1Constant
            } else {
                EqualityClass::NonDegenerateStrict
            };
            Ok((
                class,
                None,
                Some(
                    "float tolerance and bit-exact constancy disagree near the equality \
                     boundary; classification follows constancy"
                        .to_string(),
                ),
            ))
        }
    }
}

fn classify_route(
    fam: &FunctionFamily,
    lhs: &Scalar,
    rhs: &Scalar,
    gap: &Scalar,
    route: Route,
    tol: &Tolerance,
) -> Result<(EqualityClass, Option<StrictnessWitness>, Option<String>)> {
    match route {
        Route::Covariance => {
            if !fam.is_correlated_fast(CheckMode::MuAe) {
                return Ok((
                    EqualityClass::NotApplicable,
                    None,
                    Some("pair is not mu-a.e. correlated; the lower bound is not asserted".into()),
                ));
            }
            classify_characterization(fam, fam, lhs, rhs, gap, tol)
        }
        Route::Product => {
            if fam.nonnegativity_violation().is_some() {
                return Ok((
                    EqualityClass::NotApplicable,
                    None,
                    Some(
                        "signed values: the k-function product inequality can fail for \
                         correlated families with k > 2; this report states the computed \
                         sides only"
                            .into(),
                    ),
                ));
            }
            if !fam.is_correlated_fast(CheckMode::MuAe) {
                return Ok((
                    EqualityClass::NotApplicable,
                    None,
                    Some("family is not mu-a.e. correlated; the lower bound is not asserted".into()),
                ));
            }
            let ints = integrals(fam);
            if ints.iter().any(Scalar::is_zero) {
                // A vanishing integral of a nonnegative function forces
                // both sides to zero; cross-check that.
                if !tol.is_equality(lhs, rhs, gap) {
                    return Err(Error::Inconsistent {
                        details: format!(
                            "some integral is zero yet the gap is {gap}, expected 0"
                        ),
                    });
                }
                return Ok((EqualityClass::SomeIntegralZero, None, None));
            }
            classify_characterization(fam, fam, lhs, rhs, gap, tol)
        }
        Route::Anticorrelated => {
            // Negating one function turns the pair correlated and flips
            // the gap sign, so the pair characterization transfers.
            let negated = FunctionFamily::new(
                fam.space_arc(),
                fam.names().to_vec(),
                vec![
                    fam.values(0).to_vec(),
                    fam.values(1).iter().map(|v| -v).collect(),
                ],
            )?;
            classify_characterization(fam, &negated, lhs, rhs, gap, tol)
        }
    }
}

/// `k = 2` gap report: `lhs = mu(X) ∫ fg`, `rhs = ∫f ∫g`. Correlation is
/// not a precondition - the gap is reported either way and the hypothesis
/// field says whether the lower bound is actually asserted.
pub fn covariance_gap(fam: &FunctionFamily, tol: &Tolerance) -> Result<InequalityReport> {
    if fam.k() != 2 {
        return Err(Error::WrongArity {
            expected: 2,
            actual: fam.k(),
        });
    }
    let mu = fam.space().total_mass().clone();
    let int_fg = fam.space().integrate(&pointwise_product(fam))?;
    let ints = integrals(fam);
    let lhs = &mu * &int_fg;
    let rhs = &ints[0] * &ints[1];
    let gap = &lhs - &rhs;
    let verdict = tol.verdict(&lhs, &rhs, &gap, true);
    let correlated = fam.is_correlated_fast(CheckMode::MuAe);
    let (equality_class, strictness_witness, caveat) =
        classify_route(fam, &lhs, &rhs, &gap, Route::Covariance, tol)?;
    Ok(InequalityReport {
        kind: ReportKind::CovarianceGap,
        lhs,
        rhs,
        gap,
        verdict,
        equality_class,
        hypotheses: Hypotheses {
            correlated_ae: Some(correlated),
            ..Default::default()
        },
        strictness_witness,
        caveat,
        true_gap_bracket: None,
    })
}

/// The two algebraic routes to the `k = 2` gap:
/// `mu(X) ∫ fg - ∫f ∫g` and the strict-upper-triangle double sum
/// `Σ_{x>y} (f(x)-f(y))(g(x)-g(y)) w_x w_y`. They agree for every pair,
/// correlated or not; exact tier agrees bit-for-bit.
pub fn covariance_identity(fam: &FunctionFamily) -> Result<(Scalar, Scalar)> {
    if fam.k() != 2 {
        return Err(Error::WrongArity {
            expected: 2,
            actual: fam.k(),
        });
    }
    let space = fam.space();
    let mu = space.total_mass();
    let int_fg = space.integrate(&pointwise_product(fam))?;
    let direct = &(mu * &int_fg) - &(&fam.integral(0) * &fam.integral(1));

    let (f, g) = (fam.values(0), fam.values(1));
    let mut double_sum = Scalar::zero(space.tier());
    for x in 1..space.len() {
        for y in 0..x {
            let term = &(&(&f[x] - &f[y]) * &(&g[x] - &g[y])) * space.weight(x);
            double_sum = &double_sum + &(&term * space.weight(y));
        }
    }
    Ok((direct, double_sum))
}

/// `k`-function report: `lhs = mu(X)^(k-1) ∫ ∏ f_i`, `rhs = ∏ ∫ f_i`.
///
/// With `require_nonneg` a negative value at a positive-weight point is
/// an input error; with it off the report is still computed, but for
/// signed families the equality classification is withheld and a caveat
/// records why (the inequality genuinely fails for some signed correlated
/// families when `k > 2`).
pub fn product_inequality(
    fam: &FunctionFamily,
    require_nonneg: bool,
    tol: &Tolerance,
) -> Result<InequalityReport> {
    if fam.k() < 2 {
        return Err(Error::TooFewFunctions {
            min: 2,
            actual: fam.k(),
        });
    }
    let violation = fam.nonnegativity_violation();
    if require_nonneg {
        if let Some((i, p)) = violation {
            return Err(Error::NegativeValue {
                name: fam.name(i).to_string(),
                label: fam.space().label(p).to_string(),
                value: fam.value(i, p).to_string(),
            });
        }
    }
    let space = fam.space();
    let mu = space.total_mass();
    let int_prod = space.integrate(&pointwise_product(fam))?;
    let lhs = &mu.pow_usize(fam.k() - 1) * &int_prod;
    let rhs = Scalar::product(&integrals(fam), space.tier());
    let gap = &lhs - &rhs;
    let verdict = tol.verdict(&lhs, &rhs, &gap, true);
    let correlated = fam.is_correlated_fast(CheckMode::MuAe);
    let (equality_class, strictness_witness, caveat) =
        classify_route(fam, &lhs, &rhs, &gap, Route::Product, tol)?;
    Ok(InequalityReport {
        kind: ReportKind::ProductInequality,
        lhs,
        rhs,
        gap,
        verdict,
        equality_class,
        hypotheses: Hypotheses {
            correlated_ae: Some(correlated),
            nonnegative_ae: Some(violation.is_none()),
            ..Default::default()
        },
        strictness_witness,
        caveat,
        true_gap_bracket: None,
    })
}

/// Recompute the equality classification of a finished report against its
/// family, again checking both directions of the characterization.
pub fn classify_equality(
    fam: &FunctionFamily,
    report: &InequalityReport,
    tol: &Tolerance,
) -> Result<EqualityClass> {
    let route = match report.kind {
        ReportKind::CovarianceGap => Route::Covariance,
        ReportKind::ProductInequality | ReportKind::SequenceLemma => Route::Product,
        ReportKind::AnticorrelatedUpperBound => Route::Anticorrelated,
    };
    let (class, _, _) = classify_route(fam, &report.lhs, &report.rhs, &report.gap, route, tol)?;
    Ok(class)
}

/// Reversed bound for an anticorrelated pair:
/// `mu(X) ∫ fg <= ∫f ∫g`, i.e. the gap is `<= 0`. Not being
/// anticorrelated is an input error carrying the violating tuple.
pub fn anticorrelated_upper_bound(
    fam: &FunctionFamily,
    tol: &Tolerance,
) -> Result<InequalityReport> {
    if let Some(witness) = fam.anticorrelation_violation(CheckMode::MuAe)? {
        return Err(Error::NotAnticorrelated { witness });
    }
    let space = fam.space();
    let mu = space.total_mass();
    let int_fg = space.integrate(&pointwise_product(fam))?;
    let ints = integrals(fam);
    let lhs = mu * &int_fg;
    let rhs = &ints[0] * &ints[1];
    let gap = &lhs - &rhs;
    let verdict = tol.verdict(&lhs, &rhs, &gap, false);
    let (equality_class, strictness_witness, caveat) =
        classify_route(fam, &lhs, &rhs, &gap, Route::Anticorrelated, tol)?;
    Ok(InequalityReport {
        kind: ReportKind::AnticorrelatedUpperBound,
        lhs,
        rhs,
        gap,
        verdict,
        equality_class,
        hypotheses: Hypotheses {
            anticorrelated_ae: Some(true),
            ..Default::default()
        },
        strictness_witness,
        caveat,
        true_gap_bracket: None,
    })
}

/// Certified bound on everything beyond a truncated prefix: remaining
/// weight mass, and one upper bound per sequence valid over all tail
/// indices.
#[derive(Debug, Clone)]
pub struct TailCertificate {
    pub mass: Scalar,
    pub sup_values: Vec<Scalar>,
}

/// A truncated instance of the weighted-sequence inequality: `k`
/// nonnegative nondecreasing sequences against strictly positive weights.
#[derive(Debug, Clone)]
pub struct SequenceInstance {
    pub names: Vec<String>,
    pub prefixes: Vec<Vec<Scalar>>,
    pub weights: Vec<Scalar>,
    pub tail: Option<TailCertificate>,
}

impl SequenceInstance {
    /// Validate and reinterpret the prefix as a function family on the
    /// index points `1..=N`.
    pub fn to_family(&self) -> Result<FunctionFamily> {
        let k = self.prefixes.len();
        if k < 2 {
            return Err(Error::TooFewFunctions { min: 2, actual: k });
        }
        if self.names.len() != k {
            return Err(Error::LengthMismatch {
                context: "sequence names".into(),
                expected: k,
                actual: self.names.len(),
            });
        }
        let n = self.weights.len();
        if n == 0 {
            return Err(Error::InvalidInput {
                reason: "sequence instance needs at least one term".into(),
            });
        }
        for (index, w) in self.weights.iter().enumerate() {
            if !w.is_positive() {
                return Err(Error::NonPositiveSequenceWeight { index });
            }
        }
        for (name, seq) in self.names.iter().zip(&self.prefixes) {
            if seq.len() != n {
                return Err(Error::LengthMismatch {
                    context: format!("sequence `{name}`"),
                    expected: n,
                    actual: seq.len(),
                });
            }
            for (index, v) in seq.iter().enumerate() {
                if v.is_negative() {
                    return Err(Error::SequenceNegative {
                        name: name.clone(),
                        index,
                    });
                }
                if index > 0 && seq[index - 1] > *v {
                    return Err(Error::SequenceNotMonotone {
                        name: name.clone(),
                        index,
                    });
                }
            }
        }
        if let Some(tail) = &self.tail {
            if tail.mass.is_negative() || !tail.mass.is_finite() {
                return Err(Error::MissingTailCertificate {
                    reason: "tail mass must be finite and nonnegative".into(),
                });
            }
            if tail.sup_values.len() != k {
                return Err(Error::MissingTailCertificate {
                    reason: format!(
                        "need one tail bound per sequence ({} given, {k} sequences)",
                        tail.sup_values.len()
                    ),
                });
            }
            for ((name, seq), bound) in self.names.iter().zip(&self.prefixes).zip(&tail.sup_values)
            {
                if bound < seq.last().expect("n >= 1") {
                    return Err(Error::MissingTailCertificate {
                        reason: format!(
                            "tail bound {bound} for `{name}` is below the last retained \
                             value {} of a nondecreasing sequence",
                            seq.last().expect("n >= 1")
                        ),
                    });
                }
            }
        }
        let space = MeasureSpace::new(
            (1..=n).map(|i| i.to_string()).collect(),
            self.weights.clone(),
        )?;
        FunctionFamily::new(Arc::new(space), self.names.clone(), self.prefixes.clone())
    }
}

/// Evaluate the weighted-sequence inequality on a truncated prefix.
///
/// The report's sides and verdict are exact for the truncation (itself a
/// valid finite instance). With a [`TailCertificate`] the report also
/// carries a certified bracket for the gap of the untruncated instance:
/// prefix sums bound the true sums from below, and `mass`/`sup_values`
/// bound the tail contributions from above.
pub fn sequence_lemma(inst: &SequenceInstance, tol: &Tolerance) -> Result<InequalityReport> {
    let fam = inst.to_family()?;
    let mut report = product_inequality(&fam, true, tol)?;
    report.kind = ReportKind::SequenceLemma;
    if let Some(tail) = &inst.tail {
        let k = fam.k();
        let tier = fam.space().tier();
        let mass_prefix = fam.space().total_mass();
        let int_prod = fam.space().integrate(&pointwise_product(&fam))?;
        let ints = integrals(&fam);

        let lower_lhs = &mass_prefix.pow_usize(k - 1) * &int_prod;
        let padded: Vec<Scalar> = ints
            .iter()
            .zip(&tail.sup_values)
            .map(|(s, b)| s + &(b * &tail.mass))
            .collect();
        let lower = &lower_lhs - &Scalar::product(&padded, tier);

        let mass_upper = mass_prefix + &tail.mass;
        let sup_prod = Scalar::product(&tail.sup_values, tier);
        let upper_lhs = &mass_upper.pow_usize(k - 1) * &(&int_prod + &(&sup_prod * &tail.mass));
        let upper = &upper_lhs - &Scalar::product(&ints, tier);
        report.true_gap_bracket = Some(GapBracket { lower, upper });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureSpace;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn pair(weights: &[i64], f: &[i64], g: &[i64]) -> FunctionFamily {
        let labels: Vec<String> = (0..weights.len()).map(|i| format!("p{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        let space = MeasureSpace::from_ints(&refs, weights).unwrap();
        FunctionFamily::from_ints(space, &[("f", f), ("g", g)]).unwrap()
    }

    #[test]
    fn covariance_gap_indicator_pair() {
        let report = covariance_gap(&pair(&[1, 1], &[0, 1], &[0, 1]), &tol()).unwrap();
        assert_eq!(report.lhs, Scalar::int(2));
        assert_eq!(report.rhs, Scalar::int(1));
        assert_eq!(report.gap, Scalar::int(1));
        assert_eq!(report.verdict, Verdict::Holds);
        assert_eq!(report.equality_class, EqualityClass::NonDegenerateStrict);
        assert!(report.strictness_witness.is_some());
    }

    #[test]
    fn covariance_gap_constant_factor_gives_equality() {
        let report = covariance_gap(&pair(&[1, 1, 1], &[4, 4, 4], &[-3, 0, 7]), &tol()).unwrap();
        assert!(report.gap.is_zero());
        assert_eq!(report.verdict, Verdict::HoldsWithEquality);
        assert_eq!(report.equality_class, EqualityClass::AtLeastKMinus1Constant);
    }

    #[test]
    fn covariance_gap_reports_anticorrelated_pair_as_violated() {
        let report = covariance_gap(&pair(&[1, 1], &[1, 2], &[2, 1]), &tol()).unwrap();
        assert_eq!(report.lhs, Scalar::int(8));
        assert_eq!(report.rhs, Scalar::int(9));
        assert_eq!(report.gap, Scalar::int(-1));
        assert_eq!(report.verdict, Verdict::Violated);
        assert_eq!(report.equality_class, EqualityClass::NotApplicable);
        assert_eq!(report.hypotheses.correlated_ae, Some(false));
    }

    #[test]
    fn identity_examples() {
        let (direct, double) = covariance_identity(&pair(&[1, 1], &[0, 1], &[0, 1])).unwrap();
        assert_eq!(direct, Scalar::int(1));
        assert_eq!(double, Scalar::int(1));

        let (direct, double) = covariance_identity(&pair(&[1, 1], &[1, 2], &[1, 4])).unwrap();
        assert_eq!(direct, Scalar::int(3));
        assert_eq!(double, Scalar::int(3));

        let (direct, double) =
            covariance_identity(&pair(&[2, 3, 5], &[7, -1, 4], &[0, 0, 0])).unwrap();
        assert!(direct.is_zero());
        assert!(double.is_zero());
    }

    #[test]
    fn product_inequality_three_indicators() {
        let space = MeasureSpace::from_ints(&["a", "b"], &[1, 1]).unwrap();
        let fam = FunctionFamily::from_ints(
            space,
            &[("f1", &[0, 1]), ("f2", &[0, 1]), ("f3", &[0, 1])],
        )
        .unwrap();
        let report = product_inequality(&fam, true, &tol()).unwrap();
        assert_eq!(report.lhs, Scalar::int(4));
        assert_eq!(report.rhs, Scalar::int(1));
        assert_eq!(report.gap, Scalar::int(3));
        assert_eq!(report.verdict, Verdict::Holds);
        assert_eq!(report.equality_class, EqualityClass::NonDegenerateStrict);
    }

    fn signed_grid_family() -> FunctionFamily {
        let space = MeasureSpace::new(
            vec!["-1".into(), "-1/2".into(), "1/2".into(), "1".into()],
            vec![Scalar::ratio(1, 2); 4],
        )
        .unwrap();
        let neg = vec![
            Scalar::int(-1),
            Scalar::ratio(-1, 2),
            Scalar::int(0),
            Scalar::int(0),
        ];
        let pos = vec![
            Scalar::int(0),
            Scalar::int(0),
            Scalar::ratio(1, 2),
            Scalar::int(1),
        ];
        FunctionFamily::new(
            Arc::new(space),
            vec!["f1".into(), "f2".into(), "f3".into()],
            vec![neg.clone(), neg, pos],
        )
        .unwrap()
    }

    #[test]
    fn signed_correlated_triple_violates_product_inequality() {
        let fam = signed_grid_family();
        assert!(fam.is_correlated(CheckMode::Everywhere));
        let report = product_inequality(&fam, false, &tol()).unwrap();
        assert_eq!(report.lhs, Scalar::int(0));
        assert_eq!(report.rhs, Scalar::ratio(27, 64));
        assert_eq!(report.gap, Scalar::ratio(-27, 64));
        assert_eq!(report.verdict, Verdict::Violated);
        assert_eq!(report.equality_class, EqualityClass::NotApplicable);
        assert!(report.caveat.is_some());

        assert!(matches!(
            product_inequality(&fam, true, &tol()),
            Err(Error::NegativeValue { .. })
        ));
    }

    #[test]
    fn zero_function_classifies_as_zero_integral() {
        let space = MeasureSpace::from_ints(&["a", "b"], &[1, 1]).unwrap();
        let fam =
            FunctionFamily::from_ints(space, &[("f1", &[0, 0]), ("f2", &[1, 5])]).unwrap();
        let report = product_inequality(&fam, true, &tol()).unwrap();
        assert!(report.lhs.is_zero() && report.rhs.is_zero());
        assert_eq!(report.verdict, Verdict::HoldsWithEquality);
        assert_eq!(report.equality_class, EqualityClass::SomeIntegralZero);
    }

    #[test]
    fn classification_examples() {
        let space = MeasureSpace::from_ints(&["a", "b"], &[1, 1]).unwrap();
        let boundary = FunctionFamily::from_ints(
            Arc::clone(&space),
            &[("f1", &[1, 1]), ("f2", &[1, 2]), ("f3", &[2, 2])],
        )
        .unwrap();
        let report = product_inequality(&boundary, true, &tol()).unwrap();
        assert!(report.gap.is_zero());
        assert_eq!(report.equality_class, EqualityClass::AtLeastKMinus1Constant);
        assert_eq!(
            classify_equality(&boundary, &report, &tol()).unwrap(),
            EqualityClass::AtLeastKMinus1Constant
        );

        let strict = FunctionFamily::from_ints(
            Arc::clone(&space),
            &[("f1", &[1, 2]), ("f2", &[1, 2]), ("f3", &[1, 1])],
        )
        .unwrap();
        let report = product_inequality(&strict, true, &tol()).unwrap();
        assert!(report.gap.is_positive());
        assert_eq!(report.equality_class, EqualityClass::NonDegenerateStrict);

        let constant = FunctionFamily::from_ints(
            space,
            &[("f1", &[3, 3]), ("f2", &[5, 5]), ("f3", &[2, 2])],
        )
        .unwrap();
        let report = product_inequality(&constant, true, &tol()).unwrap();
        assert!(report.gap.is_zero());
        assert_eq!(report.equality_class, EqualityClass::AtLeastKMinus1Constant);
    }

    #[test]
    fn sequence_lemma_small_example() {
        let inst = SequenceInstance {
            names: vec!["x".into(), "y".into()],
            prefixes: vec![
                vec![Scalar::int(1), Scalar::int(2)],
                vec![Scalar::int(1), Scalar::int(4)],
            ],
            weights: vec![Scalar::int(1), Scalar::int(1)],
            tail: None,
        };
        let report = sequence_lemma(&inst, &tol()).unwrap();
        assert_eq!(report.kind, ReportKind::SequenceLemma);
        assert_eq!(report.lhs, Scalar::int(18));
        assert_eq!(report.rhs, Scalar::int(15));
        assert_eq!(report.gap, Scalar::int(3));
    }

    #[test]
    fn sequence_lemma_constant_sequence_hits_equality() {
        let inst = SequenceInstance {
            names: vec!["x".into(), "y".into()],
            prefixes: vec![
                vec![Scalar::int(5), Scalar::int(5), Scalar::int(5)],
                vec![Scalar::int(1), Scalar::int(2), Scalar::int(9)],
            ],
            weights: vec![Scalar::ratio(1, 2), Scalar::ratio(1, 3), Scalar::ratio(1, 6)],
            tail: None,
        };
        let report = sequence_lemma(&inst, &tol()).unwrap();
        assert!(report.gap.is_zero());
        assert_eq!(report.equality_class, EqualityClass::AtLeastKMinus1Constant);
    }

    #[test]
    fn sequence_lemma_matches_double_sum_oracle() {
        // x_i = i, y_i = i^2, mu_i = 2^-i, truncated at N = 20.
        let n = 20;
        let inst = SequenceInstance {
            names: vec!["x".into(), "y".into()],
            prefixes: vec![
                (1..=n).map(|i| Scalar::int(i)).collect(),
                (1..=n).map(|i| Scalar::int(i * i)).collect(),
            ],
            weights: (1..=n as i64).map(|i| Scalar::ratio(1, 1 << i)).collect(),
            tail: None,
        };
        let report = sequence_lemma(&inst, &tol()).unwrap();
        assert!(report.gap.is_positive());
        let fam = inst.to_family().unwrap();
        let (direct, double_sum) = covariance_identity(&fam).unwrap();
        assert_eq!(report.gap, direct);
        assert_eq!(report.gap, double_sum);
    }

    #[test]
    fn sequence_lemma_rejects_bad_input() {
        let base = SequenceInstance {
            names: vec!["x".into(), "y".into()],
            prefixes: vec![
                vec![Scalar::int(2), Scalar::int(1)],
                vec![Scalar::int(1), Scalar::int(4)],
            ],
            weights: vec![Scalar::int(1), Scalar::int(1)],
            tail: None,
        };
        assert!(matches!(
            sequence_lemma(&base, &tol()),
            Err(Error::SequenceNotMonotone { index: 1, .. })
        ));

        let zero_weight = SequenceInstance {
            weights: vec![Scalar::int(1), Scalar::int(0)],
            prefixes: vec![
                vec![Scalar::int(1), Scalar::int(2)],
                vec![Scalar::int(1), Scalar::int(4)],
            ],
            ..base.clone()
        };
        assert!(matches!(
            sequence_lemma(&zero_weight, &tol()),
            Err(Error::NonPositiveSequenceWeight { index: 1 })
        ));

        let bad_tail = SequenceInstance {
            prefixes: vec![
                vec![Scalar::int(1), Scalar::int(2)],
                vec![Scalar::int(1), Scalar::int(4)],
            ],
            tail: Some(TailCertificate {
                mass: Scalar::ratio(1, 100),
                sup_values: vec![Scalar::int(1), Scalar::int(10)],
            }),
            ..base
        };
        assert!(matches!(
            sequence_lemma(&bad_tail, &tol()),
            Err(Error::MissingTailCertificate { .. })
        ));
    }

    #[test]
    fn sequence_lemma_tail_bracket_contains_true_gap() {
        // Geometric weights 2^-i with x_i = i (bounded by 6 past N = 6
        // is false, so cap the sequence at 5 to make the certificate
        // honest: x_i = min(i, 5)).
        let n = 6usize;
        let x: Vec<Scalar> = (1..=n as i64).map(|i| Scalar::int(i.min(5))).collect();
        let y: Vec<Scalar> = (1..=n as i64).map(|i| Scalar::int((i * i).min(25))).collect();
        let inst = SequenceInstance {
            names: vec!["x".into(), "y".into()],
            prefixes: vec![x, y],
            weights: (1..=n as i64).map(|i| Scalar::ratio(1, 1 << i)).collect(),
            tail: Some(TailCertificate {
                mass: Scalar::ratio(1, 1 << n), // Σ_{i>6} 2^-i = 2^-6
                sup_values: vec![Scalar::int(5), Scalar::int(25)],
            }),
        };
        let report = sequence_lemma(&inst, &tol()).unwrap();
        let bracket = report.true_gap_bracket.unwrap();
        assert!(bracket.lower <= bracket.upper);

        // The fully saturated instance at N = 40 is numerically settled;
        // its gap must fall inside the certified bracket.
        let big = 40usize;
        let inst_full = SequenceInstance {
            names: vec!["x".into(), "y".into()],
            prefixes: vec![
                (1..=big as i64).map(|i| Scalar::int(i.min(5))).collect(),
                (1..=big as i64).map(|i| Scalar::int((i * i).min(25))).collect(),
            ],
            weights: (1..=big).map(|i| Scalar::ratio(1, 1i64 << i.min(62))).collect(),
            tail: None,
        };
        let full = sequence_lemma(&inst_full, &tol()).unwrap();
        assert!(bracket.lower <= full.gap && full.gap <= bracket.upper);
    }

    #[test]
    fn anticorrelated_bound_examples() {
        let report = anticorrelated_upper_bound(&pair(&[1, 1], &[1, 2], &[2, 1]), &tol()).unwrap();
        assert_eq!(report.gap, Scalar::int(-1));
        assert_eq!(report.verdict, Verdict::Holds);
        assert_eq!(report.equality_class, EqualityClass::NonDegenerateStrict);

        let report =
            anticorrelated_upper_bound(&pair(&[1, 1, 1], &[4, 4, 4], &[9, 1, 5]), &tol()).unwrap();
        assert!(report.gap.is_zero());
        assert_eq!(report.verdict, Verdict::HoldsWithEquality);
        assert_eq!(report.equality_class, EqualityClass::AtLeastKMinus1Constant);

        let report =
            anticorrelated_upper_bound(&pair(&[1, 1, 1], &[0, 1, 2], &[5, 3, 3]), &tol()).unwrap();
        assert_eq!(report.lhs, Scalar::int(27));
        assert_eq!(report.rhs, Scalar::int(33));
        assert_eq!(report.gap, Scalar::int(-6));
        assert_eq!(report.verdict, Verdict::Holds);

        assert!(matches!(
            anticorrelated_upper_bound(&pair(&[1, 1], &[1, 2], &[1, 2]), &tol()),
            Err(Error::NotAnticorrelated { .. })
        ));
    }

    #[test]
    fn float_tier_verdicts_use_relative_band() {
        let space = MeasureSpace::new(
            vec!["a".into(), "b".into()],
            vec![Scalar::float(1.0), Scalar::float(1.0)],
        )
        .unwrap();
        let fam = FunctionFamily::new(
            Arc::new(space),
            vec!["f".into(), "g".into()],
            vec![
                vec![Scalar::float(0.1), Scalar::float(0.3)],
                vec![Scalar::float(0.1), Scalar::float(0.3)],
            ],
        )
        .unwrap();
        let report = covariance_gap(&fam, &tol()).unwrap();
        assert_eq!(report.verdict, Verdict::Holds);
        // gap = 2*(0.01+0.09) - 0.4^2 = 0.04 up to rounding
        assert!((report.gap.to_f64() - 0.04).abs() < 1e-12);
    }
}
