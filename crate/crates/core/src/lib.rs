//! # chebcorr
//!
//! A verification engine for Chebyshev-type correlation inequalities on
//! finite discrete measure spaces.
//!
//! A family of real-valued functions `{f_i}` on a set `X` is *correlated*
//! when every pair moves in the same sense:
//!
//! ```text
//! (f_i(x) - f_i(y)) * (f_j(x) - f_j(y)) >= 0   for all i, j and x, y in X
//! ```
//!
//! No order on `X` is assumed; correlation replaces the classical
//! "monotone in the same sense" hypothesis. For such families on a space
//! of finite total mass the product inequality
//!
//! ```text
//! mu(X)^(k-1) * ∫ f_1 ... f_k dmu  >=  ∫ f_1 dmu * ... * ∫ f_k dmu
//! ```
//!
//! holds (for `k = 2` with signed integrable functions, for `k > 2` with
//! nonnegative ones), with equality - when every integral is positive and
//! finite - exactly when at least `k - 1` of the functions are constant
//! almost everywhere.
//!
//! The crate verifies instances of this inequality either in exact
//! rational arithmetic (every classification is decidable) or in `f64`
//! with an explicit relative-tolerance comparator. It provides:
//!
//! * [`measure`] - finite discrete measure spaces and integration;
//! * [`family`] - tabulated function families and correlation predicates;
//! * [`quotient`] - the quotient of `X` by the "no function separates
//!   them" relation, with its induced total order and pushforward measure;
//! * [`chebyshev`] - the inequality engine: covariance gap, the
//!   double-sum covariance identity, the k-function product inequality,
//!   equality classification, weighted-sequence form, and the reversed
//!   bound for anticorrelated pairs;
//! * [`applications`] - power-series monotonicity via the inequality, and
//!   lower bounds for joint probabilities of independent random variables.

use thiserror::Error;

pub mod applications;
pub mod chebyshev;
pub mod family;
pub mod input;
pub mod measure;
pub mod quotient;
pub mod scalar;

pub use chebyshev::{
    anticorrelated_upper_bound, classify_equality, covariance_gap, covariance_identity,
    product_inequality, sequence_lemma, EqualityClass, InequalityReport, ReportKind,
    SequenceInstance, TailCertificate, Tolerance, Verdict,
};
pub use family::{CheckMode, CorrelationWitness, FunctionFamily};
pub use measure::MeasureSpace;
pub use quotient::{build_quotient, IntervalEnd, QuotientSpace};
pub use scalar::{Scalar, Tier};

/// Errors produced by construction, validation and verification.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{context}: expected {expected} entries, got {actual}")]
    LengthMismatch {
        context: String,
        expected: usize,
        actual: usize,
    },

    #[error("cannot parse `{text}` as a {tier} scalar: {reason}")]
    ScalarParse {
        text: String,
        tier: Tier,
        reason: String,
    },

    #[error("float literal `{text}` is not allowed in the exact tier")]
    FloatLiteralInExactTier { text: String },

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("mixed scalar tiers in {context}")]
    MixedTier { context: String },

    #[error("negative weight {weight} at point `{label}`")]
    NegativeWeight { label: String, weight: String },

    #[error("duplicate point label `{label}`")]
    DuplicateLabel { label: String },

    #[error("duplicate function name `{name}`")]
    DuplicateName { name: String },

    #[error("measure space has zero total mass (flag it degenerate to allow this)")]
    ZeroTotalMass,

    #[error("family must contain at least one function")]
    EmptyFamily,

    #[error("operation requires exactly {expected} functions, family has {actual}")]
    WrongArity { expected: usize, actual: usize },

    #[error("operation requires at least {min} functions, family has {actual}")]
    TooFewFunctions { min: usize, actual: usize },

    #[error("function `{name}` is negative ({value}) at positive-weight point `{label}`")]
    NegativeValue {
        name: String,
        label: String,
        value: String,
    },

    #[error("family is not correlated: {witness}")]
    NotCorrelated { witness: CorrelationWitness },

    #[error("pair is not anticorrelated: {witness}")]
    NotAnticorrelated { witness: CorrelationWitness },

    #[error("sequence `{name}` decreases at index {index}")]
    SequenceNotMonotone { name: String, index: usize },

    #[error("sequence `{name}` has negative entry at index {index}")]
    SequenceNegative { name: String, index: usize },

    #[error("weight at index {index} must be strictly positive")]
    NonPositiveSequenceWeight { index: usize },

    #[error("tail certificate invalid or missing: {reason}")]
    MissingTailCertificate { reason: String },

    #[error("coefficient drift is not monotone at term {index}")]
    DriftNotMonotone { index: usize },

    #[error("invalid evaluation grid: {reason}")]
    InvalidGrid { reason: String },

    #[error("invalid distribution: {reason}")]
    InvalidDistribution { reason: String },

    #[error("class index {index} out of range ({classes} classes)")]
    ClassOutOfRange { index: usize, classes: usize },

    #[error(
        "equality classification inconsistent with the computed gap \
         (the characterization failed as a runtime cross-check): {details}"
    )]
    Inconsistent { details: String },

    #[error("invalid input: {reason}")]
    InvalidInput { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
