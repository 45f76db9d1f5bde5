//! Quotient of a space by the relation "no function in the family
//! separates the two points".
//!
//! For a correlated family the quotient carries a total order (classes
//! sorted by their value tuples), a pushforward measure (class weight =
//! sum of member weights), and one representative value per function and
//! class. Every function descends to a nondecreasing function on the
//! ordered classes, which is what the inequality proofs run on.

use std::ops::Range;
use std::sync::Arc;

use serde::Serialize;

use crate::family::{CheckMode, FunctionFamily};
use crate::measure::MeasureSpace;
use crate::scalar::{Scalar, Tier};
use crate::{Error, Result};

/// One end of a class-index interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalEnd {
    /// No bound on this side.
    Unbounded,
    /// Bound at the class, class included.
    Closed(usize),
    /// Bound at the class, class excluded.
    Open(usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientSpace {
    /// Member point indices per class; classes ascend in the induced
    /// order, members ascend in original point index.
    classes: Vec<Vec<usize>>,
    class_labels: Vec<String>,
    /// Pushforward measure: weight of a class is the mass of its members.
    class_weights: Vec<Scalar>,
    /// Original point index -> class index.
    rank: Vec<usize>,
    /// `rep_values[i][c]` = value of function `i` on class `c`;
    /// nondecreasing in `c` for every `i`.
    rep_values: Vec<Vec<Scalar>>,
    function_names: Vec<String>,
    #[serde(skip)]
    tier: Tier,
}

/// Group points by their value tuples and order the classes.
///
/// Rejects non-correlated families (the induced order would not be
/// total), returning the lexicographically first correlation witness.
pub fn build_quotient(fam: &FunctionFamily) -> Result<QuotientSpace> {
    if let Some(witness) = fam.correlation_violation_sorted(CheckMode::Everywhere) {
        // Reported witnesses are canonical: recompute the lexicographic
        // minimum on the slow path.
        let witness = fam
            .correlation_violation(CheckMode::Everywhere)
            .unwrap_or(witness);
        return Err(Error::NotCorrelated { witness });
    }

    let space = fam.space();
    let n = space.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort: members of a class keep ascending original index.
    order.sort_by(|&p, &q| fam.cmp_tuples(p, q));

    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &p in &order {
        match classes.last_mut() {
            Some(class) if fam.cmp_tuples(*class.last().unwrap(), p).is_eq() => class.push(p),
            _ => classes.push(vec![p]),
        }
    }

    let tier = space.tier();
    let class_weights: Vec<Scalar> = classes
        .iter()
        .map(|members| Scalar::sum(members.iter().map(|&p| space.weight(p)), tier))
        .collect();
    let class_labels: Vec<String> = classes
        .iter()
        .map(|members| {
            let joined: Vec<&str> = members.iter().map(|&p| space.label(p)).collect();
            format!("{{{}}}", joined.join(","))
        })
        .collect();
    let mut rank = vec![0usize; n];
    for (c, members) in classes.iter().enumerate() {
        for &p in members {
            rank[p] = c;
        }
    }
    let rep_values: Vec<Vec<Scalar>> = (0..fam.k())
        .map(|i| {
            classes
                .iter()
                .map(|members| fam.value(i, members[0]).clone())
                .collect()
        })
        .collect();

    // Correlation makes tuple order coordinatewise: every representative
    // row must come out nondecreasing.
    for row in &rep_values {
        assert!(
            row.windows(2).all(|w| w[0] <= w[1]),
            "class order is not coordinatewise monotone"
        );
    }

    Ok(QuotientSpace {
        classes,
        class_labels,
        class_weights,
        rank,
        rep_values,
        function_names: fam.names().to_vec(),
        tier,
    })
}

impl QuotientSpace {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    pub fn class_weights(&self) -> &[Scalar] {
        &self.class_weights
    }

    pub fn rep_values(&self) -> &[Vec<Scalar>] {
        &self.rep_values
    }

    /// Class index of an original point.
    pub fn class_of(&self, point: usize) -> usize {
        self.rank[point]
    }

    /// Total pushforward mass; equals the mass of the original space.
    pub fn total_mass(&self) -> Scalar {
        Scalar::sum(&self.class_weights, self.tier)
    }

    /// The pair `(∫ f_i dmu, ∫ phi_i dmu-bar)`: the integral upstairs and
    /// the integral of the descended function downstairs. Equal in the
    /// exact tier.
    pub fn lift_integral_check(&self, fam: &FunctionFamily, i: usize) -> Result<(Scalar, Scalar)> {
        if fam.k() != self.rep_values.len() || fam.space().len() != self.rank.len() {
            return Err(Error::InvalidInput {
                reason: "quotient was built from a different family".into(),
            });
        }
        let upstairs = fam.integral(i);
        let mut downstairs = Scalar::zero(self.tier);
        for (v, w) in self.rep_values[i].iter().zip(&self.class_weights) {
            downstairs = &downstairs + &(v * w);
        }
        Ok((upstairs, downstairs))
    }

    /// Contiguous class-index range for an interval in the induced order;
    /// `lo > hi` yields an empty range.
    pub fn interval(&self, lo: IntervalEnd, hi: IntervalEnd) -> Result<Range<usize>> {
        let m = self.class_count();
        let check = |end: IntervalEnd| match end {
            IntervalEnd::Closed(c) | IntervalEnd::Open(c) if c >= m => {
                Err(Error::ClassOutOfRange { index: c, classes: m })
            }
            _ => Ok(()),
        };
        check(lo)?;
        check(hi)?;
        let start = match lo {
            IntervalEnd::Unbounded => 0,
            IntervalEnd::Closed(c) => c,
            IntervalEnd::Open(c) => c + 1,
        };
        let end = match hi {
            IntervalEnd::Unbounded => m,
            IntervalEnd::Closed(c) => c + 1,
            IntervalEnd::Open(c) => c,
        };
        Ok(start..end.max(start))
    }

    /// The quotient as a family in its own right: classes become points
    /// (labelled by their member sets), the pushforward weights become the
    /// measure, and the representative values tabulate the functions.
    pub fn to_family(&self) -> Result<FunctionFamily> {
        let space = MeasureSpace::new_degenerate(
            self.class_labels.clone(),
            self.class_weights.clone(),
        )?;
        FunctionFamily::new(
            Arc::new(space),
            self.function_names.clone(),
            self.rep_values.clone(),
        )
    }
}
