//! Tabulated real-valued function families and correlation predicates.
//!
//! A family `{f_1, ..., f_k}` is *correlated* when
//! `(f_i(x) - f_i(y)) * (f_j(x) - f_j(y)) >= 0` for every pair of
//! functions and every pair of points; *anticorrelated* (pairs only) when
//! the product is `<= 0`. The `MuAe` mode quantifies over positive-weight
//! points only.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::measure::MeasureSpace;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Quantification mode for the correlation predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// All point pairs.
    Everywhere,
    /// Pairs of positive-weight points only (`mu`-almost everywhere).
    MuAe,
}

/// A violating tuple `(f_i, f_j, x, y)` with
/// `(f_i(x) - f_i(y)) * (f_j(x) - f_j(y)) < 0` (for anticorrelation,
/// `> 0`). The naive checker returns the lexicographically first violation
/// in `(i, j, x, y)` index order, a deterministic shrink target.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelationWitness {
    pub function_i: String,
    pub function_j: String,
    pub point_x: String,
    pub point_y: String,
    /// 0-based indices `(i, j, x, y)` into the family and the point list.
    pub indices: (usize, usize, usize, usize),
}

impl fmt::Display for CorrelationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "functions (`{}`, `{}`) move oppositely on points (`{}`, `{}`)",
            self.function_i, self.function_j, self.point_x, self.point_y
        )
    }
}

/// `k` real-valued functions tabulated on a shared measure space.
#[derive(Debug, Clone)]
pub struct FunctionFamily {
    space: Arc<MeasureSpace>,
    names: Vec<String>,
    table: Vec<Vec<Scalar>>,
}

impl FunctionFamily {
    pub fn new(
        space: Arc<MeasureSpace>,
        names: Vec<String>,
        table: Vec<Vec<Scalar>>,
    ) -> Result<Self> {
        if names.is_empty() || table.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if names.len() != table.len() {
            return Err(Error::LengthMismatch {
                context: "function names".into(),
                expected: table.len(),
                actual: names.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateName { name: name.clone() });
            }
        }
        for (name, row) in names.iter().zip(&table) {
            if row.len() != space.len() {
                return Err(Error::LengthMismatch {
                    context: format!("values of function `{name}`"),
                    expected: space.len(),
                    actual: row.len(),
                });
            }
            for v in row {
                if v.tier() != space.tier() {
                    return Err(Error::MixedTier {
                        context: format!("values of function `{name}`"),
                    });
                }
            }
        }
        Ok(FunctionFamily {
            space,
            names,
            table,
        })
    }

    /// Exact-tier family over integer tables; test and example helper.
    pub fn from_ints(space: Arc<MeasureSpace>, rows: &[(&str, &[i64])]) -> Result<Self> {
        Self::new(
            space,
            rows.iter().map(|(n, _)| n.to_string()).collect(),
            rows.iter()
                .map(|(_, vs)| vs.iter().map(|&v| Scalar::int(v)).collect())
                .collect(),
        )
    }

    pub fn k(&self) -> usize {
        self.table.len()
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn space_arc(&self) -> Arc<MeasureSpace> {
        Arc::clone(&self.space)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn values(&self, i: usize) -> &[Scalar] {
        &self.table[i]
    }

    pub fn value(&self, i: usize, point: usize) -> &Scalar {
        &self.table[i][point]
    }

    /// `∫ f_i dmu` over the underlying space.
    pub fn integral(&self, i: usize) -> Scalar {
        self.space
            .integrate(&self.table[i])
            .expect("family rows are validated against the space")
    }

    fn candidate_points(&self, mode: CheckMode) -> Vec<usize> {
        match mode {
            CheckMode::Everywhere => (0..self.space.len()).collect(),
            CheckMode::MuAe => self.space.positive_indices(),
        }
    }

    fn witness(&self, i: usize, j: usize, x: usize, y: usize) -> CorrelationWitness {
        CorrelationWitness {
            function_i: self.names[i].clone(),
            function_j: self.names[j].clone(),
            point_x: self.space.label(x).to_string(),
            point_y: self.space.label(y).to_string(),
            indices: (i, j, x, y),
        }
    }

    /// Naive `O(k^2 n^2)` correlation check. Returns the lexicographically
    /// first violation, or `None` when the family is correlated.
    ///
    /// Violations are symmetric under swapping `x,y` or `i,j`, so the
    /// first one in the `i < j`, `x < y` scan is the global
    /// lexicographic minimum.
    pub fn correlation_violation(&self, mode: CheckMode) -> Option<CorrelationWitness> {
        let pts = self.candidate_points(mode);
        for i in 0..self.k() {
            for j in (i + 1)..self.k() {
                for (a, &x) in pts.iter().enumerate() {
                    for &y in &pts[a + 1..] {
                        let di = &self.table[i][x] - &self.table[i][y];
                        let dj = &self.table[j][x] - &self.table[j][y];
                        if (&di * &dj).is_negative() {
                            return Some(self.witness(i, j, x, y));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_correlated(&self, mode: CheckMode) -> bool {
        self.correlation_violation(mode).is_none()
    }

    /// Boolean correlation gate via the sorted checker; used where only
    /// the verdict matters and `n` may be large.
    pub(crate) fn is_correlated_fast(&self, mode: CheckMode) -> bool {
        self.correlation_violation_sorted(mode).is_none()
    }

    /// `O(k n log n)` correlation check: sort the points by their value
    /// tuple (lexicographic) and test that every function is nondecreasing
    /// along that order. For a correlated family the tuple order is a
    /// common monotone order, so the two checkers agree.
    pub fn correlation_violation_sorted(&self, mode: CheckMode) -> Option<CorrelationWitness> {
        let mut pts = self.candidate_points(mode);
        pts.sort_by(|&p, &q| self.cmp_tuples(p, q));
        for i in 0..self.k() {
            for w in pts.windows(2) {
                let (p, q) = (w[0], w[1]);
                if self.table[i][p] > self.table[i][q] {
                    // tuple(p) <=_lex tuple(q), so the first differing
                    // coordinate d rises while f_i falls: a violation.
                    let d = (0..self.k())
                        .find(|&d| self.table[d][p] != self.table[d][q])
                        .expect("a decreasing coordinate implies the tuples differ");
                    let (lo, hi) = if d < i { (d, i) } else { (i, d) };
                    return Some(self.witness(lo, hi, q, p));
                }
            }
        }
        None
    }

    /// Lexicographic comparison of the full value tuples of two points.
    pub(crate) fn cmp_tuples(&self, p: usize, q: usize) -> std::cmp::Ordering {
        for row in &self.table {
            let ord = row[p].cmp(&row[q]);
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    }

    /// Anticorrelation check for a pair: increment products all `<= 0`.
    pub fn anticorrelation_violation(&self, mode: CheckMode) -> Result<Option<CorrelationWitness>> {
        if self.k() != 2 {
            return Err(Error::WrongArity {
                expected: 2,
                actual: self.k(),
            });
        }
        let pts = self.candidate_points(mode);
        for (a, &x) in pts.iter().enumerate() {
            for &y in &pts[a + 1..] {
                let df = &self.table[0][x] - &self.table[0][y];
                let dg = &self.table[1][x] - &self.table[1][y];
                if (&df * &dg).is_positive() {
                    return Ok(Some(self.witness(0, 1, x, y)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_anticorrelated(&self, mode: CheckMode) -> Result<bool> {
        Ok(self.anticorrelation_violation(mode)?.is_none())
    }

    /// True when `f_i` takes a single value across all positive-weight
    /// points (vacuously true on a null space). Float tier compares values
    /// bit-exactly.
    pub fn is_constant_ae(&self, i: usize) -> bool {
        let mut positives = self
            .space
            .positive_indices()
            .into_iter()
            .map(|p| &self.table[i][p]);
        match positives.next() {
            None => true,
            Some(first) => positives.all(|v| v == first),
        }
    }

    /// Indices of functions that are not constant a.e.
    pub fn nonconstant_ae(&self) -> Vec<usize> {
        (0..self.k()).filter(|&i| !self.is_constant_ae(i)).collect()
    }

    /// Whether every function is nonnegative at every positive-weight
    /// point; on failure names the first offending function and point.
    pub fn nonnegativity_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.k() {
            for &p in &self.space.positive_indices() {
                if self.table[i][p].is_negative() {
                    return Some((i, p));
                }
            }
        }
        None
    }

    /// Drop zero-weight points, keeping labels and function values of the
    /// surviving ones. Turns an a.e.-correlated family into an everywhere
    /// correlated one before quotienting.
    pub fn strip_null(&self) -> Result<FunctionFamily> {
        let keep = self.space.positive_indices();
        let space = MeasureSpace::new_degenerate(
            keep.iter().map(|&p| self.space.label(p).to_string()).collect(),
            keep.iter().map(|&p| self.space.weight(p).clone()).collect(),
        )?;
        FunctionFamily::new(
            Arc::new(space),
            self.names.clone(),
            self.table
                .iter()
                .map(|row| keep.iter().map(|&p| row[p].clone()).collect())
                .collect(),
        )
    }

    /// Pointwise cap `min(f_i, cap)` applied to every function.
    pub fn capped(&self, cap: &Scalar) -> FunctionFamily {
        FunctionFamily {
            space: Arc::clone(&self.space),
            names: self.names.clone(),
            table: self
                .table
                .iter()
                .map(|row| row.iter().map(|v| v.min_with(cap)).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(weights: &[i64], rows: &[(&str, &[i64])]) -> FunctionFamily {
        let labels: Vec<String> = (0..weights.len()).map(|i| format!("p{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        let space = MeasureSpace::from_ints(&refs, weights).unwrap();
        FunctionFamily::from_ints(space, rows).unwrap()
    }

    #[test]
    fn comonotone_pair_is_correlated() {
        let fam = family(&[1, 1, 1], &[("f1", &[1, 2, 3]), ("f2", &[5, 5, 9])]);
        assert!(fam.is_correlated(CheckMode::Everywhere));
    }

    #[test]
    fn opposite_movement_yields_first_witness() {
        let fam = family(&[1, 1], &[("f1", &[1, 2]), ("f2", &[2, 1])]);
        let w = fam.correlation_violation(CheckMode::Everywhere).unwrap();
        assert_eq!(w.indices, (0, 1, 0, 1));
        assert_eq!((w.function_i.as_str(), w.function_j.as_str()), ("f1", "f2"));
        assert_eq!((w.point_x.as_str(), w.point_y.as_str()), ("p0", "p1"));
    }

    #[test]
    fn signed_grid_family_is_correlated() {
        // Two copies of the negative ramp plus the positive ramp on a
        // symmetric four-point grid.
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
        let fam = FunctionFamily::new(
            Arc::new(space),
            vec!["f1".into(), "f2".into(), "f3".into()],
            vec![neg.clone(), neg, pos],
        )
        .unwrap();
        assert!(fam.is_correlated(CheckMode::Everywhere));
        assert!(fam.correlation_violation_sorted(CheckMode::Everywhere).is_none());
    }

    #[test]
    fn anticorrelation_examples() {
        let fam = family(&[1, 1], &[("f", &[1, 2]), ("g", &[2, 1])]);
        assert!(fam.is_anticorrelated(CheckMode::Everywhere).unwrap());

        let co = family(&[1, 1], &[("f", &[1, 2]), ("g", &[1, 2])]);
        assert!(!co.is_anticorrelated(CheckMode::Everywhere).unwrap());

        let with_const = family(&[1, 1, 1], &[("f", &[4, 4, 4]), ("g", &[9, 1, 5])]);
        assert!(with_const.is_anticorrelated(CheckMode::Everywhere).unwrap());
        assert!(with_const.is_correlated(CheckMode::Everywhere));
    }

    #[test]
    fn anticorrelation_requires_a_pair() {
        let fam = family(&[1, 1], &[("f", &[1, 2])]);
        assert!(matches!(
            fam.anticorrelation_violation(CheckMode::Everywhere),
            Err(Error::WrongArity { expected: 2, actual: 1 })
        ));
    }

    #[test]
    fn constancy_respects_null_points() {
        let fam = family(&[1, 1, 1], &[("f", &[7, 7, 7])]);
        assert!(fam.is_constant_ae(0));

        let null_dev = family(&[1, 0, 1], &[("f", &[7, 8, 7])]);
        assert!(null_dev.is_constant_ae(0));

        let dev = family(&[1, 1, 1], &[("f", &[7, 8, 7])]);
        assert!(!dev.is_constant_ae(0));
    }

    #[test]
    fn mu_ae_mode_ignores_null_violations() {
        // The pair disagrees only through the zero-weight middle point.
        let fam = family(&[1, 0, 1], &[("f", &[0, 9, 1]), ("g", &[0, -9, 1])]);
        assert!(!fam.is_correlated(CheckMode::Everywhere));
        assert!(fam.is_correlated(CheckMode::MuAe));
        assert!(fam.correlation_violation_sorted(CheckMode::MuAe).is_none());
        assert!(fam.strip_null().unwrap().is_correlated(CheckMode::Everywhere));
    }

    #[test]
    fn sorted_checker_witness_is_a_real_violation() {
        let fam = family(
            &[1, 1, 1],
            &[("f1", &[1, 2, 2]), ("f2", &[5, 4, 6]), ("f3", &[0, 0, 1])],
        );
        let w = fam.correlation_violation_sorted(CheckMode::Everywhere).unwrap();
        let (i, j, x, y) = w.indices;
        let di = &fam.table[i][x] - &fam.table[i][y];
        let dj = &fam.table[j][x] - &fam.table[j][y];
        assert!((&di * &dj).is_negative());
        assert!(fam.correlation_violation(CheckMode::Everywhere).is_some());
    }
}
