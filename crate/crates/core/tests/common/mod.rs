//! Seeded generators and independent oracles shared by the property and
//! acceptance suites. Everything here is deliberately naive: oracles must
//! not share code paths with the operations they check.

// Each test target compiles its own copy and uses a different subset.
#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chebcorr::applications::{Direction, DiscreteDistribution};
use chebcorr::{FunctionFamily, MeasureSpace, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small exact rational with numerator in `lo..=hi`.
pub fn rat(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Scalar {
    Scalar::ratio(rng.random_range(lo..=hi), rng.random_range(1..=6))
}

pub fn pos_rat(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.random_range(1..=6), rng.random_range(1..=6))
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Weights: positive rationals, with a fraction of zero weights when
/// `allow_null` (at least one kept positive).
pub fn weights(rng: &mut ChaCha8Rng, n: usize, allow_null: bool) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = (0..n)
        .map(|_| {
            if allow_null && rng.random_bool(0.2) {
                Scalar::int(0)
            } else {
                pos_rat(rng)
            }
        })
        .collect();
    if out.iter().all(Scalar::is_zero) {
        out[rng.random_range(0..n)] = pos_rat(rng);
    }
    out
}

/// Arbitrary (usually non-correlated) family with values in a small
/// signed range.
pub fn arbitrary_family(rng: &mut ChaCha8Rng, k: usize, n: usize) -> FunctionFamily {
    let space = Arc::new(
        MeasureSpace::new(labels(n), weights(rng, n, true)).expect("valid space"),
    );
    let names = (1..=k).map(|i| format!("f{i}")).collect();
    let table = (0..k)
        .map(|_| (0..n).map(|_| rat(rng, -6, 6)).collect())
        .collect();
    FunctionFamily::new(space, names, table).expect("valid family")
}

/// Correlated family: per function, nondecreasing values along one shared
/// random point order, then labels shuffled away. With `allow_null`,
/// zero-weight points get arbitrary values afterwards, so the family is
/// a.e. correlated but usually not everywhere correlated.
pub fn correlated_family(
    rng: &mut ChaCha8Rng,
    k: usize,
    n: usize,
    nonneg: bool,
    allow_null: bool,
) -> FunctionFamily {
    let ws = weights(rng, n, allow_null);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut table = vec![vec![Scalar::int(0); n]; k];
    for row in table.iter_mut() {
        let mut cur = if nonneg {
            rat(rng, 0, 4)
        } else {
            rat(rng, -4, 4)
        };
        for &p in &order {
            if rng.random_bool(0.6) {
                cur = &cur + &rat(rng, 0, 3);
            }
            row[p] = cur.clone();
        }
    }
    if allow_null {
        for p in 0..n {
            if ws[p].is_zero() {
                for row in table.iter_mut() {
                    row[p] = if nonneg { rat(rng, 0, 6) } else { rat(rng, -6, 6) };
                }
            }
        }
    }
    let space = Arc::new(MeasureSpace::new(labels(n), ws).expect("valid space"));
    let names = (1..=k).map(|i| format!("f{i}")).collect();
    FunctionFamily::new(space, names, table).expect("valid family")
}

/// Family sitting on the equality boundary: exactly `nonconstant` of the
/// `k` functions are strictly nonconstant (the rest are positive
/// constants), all values nonnegative, all integrals strictly positive,
/// and all weights strictly positive.
pub fn boundary_family(
    rng: &mut ChaCha8Rng,
    k: usize,
    n: usize,
    nonconstant: usize,
) -> FunctionFamily {
    assert!(nonconstant <= k && n >= 2);
    let ws: Vec<Scalar> = (0..n).map(|_| pos_rat(rng)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut which: Vec<usize> = (0..k).collect();
    which.shuffle(rng);
    let nonconstant_set: Vec<usize> = which[..nonconstant].to_vec();

    let mut table = vec![Vec::new(); k];
    for (i, row) in table.iter_mut().enumerate() {
        if nonconstant_set.contains(&i) {
            let mut vals = vec![Scalar::int(0); n];
            let mut cur = rat(rng, 0, 3);
            // Guarantee at least one strict rise so the function is
            // genuinely nonconstant.
            let forced = rng.random_range(1..n);
            for (step, &p) in order.iter().enumerate() {
                if step == forced || rng.random_bool(0.4) {
                    cur = &cur + &pos_rat(rng);
                }
                vals[p] = cur.clone();
            }
            // Positive integral: lift everything by a positive constant
            // if the minimum is zero-heavy. Cheaper: ensure cur started
            // at zero is fine because the risen part integrates > 0.
            *row = vals;
        } else {
            let c = pos_rat(rng);
            *row = vec![c; n];
        }
    }
    let space = Arc::new(MeasureSpace::new(labels(n), ws).expect("valid space"));
    let names = (1..=k).map(|i| format!("f{i}")).collect();
    FunctionFamily::new(space, names, table).expect("valid family")
}

/// Random exact-tier distribution with integer support of given size.
pub fn random_distribution(rng: &mut ChaCha8Rng, support_size: usize) -> DiscreteDistribution {
    let mut values: Vec<i64> = (-12..=12).collect();
    values.shuffle(rng);
    let support: Vec<Scalar> = values[..support_size].iter().map(|&v| Scalar::int(v)).collect();
    let raw: Vec<Scalar> = (0..support_size).map(|_| pos_rat(rng)).collect();
    let total = Scalar::sum(&raw, chebcorr::Tier::Exact);
    let probs: Vec<Scalar> = raw.iter().map(|p| p / &total).collect();
    DiscreteDistribution::new(support, probs).expect("normalized by construction")
}

/// Exhaustive joint-probability oracle: enumerate every outcome tuple of
/// `(x0, competitors)` and add up the winning ones. Independent of the
/// survival-function route.
pub fn exhaustive_joint(
    x0: &DiscreteDistribution,
    competitors: &[DiscreteDistribution],
    direction: Direction,
) -> Scalar {
    let mut joint = Scalar::int(0);
    let sizes: Vec<usize> = competitors.iter().map(|c| c.support().len()).collect();
    for (t0, p0) in x0.support().iter().zip(x0.probs()) {
        // Mixed-radix counter over competitor outcomes.
        let mut idx = vec![0usize; competitors.len()];
        loop {
            let mut prob = p0.clone();
            let mut wins = true;
            for (c, &i) in competitors.iter().zip(&idx) {
                prob = &prob * &c.probs()[i];
                let ti = &c.support()[i];
                let ok = match direction {
                    Direction::Geq => ti >= t0,
                    Direction::Leq => ti <= t0,
                };
                wins = wins && ok;
            }
            if wins {
                joint = &joint + &prob;
            }
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < sizes[pos] {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    joint
}

/// Ad-hoc product gap oracle by direct summation, reassociating freely
/// (exact tier only, where order cannot matter).
pub fn direct_gap(fam: &FunctionFamily) -> Scalar {
    let space = fam.space();
    let k = fam.k();
    let n = space.len();
    let mut mass = Scalar::int(0);
    for w in space.weights() {
        mass = &mass + w;
    }
    let mut int_prod = Scalar::int(0);
    for p in 0..n {
        let mut v = Scalar::int(1);
        for i in 0..k {
            v = &v * fam.value(i, p);
        }
        int_prod = &int_prod + &(&v * space.weight(p));
    }
    let mut lhs = int_prod;
    for _ in 0..k - 1 {
        lhs = &lhs * &mass;
    }
    let mut rhs = Scalar::int(1);
    for i in 0..k {
        let mut s = Scalar::int(0);
        for p in 0..n {
            s = &s + &(fam.value(i, p) * space.weight(p));
        }
        rhs = &rhs * &s;
    }
    &lhs - &rhs
}
