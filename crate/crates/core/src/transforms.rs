//! Probability to possibility transformations.
//!
//! Four transformations are provided:
//!
//! * symmetric: `π(i) = Σ_j min(p_i, p_j)`
//! * optimal: `π(i) = Σ_{j : p_j ≤ p_i} p_j`
//! * weak-order: suffix sums of `p` along a caller-chosen non-increasing order
//! * generalized: `π(i) = Σ_j p_j · min(1, (p_i / p_j)^n)`, which is the
//!   symmetric transformation at `n = 1` and tends to the optimal one as `n → ∞`.
//!
//! Zero masses: a term with `p_j = 0` contributes nothing and a zero-mass
//! outcome receives possibility 0, so `π(w) = 0` exactly when `p(w) = 0`.

use std::fmt;
use std::str::FromStr;

use crate::dist::{descending_order, PossibilityDistribution, ProbabilityDistribution};
use crate::error::{Error, Result};

/// Below this exponent `exp` underflows to zero (or a subnormal) in f64.
const EXP_UNDERFLOW: f64 = -745.0;

/// Exponent of the generalized transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    /// The `n → ∞` limit: evaluates the optimal transformation exactly.
    Infinite,
}

impl Exponent {
    pub fn new(n: f64) -> Result<Self> {
        if n == f64::INFINITY {
            Ok(Exponent::Infinite)
        } else if n.is_finite() && n > 0.0 {
            Ok(Exponent::Finite(n))
        } else {
            Err(Error::InvalidExponent(n))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(n) => n,
            Exponent::Infinite => f64::INFINITY,
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" | "∞" => Ok(Exponent::Infinite),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::InvalidExponent(f64::NAN))
                .and_then(Exponent::new),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(n) => write!(f, "{n}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

/// Which transformation to apply.
#[derive(Debug, Clone, PartialEq)]
pub enum TransformSpec {
    Symmetric,
    Optimal,
    /// Weak-order variant. `None` synthesizes the stable descending order
    /// (see [`canonical_order`]).
    WeakOrder(Option<Vec<usize>>),
    Generalized(Exponent),
}

impl TransformSpec {
    pub fn generalized(n: f64) -> Result<Self> {
        Exponent::new(n).map(TransformSpec::Generalized)
    }

    pub fn name(&self) -> &'static str {
        match self {
            TransformSpec::Symmetric => "symmetric",
            TransformSpec::Optimal => "optimal",
            TransformSpec::WeakOrder(_) => "weak-order",
            TransformSpec::Generalized(_) => "generalized",
        }
    }
}

/// Symmetric transformation, evaluated as the direct double sum.
pub fn transform_symmetric(p: &ProbabilityDistribution) -> PossibilityDistribution {
    let masses = p.masses();
    let values = masses
        .iter()
        .map(|&pi| masses.iter().map(|&pj| pi.min(pj)).sum())
        .collect();
    PossibilityDistribution::from_computed(values)
}

/// Optimal transformation. Equal masses receive equal possibilities since
/// ties are counted in full.
pub fn transform_optimal(p: &ProbabilityDistribution) -> PossibilityDistribution {
    let sorted = SortedMasses::new(p.masses());
    let mut values = vec![0.0; p.len()];
    for group in sorted.groups() {
        let pi = if group.value == 0.0 {
            0.0
        } else {
            sorted.suffix[group.start]
        };
        for &index in &sorted.order[group.start..group.end] {
            values[index] = pi;
        }
    }
    PossibilityDistribution::from_computed(values)
}

/// The stable non-increasing order used when a weak-order transformation is
/// requested without an explicit tie-breaking permutation.
pub fn canonical_order(p: &ProbabilityDistribution) -> Vec<usize> {
    p.descending_order()
}

/// Weak-order variant: `π(order[k]) = Σ_{m ≥ k} p(order[m])`.
///
/// `order` must be a permutation of `0..len` along which the masses are
/// non-increasing; it decides how ties are broken, so tied outcomes get
/// distinct possibilities.
pub fn transform_weak_order(
    p: &ProbabilityDistribution,
    order: &[usize],
) -> Result<PossibilityDistribution> {
    let masses = p.masses();
    if order.len() != masses.len() {
        return Err(Error::InvalidOrder(format!(
            "expected a permutation of {} outcomes, got {} indices",
            masses.len(),
            order.len()
        )));
    }
    let mut seen = vec![false; masses.len()];
    for &index in order {
        if index >= masses.len() || std::mem::replace(&mut seen[index], true) {
            return Err(Error::InvalidOrder(format!(
                "index {index} is out of range or repeated"
            )));
        }
    }
    if let Some(w) = order.windows(2).find(|w| masses[w[0]] < masses[w[1]]) {
        return Err(Error::InvalidOrder(format!(
            "mass of outcome {} is smaller than that of outcome {} which follows it",
            w[0], w[1]
        )));
    }

    let mut values = vec![0.0; masses.len()];
    let mut tail = 0.0;
    for &index in order.iter().rev() {
        tail += masses[index];
        values[index] = tail;
    }
    Ok(PossibilityDistribution::from_computed(values))
}

/// Generalized transformation by direct evaluation of the double sum.
///
/// Each ratio power is formed as `exp(n·(ln p_i − ln p_j))`, flushed to zero
/// below the f64 underflow threshold. At `n = 1` the terms are exactly
/// `min(p_i, p_j)`, so the result is bit-identical to [`transform_symmetric`].
pub fn transform_generalized(
    p: &ProbabilityDistribution,
    n: Exponent,
) -> PossibilityDistribution {
    let n = match n {
        Exponent::Infinite => return transform_optimal(p),
        Exponent::Finite(n) => n,
    };
    let masses = p.masses();
    let logs: Vec<f64> = masses.iter().map(|m| m.ln()).collect();
    let values = masses
        .iter()
        .zip(&logs)
        .map(|(&pi, &ln_pi)| {
            masses
                .iter()
                .zip(&logs)
                .map(|(&pj, &ln_pj)| {
                    if pj == 0.0 || pi == 0.0 {
                        0.0
                    } else if pi >= pj {
                        pj
                    } else if n == 1.0 {
                        pi
                    } else {
                        pj * scaled_exp(n * (ln_pi - ln_pj))
                    }
                })
                .sum()
        })
        .collect();
    PossibilityDistribution::from_computed(values)
}

/// Generalized transformation in `O(M log M)`.
///
/// With masses sorted in decreasing order the sum splits into
///
/// ```text
/// π_i = p_i · A_i + Σ_{p_j ≤ p_i} p_j,    A_i = Σ_{p_j > p_i} (p_i / p_j)^(n−1)
/// ```
///
/// and `A` obeys the recurrence `A(v') = (A(v) + count(v)) · (v'/v)^(n−1)`
/// between consecutive distinct values `v > v'`. Every factor is a ratio
/// power formed in the log domain, so no `p^n` is ever materialized.
pub fn transform_generalized_fast(
    p: &ProbabilityDistribution,
    n: Exponent,
) -> PossibilityDistribution {
    let n = match n {
        Exponent::Infinite => return transform_optimal(p),
        Exponent::Finite(n) => n,
    };
    let sorted = SortedMasses::new(p.masses());
    let mut values = vec![0.0; p.len()];
    let mut above = 0.0;
    let mut previous: Option<(f64, usize)> = None;
    for group in sorted.groups() {
        if group.value == 0.0 {
            // Zero masses sort last; their possibility stays 0.
            break;
        }
        if let Some((value, count)) = previous {
            above = (above + count as f64) * scaled_exp((n - 1.0) * (group.value.ln() - value.ln()));
        }
        let pi = group.value * above + sorted.suffix[group.start];
        for &index in &sorted.order[group.start..group.end] {
            values[index] = pi;
        }
        previous = Some((group.value, group.end - group.start));
    }
    PossibilityDistribution::from_computed(values)
}

/// Dispatches to the matching transformation; the generalized family uses
/// the fast path.
pub fn apply_transform(
    p: &ProbabilityDistribution,
    spec: &TransformSpec,
) -> Result<PossibilityDistribution> {
    match spec {
        TransformSpec::Symmetric => Ok(transform_symmetric(p)),
        TransformSpec::Optimal => Ok(transform_optimal(p)),
        TransformSpec::WeakOrder(Some(order)) => transform_weak_order(p, order),
        TransformSpec::WeakOrder(None) => transform_weak_order(p, &canonical_order(p)),
        TransformSpec::Generalized(n) => Ok(transform_generalized_fast(p, *n)),
    }
}

fn scaled_exp(exponent: f64) -> f64 {
    if exponent < EXP_UNDERFLOW {
        0.0
    } else {
        exponent.exp()
    }
}

/// Masses in decreasing order with suffix sums over that order.
struct SortedMasses<'a> {
    masses: &'a [f64],
    order: Vec<usize>,
    /// `suffix[k]` is the total mass at sorted positions `k..`.
    suffix: Vec<f64>,
}

struct Group {
    value: f64,
    start: usize,
    end: usize,
}

impl<'a> SortedMasses<'a> {
    fn new(masses: &'a [f64]) -> Self {
        let order = descending_order(masses);
        let mut suffix = vec![0.0; masses.len() + 1];
        for k in (0..masses.len()).rev() {
            suffix[k] = suffix[k + 1] + masses[order[k]];
        }
        Self {
            masses,
            order,
            suffix,
        }
    }

    /// Runs of equal mass, in decreasing order of value.
    fn groups(&self) -> impl Iterator<Item = Group> + '_ {
        let mut start = 0;
        std::iter::from_fn(move || {
            if start >= self.order.len() {
                return None;
            }
            let value = self.masses[self.order[start]];
            let end = start
                + self.order[start..]
                    .iter()
                    .take_while(|&&i| self.masses[i] == value)
                    .count();
            let group = Group { value, start, end };
            start = end;
            Some(group)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::OutcomeSubset;
    use proptest::prelude::*;

    fn p(masses: &[f64]) -> ProbabilityDistribution {
        ProbabilityDistribution::new(masses.to_vec()).unwrap()
    }

    fn assert_close(actual: &PossibilityDistribution, expected: &[f64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        for (a, e) in actual.values().iter().zip(expected) {
            assert!((a - e).abs() <= tol, "{:?} vs {:?}", actual.values(), expected);
        }
    }

    // Direct reading of the optimal transformation, kept independent of the
    // sorted implementation.
    fn optimal_oracle(p: &ProbabilityDistribution) -> Vec<f64> {
        let m = p.masses();
        m.iter()
            .map(|&pi| m.iter().filter(|&&pj| pj <= pi).sum())
            .collect()
    }

    #[test]
    fn symmetric_examples() {
        assert_close(&transform_symmetric(&p(&[0.501, 0.499])), &[1.0, 0.998], 1e-12);
        assert_close(&transform_symmetric(&p(&[0.25; 4])), &[1.0; 4], 1e-12);
        assert_close(&transform_symmetric(&p(&[0.6, 0.3, 0.1])), &[1.0, 0.7, 0.3], 1e-12);
    }

    #[test]
    fn optimal_examples() {
        assert_close(&transform_optimal(&p(&[0.501, 0.499])), &[1.0, 0.499], 1e-12);
        assert_close(&transform_optimal(&p(&[0.5, 0.5])), &[1.0, 1.0], 0.0);
        assert_close(&transform_optimal(&p(&[0.6, 0.3, 0.1])), &[1.0, 0.4, 0.1], 1e-12);
        let tied = p(&[0.2, 0.3, 0.2, 0.3]);
        assert_close(&transform_optimal(&tied), &optimal_oracle(&tied), 1e-15);
    }

    #[test]
    fn weak_order_examples() {
        let pi = transform_weak_order(&p(&[0.6, 0.3, 0.1]), &[0, 1, 2]).unwrap();
        assert_close(&pi, &[1.0, 0.4, 0.1], 1e-12);
        let pi = transform_weak_order(&p(&[0.5, 0.5]), &[0, 1]).unwrap();
        assert_close(&pi, &[1.0, 0.5], 0.0);
        let pi = transform_weak_order(&p(&[0.5, 0.5]), &[1, 0]).unwrap();
        assert_close(&pi, &[0.5, 1.0], 0.0);
        let pi = transform_weak_order(&p(&[1.0]), &[0]).unwrap();
        assert_close(&pi, &[1.0], 0.0);
    }

    #[test]
    fn weak_order_rejects_bad_orders() {
        let dist = p(&[0.6, 0.3, 0.1]);
        assert!(transform_weak_order(&dist, &[1, 0, 2]).is_err());
        assert!(transform_weak_order(&dist, &[0, 1]).is_err());
        assert!(transform_weak_order(&dist, &[0, 0, 1]).is_err());
        assert!(transform_weak_order(&dist, &[0, 1, 3]).is_err());
    }

    #[test]
    fn generalized_examples() {
        let dist = p(&[0.6, 0.3, 0.1]);
        let two = Exponent::new(2.0).unwrap();
        assert_close(&transform_generalized(&dist, two), &[1.0, 0.55, 0.15], 1e-12);
        assert_close(&transform_generalized_fast(&dist, two), &[1.0, 0.55, 0.15], 1e-12);
        assert_eq!(
            transform_generalized(&dist, Exponent::new(1.0).unwrap()),
            transform_symmetric(&dist)
        );
        let binary = p(&[0.4, 0.6]);
        let expected = 0.4 + 0.6 * (0.4f64 / 0.6).powi(2);
        assert!((transform_generalized(&binary, two)[0] - expected).abs() < 1e-12);
        assert!((transform_generalized(&binary, two)[0] - 0.666_666_666_67).abs() < 1e-9);
    }

    #[test]
    fn infinite_exponent_is_optimal() {
        let dist = p(&[0.6, 0.3, 0.1]);
        assert_eq!(
            transform_generalized(&dist, Exponent::Infinite),
            transform_optimal(&dist)
        );
        let pi = apply_transform(&dist, &TransformSpec::Generalized(Exponent::Infinite)).unwrap();
        assert_close(&pi, &[1.0, 0.4, 0.1], 1e-12);
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinite);
        assert_eq!("2.5".parse::<Exponent>().unwrap(), Exponent::Finite(2.5));
        assert!("0".parse::<Exponent>().is_err());
        assert!("-1".parse::<Exponent>().is_err());
        assert!("abc".parse::<Exponent>().is_err());
        assert!(Exponent::new(f64::NAN).is_err());
    }

    #[test]
    fn dispatch() {
        let half = p(&[0.5, 0.5]);
        assert_close(&apply_transform(&half, &TransformSpec::Symmetric).unwrap(), &[1.0, 1.0], 0.0);
        let point = p(&[1.0]);
        for spec in [
            TransformSpec::Symmetric,
            TransformSpec::Optimal,
            TransformSpec::WeakOrder(None),
            TransformSpec::generalized(3.0).unwrap(),
        ] {
            assert_close(&apply_transform(&point, &spec).unwrap(), &[1.0], 0.0);
        }
        let weak = apply_transform(&half, &TransformSpec::WeakOrder(None)).unwrap();
        assert_close(&weak, &[1.0, 0.5], 0.0);
    }

    #[test]
    fn zero_masses() {
        let dist = p(&[0.7, 0.0, 0.3, 0.0]);
        for n in [0.5, 1.0, 2.0, 100.0] {
            let n = Exponent::new(n).unwrap();
            let slow = transform_generalized(&dist, n);
            let fast = transform_generalized_fast(&dist, n);
            assert_eq!(slow[1], 0.0);
            assert_eq!(fast[3], 0.0);
            assert!(slow[2] > 0.0);
            assert_close(&fast, slow.values(), 1e-12);
        }
        assert_eq!(transform_optimal(&dist)[1], 0.0);
        assert_eq!(transform_symmetric(&dist)[1], 0.0);
    }

    #[test]
    fn large_exponent_does_not_underflow_to_garbage() {
        let raw: Vec<f64> = (1..=1000).map(|i| 1.0 / i as f64).collect();
        let sum: f64 = raw.iter().sum();
        let dist = p(&raw.iter().map(|m| m / sum).collect::<Vec<_>>());
        let n = Exponent::new(100.0).unwrap();
        let fast = transform_generalized_fast(&dist, n);
        let slow = transform_generalized(&dist, n);
        assert!(fast.values().iter().all(|v| v.is_finite()));
        assert_close(&fast, slow.values(), 1e-12);
    }

    #[test]
    fn binary_tie_jump() {
        let delta = 1e-6;
        let dist = p(&[0.5 + delta, 0.5 - delta]);
        assert!((transform_symmetric(&dist)[1] - (1.0 - 2.0 * delta)).abs() < 1e-12);
        assert!((transform_optimal(&dist)[1] - (0.5 - delta)).abs() < 1e-12);
        for n in [1.0, 2.0, 10.0] {
            let pi = transform_generalized(&dist, Exponent::new(n).unwrap());
            assert!(1.0 - pi[1] <= 3.0 * n * delta);
        }
    }

    fn probability(max_len: usize) -> impl Strategy<Value = ProbabilityDistribution> {
        prop::collection::vec(prop_oneof![Just(0.0), Just(0.25), 0.0f64..1.0], 1..max_len)
            .prop_filter_map("zero total", |raw| {
                let sum: f64 = raw.iter().sum();
                (sum > 0.0)
                    .then(|| ProbabilityDistribution::new(raw.iter().map(|m| m / sum).collect()).ok())
                    .flatten()
            })
    }

    fn finite_exponent() -> impl Strategy<Value = Exponent> {
        prop_oneof![0.1f64..1.0, 1.0f64..20.0, Just(1.0), Just(100.0)]
            .prop_map(|n| Exponent::new(n).unwrap())
    }

    proptest! {
        #[test]
        fn fast_path_matches_double_sum(p in probability(60), n in finite_exponent()) {
            let slow = transform_generalized(&p, n);
            let fast = transform_generalized_fast(&p, n);
            for (a, b) in slow.values().iter().zip(fast.values()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn optimal_matches_oracle(p in probability(60)) {
            let pi = transform_optimal(&p);
            for (a, b) in pi.values().iter().zip(optimal_oracle(&p)) {
                prop_assert!((a - b.min(1.0)).abs() <= 1e-15);
            }
        }

        #[test]
        fn consistence(p in probability(9), n in finite_exponent()) {
            let specs = [
                TransformSpec::Symmetric,
                TransformSpec::Optimal,
                TransformSpec::WeakOrder(None),
                TransformSpec::Generalized(n),
            ];
            for spec in &specs {
                let pi = apply_transform(&p, spec).unwrap();
                for mask in 1u64..(1 << p.len()) {
                    let a = OutcomeSubset::from_mask(mask, p.len());
                    prop_assert!(pi.measure(&a).unwrap() + 1e-12 >= p.measure(&a).unwrap());
                }
            }
        }

        #[test]
        fn order_preservation(p in probability(30), n in finite_exponent()) {
            for pi in [transform_symmetric(&p), transform_optimal(&p), transform_generalized_fast(&p, n)] {
                for i in 0..p.len() {
                    for j in 0..p.len() {
                        prop_assert_eq!(p[i] > p[j], pi[i] > pi[j]);
                        if p[i] == p[j] {
                            prop_assert_eq!(pi[i], pi[j]);
                        }
                    }
                }
            }
        }

        #[test]
        fn dominance_and_monotonicity(p in probability(30), n1 in 1.0f64..50.0, dn in 0.0f64..50.0) {
            let lo = transform_generalized_fast(&p, Exponent::new(n1 + dn).unwrap());
            let hi = transform_generalized_fast(&p, Exponent::new(n1).unwrap());
            let opt = transform_optimal(&p);
            let sym = transform_symmetric(&p);
            for i in 0..p.len() {
                prop_assert!(opt[i] <= lo[i] + 1e-12);
                prop_assert!(lo[i] <= hi[i] + 1e-12);
                prop_assert!(hi[i] <= sym[i] + 1e-12);
            }
        }

        #[test]
        fn maximum_maps_to_one(p in probability(30), n in finite_exponent()) {
            let top = p.descending_order()[0];
            for pi in [transform_symmetric(&p), transform_optimal(&p), transform_generalized_fast(&p, n)] {
                prop_assert!((pi[top] - 1.0).abs() <= 1e-12);
            }
        }
    }
}
