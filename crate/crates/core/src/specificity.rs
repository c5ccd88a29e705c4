//! Fuzzy cardinality, Kosko subsethood and the specificity of a transformed
//! possibility distribution relative to the optimal transformation.

use crate::dist::{PossibilityDistribution, ProbabilityDistribution};
use crate::error::{Error, Result};
use crate::transforms::{apply_transform, transform_optimal, TransformSpec};

/// Sigma-count of a fuzzy set.
pub fn fuzzy_cardinality(pi: &PossibilityDistribution) -> f64 {
    pi.values().iter().sum()
}

/// Degree to which `a` is contained in `b`: `Σ min(a_i, b_i) / Σ a_i`.
pub fn subsethood(a: &PossibilityDistribution, b: &PossibilityDistribution) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let cardinality = fuzzy_cardinality(a);
    if cardinality <= 0.0 {
        return Err(Error::ZeroCardinality);
    }
    let intersection: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x.min(*y))
        .sum();
    Ok(intersection / cardinality)
}

/// A specificity degree in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Specificity(f64);

impl Specificity {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Specificity> for f64 {
    fn from(s: Specificity) -> f64 {
        s.0
    }
}

/// Specificity of `spec` applied to `p`: the subsethood of the transformed
/// distribution in the optimal transformation of the same `p`.
pub fn specificity_of_transform(
    p: &ProbabilityDistribution,
    spec: &TransformSpec,
) -> Result<Specificity> {
    let transformed = apply_transform(p, spec)?;
    let optimal = transform_optimal(p);
    subsethood(&transformed, &optimal).map(Specificity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::Exponent;
    use proptest::prelude::*;

    fn pi(values: &[f64]) -> PossibilityDistribution {
        PossibilityDistribution::new(values.to_vec()).unwrap()
    }

    fn p(masses: &[f64]) -> ProbabilityDistribution {
        ProbabilityDistribution::new(masses.to_vec()).unwrap()
    }

    #[test]
    fn cardinality() {
        assert!((fuzzy_cardinality(&pi(&[1.0, 0.7, 0.3])) - 2.0).abs() < 1e-15);
        assert_eq!(fuzzy_cardinality(&pi(&[0.0, 0.0, 0.0])), 0.0);
        assert_eq!(fuzzy_cardinality(&pi(&[1.0])), 1.0);
    }

    #[test]
    fn subsethood_examples() {
        let s = subsethood(&pi(&[1.0, 0.7, 0.3]), &pi(&[1.0, 0.4, 0.1])).unwrap();
        assert!((s - 0.75).abs() < 1e-15);
        let a = pi(&[0.2, 0.9, 0.4]);
        assert_eq!(subsethood(&a, &a).unwrap(), 1.0);
        assert_eq!(subsethood(&pi(&[1.0, 1.0]), &pi(&[0.0, 0.0])).unwrap(), 0.0);
    }

    #[test]
    fn subsethood_errors() {
        assert_eq!(
            subsethood(&pi(&[1.0, 0.5]), &pi(&[1.0])),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        );
        assert_eq!(
            subsethood(&pi(&[0.0, 0.0]), &pi(&[1.0, 0.0])),
            Err(Error::ZeroCardinality)
        );
    }

    #[test]
    fn specificity_examples() {
        let dist = p(&[0.6, 0.3, 0.1]);
        let s = specificity_of_transform(&dist, &TransformSpec::Symmetric).unwrap();
        assert!((s.value() - 0.75).abs() < 1e-12);
        let s = specificity_of_transform(&dist, &TransformSpec::Optimal).unwrap();
        assert_eq!(s.value(), 1.0);
        let s = specificity_of_transform(&dist, &TransformSpec::generalized(2.0).unwrap()).unwrap();
        assert!((s.value() - 1.5 / 1.7).abs() < 1e-12);
        assert!((s.value() - 0.88235).abs() < 1e-5);
    }

    fn probability() -> impl Strategy<Value = ProbabilityDistribution> {
        prop::collection::vec(0.0f64..1.0, 1..40).prop_filter_map("zero total", |raw| {
            let sum: f64 = raw.iter().sum();
            (sum > 0.0)
                .then(|| ProbabilityDistribution::new(raw.iter().map(|m| m / sum).collect()).ok())
                .flatten()
        })
    }

    proptest! {
        #[test]
        fn specificity_is_monotone_in_n(p in probability()) {
            let mut last = specificity_of_transform(&p, &TransformSpec::Symmetric).unwrap().value();
            prop_assert!(last > 0.0 && last <= 1.0);
            for n in [1.0, 2.0, 3.0, 5.0, 10.0, 100.0] {
                let s = specificity_of_transform(&p, &TransformSpec::Generalized(Exponent::new(n).unwrap()))
                    .unwrap()
                    .value();
                prop_assert!(s > 0.0 && s <= 1.0);
                prop_assert!(s + 1e-12 >= last);
                last = s;
            }
            let optimal = specificity_of_transform(&p, &TransformSpec::Optimal).unwrap().value();
            prop_assert!(last <= optimal + 1e-12);
            prop_assert!((optimal - 1.0).abs() < 1e-15);
        }

        #[test]
        fn full_subsethood_iff_componentwise_below(
            a in prop::collection::vec(0.01f64..=1.0, 1..20),
            shift in prop::collection::vec(-0.5f64..0.5, 20),
        ) {
            let b: Vec<f64> = a.iter().zip(&shift).map(|(x, s)| (x + s).clamp(0.0, 1.0)).collect();
            let below = a.iter().zip(&b).all(|(x, y)| x <= y);
            let s = subsethood(&pi(&a), &pi(&b)).unwrap();
            prop_assert_eq!(s == 1.0, below);
        }
    }
}
