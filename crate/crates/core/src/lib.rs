//! Discrete probability ↔ possibility transformations.
//!
//! The crate provides the symmetric, optimal, weak-order and generalized
//! (parametric) probability to possibility transformations, their converses,
//! a fuzzy specificity measure based on Kosko subsethood, and a seeded Monte
//! Carlo harness measuring specificity over sampled distributions.
//!
//! ```
//! use possibility::prelude::*;
//!
//! let p = ProbabilityDistribution::new(vec![0.6, 0.3, 0.1]).unwrap();
//! let pi = transform_generalized_fast(&p, Exponent::new(2.0).unwrap());
//! assert!((pi[1] - 0.55).abs() < 1e-12);
//!
//! let report = converse_generalized(&pi, Exponent::new(2.0).unwrap(), &SolverConfig::default()).unwrap();
//! assert!(report.converged);
//! ```

pub mod converse;
pub mod dist;
pub mod error;
pub mod experiments;
pub mod specificity;
pub mod transforms;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::converse::{
        converse_generalized, converse_optimal, converse_symmetric, SolveReport, SolverConfig,
    };
    pub use crate::dist::{OutcomeSubset, PossibilityDistribution, ProbabilityDistribution};
    pub use crate::error::{Error, Result};
    pub use crate::specificity::{fuzzy_cardinality, specificity_of_transform, subsethood, Specificity};
    pub use crate::transforms::{
        apply_transform, transform_generalized, transform_generalized_fast, transform_optimal,
        transform_symmetric, transform_weak_order, Exponent, TransformSpec,
    };
}
