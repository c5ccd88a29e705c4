use possibility::converse::{converse_generalized, SolverConfig};
use possibility::dist::ProbabilityDistribution;
use possibility::experiments::{emit_binary_curve, emit_ternary_map};
use possibility::specificity::specificity_of_transform;
use possibility::transforms::{
    transform_generalized_fast, transform_optimal, transform_symmetric, Exponent, TransformSpec,
};
use possibility::Result;

pub fn binary_curves(exponents: &[f64], grid_points: usize) -> Result<Vec<f64>> {
    let mut specs = vec![TransformSpec::Symmetric, TransformSpec::Optimal];
    for &n in exponents {
        specs.push(TransformSpec::generalized(n)?);
    }
    let curve = emit_binary_curve(&specs, grid_points)?;
    Ok(curve
        .rows
        .into_iter()
        .flat_map(|(p, values)| std::iter::once(p).chain(values))
        .collect())
}

pub fn ternary_map(n: f64, step: f64) -> Result<Vec<f64>> {
    let rows = emit_ternary_map(&[Exponent::new(n)?], step)?;
    Ok(rows
        .into_iter()
        .flat_map(|row| [row.p1, row.p2, row.values[0]])
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub probability: Vec<f64>,
    pub symmetric: Vec<f64>,
    pub optimal: Vec<f64>,
    pub generalized: Vec<f64>,
    pub specificity_symmetric: f64,
    pub specificity_generalized: f64,
    pub recovered: Vec<f64>,
    pub solver_iterations: usize,
    pub solver_converged: bool,
}

pub fn analyze(masses: Vec<f64>, n: f64) -> Result<Analysis> {
    let p = ProbabilityDistribution::renormalized(masses)?;
    let exponent = Exponent::new(n)?;
    let generalized = transform_generalized_fast(&p, exponent);
    let (recovered, solver_iterations, solver_converged) = match exponent {
        Exponent::Finite(_) => {
            let report = converse_generalized(&generalized, exponent, &SolverConfig::default())?;
            (report.solution.into_vec(), report.iterations, report.converged)
        }
        Exponent::Infinite => {
            let back = possibility::converse::converse_optimal(&generalized)?;
            (back.into_vec(), 0, true)
        }
    };
    Ok(Analysis {
        specificity_symmetric: specificity_of_transform(&p, &TransformSpec::Symmetric)?.value(),
        specificity_generalized: specificity_of_transform(&p, &TransformSpec::Generalized(exponent))?
            .value(),
        symmetric: transform_symmetric(&p).into_vec(),
        optimal: transform_optimal(&p).into_vec(),
        generalized: generalized.into_vec(),
        probability: p.into_vec(),
        recovered,
        solver_iterations,
        solver_converged,
    })
}
