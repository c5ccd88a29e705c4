//! Possibility to probability converses.
//!
//! The symmetric and optimal transformations have closed-form inverses. The
//! generalized transformation does not: recovering `p` from `π` means solving,
//! for masses sorted in decreasing order,
//!
//! ```text
//! π_i = Σ_{j<i} p_j · (p_i / p_j)^n + Σ_{j≥i} p_j,    p_1 ≥ p_2 ≥ … ≥ p_M > 0
//! ```
//!
//! which [`converse_generalized`] does with a damped Newton iteration on the
//! logarithms of the masses. A solution is not guaranteed to exist for every
//! `π`, so the solver returns a [`SolveReport`] rather than failing.
//!
//! All converses accept possibility values in any order: they sort, invert
//! and map the result back to the original positions. Outcomes with
//! possibility 0 receive probability 0.

use nalgebra::{DMatrix, DVector};

use crate::dist::{PossibilityDistribution, ProbabilityDistribution};
use crate::error::{Error, Result};
use crate::transforms::{transform_generalized_fast, Exponent};

/// Below this exponent `exp` underflows to zero in f64.
const EXP_UNDERFLOW: f64 = -745.0;

/// Extra Newton steps attempted after the tolerance is met.
const POLISH_STEPS: usize = 3;

/// Sufficient-decrease constant of the backtracking line search.
const ARMIJO: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Convergence threshold on the ∞-norm of the residuals.
    pub residual_tolerance: f64,
    /// Newton iteration budget, shared across seeds.
    pub max_iterations: usize,
    /// Smallest step fraction tried by the line search.
    pub damping_floor: f64,
    /// Adjacent log-masses closer than this are merged into a tie.
    pub ordering_tolerance: f64,
    /// Exponents below this start from the symmetric converse, the rest
    /// from the optimal converse.
    pub seed_switch: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            residual_tolerance: 1e-10,
            max_iterations: 200,
            damping_floor: 1e-4,
            ordering_tolerance: 1e-12,
            seed_switch: 3.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("residual_tolerance", self.residual_tolerance),
            ("damping_floor", self.damping_floor),
            ("ordering_tolerance", self.ordering_tolerance),
            ("seed_switch", self.seed_switch),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {value}")));
            }
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if self.damping_floor > 1.0 {
            return Err(Error::InvalidConfig("damping_floor must not exceed 1".into()));
        }
        Ok(())
    }
}

/// Outcome of [`converse_generalized`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// The solution if converged, otherwise the best iterate found
    /// (renormalized to unit mass).
    pub solution: ProbabilityDistribution,
    pub iterations: usize,
    /// ∞-norm of `transform(solution) − π`, recomputed from the solution.
    pub final_residual: f64,
    pub converged: bool,
}

/// Sorted view of a normalized possibility distribution.
struct Sorted {
    order: Vec<usize>,
    values: Vec<f64>,
}

impl Sorted {
    fn new(pi: &PossibilityDistribution) -> Result<Self> {
        pi.ensure_normalized()?;
        let order = pi.descending_order();
        let values = order.iter().map(|&i| pi[i]).collect();
        Ok(Self { order, values })
    }

    fn unsort(&self, sorted: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; sorted.len()];
        for (&index, &value) in self.order.iter().zip(sorted) {
            out[index] = value;
        }
        out
    }
}

/// Inverse of the symmetric transformation:
/// `p_i = Σ_{j ≥ i} (π_j − π_{j+1}) / j` over decreasingly sorted values
/// with `π_{M+1} = 0`.
pub fn converse_symmetric(pi: &PossibilityDistribution) -> Result<ProbabilityDistribution> {
    let sorted = Sorted::new(pi)?;
    ProbabilityDistribution::new(sorted.unsort(&symmetric_sorted(&sorted.values)))
}

fn symmetric_sorted(values: &[f64]) -> Vec<f64> {
    let mut masses = vec![0.0; values.len()];
    let mut acc = 0.0;
    for j in (0..values.len()).rev() {
        let next = values.get(j + 1).copied().unwrap_or(0.0);
        acc += (values[j] - next) / (j + 1) as f64;
        masses[j] = acc;
    }
    masses
}

/// Inverse of the optimal transformation, allowing repeated values: each
/// outcome gets its possibility minus the next strictly smaller value (0 if
/// none), divided by the number of outcomes sharing its possibility.
///
/// Values are compared exactly. With all values distinct this is the plain
/// successive-difference formula, which also inverts the weak-order variant.
pub fn converse_optimal(pi: &PossibilityDistribution) -> Result<ProbabilityDistribution> {
    let sorted = Sorted::new(pi)?;
    ProbabilityDistribution::new(sorted.unsort(&optimal_sorted(&sorted.values)))
}

fn optimal_sorted(values: &[f64]) -> Vec<f64> {
    let mut masses = vec![0.0; values.len()];
    let mut start = 0;
    while start < values.len() {
        let value = values[start];
        let end = start + values[start..].iter().take_while(|&&v| v == value).count();
        let next = values.get(end).copied().unwrap_or(0.0);
        let mass = (value - next) / (end - start) as f64;
        masses[start..end].fill(mass);
        start = end;
    }
    masses
}

/// Inverse of the generalized transformation with exponent `n`.
///
/// Non-convergence is reported through [`SolveReport::converged`]; errors
/// are reserved for invalid input (unnormalized `π`, infinite or invalid `n`,
/// bad configuration).
pub fn converse_generalized(
    pi: &PossibilityDistribution,
    n: Exponent,
    config: &SolverConfig,
) -> Result<SolveReport> {
    let n = match n {
        Exponent::Infinite => return Err(Error::InfiniteExponent),
        Exponent::Finite(n) if n > 0.0 && n.is_finite() => n,
        Exponent::Finite(n) => return Err(Error::InvalidExponent(n)),
    };
    config.validate()?;
    let sorted = Sorted::new(pi)?;
    let positive = sorted.values.iter().take_while(|&&v| v > 0.0).count();
    let target = &sorted.values[..positive];

    let symmetric_seed = symmetric_sorted(&sorted.values);
    let optimal_seed = optimal_sorted(&sorted.values);
    let seeds = if n < config.seed_switch {
        [symmetric_seed, optimal_seed]
    } else {
        [optimal_seed, symmetric_seed]
    };

    let system = System { target, n };
    let mut budget = config.max_iterations;
    let mut iterations = 0;
    let mut best: Option<Attempt> = None;
    for seed in seeds {
        let start: Vec<f64> = seed[..positive].iter().map(|p| p.ln()).collect();
        let attempt = system.solve(start, budget, config);
        iterations += attempt.iterations;
        budget -= attempt.iterations;
        let done = attempt.residual <= config.residual_tolerance;
        if best.as_ref().is_none_or(|b| attempt.residual < b.residual) {
            best = Some(attempt);
        }
        if done || budget == 0 {
            break;
        }
    }
    let best = best.expect("at least one seed is tried");

    let mut masses: Vec<f64> = best.log_masses.iter().map(|x| x.exp()).collect();
    masses.resize(sorted.values.len(), 0.0);
    let total: f64 = masses.iter().sum();
    let newton_converged = best.residual <= config.residual_tolerance;
    if !newton_converged || (total - 1.0).abs() > crate::dist::SUM_TOLERANCE {
        masses.iter_mut().for_each(|m| *m /= total);
    }
    let solution = ProbabilityDistribution::new(sorted.unsort(&masses))?;

    // Re-check against the forward map so a report never claims more than
    // the solution delivers.
    let forward = transform_generalized_fast(&solution, Exponent::Finite(n));
    let final_residual = forward
        .values()
        .iter()
        .zip(pi.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(SolveReport {
        solution,
        iterations,
        final_residual,
        converged: newton_converged && final_residual <= config.residual_tolerance,
    })
}

struct Attempt {
    log_masses: Vec<f64>,
    residual: f64,
    iterations: usize,
}

/// The sorted-form equations restricted to the outcomes with positive
/// possibility, in the unknowns `x_i = ln p_i`.
struct System<'a> {
    target: &'a [f64],
    n: f64,
}

impl System<'_> {
    /// `p_j · (p_i / p_j)^n` for `j < i`.
    fn lower_term(&self, x: &[f64], i: usize, j: usize) -> f64 {
        let exponent = self.n * (x[i] - x[j]);
        if exponent < EXP_UNDERFLOW {
            0.0
        } else {
            (x[j] + exponent).exp()
        }
    }

    fn residual(&self, x: &[f64]) -> DVector<f64> {
        let m = x.len();
        let masses: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let mut tail = 0.0;
        let mut residual = DVector::zeros(m);
        for i in (0..m).rev() {
            tail += masses[i];
            let head: f64 = (0..i).map(|j| self.lower_term(x, i, j)).sum();
            residual[i] = head + tail - self.target[i];
        }
        residual
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let m = x.len();
        let masses: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        DMatrix::from_fn(m, m, |i, k| match k.cmp(&i) {
            std::cmp::Ordering::Less => (1.0 - self.n) * self.lower_term(x, i, k),
            std::cmp::Ordering::Equal => {
                self.n * (0..i).map(|j| self.lower_term(x, i, j)).sum::<f64>() + masses[i]
            }
            std::cmp::Ordering::Greater => masses[k],
        })
    }

    fn solve(&self, start: Vec<f64>, budget: usize, config: &SolverConfig) -> Attempt {
        let mut x = start;
        project(&mut x, config.ordering_tolerance);
        let mut r = self.residual(&x);
        let mut iterations = 0;
        let mut polish = 0;
        while iterations < budget {
            let converged = r.amax() <= config.residual_tolerance;
            if converged {
                if polish == POLISH_STEPS {
                    break;
                }
                polish += 1;
            }
            let Some(step) = newton_step(&self.jacobian(&x), &r) else {
                break;
            };
            iterations += 1;
            let merit = r.norm_squared();
            let mut lambda = 1.0;
            let mut accepted = None;
            while lambda >= config.damping_floor {
                let mut candidate: Vec<f64> =
                    x.iter().zip(step.iter()).map(|(a, d)| a + lambda * d).collect();
                project(&mut candidate, config.ordering_tolerance);
                let cr = self.residual(&candidate);
                if cr.norm_squared() <= (1.0 - ARMIJO * lambda) * merit
                    || (converged && cr.amax() < r.amax())
                {
                    accepted = Some((candidate, cr));
                    break;
                }
                lambda *= 0.5;
            }
            match accepted {
                Some((candidate, cr)) => {
                    x = candidate;
                    r = cr;
                }
                // Stagnated: either polishing is done or this seed failed.
                None => break,
            }
        }
        Attempt {
            residual: r.amax(),
            log_masses: x,
            iterations,
        }
    }
}

fn newton_step(jacobian: &DMatrix<f64>, residual: &DVector<f64>) -> Option<DVector<f64>> {
    let rhs = -residual;
    let step = jacobian
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|v| v.is_finite()))
        .or_else(|| {
            jacobian
                .clone()
                .svd(true, true)
                .solve(&rhs, 1e-14)
                .ok()
                .filter(|s| s.iter().all(|v| v.is_finite()))
        })?;
    Some(step)
}

/// Euclidean projection onto non-increasing sequences (pool adjacent
/// violators), then merging of runs whose spread is within `tolerance`.
fn project(x: &mut [f64], tolerance: f64) {
    // Blocks of (sum, count), each representing a constant run.
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(x.len());
    for &value in x.iter() {
        blocks.push((value, 1));
        while blocks.len() > 1 {
            let (s1, c1) = blocks[blocks.len() - 1];
            let (s0, c0) = blocks[blocks.len() - 2];
            if s0 / c0 as f64 >= s1 / c1 as f64 {
                break;
            }
            blocks.pop();
            *blocks.last_mut().unwrap() = (s0 + s1, c0 + c1);
        }
    }
    let mut k = 0;
    for (sum, count) in blocks {
        x[k..k + count].fill(sum / count as f64);
        k += count;
    }

    let mut start = 0;
    while start < x.len() {
        let end = start + 1 + x[start + 1..].iter().take_while(|&&v| x[start] - v <= tolerance).count();
        if end - start > 1 {
            let mean = x[start..end].iter().sum::<f64>() / (end - start) as f64;
            x[start..end].fill(mean);
        }
        start = end;
    }
}
