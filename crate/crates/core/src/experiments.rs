//! Seeded Monte Carlo specificity experiments and plot-ready figure data.
//!
//! Each trial draws `samples_per_distribution` outcomes from a base
//! distribution (uniform or Zipf), turns the counts into an empirical
//! distribution and measures the specificity of its generalized
//! transformation for every requested exponent.
//!
//! Trial `t` uses the ChaCha8 stream `t` of the generator keyed by the
//! experiment seed, so trials are independent and the report does not depend
//! on how trials are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::ProbabilityDistribution;
use crate::error::{Error, Result};
use crate::specificity::subsethood;
use crate::transforms::{
    apply_transform, transform_generalized_fast, transform_optimal, Exponent, TransformSpec,
};

/// Exponents of the reference specificity table.
pub const REFERENCE_EXPONENTS: [f64; 6] = [1.0, 2.0, 3.0, 5.0, 10.0, 100.0];

/// Reference (mean, SD) specificity for uniform sampling, M = 1000,
/// 250 000 samples, 100 trials, at [`REFERENCE_EXPONENTS`].
pub const REFERENCE_UNIFORM: [(f64, f64); 6] = [
    (0.5098, 0.0002),
    (0.5272, 0.0002),
    (0.5439, 0.0005),
    (0.5751, 0.0011),
    (0.6416, 0.0021),
    (0.9318, 0.0014),
];

/// Reference (mean, SD) specificity for Zipf sampling (exponent unstated).
pub const REFERENCE_ZIPF: [(f64, f64); 6] = [
    (0.5050, 0.0001),
    (0.6744, 0.0005),
    (0.7596, 0.0007),
    (0.8443, 0.0007),
    (0.9201, 0.0005),
    (0.9956, 0.0001),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampler {
    Uniform,
    /// Mass proportional to `i^(−alpha)` for outcome rank `i = 1..M`.
    Zipf { alpha: f64 },
}

impl Sampler {
    pub fn name(&self) -> &'static str {
        match self {
            Sampler::Uniform => "uniform",
            Sampler::Zipf { .. } => "zipf",
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            Sampler::Uniform => None,
            Sampler::Zipf { alpha } => Some(*alpha),
        }
    }

    pub fn base_distribution(&self, outcomes: usize) -> Result<ProbabilityDistribution> {
        match *self {
            Sampler::Uniform => ProbabilityDistribution::uniform(outcomes),
            Sampler::Zipf { alpha } => zipf_weights(outcomes, alpha),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub sampler: Sampler,
    pub outcomes: usize,
    pub samples_per_distribution: usize,
    pub trials: usize,
    pub exponents: Vec<f64>,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Full-scale defaults: 1000 outcomes, 250 000 samples, 100 trials and
    /// the reference exponents.
    pub fn new(sampler: Sampler, seed: u64) -> Self {
        Self {
            sampler,
            outcomes: 1000,
            samples_per_distribution: 250_000,
            trials: 100,
            exponents: REFERENCE_EXPONENTS.to_vec(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.outcomes < 2 {
            return Err(Error::InvalidConfig("at least 2 outcomes are required".into()));
        }
        if self.samples_per_distribution == 0 {
            return Err(Error::InvalidConfig("samples per distribution must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("at least one trial is required".into()));
        }
        if self.exponents.is_empty() {
            return Err(Error::InvalidConfig("no exponents given".into()));
        }
        if let Some(&n) = self.exponents.iter().find(|&&n| !(n > 0.0)) {
            return Err(Error::InvalidExponent(n));
        }
        if let Sampler::Zipf { alpha } = self.sampler {
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(Error::InvalidConfig(format!("zipf alpha must be positive, got {alpha}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentSummary {
    pub n: f64,
    pub mean: f64,
    /// Sample standard deviation across trials (0 for a single trial).
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub rows: Vec<ExponentSummary>,
}

impl ExperimentReport {
    pub fn means(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.mean).collect()
    }

    pub fn row(&self, n: f64) -> Option<&ExponentSummary> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// Normalized Zipf weights `i^(−alpha) / Σ_k k^(−alpha)` for `i = 1..m`.
pub fn zipf_weights(m: usize, alpha: f64) -> Result<ProbabilityDistribution> {
    if m == 0 {
        return Err(Error::Empty);
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidConfig(format!("zipf alpha must be positive, got {alpha}")));
    }
    let weights: Vec<f64> = (1..=m).map(|i| (-alpha * (i as f64).ln()).exp()).collect();
    let total: f64 = weights.iter().sum();
    ProbabilityDistribution::new(weights.into_iter().map(|w| w / total).collect())
}

/// Draws `samples` outcomes from `base` with `rng` and returns the observed
/// frequencies. Draws use inverse-CDF lookup over the cumulative masses.
pub fn sample_empirical_with<R: Rng>(
    base: &ProbabilityDistribution,
    samples: usize,
    rng: &mut R,
) -> Result<ProbabilityDistribution> {
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    let cumulative: Vec<f64> = base
        .masses()
        .iter()
        .scan(0.0, |acc, m| {
            *acc += m;
            Some(*acc)
        })
        .collect();
    let total = *cumulative.last().expect("distributions are nonempty");
    let mut counts = vec![0u64; base.len()];
    for _ in 0..samples {
        let u = rng.random::<f64>() * total;
        let index = cumulative.partition_point(|&c| c <= u);
        counts[index.min(base.len() - 1)] += 1;
    }
    ProbabilityDistribution::from_counts(&counts)
}

/// [`sample_empirical_with`] on a fresh generator seeded with `seed`.
pub fn sample_empirical(
    base: &ProbabilityDistribution,
    samples: usize,
    seed: u64,
) -> Result<ProbabilityDistribution> {
    sample_empirical_with(base, samples, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Generator for trial `trial` of an experiment keyed by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn run_trial(
    config: &ExperimentConfig,
    base: &ProbabilityDistribution,
    exponents: &[Exponent],
    trial: usize,
) -> Result<Vec<f64>> {
    let mut rng = trial_rng(config.seed, trial as u64);
    let p = sample_empirical_with(base, config.samples_per_distribution, &mut rng)?;
    let optimal = transform_optimal(&p);
    exponents
        .iter()
        .map(|&n| subsethood(&transform_generalized_fast(&p, n), &optimal))
        .collect()
}

/// Runs the specificity experiment and summarizes it per exponent.
pub fn run_specificity_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let base = config.sampler.base_distribution(config.outcomes)?;
    let exponents = config
        .exponents
        .iter()
        .map(|&n| Exponent::new(n))
        .collect::<Result<Vec<_>>>()?;

    #[cfg(feature = "parallel")]
    let per_trial: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(config, &base, &exponents, t))
            .collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let per_trial: Vec<Vec<f64>> = (0..config.trials)
        .map(|t| run_trial(config, &base, &exponents, t))
        .collect::<Result<_>>()?;

    let rows = config
        .exponents
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let values: Vec<f64> = per_trial.iter().map(|trial| trial[k]).collect();
            let (mean, sd) = mean_and_sd(&values);
            ExponentSummary { n, mean, sd }
        })
        .collect();
    Ok(ExperimentReport {
        config: config.clone(),
        rows,
    })
}

fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0);
    (mean, var.sqrt())
}

/// One row of a Zipf exponent sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationRow {
    pub alpha: f64,
    pub report: ExperimentReport,
    /// Root-mean-square distance of the means from [`REFERENCE_ZIPF`] over
    /// the reference exponents present in the report.
    pub rms_deviation: f64,
}

/// Runs `template` with a Zipf sampler for each `alpha` and scores the means
/// against the reference Zipf column.
pub fn zipf_calibration(template: &ExperimentConfig, alphas: &[f64]) -> Result<Vec<CalibrationRow>> {
    alphas
        .iter()
        .map(|&alpha| {
            let config = ExperimentConfig {
                sampler: Sampler::Zipf { alpha },
                ..template.clone()
            };
            let report = run_specificity_experiment(&config)?;
            let deviations: Vec<f64> = REFERENCE_EXPONENTS
                .iter()
                .zip(REFERENCE_ZIPF)
                .filter_map(|(&n, (mean, _))| report.row(n).map(|r| (r.mean - mean).powi(2)))
                .collect();
            let rms_deviation = if deviations.is_empty() {
                f64::NAN
            } else {
                (deviations.iter().sum::<f64>() / deviations.len() as f64).sqrt()
            };
            Ok(CalibrationRow {
                alpha,
                report,
                rms_deviation,
            })
        })
        .collect()
}

/// `π(w₁)` against `p(w₁)` for binary distributions `[p, 1 − p]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryCurve {
    pub specs: Vec<TransformSpec>,
    /// `(p, π(w₁) for each spec)`, ascending in `p`.
    pub rows: Vec<(f64, Vec<f64>)>,
}

/// Evaluates each transformation on `[p, 1 − p]` for `p = k / (grid_points + 1)`,
/// `k = 1..=grid_points`.
pub fn emit_binary_curve(specs: &[TransformSpec], grid_points: usize) -> Result<BinaryCurve> {
    if grid_points < 2 {
        return Err(Error::InvalidConfig("a curve needs at least 2 grid points".into()));
    }
    let denominator = (grid_points + 1) as f64;
    let rows = (1..=grid_points)
        .map(|k| {
            let p = k as f64 / denominator;
            let dist = ProbabilityDistribution::new(vec![p, 1.0 - p])?;
            let values = specs
                .iter()
                .map(|spec| apply_transform(&dist, spec).map(|pi| pi[0]))
                .collect::<Result<_>>()?;
            Ok((p, values))
        })
        .collect::<Result<_>>()?;
    Ok(BinaryCurve {
        specs: specs.to_vec(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TernaryRow {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    /// `π_G(w₃)` for each requested exponent.
    pub values: Vec<f64>,
}

/// `π_G(w₃)` over the grid `p₁ = i·step`, `p₂ = j·step` restricted to the
/// simplex `p₁ + p₂ ≤ 1`, with `p₃ = 1 − p₁ − p₂`.
pub fn emit_ternary_map(exponents: &[Exponent], grid_step: f64) -> Result<Vec<TernaryRow>> {
    if !(grid_step > 0.0 && grid_step < 1.0) {
        return Err(Error::InvalidConfig(format!("grid step must lie in (0, 1), got {grid_step}")));
    }
    let steps = (1.0 / grid_step + 1e-9).floor() as usize;
    let mut rows = Vec::new();
    for i in 0..=steps {
        for j in 0..=steps {
            let p1 = (i as f64 * grid_step).min(1.0);
            let p2 = (j as f64 * grid_step).min(1.0);
            if p1 + p2 > 1.0 + 1e-12 {
                break;
            }
            let p3 = (1.0 - p1 - p2).max(0.0);
            let dist = ProbabilityDistribution::new(vec![p1, p2, p3])?;
            let values = exponents
                .iter()
                .map(|&n| transform_generalized_fast(&dist, n)[2])
                .collect();
            rows.push(TernaryRow { p1, p2, p3, values });
        }
    }
    Ok(rows)
}
