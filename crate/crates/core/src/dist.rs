//! Probability and possibility distributions over a finite set of anonymous
//! outcomes, and the set measures they induce.
//!
//! Outcomes are identified by their position `0..len`. Both distribution
//! types are immutable once constructed.

use std::collections::BTreeSet;
use std::ops::Index;

use crate::error::{Error, Result};

/// Allowed deviation of the total mass from 1 for strict validation.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Window of totals that [`ProbabilityDistribution::renormalized`] accepts.
pub const RENORMALIZE_WINDOW: (f64, f64) = (0.999, 1.001);

/// Tolerance on `max == 1` for normalized possibility distributions.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// A vector of nonnegative masses summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    masses: Vec<f64>,
}

impl ProbabilityDistribution {
    /// Validates `masses` strictly: every entry finite and in `[0, 1]`, total
    /// within [`SUM_TOLERANCE`] of one. A mass exceeding 1 by no more than
    /// [`SUM_TOLERANCE`] is rounding noise and is clamped to 1.
    pub fn new(mut masses: Vec<f64>) -> Result<Self> {
        for m in masses.iter_mut().filter(|m| **m > 1.0 && **m <= 1.0 + SUM_TOLERANCE) {
            *m = 1.0;
        }
        check_masses(&masses)?;
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::SumOutOfTolerance { sum });
        }
        Ok(Self { masses })
    }

    /// Like [`new`](Self::new), but a total inside [`RENORMALIZE_WINDOW`] is
    /// divided out. Intended for empirical frequencies carrying rounding noise.
    pub fn renormalized(masses: Vec<f64>) -> Result<Self> {
        let sum: f64 = masses.iter().sum();
        if masses.is_empty() {
            return Err(Error::Empty);
        }
        if !(RENORMALIZE_WINDOW.0..=RENORMALIZE_WINDOW.1).contains(&sum) {
            // Let strict validation produce the precise error.
            return Self::new(masses);
        }
        Self::new(masses.into_iter().map(|m| m / sum).collect())
    }

    /// Validates raw input, renormalizing first when `renormalize` is set.
    pub fn validate(raw: Vec<f64>, renormalize: bool) -> Result<Self> {
        if renormalize {
            Self::renormalized(raw)
        } else {
            Self::new(raw)
        }
    }

    /// Empirical frequencies `counts[i] / total`.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if counts.is_empty() {
            return Err(Error::Empty);
        }
        if total == 0 {
            return Err(Error::SumOutOfTolerance { sum: 0.0 });
        }
        let total = total as f64;
        Self::new(counts.iter().map(|&c| c as f64 / total).collect())
    }

    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Empty);
        }
        Ok(Self {
            masses: vec![1.0 / len as f64; len],
        })
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.masses
    }

    /// `P(A)`: total mass of the outcomes in `subset`. The empty set has mass 0.
    pub fn measure(&self, subset: &OutcomeSubset) -> Result<f64> {
        subset.check_len(self.len())?;
        Ok(subset.iter().map(|i| self.masses[i]).sum())
    }

    /// Indices sorted by non-increasing mass; ties keep their original order.
    pub fn descending_order(&self) -> Vec<usize> {
        descending_order(&self.masses)
    }
}

impl Index<usize> for ProbabilityDistribution {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.masses[index]
    }
}

fn check_masses(masses: &[f64]) -> Result<()> {
    if masses.is_empty() {
        return Err(Error::Empty);
    }
    for (index, &value) in masses.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if value < 0.0 {
            return Err(Error::NegativeMass { index, value });
        }
        if value > 1.0 {
            return Err(Error::OutOfUnitRange { index, value });
        }
    }
    Ok(())
}

/// A vector of possibility degrees in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PossibilityDistribution {
    values: Vec<f64>,
}

impl PossibilityDistribution {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfUnitRange { index, value });
            }
        }
        Ok(Self { values })
    }

    /// Builds a distribution whose maximum must be 1 (within
    /// [`NORMALIZATION_TOLERANCE`]).
    pub fn normalized(values: Vec<f64>) -> Result<Self> {
        let dist = Self::new(values)?;
        dist.ensure_normalized()?;
        Ok(dist)
    }

    /// Values computed by a transformation: clamps into `[0, 1]` to absorb
    /// rounding in the accumulated sums.
    pub(crate) fn from_computed(values: Vec<f64>) -> Self {
        Self {
            values: values.into_iter().map(|v| v.clamp(0.0, 1.0)).collect(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_normalized(&self) -> bool {
        (self.max() - 1.0).abs() <= NORMALIZATION_TOLERANCE
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized { max: self.max() })
        }
    }

    /// `Π(A)`: the largest possibility among the outcomes in `subset`.
    pub fn measure(&self, subset: &OutcomeSubset) -> Result<f64> {
        subset.check_len(self.len())?;
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        Ok(subset
            .iter()
            .map(|i| self.values[i])
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Indices sorted by non-increasing value; ties keep their original order.
    pub fn descending_order(&self) -> Vec<usize> {
        descending_order(&self.values)
    }
}

impl Index<usize> for PossibilityDistribution {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.values[index]
    }
}

/// A set of outcome indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OutcomeSubset {
    members: BTreeSet<usize>,
}

impl OutcomeSubset {
    /// Builds a subset of `0..len`, rejecting duplicates and out-of-range indices.
    pub fn new(indices: &[usize], len: usize) -> Result<Self> {
        let mut members = BTreeSet::new();
        for &index in indices {
            if index >= len {
                return Err(Error::IndexOutOfRange { index, len });
            }
            if !members.insert(index) {
                return Err(Error::DuplicateIndex { index });
            }
        }
        Ok(Self { members })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full(len: usize) -> Self {
        Self {
            members: (0..len).collect(),
        }
    }

    /// Decodes a bitmask over `0..len` (bit `i` set means outcome `i` is a member).
    pub fn from_mask(mask: u64, len: usize) -> Self {
        Self {
            members: (0..len.min(64)).filter(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            members: self.members.union(&other.members).copied().collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        match self.members.last() {
            Some(&index) if index >= len => Err(Error::IndexOutOfRange { index, len }),
            _ => Ok(()),
        }
    }
}

/// Stable argsort by non-increasing value.
pub fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order
}
