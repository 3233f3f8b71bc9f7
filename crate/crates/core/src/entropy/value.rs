use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A signed information quantity in bits (base-2 logarithm).
///
/// Reporting uses millibits (mbit = bit x 1000); the conversion is exactly a
/// factor of 1000 and the full-precision value is kept internally.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InformationValue {
    bits: f64,
}

impl InformationValue {
    pub const ZERO: InformationValue = InformationValue { bits: 0.0 };

    pub fn from_bits(bits: f64) -> Self {
        InformationValue { bits }
    }

    pub fn from_millibits(millibits: f64) -> Self {
        InformationValue {
            bits: millibits / 1000.0,
        }
    }

    pub fn bits(self) -> f64 {
        self.bits
    }

    pub fn millibits(self) -> f64 {
        self.bits * 1000.0
    }
}

impl fmt::Display for InformationValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2} mbit", self.millibits())
    }
}

impl Add for InformationValue {
    type Output = InformationValue;
    fn add(self, rhs: InformationValue) -> InformationValue {
        InformationValue::from_bits(self.bits + rhs.bits)
    }
}

impl Sub for InformationValue {
    type Output = InformationValue;
    fn sub(self, rhs: InformationValue) -> InformationValue {
        InformationValue::from_bits(self.bits - rhs.bits)
    }
}

impl Neg for InformationValue {
    type Output = InformationValue;
    fn neg(self) -> InformationValue {
        InformationValue::from_bits(-self.bits)
    }
}

impl Mul<f64> for InformationValue {
    type Output = InformationValue;
    fn mul(self, rhs: f64) -> InformationValue {
        InformationValue::from_bits(self.bits * rhs)
    }
}

/// A categorical probability distribution.
///
/// Entries must lie in [0, 1] and sum to 1 within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probabilities: Vec<f64>,
}

impl Distribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidDistribution("no entries".into()));
        }
        for (i, &p) in probabilities.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidDistribution(format!(
                    "entry {i} = {p} outside [0, 1]"
                )));
            }
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(Distribution { probabilities })
    }

    /// Normalize non-negative counts into a distribution.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptyDataset);
        }
        let t = total as f64;
        Distribution::new(counts.iter().map(|&c| c as f64 / t).collect())
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

/// Shannon entropy H = -sum p log2 p, with the convention 0 * log2 0 = 0.
pub fn entropy(d: &Distribution) -> InformationValue {
    let mut h = 0.0;
    for &p in d.probabilities() {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    InformationValue::from_bits(h)
}
