//! Spectra: 0/1 vectors tagging the cells of a line-family partition.
//!
//! Bit t is 1 exactly when the cell lies strictly below line t, i.e. on the
//! profitable side of observation t's level set.

use serde::{Deserialize, Serialize};

/// A 0/1 vector of length T. Ordered lexicographically bit-by-bit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Spectrum {
    bits: Vec<bool>,
}

impl Spectrum {
    pub fn zeros(t: usize) -> Spectrum {
        Spectrum {
            bits: vec![false; t],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Spectrum {
        Spectrum { bits }
    }

    /// Spectrum whose 1-bits are exactly `ones` (0-based line indices).
    pub fn from_ones(t: usize, ones: &[usize]) -> Spectrum {
        let mut bits = vec![false; t];
        for &i in ones {
            bits[i] = true;
        }
        Spectrum { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, t: usize) -> bool {
        self.bits[t]
    }

    pub fn set(&mut self, t: usize, v: bool) {
        self.bits[t] = v;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.bits
            .iter()
            .map(|&b| if b { 1.0 } else { 0.0 })
            .collect()
    }

    pub fn to_i64_vec(&self) -> Vec<i64> {
        self.bits.iter().map(|&b| i64::from(b)).collect()
    }

    /// Compact text form like "0110".
    pub fn bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl std::fmt::Debug for Spectrum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Spectrum({})", self.bitstring())
    }
}
