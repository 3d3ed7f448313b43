//! Finite nonnegative measures on the technology space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One atom: a technology point, its capacity mass, and an optional
/// smoothing radius. Radius 0 means a pure point mass; radius r > 0 stands
/// for the uniform density on the open disk of radius r around the point,
/// which must lie inside the positive orthant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: Vec<f64>,
    pub mass: f64,
    #[serde(default)]
    pub smoothing_radius: f64,
}

/// A finite list of atoms with nonnegative masses.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
}

impl DiscreteMeasure {
    pub fn empty() -> DiscreteMeasure {
        DiscreteMeasure { atoms: Vec::new() }
    }

    pub fn push(&mut self, x: Vec<f64>, mass: f64, smoothing_radius: f64) -> Result<()> {
        if !mass.is_finite() || mass < 0.0 {
            return Err(Error::Validation(format!(
                "atom mass {mass} must be finite and nonnegative"
            )));
        }
        if !smoothing_radius.is_finite() || smoothing_radius < 0.0 {
            return Err(Error::Validation(format!(
                "smoothing radius {smoothing_radius} must be finite and nonnegative"
            )));
        }
        for (i, &xi) in x.iter().enumerate() {
            if !xi.is_finite() || xi <= 0.0 {
                return Err(Error::Validation(format!(
                    "atom coordinate x[{i}] = {xi} must be finite and positive"
                )));
            }
            if smoothing_radius > 0.0 && xi <= smoothing_radius {
                return Err(Error::Validation(format!(
                    "smoothing disk of radius {smoothing_radius} leaves the positive \
                     orthant at coordinate {i} (x = {xi})"
                )));
            }
        }
        self.atoms.push(Atom {
            x,
            mass,
            smoothing_radius,
        });
        Ok(())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// Re-run the construction invariants, e.g. after deserializing.
    pub fn validate(&self) -> Result<()> {
        let mut checked = DiscreteMeasure::empty();
        for a in &self.atoms {
            checked.push(a.x.clone(), a.mass, a.smoothing_radius)?;
        }
        Ok(())
    }
}
