//! Gibbs states `exp(-H/T)/Z` with `k = 1`, and thermal pair concurrence.

use crate::entanglement::{pair_concurrence, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, Spectrum};
use crate::model::{build_hamiltonian, degeneracy, ChainSpec};

/// Temperature in energy units.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Temperature(f64);

impl Temperature {
    pub const ZERO: Temperature = Temperature(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Argument(format!(
                "temperature must be finite and >= 0, got {value}"
            )));
        }
        Ok(Temperature(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Boltzmann weights over an ascending spectrum. At `t = 0` the ground level
/// (degeneracy window included) is weighted uniformly.
pub fn boltzmann_weights(eigenvalues: &[f64], t: Temperature) -> Vec<f64> {
    let e0 = eigenvalues[0];
    let mut w: Vec<f64> = if t.0 == 0.0 {
        let g = degeneracy(eigenvalues);
        (0..eigenvalues.len()).map(|k| if k < g { 1.0 } else { 0.0 }).collect()
    } else {
        eigenvalues.iter().map(|&e| (-(e - e0) / t.0).exp()).collect()
    };
    let z: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= z;
    }
    w
}

pub fn gibbs_from_spectrum(spectrum: &Spectrum, t: Temperature) -> DensityMatrix {
    let w = boltzmann_weights(spectrum.eigenvalues(), t);
    DensityMatrix::from_trusted(spectrum.weighted_sum(&w))
}

pub fn gibbs_state(h: &ComplexMatrix, t: Temperature) -> Result<DensityMatrix> {
    Ok(gibbs_from_spectrum(&hermitian_eig(h)?, t))
}

/// Diagonalizes a chain once and evaluates thermal quantities at many temperatures.
#[derive(Clone, Debug)]
pub struct ThermalSolver {
    spectrum: Spectrum,
}

impl ThermalSolver {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        Ok(ThermalSolver {
            spectrum: hermitian_eig(&build_hamiltonian(spec)?)?,
        })
    }

    pub fn from_spectrum(spectrum: Spectrum) -> Self {
        ThermalSolver { spectrum }
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn gibbs(&self, t: Temperature) -> DensityMatrix {
        gibbs_from_spectrum(&self.spectrum, t)
    }

    pub fn pair_concurrence(&self, a: usize, b: usize, t: Temperature) -> Result<f64> {
        pair_concurrence(&self.gibbs(t), a, b)
    }

    /// `tr(rho(T) H)`
    pub fn energy(&self, t: Temperature) -> f64 {
        let w = boltzmann_weights(self.spectrum.eigenvalues(), t);
        w.iter().zip(self.spectrum.eigenvalues()).map(|(p, e)| p * e).sum()
    }
}

pub fn thermal_pair_concurrence(spec: &ChainSpec, a: usize, b: usize, t: Temperature) -> Result<f64> {
    ThermalSolver::new(spec)?.pair_concurrence(a, b, t)
}
