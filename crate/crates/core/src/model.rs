//! Kondo-necklace chain definitions and Hamiltonians.
//!
//! A chain of `N` sites carries a conduction pseudo-spin `tau_i` (qubit `2i`)
//! and a localized spin `S_i` (qubit `2i + 1`). All spin operators are
//! `sigma / 2`. The Hamiltonian is
//!
//! ```text
//! H = W sum_bonds (tau^x tau^x + tau^y tau^y)      (XY)
//!   | W sum_bonds  tau^x tau^x                     (X)
//!   + J sum_i S_i . tau_i + B sum_i (S_i^z + tau_i^z)
//! ```
//!
//! With periodic boundaries the bond sum runs over `i = 1..N` with
//! `tau_{N+1} = tau_1`, so a two-site ring counts its single bond twice.

use std::fmt;
use std::str::FromStr;

use crate::entanglement::PureState;
use crate::error::{Error, Result};
use crate::linalg::{self, add_pair_term, add_single_term, hermitian_eig, pauli, ComplexMatrix, Spectrum, C64};

/// Relative window used to group eigenvalues with the ground energy.
pub const DEGENERACY_WINDOW: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Anisotropy {
    /// `tau^x tau^x + tau^y tau^y` bonds.
    Xy,
    /// Ising `tau^x tau^x` bonds.
    X,
}

impl fmt::Display for Anisotropy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Anisotropy::Xy => "xy",
            Anisotropy::X => "x",
        })
    }
}

impl FromStr for Anisotropy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xy" => Ok(Anisotropy::Xy),
            "x" => Ok(Anisotropy::X),
            other => Err(Error::Argument(format!(
                "unknown anisotropy '{other}' (expected xy or x)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Periodic,
    Open,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        })
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "periodic" => Ok(Boundary::Periodic),
            "open" => Ok(Boundary::Open),
            other => Err(Error::Argument(format!(
                "unknown boundary '{other}' (expected periodic or open)"
            ))),
        }
    }
}

/// Full description of a chain; couplings are in energy units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainSpec {
    pub n_sites: usize,
    /// Hopping `W >= 0` on the tau chain.
    pub hopping: f64,
    /// Kondo exchange `J`; negative is ferromagnetic.
    pub kondo: f64,
    /// Field `B >= 0` along z.
    pub field: f64,
    pub anisotropy: Anisotropy,
    pub boundary: Boundary,
}

impl ChainSpec {
    /// Two-site periodic ring at zero field.
    pub fn two_site(anisotropy: Anisotropy, kondo: f64, hopping: f64) -> Self {
        ChainSpec {
            n_sites: 2,
            hopping,
            kondo,
            field: 0.0,
            anisotropy,
            boundary: Boundary::Periodic,
        }
    }

    pub fn with_sites(self, n_sites: usize) -> Self {
        ChainSpec { n_sites, ..self }
    }

    pub fn with_field(self, field: f64) -> Self {
        ChainSpec { field, ..self }
    }

    pub fn with_kondo(self, kondo: f64) -> Self {
        ChainSpec { kondo, ..self }
    }

    pub fn with_hopping(self, hopping: f64) -> Self {
        ChainSpec { hopping, ..self }
    }

    pub fn with_boundary(self, boundary: Boundary) -> Self {
        ChainSpec { boundary, ..self }
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_sites
    }

    /// Qubit index of `tau_i` (0-based site).
    pub fn tau(site: usize) -> usize {
        2 * site
    }

    /// Qubit index of `S_i` (0-based site).
    pub fn spin(site: usize) -> usize {
        2 * site + 1
    }

    /// Nearest-neighbour tau bonds as site pairs.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.n_sites;
        if n < 2 {
            return Vec::new();
        }
        match self.boundary {
            Boundary::Periodic => (0..n).map(|i| (i, (i + 1) % n)).collect(),
            Boundary::Open => (0..n - 1).map(|i| (i, i + 1)).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites == 0 {
            return Err(Error::Argument("chain needs at least one site".into()));
        }
        for (name, v) in [("W", self.hopping), ("J", self.kondo), ("B", self.field)] {
            if !v.is_finite() {
                return Err(Error::Argument(format!("{name} must be finite, got {v}")));
            }
        }
        if self.hopping < 0.0 {
            return Err(Error::Argument(format!("hopping W must be >= 0, got {}", self.hopping)));
        }
        if self.field < 0.0 {
            return Err(Error::Argument(format!("field B must be >= 0, got {}", self.field)));
        }
        linalg::check_qubit_count(self.n_qubits())?;
        Ok(())
    }
}

pub fn build_hamiltonian(spec: &ChainSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let n = spec.n_qubits();
    let mut h = ComplexMatrix::zeros(1 << n);
    let (sx, sy, sz) = (pauli::spin_x(), pauli::spin_y(), pauli::spin_z());

    let bond_ops: &[&ComplexMatrix] = match spec.anisotropy {
        Anisotropy::Xy => &[&sx, &sy],
        Anisotropy::X => &[&sx],
    };
    if spec.hopping != 0.0 {
        for (a, b) in spec.bonds() {
            for op in bond_ops {
                add_pair_term(&mut h, spec.hopping, op, ChainSpec::tau(a), op, ChainSpec::tau(b), n);
            }
        }
    }
    for site in 0..spec.n_sites {
        let (t, s) = (ChainSpec::tau(site), ChainSpec::spin(site));
        if spec.kondo != 0.0 {
            for op in [&sx, &sy, &sz] {
                add_pair_term(&mut h, spec.kondo, op, s, op, t, n);
            }
        }
        if spec.field != 0.0 {
            add_single_term(&mut h, spec.field, &sz, s, n);
            add_single_term(&mut h, spec.field, &sz, t, n);
        }
    }
    Ok(h)
}

/// Number of eigenvalues within the degeneracy window of the minimum.
pub fn degeneracy(eigenvalues: &[f64]) -> usize {
    let e0 = eigenvalues[0];
    let window = DEGENERACY_WINDOW * e0.abs().max(1.0);
    eigenvalues.iter().take_while(|&&e| e - e0 <= window).count()
}

#[derive(Clone, Debug)]
pub struct GroundSolution {
    pub energy: f64,
    /// A representative ground state. When the ground level is degenerate this
    /// is the lowest eigenvector of the tie-break probe inside the ground space.
    pub state: PureState,
    pub degeneracy: usize,
    pub spectrum: Spectrum,
}

pub fn ground_state(spec: &ChainSpec) -> Result<GroundSolution> {
    let h = build_hamiltonian(spec)?;
    ground_state_of(&h)
}

/// Ground state of an arbitrary Hermitian operator on a qubit register.
pub fn ground_state_of(h: &ComplexMatrix) -> Result<GroundSolution> {
    ground_from_spectrum(hermitian_eig(h)?)
}

pub fn ground_from_spectrum(spectrum: Spectrum) -> Result<GroundSolution> {
    let energy = spectrum.min_eigenvalue();
    let g = degeneracy(spectrum.eigenvalues());
    let amps = if g == 1 {
        spectrum.eigenvector(0)
    } else {
        tie_break(&spectrum, g)?
    };
    let state = PureState::normalized(amps)?;
    Ok(GroundSolution {
        energy,
        state,
        degeneracy: g,
        spectrum,
    })
}

/// Picks a deterministic vector from a `g`-fold ground space: the lowest
/// eigenvector of `sum_q (q + 1) sigma^x_q` restricted to that space.
fn tie_break(spectrum: &Spectrum, g: usize) -> Result<Vec<C64>> {
    let dim = spectrum.dim();
    let n_qubits = dim.trailing_zeros() as usize;
    let mut probe = ComplexMatrix::zeros(dim);
    let sx = pauli::sigma_x();
    for q in 0..n_qubits {
        add_single_term(&mut probe, (q + 1) as f64, &sx, q, n_qubits);
    }
    let basis: Vec<Vec<C64>> = (0..g).map(|k| spectrum.eigenvector(k)).collect();
    let images: Vec<Vec<C64>> = basis.iter().map(|v| probe.mul_vec(v)).collect();
    let compressed = ComplexMatrix::from_fn(g, |i, j| {
        basis[i].iter().zip(&images[j]).map(|(a, b)| a.conj() * b).sum()
    });
    let coeffs = hermitian_eig(&compressed.hermitian_part())?.eigenvector(0);
    let mut v = vec![C64::new(0.0, 0.0); dim];
    for (c, b) in coeffs.iter().zip(&basis) {
        for (out, x) in v.iter_mut().zip(b) {
            *out += c * x;
        }
    }
    linalg::canonicalize_phase(&mut v);
    Ok(v)
}

/// Closed-form ground energy of the two-site XY ring at zero field.
pub fn closed_lambda_xy(j: f64, w: f64) -> Result<f64> {
    if j == 0.0 && w == 0.0 {
        return Err(Error::Domain("closed-form energy needs (J, W) != (0, 0)".into()));
    }
    let q = (4.0 * j * j + 3.0 * w * w) / 9.0;
    let mut arg = -j * (9.0 * w * w - 16.0 * j * j) / (54.0 * q.powf(1.5));
    if arg.abs() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("arccos argument {arg} outside [-1, 1]")));
    }
    arg = arg.clamp(-1.0, 1.0);
    let theta = arg.acos();
    Ok(-j / 6.0 - 2.0 * q.sqrt() * (theta / 3.0).cos())
}

/// `beta = (2J + sqrt(4J^2 + W^2)) / W` for the two-site X ring.
pub fn closed_beta(j: f64, w: f64) -> Result<f64> {
    if w.is_nan() || w <= 0.0 {
        return Err(Error::Argument(format!("closed-form beta needs W > 0, got {w}")));
    }
    Ok((2.0 * j + (4.0 * j * j + w * w).sqrt()) / w)
}

/// Closed-form `tau_1`-`S_1` concurrence of the two-site X ring, `(beta^2 - 1)/(beta^2 + 1)`.
pub fn closed_c_ac_x(j: f64, w: f64) -> Result<f64> {
    if j < 0.0 {
        return Err(Error::Argument(format!("closed-form C_AC needs J >= 0, got {j}")));
    }
    let b2 = closed_beta(j, w)?.powi(2);
    Ok((b2 - 1.0) / (b2 + 1.0))
}

/// Ground-state amplitude ratios of the two-site XY ring.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaTriple {
    pub alpha1: f64,
    pub alpha2: f64,
    pub norm: f64,
}

pub fn closed_alpha(j: f64, w: f64) -> Result<AlphaTriple> {
    if j == 0.0 || w == 0.0 {
        return Err(Error::Domain(format!(
            "amplitude ratios need J != 0 and W != 0, got J={j}, W={w}"
        )));
    }
    let l = closed_lambda_xy(j, w)?;
    let alpha1 = (j + 2.0 * l) / (2.0 * j);
    let alpha2 = (l * l + l * j - 0.75 * j * j) / (w * j);
    let norm = 1.0 / (2.0 * (1.0 + alpha1 * alpha1 + alpha2 * alpha2)).sqrt();
    Ok(AlphaTriple { alpha1, alpha2, norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;

    fn xy(j: f64, w: f64) -> ChainSpec {
        ChainSpec::two_site(Anisotropy::Xy, j, w)
    }

    fn min_eig(spec: &ChainSpec) -> f64 {
        hermitian_eig(&build_hamiltonian(spec).unwrap())
            .unwrap()
            .min_eigenvalue()
    }

    #[test]
    fn pure_hopping_ring() {
        let g = ground_state(&xy(0.0, 1.0)).unwrap();
        assert!((g.energy + 1.0).abs() < 1e-12);
        assert_eq!(g.degeneracy, 4);
    }

    #[test]
    fn decoupled_dimers() {
        // oracle: two independent 4x4 Heisenberg dimers
        let (sx, sy, sz) = (pauli::spin_x(), pauli::spin_y(), pauli::spin_z());
        let dimer = &(&kron(&sx, &sx) + &kron(&sy, &sy)) + &kron(&sz, &sz);
        let e_dimer = hermitian_eig(&dimer).unwrap().min_eigenvalue();
        assert!((e_dimer + 0.75).abs() < 1e-12);
        assert!((min_eig(&xy(1.0, 0.0)) - 2.0 * e_dimer).abs() < 1e-12);
    }

    #[test]
    fn single_site_is_kondo_singlet() {
        for aniso in [Anisotropy::Xy, Anisotropy::X] {
            let spec = ChainSpec::two_site(aniso, 1.0, 3.7).with_sites(1);
            assert!((min_eig(&spec) + 0.75).abs() < 1e-12);
        }
    }

    #[test]
    fn two_site_energy_matches_closed_form() {
        let g = ground_state(&xy(1.0, 1.0)).unwrap();
        let l = closed_lambda_xy(1.0, 1.0).unwrap();
        assert!((g.energy - l).abs() < 1e-9);
        assert!((g.energy + 1.746980).abs() < 1e-6);
        assert_eq!(g.degeneracy, 1);
    }

    #[test]
    fn strong_field_polarizes() {
        let g = ground_state(&xy(1.0, 1.0).with_field(3.0)).unwrap();
        assert_eq!(g.degeneracy, 1);
        let amps = g.state.amplitudes();
        assert!((amps[15] - C64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn closed_lambda_limits() {
        assert!((closed_lambda_xy(0.0, 1.0).unwrap() + 1.0).abs() < 1e-14);
        assert!((closed_lambda_xy(1.0, 0.0).unwrap() + 1.5).abs() < 1e-14);
        assert!(closed_lambda_xy(0.0, 0.0).is_err());
    }

    #[test]
    fn closed_beta_values() {
        assert_eq!(closed_beta(0.0, 1.0).unwrap(), 1.0);
        assert!((closed_beta(1.0, 1.0).unwrap() - (2.0 + 5f64.sqrt())).abs() < 1e-14);
        assert!((closed_beta(1.0, 2.0).unwrap() - 2.414213562373095).abs() < 1e-12);
        assert!(matches!(closed_beta(1.0, 0.0), Err(Error::Argument(_))));
    }

    #[test]
    fn closed_c_ac_values() {
        assert_eq!(closed_c_ac_x(0.0, 1.0).unwrap(), 0.0);
        assert!((closed_c_ac_x(1.0, 1.0).unwrap() - 2.0 / 5f64.sqrt()).abs() < 1e-14);
        assert!((closed_c_ac_x(10.0, 1.0).unwrap() - 0.998752).abs() < 1e-6);
        assert!(closed_c_ac_x(100.0, 1.0).unwrap() > 0.99998);
        let mut prev = -1.0;
        for k in 0..50 {
            let c = closed_c_ac_x(0.1 * k as f64, 1.0).unwrap();
            assert!(c > prev && c < 1.0);
            prev = c;
        }
    }

    #[test]
    fn closed_alpha_values() {
        let l = closed_lambda_xy(1.0, 1.0).unwrap();
        let a = closed_alpha(1.0, 1.0).unwrap();
        assert!((a.alpha1 - (1.0 + 2.0 * l) / 2.0).abs() < 1e-14);
        assert!((a.alpha1 + 1.246980).abs() < 1e-6);
        assert!((a.alpha2 - (l * l + l - 0.75)).abs() < 1e-14);
        assert!((a.alpha2 - 0.554958).abs() < 1e-6);
        assert!(a.norm > 0.0 && a.norm <= std::f64::consts::FRAC_1_SQRT_2);
        assert!(matches!(closed_alpha(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(closed_alpha(1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(build_hamiltonian(&xy(1.0, -1.0)), Err(Error::Argument(_))));
        assert!(matches!(
            build_hamiltonian(&xy(1.0, 1.0).with_field(-0.1)),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            build_hamiltonian(&xy(1.0, 1.0).with_sites(0)),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            build_hamiltonian(&xy(1.0, 1.0).with_sites(7)),
            Err(Error::Capacity { dim: 16384, max: 4096 })
        ));
    }

    #[test]
    fn parse_enums() {
        assert_eq!("XY".parse::<Anisotropy>().unwrap(), Anisotropy::Xy);
        assert_eq!("x".parse::<Anisotropy>().unwrap(), Anisotropy::X);
        assert_eq!("open".parse::<Boundary>().unwrap(), Boundary::Open);
        assert!("z".parse::<Anisotropy>().is_err());
    }

    #[test]
    fn bond_lists() {
        let ring = xy(1.0, 1.0).with_sites(3);
        assert_eq!(ring.bonds(), vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(ring.with_boundary(Boundary::Open).bonds(), vec![(0, 1), (1, 2)]);
        assert_eq!(xy(1.0, 1.0).bonds(), vec![(0, 1), (1, 0)]);
        assert!(xy(1.0, 1.0).with_sites(1).bonds().is_empty());
    }
}
