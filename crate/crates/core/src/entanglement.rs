//! Qubit states, reductions and entanglement measures: Wootters pairwise
//! concurrence, single-qubit concurrence `2 sqrt(det rho_1)` and the
//! Coffman-Kundu-Wootters monogamy audit.

use nalgebra::{DMatrix, SVD};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, bit_shift, hermitian_eig, kron, pauli, ComplexMatrix, C64};

/// Tolerance on the trace and norm of states.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance on Hermiticity of density matrices (absolute).
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-10;
/// Most negative eigenvalue a density matrix may carry.
pub const PSD_TOL: f64 = 1e-9;
/// Density-matrix eigenvalues below `RANK_TOL * max` are roundoff and dropped
/// from the concurrence.
pub const RANK_TOL: f64 = 1e-14;
/// States with `tr(rho^2) < 1 - PURITY_TOL` are treated as mixed.
pub const PURITY_TOL: f64 = 1e-8;
/// Slack allowed on the monogamy inequality.
pub const CKW_TOL: f64 = 1e-9;

fn n_qubits_of(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::Argument(format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros() as usize)
}

fn check_keep(keep: &[usize], n_qubits: usize) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::Argument("keep list is empty".into()));
    }
    if let Some(&q) = keep.iter().find(|&&q| q >= n_qubits) {
        return Err(Error::QubitIndex { index: q, n_qubits });
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument(format!(
            "keep indices must be distinct and ascending, got {keep:?}"
        )));
    }
    Ok(())
}

/// For a subset of qubits, the basis-index bits contributed by each value of
/// the subset register (subset qubit order preserved, first = most significant).
fn subset_offsets(qubits: &[usize], n_qubits: usize) -> Vec<usize> {
    let m = qubits.len();
    (0..1usize << m)
        .map(|k| {
            qubits.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
                let bit = (k >> (m - 1 - pos)) & 1;
                acc | (bit << bit_shift(q, n_qubits))
            })
        })
        .collect()
}

fn complement(keep: &[usize], n_qubits: usize) -> Vec<usize> {
    (0..n_qubits).filter(|q| !keep.contains(q)).collect()
}

/// Normalized state vector over `2^n` basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = n_qubits_of(amplitudes.len())?;
        linalg::check_qubit_count(n_qubits)?;
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Contract(format!("state norm is {norm}, expected 1")));
        }
        Ok(PureState { n_qubits, amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = norm(&amplitudes);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Argument("cannot normalize a zero or non-finite vector".into()));
        }
        for a in amplitudes.iter_mut() {
            *a /= norm;
        }
        Self::new(amplitudes)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = linalg::check_qubit_count(n_qubits)?;
        if index >= dim {
            return Err(Error::Argument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(PureState {
            n_qubits,
            amplitudes: amps,
        })
    }

    /// Tensor product of single-qubit states, qubit 0 first.
    pub fn product(factors: &[[C64; 2]]) -> Result<Self> {
        let mut amps = vec![C64::new(1.0, 0.0)];
        for f in factors {
            amps = amps.iter().flat_map(|a| [a * f[0], a * f[1]]).collect();
        }
        Self::normalized(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `<self|other>`
    pub fn overlap(&self, other: &PureState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<self|other>|^2`
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.overlap(other).norm_sqr()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            n_qubits: self.n_qubits,
            matrix: ComplexMatrix::outer(&self.amplitudes),
        }
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Trace-one, Hermitian, positive semidefinite operator on `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates trace, Hermiticity and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n_qubits = n_qubits_of(matrix.dim())?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::Contract(format!("density matrix trace is {tr}, expected 1")));
        }
        let dev = matrix.hermiticity_deviation();
        if dev > DENSITY_HERMITIAN_TOL {
            return Err(Error::Contract(format!(
                "density matrix is not Hermitian (deviation {dev:e})"
            )));
        }
        let matrix = matrix.hermitian_part();
        let min = hermitian_eig(&matrix)?.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::Contract(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(DensityMatrix { n_qubits, matrix })
    }

    /// For matrices that are density matrices by construction.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        let n_qubits = matrix.dim().trailing_zeros() as usize;
        DensityMatrix { n_qubits, matrix }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let dim = linalg::check_qubit_count(n_qubits)?;
        Ok(DensityMatrix {
            n_qubits,
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(rho^2)`
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Convex combination `sum_k p_k rho_k` of states on the same register.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Argument("empty mixture".into()))?.1;
        let mut m = ComplexMatrix::zeros(first.dim());
        for (p, rho) in parts {
            if rho.dim() != first.dim() {
                return Err(Error::Argument("mixture of states with different dimensions".into()));
            }
            m.add_scaled(*p, &rho.matrix);
        }
        Self::new(m)
    }
}

/// Anything that can be reduced to a density matrix on a subset of its qubits.
pub trait QubitState {
    fn n_qubits(&self) -> usize;

    fn purity(&self) -> f64;

    /// Reduced state on `keep` (distinct, ascending).
    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix>;

    /// The state vector, when the state is stored as one.
    fn as_pure(&self) -> Option<&PureState> {
        None
    }
}

impl QubitState for PureState {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn purity(&self) -> f64 {
        norm(&self.amplitudes).powi(4)
    }

    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.n_qubits;
        check_keep(keep, n)?;
        let kept = subset_offsets(keep, n);
        let env = subset_offsets(&complement(keep, n), n);
        let psi = &self.amplitudes;
        let dk = kept.len();
        let mut out = ComplexMatrix::zeros(dk);
        for i in 0..dk {
            for j in i..dk {
                let acc: C64 = env.iter().map(|&e| psi[kept[i] | e] * psi[kept[j] | e].conj()).sum();
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)] = C64::new(out[(i, i)].re, 0.0);
        }
        Ok(DensityMatrix::from_trusted(out))
    }

    fn as_pure(&self) -> Option<&PureState> {
        Some(self)
    }
}

impl QubitState for DensityMatrix {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn purity(&self) -> f64 {
        DensityMatrix::purity(self)
    }

    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, keep)
    }
}

/// Traces out every qubit not listed in `keep`; output qubit order follows `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits;
    check_keep(keep, n)?;
    let kept = subset_offsets(keep, n);
    let env = subset_offsets(&complement(keep, n), n);
    let m = &rho.matrix;
    let dk = kept.len();
    let mut out = ComplexMatrix::zeros(dk);
    for i in 0..dk {
        for j in 0..dk {
            out[(i, j)] = env.iter().map(|&e| m[(kept[i] | e, kept[j] | e)]).sum();
        }
    }
    Ok(DensityMatrix::from_trusted(out.hermitian_part()))
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// With `rho = sum_k |psi_k><psi_k|` (subnormalized eigenvectors), the square
/// roots of the eigenvalues of `rho (sy ⊗ sy) rho* (sy ⊗ sy)` are the singular
/// values of `T_ij = psi_i^T (sy ⊗ sy) psi_j`. Working with singular values
/// avoids square roots of roundoff-level eigenvalues.
pub fn concurrence(rho2: &DensityMatrix) -> Result<f64> {
    if rho2.n_qubits != 2 {
        return Err(Error::Argument(format!(
            "concurrence needs a two-qubit state, got {} qubits",
            rho2.n_qubits
        )));
    }
    let spectrum = hermitian_eig(&rho2.matrix)?;
    let p = spectrum.eigenvalues();
    if p[0] < -PSD_TOL {
        return Err(Error::Contract(format!(
            "two-qubit state has negative eigenvalue {:e}",
            p[0]
        )));
    }
    let p_max = p[3];
    let weighted: Vec<Vec<C64>> = (0..4)
        .filter(|&k| p[k] > RANK_TOL * p_max)
        .map(|k| spectrum.eigenvector(k).into_iter().map(|z| z * p[k].sqrt()).collect())
        .collect();
    let yy = kron(&pauli::sigma_y(), &pauli::sigma_y());
    let flipped: Vec<Vec<C64>> = weighted.iter().map(|v| yy.mul_vec(v)).collect();
    let r = weighted.len();
    let t = DMatrix::from_fn(r, r, |i, j| {
        weighted[i].iter().zip(&flipped[j]).map(|(a, b)| a * b).sum::<C64>()
    });
    let mut lambdas: Vec<f64> = SVD::new(t, false, false).singular_values.iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    lambdas.resize(4, 0.0);
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Concurrence between qubits `a` and `b` after tracing out the rest.
pub fn pair_concurrence<S: QubitState + ?Sized>(state: &S, a: usize, b: usize) -> Result<f64> {
    if a == b {
        return Err(Error::Argument(format!(
            "pair concurrence needs distinct qubits, got {a} twice"
        )));
    }
    concurrence(&state.reduce(&[a.min(b), a.max(b)])?)
}

/// `2 sqrt(det rho_q)`; only defined for globally pure states.
///
/// For a state vector this is evaluated as `2 s0 s1` from the Schmidt
/// coefficients of the `q | rest` split, which stays accurate for nearly
/// product states where the determinant is at roundoff level.
pub fn single_qubit_concurrence<S: QubitState + ?Sized>(state: &S, qubit: usize) -> Result<f64> {
    let purity = state.purity();
    if purity < 1.0 - PURITY_TOL {
        return Err(Error::Contract(format!(
            "single-qubit concurrence needs a pure state, purity is {purity}"
        )));
    }
    if let Some(psi) = state.as_pure() {
        return schmidt_concurrence(psi, qubit);
    }
    let r = state.reduce(&[qubit])?;
    let m = r.matrix();
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
    if det < -1e-12 {
        return Err(Error::Numerical(format!(
            "single-qubit marginal has determinant {det:e}"
        )));
    }
    Ok((2.0 * det.max(0.0).sqrt()).min(1.0))
}

fn schmidt_concurrence(psi: &PureState, qubit: usize) -> Result<f64> {
    let n = psi.n_qubits;
    if qubit >= n {
        return Err(Error::QubitIndex {
            index: qubit,
            n_qubits: n,
        });
    }
    let bit = 1usize << bit_shift(qubit, n);
    let env = subset_offsets(&complement(&[qubit], n), n);
    let m = DMatrix::from_fn(2, env.len(), |r, c| {
        psi.amplitudes[env[c] | if r == 1 { bit } else { 0 }]
    });
    let s = m.svd(false, false).singular_values;
    if s.len() < 2 {
        return Ok(0.0);
    }
    Ok((2.0 * s[0] * s[1]).min(1.0))
}

/// Haar-random pure state: normalized complex Gaussian amplitudes.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> Result<PureState> {
    let dim = linalg::check_qubit_count(n_qubits)?;
    let amps = (0..dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    PureState::normalized(amps)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CkwAudit {
    /// Sum of squared pair concurrences between the pivot and every other qubit.
    pub pair_sq_sum: f64,
    /// Squared single-qubit concurrence of the pivot.
    pub bound: f64,
    pub holds: bool,
}

impl CkwAudit {
    pub fn slack(&self) -> f64 {
        self.bound - self.pair_sq_sum
    }
}

pub fn ckw_audit(state: &PureState, pivot: usize) -> Result<CkwAudit> {
    let n = state.n_qubits();
    if pivot >= n {
        return Err(Error::QubitIndex {
            index: pivot,
            n_qubits: n,
        });
    }
    let mut pair_sq_sum = 0.0;
    for other in (0..n).filter(|&q| q != pivot) {
        pair_sq_sum += pair_concurrence(state, pivot, other)?.powi(2);
    }
    let bound = single_qubit_concurrence(state, pivot)?.powi(2);
    Ok(CkwAudit {
        pair_sq_sum,
        bound,
        holds: pair_sq_sum <= bound + CKW_TOL,
    })
}
