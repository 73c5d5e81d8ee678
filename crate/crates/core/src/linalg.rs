//! Dense complex matrix kernel.
//!
//! Matrices are stored row-major. Multi-qubit operators use the convention
//! that qubit 0 is the most significant tensor factor, so basis index `b`
//! encodes `|q0 q1 ... q_{n-1}>` with bit value 1 meaning spin down.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest Hilbert-space dimension handled by the dense routines.
pub const MAX_DIM: usize = 4096;

/// Relative tolerance on `max|A - A^†|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Modulus above which an eigenvector entry is used to fix the phase.
const PHASE_PIVOT: f64 = 1e-8;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { dim, data }
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a perfect square.
    pub fn from_row_major(entries: Vec<C64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != entries.len() {
            return Err(Error::Argument(format!(
                "{} entries do not form a square matrix",
                entries.len()
            )));
        }
        Ok(ComplexMatrix { dim, data: entries })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Argument("rows do not form a square matrix".into()));
        }
        Ok(Self::from_fn(dim, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Rank-one projector `|v><v|`.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: f64, other: &ComplexMatrix) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self * other - other * self`
    pub fn commutator(&self, other: &ComplexMatrix) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max|A[i][j] - conj(A[j][i])|`
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermiticity_deviation() <= rel_tol * self.max_abs()
    }

    /// Projects onto the Hermitian part, `(A + A^†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            out[(i, i)] = C64::new(self[(i, i)].re, 0.0);
            for j in i + 1..n {
                let z = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        out
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Pauli matrices and spin-1/2 operators `S^a = sigma^a / 2`.
pub mod pauli {
    use super::{ComplexMatrix, C64};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::from_row_major(vec![
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ])
        .unwrap()
    }

    pub fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[1.0, -1.0])
    }

    pub fn spin_x() -> ComplexMatrix {
        sigma_x().scale(0.5)
    }

    pub fn spin_y() -> ComplexMatrix {
        sigma_y().scale(0.5)
    }

    pub fn spin_z() -> ComplexMatrix {
        sigma_z().scale(0.5)
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let nb = b.dim;
    ComplexMatrix::from_fn(a.dim * nb, |r, c| a[(r / nb, c / nb)] * b[(r % nb, c % nb)])
}

pub(crate) fn check_qubit_count(n_qubits: usize) -> Result<usize> {
    let dim = u32::try_from(n_qubits)
        .ok()
        .and_then(|n| 1usize.checked_shl(n))
        .unwrap_or(usize::MAX);
    if dim > MAX_DIM {
        return Err(Error::Capacity { dim, max: MAX_DIM });
    }
    Ok(dim)
}

fn check_single_qubit_op(op: &ComplexMatrix) -> Result<()> {
    if op.dim() != 2 {
        return Err(Error::Argument(format!(
            "single-qubit operator must be 2x2, got {}x{}",
            op.dim(),
            op.dim()
        )));
    }
    Ok(())
}

fn check_qubit(qubit: usize, n_qubits: usize) -> Result<()> {
    if qubit >= n_qubits {
        return Err(Error::QubitIndex { index: qubit, n_qubits });
    }
    Ok(())
}

/// Bit position of `qubit` inside a basis index.
#[inline]
pub(crate) fn bit_shift(qubit: usize, n_qubits: usize) -> usize {
    n_qubits - 1 - qubit
}

/// `h += coeff * (I ⊗ .. ⊗ op ⊗ .. ⊗ I)` without forming the embedded operator.
pub(crate) fn add_single_term(h: &mut ComplexMatrix, coeff: f64, op: &ComplexMatrix, qubit: usize, n_qubits: usize) {
    let s = bit_shift(qubit, n_qubits);
    let mask = 1usize << s;
    for r in 0..h.dim() {
        let br = (r >> s) & 1;
        for bc in 0..2 {
            let v = op[(br, bc)];
            if v != ZERO {
                let c = (r & !mask) | (bc << s);
                h[(r, c)] += v * coeff;
            }
        }
    }
}

/// `h += coeff * op_a(qubit_a) op_b(qubit_b)`.
pub(crate) fn add_pair_term(
    h: &mut ComplexMatrix,
    coeff: f64,
    op_a: &ComplexMatrix,
    qubit_a: usize,
    op_b: &ComplexMatrix,
    qubit_b: usize,
    n_qubits: usize,
) {
    let sa = bit_shift(qubit_a, n_qubits);
    let sb = bit_shift(qubit_b, n_qubits);
    let clear = !((1usize << sa) | (1usize << sb));
    for r in 0..h.dim() {
        let ra = (r >> sa) & 1;
        let rb = (r >> sb) & 1;
        for ca in 0..2 {
            let va = op_a[(ra, ca)];
            if va == ZERO {
                continue;
            }
            for cb in 0..2 {
                let vb = op_b[(rb, cb)];
                if vb == ZERO {
                    continue;
                }
                let c = (r & clear) | (ca << sa) | (cb << sb);
                h[(r, c)] += va * vb * coeff;
            }
        }
    }
}

/// Embeds a single-qubit operator at `qubit` in an `n_qubits` register.
pub fn embed_single(op: &ComplexMatrix, qubit: usize, n_qubits: usize) -> Result<ComplexMatrix> {
    check_single_qubit_op(op)?;
    check_qubit(qubit, n_qubits)?;
    let dim = check_qubit_count(n_qubits)?;
    let mut out = ComplexMatrix::zeros(dim);
    add_single_term(&mut out, 1.0, op, qubit, n_qubits);
    Ok(out)
}

/// Embeds the product `op_a(qubit_a) op_b(qubit_b)` of two operators on distinct qubits.
pub fn embed_pair(
    op_a: &ComplexMatrix,
    qubit_a: usize,
    op_b: &ComplexMatrix,
    qubit_b: usize,
    n_qubits: usize,
) -> Result<ComplexMatrix> {
    check_single_qubit_op(op_a)?;
    check_single_qubit_op(op_b)?;
    check_qubit(qubit_a, n_qubits)?;
    check_qubit(qubit_b, n_qubits)?;
    if qubit_a == qubit_b {
        return Err(Error::Argument(format!(
            "pair operator needs distinct qubits, got {qubit_a} twice"
        )));
    }
    let dim = check_qubit_count(n_qubits)?;
    let mut out = ComplexMatrix::zeros(dim);
    add_pair_term(&mut out, 1.0, op_a, qubit_a, op_b, qubit_b, n_qubits);
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues, eigenvectors
/// as orthonormal columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `V f(Λ) V^†`. Only the upper triangle is accumulated so the result is
    /// exactly Hermitian.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.weighted_sum(&weights)
    }

    pub(crate) fn weighted_sum(&self, weights: &[f64]) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let active: Vec<usize> = (0..n).filter(|&k| weights[k] != 0.0).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for &k in &active {
                    acc += v[(i, k)] * v[(j, k)].conj() * weights[k];
                }
                if i == j {
                    out[(i, i)] = C64::new(acc.re, 0.0);
                } else {
                    out[(i, j)] = acc;
                    out[(j, i)] = acc.conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|l| l)
    }
}

/// Rotates `v` so that its first entry with modulus above the pivot threshold is real positive.
pub(crate) fn canonicalize_phase(v: &mut [C64]) {
    if let Some(p) = v.iter().find(|z| z.norm() > PHASE_PIVOT) {
        let phase = p.conj() / p.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

pub fn hermitian_eig(h: &ComplexMatrix) -> Result<Spectrum> {
    let n = h.dim();
    if n == 0 {
        return Err(Error::Argument("empty matrix".into()));
    }
    if n > MAX_DIM {
        return Err(Error::Capacity { dim: n, max: MAX_DIM });
    }
    let dev = h.hermiticity_deviation();
    if dev > HERMITIAN_TOL * h.max_abs() {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian (max|A - A^†| = {dev:e})"
        )));
    }
    if !h.as_slice().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }

    let eig = SymmetricEigen::try_new(h.hermitian_part().to_nalgebra(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical(format!("Hermitian eigensolver did not converge (dim {n})")))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        let mut v: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
        canonicalize_phase(&mut v);
        for (i, z) in v.into_iter().enumerate() {
            eigenvectors[(i, col)] = z;
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Applies a real function to a Hermitian matrix through its eigendecomposition.
pub fn hermitian_func(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    Ok(hermitian_eig(h)?.apply(f))
}

#[cfg(test)]
mod tests {
    use super::pauli::*;
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn diag_re(m: &ComplexMatrix) -> Vec<f64> {
        m.diagonal().iter().map(|z| z.re).collect()
    }

    #[test]
    fn kron_identities() {
        assert_eq!(kron(&identity(), &identity()), ComplexMatrix::identity(4));
        let m = kron(&sigma_x(), &sigma_z());
        assert_eq!(m[(0, 2)], c(1.0));
        assert_eq!(m[(1, 3)], c(-1.0));
        assert!(m.diagonal().iter().all(|z| *z == c(0.0)));
    }

    #[test]
    fn kron_sigma_y_is_spin_flip() {
        // hand-expanded: sy ⊗ sy has -1, +1, +1, -1 on the anti-diagonal
        let m = kron(&sigma_y(), &sigma_y());
        let expected = ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 0.0, -1.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[-1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn embed_single_ordering() {
        assert_eq!(embed_single(&spin_z(), 0, 1).unwrap(), spin_z());
        assert_eq!(
            diag_re(&embed_single(&spin_z(), 0, 2).unwrap()),
            vec![0.5, 0.5, -0.5, -0.5]
        );
        assert_eq!(
            diag_re(&embed_single(&spin_z(), 1, 2).unwrap()),
            vec![0.5, -0.5, 0.5, -0.5]
        );
        assert!(matches!(
            embed_single(&spin_z(), 2, 2),
            Err(Error::QubitIndex { index: 2, n_qubits: 2 })
        ));
    }

    #[test]
    fn embed_pair_cases() {
        let zz = embed_pair(&spin_z(), 0, &spin_z(), 1, 2).unwrap();
        assert_eq!(diag_re(&zz), vec![0.25, -0.25, -0.25, 0.25]);
        assert_eq!(
            embed_pair(&sigma_x(), 0, &sigma_y(), 1, 2).unwrap(),
            kron(&sigma_x(), &sigma_y())
        );
        let xx = embed_pair(&spin_x(), 0, &spin_x(), 2, 3).unwrap();
        let prod = embed_single(&spin_x(), 0, 3)
            .unwrap()
            .matmul(&embed_single(&spin_x(), 2, 3).unwrap());
        assert_eq!(xx, prod);
        assert!(matches!(
            embed_pair(&spin_x(), 1, &spin_x(), 1, 3),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn capacity_guard() {
        assert!(matches!(embed_single(&spin_z(), 0, 13), Err(Error::Capacity { .. })));
    }

    #[test]
    fn eig_diagonal_and_pauli() {
        let spec = hermitian_eig(&ComplexMatrix::from_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(spec.eigenvalues(), &[1.0, 2.0, 3.0]);
        let v = spec.eigenvectors();
        // permutation matrix with columns e1, e2, e0
        for (col, row) in [(0, 1), (1, 2), (2, 0)] {
            assert!((v[(row, col)] - c(1.0)).norm() < 1e-14);
        }
        let sx = hermitian_eig(&sigma_x()).unwrap();
        assert!((sx.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((sx.eigenvalues()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::Contract(_))));
    }

    #[test]
    fn eigenvector_phase_is_canonical() {
        let spec = hermitian_eig(&sigma_y()).unwrap();
        for k in 0..2 {
            let v = spec.eigenvector(k);
            assert!(v[0].im.abs() < 1e-14 && v[0].re > 0.0);
        }
    }

    #[test]
    fn func_identity_and_exp() {
        let h = sigma_y().scale(0.3);
        let back = hermitian_func(&h, |x| x).unwrap();
        assert!((&back - &h).max_abs() < 1e-10);
        let e = hermitian_func(&ComplexMatrix::from_diagonal(&[0.0, 2f64.ln()]), f64::exp).unwrap();
        assert!((&e - &ComplexMatrix::from_diagonal(&[1.0, 2.0])).max_abs() < 1e-14);
    }
}
