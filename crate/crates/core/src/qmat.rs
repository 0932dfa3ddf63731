//! Dense complex linear algebra and quantum-state primitives.
//!
//! [`ComplexMatrix`] is a thin row/column-agnostic wrapper over
//! `nalgebra::DMatrix<Complex64>`. [`DensityMatrix`] and [`UnitaryMatrix`]
//! are validated newtypes: once constructed their invariants hold, so the
//! spectral functions below never re-check them.
//!
//! Tolerances: construction-time validation uses [`VALIDATION_TOL`];
//! spectra clamp float noise in `[-CLAMP_TOL, EIGEN_FLOOR)` to zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used when validating Hermiticity, trace and positivity.
pub const VALIDATION_TOL: f64 = 1e-10;
/// Eigenvalues in `[-CLAMP_TOL, 0)` are treated as float noise; below that they are errors.
pub const CLAMP_TOL: f64 = 1e-9;
/// Hermiticity tolerance accepted by [`eigh`].
pub const EIGH_HERMITIAN_TOL: f64 = 1e-8;
/// Eigenvalues below `-SQRT_NEG_TOL` make [`matrix_sqrt`] fail.
pub const SQRT_NEG_TOL: f64 = 1e-8;
/// Eigenvalues of a unit-trace state below this are rounding noise from the
/// eigensolver and are set to zero, so that `sqrt` does not amplify them.
pub const EIGEN_FLOOR: f64 = 1e-14;

pub type C64 = Complex64;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::Shape { rows, cols, len: entries.len() });
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| if i == j { c64(diag[i], 0.0) } else { C64::default() }))
    }

    /// Outer product `|v><v|`.
    pub fn projector(v: &[C64]) -> Self {
        let n = v.len();
        Self(DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.0[(i, j)] = z;
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    /// Row-major copy of the entries.
    pub fn row_major_entries(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows().min(self.cols())).map(|i| self.0[(i, i)]).collect()
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch in max_abs_diff");
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest entry-wise deviation from Hermiticity.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(M + M^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * c64(0.5, 0.0))
    }

    /// Sum of moduli of all entries (the l1 matrix norm).
    pub fn l1_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).sum()
    }

    /// Sum of squared moduli of all entries.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Returns the index map `j -> i` when every column holds exactly one
    /// entry equal to 1 and the rest are exactly 0.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows();
        let mut image = vec![usize::MAX; n];
        let mut hit = vec![false; n];
        for j in 0..n {
            for i in 0..n {
                let z = self.0[(i, j)];
                if z == C64::new(1.0, 0.0) {
                    if image[j] != usize::MAX || hit[i] {
                        return None;
                    }
                    image[j] = i;
                    hit[i] = true;
                } else if z != C64::default() {
                    return None;
                }
            }
            if image[j] == usize::MAX {
                return None;
            }
        }
        Some(image)
    }

    /// `U M U^dag`. Permutation matrices are applied by index relabeling.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> ComplexMatrix {
        if let Some(perm) = u.as_permutation() {
            let n = self.rows();
            let mut out = DMatrix::zeros(n, n);
            for j in 0..n {
                for i in 0..n {
                    out[(perm[i], perm[j])] = self.0[(i, j)];
                }
            }
            return Self(out);
        }
        Self(&u.0 * &self.0 * u.0.adjoint())
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Descending list of eigenvalues of a density matrix, summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Clamps float noise, renormalizes and sorts descending.
    ///
    /// Values below `-CLAMP_TOL` are rejected.
    pub fn from_raw(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty spectrum".into()));
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -CLAMP_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        for v in values.iter_mut() {
            if *v < EIGEN_FLOOR {
                *v = 0.0;
            }
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > CLAMP_TOL {
            return Err(Error::InvalidTrace { trace: total });
        }
        for v in values.iter_mut() {
            *v /= total;
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `sum_i lambda_i^k`.
    pub fn power_sum(&self, k: u32) -> f64 {
        self.0.iter().map(|l| l.powi(k as i32)).sum()
    }

    pub fn entropy(&self, base: f64) -> f64 {
        let ln_base = base.ln();
        -self
            .0
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| l * l.ln() / ln_base)
            .sum::<f64>()
    }
}

/// A unitary matrix, checked to `VALIDATION_TOL` on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch { expected: mat.rows(), found: mat.cols() });
        }
        let dev = unitarity_deviation(&mat);
        if dev > VALIDATION_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(Self(mat))
    }

    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        // the check is cubic; the large callers build permutations by construction
        debug_assert!(mat.rows() > 64 || unitarity_deviation(&mat) < 1e-8);
        Self(mat)
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn compose(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        Self(&self.0 * &other.0)
    }

    pub fn scale_phase(&self, phi: f64) -> UnitaryMatrix {
        Self(self.0.scale(C64::from_polar(1.0, phi)))
    }

    pub fn kron(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        Self(self.0.kron(&other.0))
    }

    /// Largest deviation of `U^dag U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.0)
    }
}

fn unitarity_deviation(m: &ComplexMatrix) -> f64 {
    let prod = &m.adjoint() * m;
    prod.max_abs_diff(&ComplexMatrix::identity(m.rows()))
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates all three density-matrix invariants at `VALIDATION_TOL`.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch { expected: mat.rows(), found: mat.cols() });
        }
        let dev = mat.hermitian_deviation();
        if dev > VALIDATION_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > VALIDATION_TOL || tr.im.abs() > VALIDATION_TOL {
            return Err(Error::InvalidTrace { trace: tr.re });
        }
        let herm = mat.hermitian_part();
        let (values, _) = eigh(&herm)?;
        let min = values.last().copied().unwrap_or(0.0);
        if min < -VALIDATION_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(Self(herm))
    }

    /// Wraps a matrix already known to be a state, enforcing exact Hermiticity.
    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        Self(mat.hermitian_part())
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self(ComplexMatrix::identity(n).scale(c64(1.0 / n as f64, 0.0)))
    }

    /// Diagonal state from a probability vector.
    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(probs))
    }

    /// Projector onto the normalized `amplitudes`.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() || norm == 0.0 {
            return Err(Error::InvalidArgument("pure state needs a nonzero vector".into()));
        }
        let v: Vec<C64> = amplitudes.iter().map(|a| a / norm).collect();
        Ok(Self::new_unchecked(ComplexMatrix::projector(&v)))
    }

    /// Computational basis state `|index>`.
    pub fn basis_state(n: usize, index: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        m.set(index, index, c64(1.0, 0.0));
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    /// `U rho U^dag`.
    pub fn conjugate_by(&self, u: &UnitaryMatrix) -> Result<DensityMatrix> {
        check_dims(self.dim(), u.dim())?;
        Ok(Self::new_unchecked(self.0.conjugate_by(u.matrix())))
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self(self.0.kron(&other.0))
    }

    /// Convex combination `sum_i w_i rho_i`; weights must be a probability vector.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<DensityMatrix> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::InvalidArgument("mixture needs one weight per state".into()));
        }
        if weights.iter().any(|&w| w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidArgument("mixture weights must form a probability vector".into()));
        }
        let n = states[0].dim();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (w, s) in weights.iter().zip(states) {
            check_dims(n, s.dim())?;
            acc = &acc + &s.0.scale(c64(*w, 0.0));
        }
        Ok(Self::new_unchecked(acc))
    }

    pub fn spectrum(&self) -> Spectrum {
        let (values, _) = eigh(&self.0).expect("density matrix is Hermitian");
        Spectrum::from_raw(values).expect("density matrix spectrum is valid")
    }

    /// Spectrum plus eigenvectors (columns of the returned unitary, same order).
    pub fn eigen(&self) -> (Vec<f64>, UnitaryMatrix) {
        eigh(&self.0).expect("density matrix is Hermitian")
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Hermitian eigendecomposition `H = V diag(lambda) V^dag`.
///
/// Eigenvalues are returned descending. Each eigenvector has its first
/// non-negligible component made real and positive; exact eigenvalue ties are
/// ordered lexicographically on the normalized eigenvectors.
pub fn eigh(h: &ComplexMatrix) -> Result<(Vec<f64>, UnitaryMatrix)> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch { expected: h.rows(), found: h.cols() });
    }
    let dev = h.hermitian_deviation();
    if dev > EIGH_HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let n = h.rows();
    let max_iters = 1000 * n + 100;
    let eig = SymmetricEigen::try_new(h.hermitian_part().into_dmatrix(), f64::EPSILON, max_iters)
        .ok_or(Error::NoConvergence { iterations: max_iters })?;

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|k| {
            let mut v: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
            normalize_phase(&mut v);
            (eig.eigenvalues[k], v)
        })
        .collect();
    pairs.sort_by(|(la, va), (lb, vb)| lb.total_cmp(la).then_with(|| lex_cmp(va, vb)));

    let values = pairs.iter().map(|(l, _)| *l).collect();
    let vecs = DMatrix::from_fn(n, n, |i, k| pairs[k].1[i]);
    Ok((values, UnitaryMatrix::new_unchecked(ComplexMatrix(vecs))))
}

fn normalize_phase(v: &mut [C64]) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-12 * scale.max(1.0)).copied() {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

fn lex_cmp(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then_with(|| x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Principal square root of a state.
pub fn matrix_sqrt(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let (values, vecs) = eigh(rho.matrix())?;
    if let Some(&min) = values.last() {
        if min < -SQRT_NEG_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
    }
    let roots: Vec<f64> = values.iter().map(|&l| if l < EIGEN_FLOOR { 0.0 } else { l.sqrt() }).collect();
    let v = vecs.matrix();
    let root = &(v * &ComplexMatrix::from_real_diagonal(&roots)) * &v.adjoint();
    Ok(root.hermitian_part())
}

/// `Tr rho^2`, evaluated entry-wise.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().frobenius_norm_sq()
}

/// `-sum lambda log_base lambda` with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix, base: f64) -> f64 {
    rho.spectrum().entropy(base)
}

/// Quantum relative entropy `Tr rho log rho - Tr rho log sigma`.
///
/// Returns `+inf` when the support of `rho` is not contained in that of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, base: f64) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    let ln_base = base.ln();
    let neg_entropy = -von_neumann_entropy(rho, base);
    let (svals, svecs) = sigma.eigen();
    // Tr rho log sigma = sum_k <v_k|rho|v_k> log s_k
    let rotated = rho.matrix().conjugate_by(&svecs.matrix().adjoint());
    let mut cross = 0.0;
    for (k, &s) in svals.iter().enumerate() {
        let weight = rotated.get(k, k).re;
        if weight.abs() <= CLAMP_TOL {
            continue;
        }
        if s <= 0.0 {
            return Ok(f64::INFINITY);
        }
        cross += weight * s.ln() / ln_base;
    }
    Ok(neg_entropy - cross)
}

/// Uhlmann fidelity `Tr sqrt(sqrt(sigma) rho sqrt(sigma))` (not squared).
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    let root = matrix_sqrt(sigma)?;
    let inner = &(&root * rho.matrix()) * &root;
    let (values, _) = eigh(&inner.hermitian_part())?;
    Ok(values.iter().filter(|&&l| l >= EIGEN_FLOOR).map(|l| l.sqrt()).sum())
}

/// Which tensor factor [`partial_trace`] keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Partial trace of an arbitrary `(d_a d_b) x (d_a d_b)` matrix.
pub fn partial_trace_matrix(m: &ComplexMatrix, dims: (usize, usize), keep: Keep) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if da == 0 || db == 0 || !m.is_square() || m.rows() != da * db {
        return Err(Error::InvalidArgument(format!(
            "dims ({da}, {db}) do not factor joint dimension {}",
            m.rows()
        )));
    }
    let out = match keep {
        Keep::A => DMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m.get(i * db + k, j * db + k)).sum()),
        Keep::B => DMatrix::from_fn(db, db, |i, j| (0..da).map(|k| m.get(k * db + i, k * db + j)).sum()),
    };
    Ok(ComplexMatrix(out))
}

/// Reduced state of one factor of a bipartite state.
pub fn partial_trace(joint: &DensityMatrix, dims: (usize, usize), keep: Keep) -> Result<DensityMatrix> {
    let reduced = partial_trace_matrix(joint.matrix(), dims, keep)?;
    Ok(DensityMatrix::new_unchecked(reduced))
}

/// Discrete Fourier transform matrix `F_jk = exp(2 pi i jk / n) / sqrt(n)`.
pub fn dft_unitary(n: usize) -> UnitaryMatrix {
    assert!(n >= 1, "dft_unitary needs n >= 1");
    let norm = 1.0 / (n as f64).sqrt();
    let m = DMatrix::from_fn(n, n, |j, k| {
        // reduce jk mod n before scaling to keep the phase exact
        let phase = 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
        C64::from_polar(norm, phase)
    });
    UnitaryMatrix::new_unchecked(ComplexMatrix(m))
}

pub mod gates {
    //! Standard single-qubit matrices.
    use super::{c64, ComplexMatrix, UnitaryMatrix};

    fn from2(a: [[(f64, f64); 2]; 2]) -> ComplexMatrix {
        ComplexMatrix::from_row_major(
            2,
            2,
            vec![c64(a[0][0].0, a[0][0].1), c64(a[0][1].0, a[0][1].1), c64(a[1][0].0, a[1][0].1), c64(a[1][1].0, a[1][1].1)],
        )
        .expect("2x2")
    }

    pub fn pauli_x() -> UnitaryMatrix {
        UnitaryMatrix::new_unchecked(from2([[(0.0, 0.0), (1.0, 0.0)], [(1.0, 0.0), (0.0, 0.0)]]))
    }

    pub fn pauli_y() -> UnitaryMatrix {
        UnitaryMatrix::new_unchecked(from2([[(0.0, 0.0), (0.0, -1.0)], [(0.0, 1.0), (0.0, 0.0)]]))
    }

    pub fn pauli_z() -> UnitaryMatrix {
        UnitaryMatrix::new_unchecked(from2([[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (-1.0, 0.0)]]))
    }

    pub fn hadamard() -> UnitaryMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        UnitaryMatrix::new_unchecked(from2([[(h, 0.0), (h, 0.0)], [(h, 0.0), (-h, 0.0)]]))
    }

    /// `diag(1, e^{i phi})`.
    pub fn phase(phi: f64) -> UnitaryMatrix {
        let (s, c) = phi.sin_cos();
        UnitaryMatrix::new_unchecked(from2([[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (c, s)]]))
    }
}
