//! Controlled cyclic-swap circuit for measuring `Tr rho^k`.
//!
//! A probe qubit prepared in `|+>` controls the cyclic shift `V_k` of `k`
//! copies of `rho`. The probe's `sigma_x` statistics give
//! `P(+1) = (1 + Tr rho^k) / 2`. The simulation here builds the full joint
//! state, applies the controlled permutation and traces out the copies; it
//! never uses that formula.
//!
//! Moments `p_1..p_n` determine the spectrum: Newton's identities turn them
//! into elementary symmetric polynomials, and the eigenvalues are the roots of
//! the resulting characteristic polynomial, taken from its companion matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{self, MeasureReport};
use crate::qmat::{c64, partial_trace_matrix, ComplexMatrix, DensityMatrix, Keep, Spectrum, UnitaryMatrix};
use crate::sampling::SeededStream;

/// Largest simulated dimension, for both `V_k` and the probe-plus-copies space.
pub const DIM_CAP: usize = 1 << 10;
/// Spectrum recovery is supported up to this dimension.
pub const MAX_RECOVERY_DIM: usize = 8;
/// Above this dimension moment inversion is noticeably noise-sensitive.
pub const NOISE_WARN_DIM: usize = 4;
/// Imaginary parts and negative roots up to this size are discarded.
pub const ROOT_TOL: f64 = 1e-6;
/// Largest distance at which nearby roots, one of them complex, are treated
/// as a single perturbed multiple root.
pub const CLUSTER_RADIUS: f64 = 0.1;
pub const MOMENT_TOL: f64 = 1e-9;

/// Cyclic shift `V_k |psi_1, ..., psi_k> = |psi_k, psi_1, ..., psi_{k-1}>` on
/// `k` copies of a `d`-dimensional space.
pub fn generalized_swap(k: usize, d: usize) -> Result<UnitaryMatrix> {
    if k == 0 || d < 2 {
        return Err(Error::InvalidArgument(format!("generalized swap needs k >= 1 and d >= 2, got k={k}, d={d}")));
    }
    let total = checked_power(d, k)?;
    let mut m = ComplexMatrix::zeros(total, total);
    let mut digits = vec![0usize; k];
    for col in 0..total {
        // digits[0] is the most significant (first tensor factor)
        let mut rest = col;
        for slot in digits.iter_mut().rev() {
            *slot = rest % d;
            rest /= d;
        }
        let row = std::iter::once(digits[k - 1]).chain(digits[..k - 1].iter().copied()).fold(0, |acc, x| acc * d + x);
        m.set(row, col, c64(1.0, 0.0));
    }
    Ok(UnitaryMatrix::new_unchecked(m))
}

fn checked_power(d: usize, k: usize) -> Result<usize> {
    let mut total: usize = 1;
    for _ in 0..k {
        total = total.checked_mul(d).filter(|&t| t <= DIM_CAP).ok_or(Error::DimensionCap { dim: usize::MAX, cap: DIM_CAP })?;
    }
    Ok(total)
}

/// `1 (+) U`: the probe qubit (first tensor factor) controls `U`.
pub fn controlled_unitary(u: &UnitaryMatrix) -> UnitaryMatrix {
    let m = u.dim();
    let mut out = ComplexMatrix::identity(2 * m);
    for i in 0..m {
        for j in 0..m {
            out.set(m + i, m + j, u.matrix().get(i, j));
        }
    }
    UnitaryMatrix::new_unchecked(out)
}

/// `|+><+|`.
pub fn plus_state() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::pure(&[c64(h, 0.0), c64(h, 0.0)]).expect("nonzero")
}

/// Probability of the `+1` outcome of `sigma_x` on a qubit state.
pub fn sigma_x_plus_probability(probe: &ComplexMatrix) -> f64 {
    let plus = plus_state();
    (probe * plus.matrix()).trace().re
}

fn joint_dim(rho: &DensityMatrix, k: usize) -> Result<usize> {
    let d = rho.dim();
    let copies = checked_power(d, k).map_err(|_| Error::DimensionCap { dim: usize::MAX, cap: DIM_CAP })?;
    let joint = 2 * copies;
    if joint > DIM_CAP {
        return Err(Error::DimensionCap { dim: joint, cap: DIM_CAP });
    }
    Ok(copies)
}

/// Reduced probe state after the controlled-`V_k` circuit on `|+> (x) rho^{(x)k}`.
pub fn swap_test_probe_state(rho: &DensityMatrix, k: usize) -> Result<ComplexMatrix> {
    if k == 0 {
        return Err(Error::InvalidArgument("swap test needs k >= 1 copies".into()));
    }
    let copies_dim = joint_dim(rho, k)?;
    let mut copies = rho.matrix().clone();
    for _ in 1..k {
        copies = copies.kron(rho.matrix());
    }
    let joint = plus_state().matrix().kron(&copies);
    let gate = controlled_unitary(&generalized_swap(k, rho.dim())?);
    let evolved = joint.conjugate_by(gate.matrix());
    partial_trace_matrix(&evolved, (2, copies_dim), Keep::A)
}

/// Simulated probability of measuring `sigma_x = +1` on the probe.
pub fn swap_test_probability(rho: &DensityMatrix, k: usize) -> Result<f64> {
    Ok(sigma_x_plus_probability(&swap_test_probe_state(rho, k)?))
}

/// Power sums `p_k = Tr rho^k`, `k = 1..`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentVector {
    dim: usize,
    moments: Vec<f64>,
}

impl MomentVector {
    /// Validates `p_1 = 1`, `1/n^{k-1} <= p_k <= 1` and `p_{k+1} <= p_k`.
    pub fn new(dim: usize, moments: Vec<f64>) -> Result<Self> {
        if dim == 0 || moments.is_empty() {
            return Err(Error::InvalidArgument("moment vector needs dim >= 1 and at least p_1".into()));
        }
        if (moments[0] - 1.0).abs() > MOMENT_TOL {
            return Err(Error::InconsistentMoments(format!("p_1 = {} differs from 1", moments[0])));
        }
        for (i, &p) in moments.iter().enumerate() {
            let lower = (dim as f64).powi(-(i as i32));
            if p > 1.0 + MOMENT_TOL || p < lower - MOMENT_TOL {
                return Err(Error::InconsistentMoments(format!("p_{} = {p} outside [{lower}, 1]", i + 1)));
            }
        }
        if let Some(w) = moments.windows(2).position(|w| w[1] > w[0] + MOMENT_TOL) {
            return Err(Error::InconsistentMoments(format!("p_{} exceeds p_{}", w + 2, w + 1)));
        }
        Ok(Self { dim, moments })
    }

    /// Moments from finite-shot estimates; only `p_1 = 1` is enforced since
    /// noise can break the ordering invariants.
    pub fn from_estimates(dim: usize, moments: Vec<f64>) -> Result<Self> {
        if dim == 0 || moments.is_empty() {
            return Err(Error::InvalidArgument("moment vector needs dim >= 1 and at least p_1".into()));
        }
        if dim > NOISE_WARN_DIM {
            log::warn!("moment inversion at dimension {dim} amplifies shot noise");
        }
        Ok(Self { dim, moments })
    }

    /// Exact moments of a known spectrum.
    pub fn from_spectrum(spectrum: &Spectrum, count: usize) -> Self {
        Self { dim: spectrum.dim(), moments: (1..=count as u32).map(|k| spectrum.power_sum(k)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn moments(&self) -> &[f64] {
        &self.moments
    }

    /// `p_2 - 1/n`, the l2 coherence straight from the two-copy test.
    pub fn c2_shortcut(&self) -> Result<f64> {
        let p2 = if self.dim == 1 { 1.0 } else { *self.moments.get(1).ok_or_else(|| Error::InvalidArgument("need p_2".into()))? };
        Ok(p2 - 1.0 / self.dim as f64)
    }
}

/// `p_k = 2 P(+1) - 1` from the simulated circuit, for `k = 1..=k_max`.
pub fn moments_from_circuit(rho: &DensityMatrix, k_max: usize) -> Result<MomentVector> {
    if k_max == 0 || k_max > rho.dim() {
        return Err(Error::InvalidArgument(format!("k_max must be in 1..={}, got {k_max}", rho.dim())));
    }
    if rho.dim() == 1 {
        return MomentVector::new(1, vec![1.0]);
    }
    let moments = (1..=k_max).map(|k| swap_test_probability(rho, k).map(|p| 2.0 * p - 1.0)).collect::<Result<Vec<_>>>()?;
    MomentVector::new(rho.dim(), moments)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShotRecord {
    pub shots: u64,
    pub plus_count: u64,
    /// `2 plus_count / shots - 1`, an unbiased estimate of `Tr rho^k`.
    pub estimate: f64,
}

impl ShotRecord {
    pub fn new(shots: u64, plus_count: u64) -> Result<Self> {
        if shots == 0 || plus_count > shots {
            return Err(Error::InvalidArgument(format!("need 0 <= plus_count <= shots, shots >= 1 (got {plus_count}/{shots})")));
        }
        Ok(Self { shots, plus_count, estimate: 2.0 * plus_count as f64 / shots as f64 - 1.0 })
    }
}

/// Binomial emulation of `shots` runs of the swap test.
pub fn sample_swap_test(rho: &DensityMatrix, k: usize, shots: u64, stream: &mut SeededStream) -> Result<ShotRecord> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be >= 1".into()));
    }
    let mut p = swap_test_probability(rho, k)?;
    // snap rounding noise so deterministic outcomes stay deterministic
    if p > 1.0 - 1e-12 {
        p = 1.0;
    } else if p < 1e-12 {
        p = 0.0;
    }
    let dist = Binomial::new(shots, p).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    ShotRecord::new(shots, dist.sample(stream.rng()))
}

/// Elementary symmetric polynomials `e_0..e_n` from power sums via Newton's
/// identities: `k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i`.
pub fn elementary_symmetric(power_sums: &[f64]) -> Vec<f64> {
    let n = power_sums.len();
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for k in 1..=n {
        let mut acc = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[k - i] * power_sums[i - 1];
        }
        e[k] = acc / k as f64;
    }
    e
}

/// Roots of `x^n - e_1 x^{n-1} + ... + (-1)^n e_n` as companion-matrix eigenvalues.
fn characteristic_roots(e: &[f64]) -> Vec<Complex64> {
    let n = e.len() - 1;
    if n == 1 {
        return vec![Complex64::new(e[1], 0.0)];
    }
    // monic coefficients c_j of x^j, j = 0..n-1: c_{n-j} = (-1)^j e_j
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    for j in 0..n {
        let power = n - j;
        let sign = if power % 2 == 0 { 1.0 } else { -1.0 };
        companion[(j, n - 1)] = -sign * e[power];
    }
    companion.complex_eigenvalues().iter().copied().collect()
}

/// Replaces each cluster of nearby roots that contains a complex root by
/// copies of the cluster mean; multiple roots split into complex clusters
/// under rounding, while their mean stays accurate.
fn merge_root_clusters(roots: &mut [Complex64], radius: f64) {
    let n = roots.len();
    let mut cluster: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while c[r] != r {
            r = c[r];
        }
        c[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (roots[i] - roots[j]).norm() < radius {
                let (a, b) = (find(&mut cluster, i), find(&mut cluster, j));
                cluster[a.max(b)] = a.min(b);
            }
        }
    }
    for root in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| find(&mut cluster, i) == root).collect();
        if members.len() > 1 && members.iter().any(|&i| roots[i].im.abs() > ROOT_TOL) {
            let mean = members.iter().map(|&i| roots[i]).sum::<Complex64>() / members.len() as f64;
            for &i in &members {
                roots[i] = mean;
            }
        }
    }
}

/// Eigenvalues from the first `n` moments of an `n`-dimensional state.
pub fn spectrum_from_moments(m: &MomentVector) -> Result<Spectrum> {
    let n = m.dim();
    if n > MAX_RECOVERY_DIM {
        return Err(Error::InvalidArgument(format!("spectrum recovery supports n <= {MAX_RECOVERY_DIM}, got {n}")));
    }
    if m.moments().len() < n {
        return Err(Error::InvalidArgument(format!("need {n} moments, found {}", m.moments().len())));
    }
    let e = elementary_symmetric(&m.moments()[..n]);
    let raw = characteristic_roots(&e);
    // a k-fold root splits by about eps^(1/k), so widen the radius until the
    // complex parts are gone or the radius reaches its cap
    let mut roots = raw.clone();
    let mut radius = 1e-6;
    while radius <= CLUSTER_RADIUS && roots.iter().any(|z| z.im.abs() > ROOT_TOL) {
        roots.copy_from_slice(&raw);
        merge_root_clusters(&mut roots, radius);
        radius *= 2.0;
    }

    let mut values = Vec::with_capacity(n);
    for z in roots {
        if z.im.abs() > ROOT_TOL {
            return Err(Error::InconsistentMoments(format!("complex root {} {:+}i", z.re, z.im)));
        }
        if z.re < -ROOT_TOL {
            return Err(Error::InconsistentMoments(format!("negative root {}", z.re)));
        }
        values.push(z.re.max(0.0));
    }
    let total: f64 = values.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InconsistentMoments("roots sum to zero".into()));
    }
    Spectrum::from_raw(values.into_iter().map(|v| v / total).collect())
}

/// Tolerance between the two routes to `c2`.
pub const C2_ROUTE_TOL: f64 = 1e-9;

/// Every spectral measure from moments; `c2` is taken from the two-copy
/// shortcut and cross-checked against the recovered spectrum.
pub fn measures_from_moments(m: &MomentVector, base: f64) -> Result<MeasureReport> {
    let spectrum = spectrum_from_moments(m)?;
    let mut report = measures::report_from_spectrum(&spectrum, base)?;
    let shortcut = m.c2_shortcut()?;
    if (shortcut - report.c2).abs() > C2_ROUTE_TOL {
        return Err(Error::InconsistentMoments(format!(
            "two-copy c2 {shortcut} disagrees with spectral c2 {}",
            report.c2
        )));
    }
    report.c2 = shortcut;
    report.purity = shortcut + 1.0 / m.dim() as f64;
    Ok(report)
}
