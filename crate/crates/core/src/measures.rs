//! Total (basis-independent) coherence measures.
//!
//! Two families are implemented and must agree:
//!
//! * closed forms, which are spectral functions of the state
//!   ([`c2`], [`c_re`], [`c_skew`], [`c_trace`]);
//! * fixed-basis evaluators (`basis_coherence_*`), whose maximum over all
//!   unitaries is the corresponding closed form.
//!
//! [`uniformizing_unitary`] produces a basis in which the state's diagonal is
//! flat, which attains that maximum for the l2, relative-entropy and skew
//! forms.

use serde::{Deserialize, Serialize};

use crate::basis_opt::{self, OptimizerConfig};
use crate::error::{Error, Result};
use crate::qmat::{
    check_dims, dft_unitary, matrix_sqrt, purity, relative_entropy, von_neumann_entropy, ComplexMatrix, DensityMatrix, Spectrum,
    UnitaryMatrix,
};

pub const DEFAULT_LOG_BASE: f64 = 2.0;

/// Squared l2 total coherence `Tr rho^2 - 1/n`.
///
/// The closed forms are clamped at zero to absorb rounding below the maximally mixed state.
pub fn c2(rho: &DensityMatrix) -> f64 {
    (purity(rho) - 1.0 / rho.dim() as f64).max(0.0)
}

/// Relative-entropy total coherence `log n - S(rho)`.
pub fn c_re(rho: &DensityMatrix, base: f64) -> f64 {
    ((rho.dim() as f64).ln() / base.ln() - von_neumann_entropy(rho, base)).max(0.0)
}

/// Skew-information total coherence `1 - (sum sqrt(lambda))^2 / n`.
pub fn c_skew(rho: &DensityMatrix) -> f64 {
    let s: f64 = rho.spectrum().values().iter().map(|l| l.sqrt()).sum();
    (1.0 - s * s / rho.dim() as f64).max(0.0)
}

/// Trace distance to the maximally mixed state, `sum |lambda - 1/n|`.
pub fn c_trace(rho: &DensityMatrix) -> f64 {
    let inv = 1.0 / rho.dim() as f64;
    rho.spectrum().values().iter().map(|l| (l - inv).abs()).sum()
}

/// `||rho - 1/n||_2^2` evaluated entry-wise (distance form of [`c2`]).
pub fn c2_distance(rho: &DensityMatrix) -> f64 {
    let n = rho.dim();
    let mixed = DensityMatrix::maximally_mixed(n);
    (rho.matrix() - mixed.matrix()).frobenius_norm_sq()
}

/// `S(rho || 1/n)` (distance form of [`c_re`]).
pub fn c_re_distance(rho: &DensityMatrix, base: f64) -> f64 {
    relative_entropy(rho, &DensityMatrix::maximally_mixed(rho.dim()), base).expect("maximally mixed state has full support")
}

fn rotated(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<ComplexMatrix> {
    check_dims(rho.dim(), u.dim())?;
    Ok(rho.matrix().conjugate_by(u.matrix()))
}

/// `Tr rho^2 - sum_i |(U rho U^dag)_ii|^2`.
pub fn basis_coherence_l2(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<f64> {
    let r = rotated(rho, u)?;
    let diag: f64 = r.diagonal().iter().map(|z| z.norm_sqr()).sum();
    Ok(purity(rho) - diag)
}

/// `S(sigma_U) - S(rho)` with `sigma_U` the dephased rotated state.
pub fn basis_coherence_re(rho: &DensityMatrix, u: &UnitaryMatrix, base: f64) -> Result<f64> {
    let r = rotated(rho, u)?;
    let ln_base = base.ln();
    let dephased: f64 = -r
        .diagonal()
        .iter()
        .map(|z| z.re)
        .filter(|&p| p > 0.0)
        .map(|p| p * p.ln() / ln_base)
        .sum::<f64>();
    Ok(dephased - von_neumann_entropy(rho, base))
}

/// Sum of moduli of the off-diagonal entries of `U rho U^dag`.
pub fn basis_coherence_l1(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<f64> {
    let r = rotated(rho, u)?;
    Ok(off_diagonal_l1(&r))
}

/// Summed skew information against the projectors of the basis `U`:
/// `sum_k <k|rho|k> - <k|sqrt(rho)|k>^2`.
pub fn basis_coherence_skew(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<f64> {
    check_dims(rho.dim(), u.dim())?;
    let root = matrix_sqrt(rho)?.conjugate_by(u.matrix());
    let r = rotated(rho, u)?;
    Ok(r.diagonal().iter().zip(root.diagonal()).map(|(p, s)| p.re - s.re * s.re).sum())
}

pub(crate) fn off_diagonal_l1(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += m.get(i, j).norm();
            }
        }
    }
    total
}

/// `F V^dag`, with `V` the eigenbasis of `rho` and `F` the DFT matrix.
///
/// Every diagonal entry of `U rho U^dag` (and of `U sqrt(rho) U^dag`) is flat.
pub fn uniformizing_unitary(rho: &DensityMatrix) -> UnitaryMatrix {
    let (_, v) = rho.eigen();
    dft_unitary(rho.dim()).compose(&v.adjoint())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub dim: usize,
    pub purity: f64,
    pub c2: f64,
    pub c_re: f64,
    pub c_skew: f64,
    pub c_trace: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c1: Option<f64>,
    pub log_base: f64,
}

impl MeasureReport {
    /// Largest absolute field difference over the closed-form measures.
    pub fn max_abs_diff(&self, other: &MeasureReport) -> f64 {
        [
            self.purity - other.purity,
            self.c2 - other.c2,
            self.c_re - other.c_re,
            self.c_skew - other.c_skew,
            self.c_trace - other.c_trace,
        ]
        .iter()
        .map(|d| d.abs())
        .fold(0.0, f64::max)
    }
}

pub(crate) fn check_base(base: f64) -> Result<()> {
    if !(base > 1.0 && base.is_finite()) {
        return Err(Error::InvalidArgument(format!("log base must be a finite real > 1, got {base}")));
    }
    Ok(())
}

/// Closed-form measures from a spectrum alone.
pub fn report_from_spectrum(spectrum: &Spectrum, base: f64) -> Result<MeasureReport> {
    check_base(base)?;
    let n = spectrum.dim() as f64;
    let values = spectrum.values();
    let purity = spectrum.power_sum(2);
    let root_sum: f64 = values.iter().map(|l| l.sqrt()).sum();
    Ok(MeasureReport {
        dim: spectrum.dim(),
        purity,
        c2: (purity - 1.0 / n).max(0.0),
        c_re: (n.ln() / base.ln() - spectrum.entropy(base)).max(0.0),
        c_skew: (1.0 - root_sum * root_sum / n).max(0.0),
        c_trace: values.iter().map(|l| (l - 1.0 / n).abs()).sum(),
        c1: None,
        log_base: base,
    })
}

/// All closed-form measures, plus `c1` when an optimizer config is given.
pub fn measure_report(rho: &DensityMatrix, base: f64, c1: Option<&OptimizerConfig>) -> Result<MeasureReport> {
    check_base(base)?;
    let c1 = match c1 {
        Some(cfg) => Some(basis_opt::c1(rho, cfg)?),
        None => None,
    };
    Ok(MeasureReport {
        dim: rho.dim(),
        purity: purity(rho),
        c2: c2(rho),
        c_re: c_re(rho, base),
        c_skew: c_skew(rho),
        c_trace: c_trace(rho),
        c1,
        log_base: base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{c64, fidelity, gates};
    use crate::sampling::{haar_unitary, random_density, random_pure, SeededStream};

    fn mixed_qubit() -> DensityMatrix {
        DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn closed_forms_on_anchor_states() {
        for n in 2..5 {
            let mm = DensityMatrix::maximally_mixed(n);
            for v in [c2(&mm), c_re(&mm, 2.0), c_skew(&mm), c_trace(&mm)] {
                assert!(v.abs() < 1e-10);
            }
        }
        let pure = DensityMatrix::basis_state(2, 0);
        close(c2(&pure), 0.5, 1e-12);
        close(c_skew(&pure), 0.5, 1e-12);
        close(c_trace(&pure), 1.0, 1e-12);
        close(c_re(&DensityMatrix::basis_state(3, 0), 2.0), 3f64.log2(), 1e-12);

        let m = mixed_qubit();
        close(c2(&m), 0.125, 1e-12);
        close(c_re(&m, 2.0), 0.188_721_875_540_867_2, 1e-9);
        // 1 - (sqrt(.75) + .5)^2 / 2
        close(c_skew(&m), 0.066_987_298_107_780_7, 1e-9);
        close(c_trace(&m), 0.5, 1e-12);
    }

    #[test]
    fn basis_evaluators_on_hadamard() {
        let m = mixed_qubit();
        let h = gates::hadamard();
        close(basis_coherence_l2(&m, &h).unwrap(), 0.125, 1e-12);
        close(basis_coherence_re(&m, &h, 2.0).unwrap(), 0.188_721_875_540_867_2, 1e-12);
        close(basis_coherence_l1(&DensityMatrix::basis_state(2, 0), &h).unwrap(), 1.0, 1e-12);
        close(basis_coherence_l1(&DensityMatrix::maximally_mixed(3), &haar_unitary(3, &mut SeededStream::new(1))).unwrap(), 0.0, 1e-12);
    }

    #[test]
    fn eigenbasis_gives_zero() {
        let mut s = SeededStream::new(3);
        let rho = random_density(3, 3, &mut s);
        let (_, v) = rho.eigen();
        let vd = v.adjoint();
        assert!(basis_coherence_l2(&rho, &vd).unwrap().abs() < 1e-12);
        assert!(basis_coherence_re(&rho, &vd, 2.0).unwrap().abs() < 1e-10);
        assert!(basis_coherence_l1(&rho, &vd).unwrap().abs() < 1e-10);
        assert!(basis_coherence_skew(&rho, &vd).unwrap().abs() < 1e-10);
    }

    #[test]
    fn uniformizer_attains_closed_forms() {
        let mut s = SeededStream::new(8);
        for n in 1..9 {
            let rho = random_density(n, n, &mut s);
            let u = uniformizing_unitary(&rho);
            let r = rho.matrix().conjugate_by(u.matrix());
            for z in r.diagonal() {
                assert!((z.re - 1.0 / n as f64).abs() < 1e-10);
            }
            close(basis_coherence_l2(&rho, &u).unwrap(), c2(&rho), 1e-10);
            close(basis_coherence_re(&rho, &u, 2.0).unwrap(), c_re(&rho, 2.0), 1e-9);
            close(basis_coherence_skew(&rho, &u).unwrap(), c_skew(&rho), 1e-9);

            let root = matrix_sqrt(&rho).unwrap();
            let tr_root = root.trace().re;
            for z in root.conjugate_by(u.matrix()).diagonal() {
                assert!((z.re - tr_root / n as f64).abs() < 1e-10);
            }
        }
        let pure = DensityMatrix::basis_state(2, 0);
        let u = uniformizing_unitary(&pure);
        let d = pure.matrix().conjugate_by(u.matrix()).diagonal();
        close(d[0].re, 0.5, 1e-12);
        close(d[1].re, 0.5, 1e-12);
    }

    #[test]
    fn fidelity_links_skew() {
        let mut s = SeededStream::new(21);
        for n in 2..5 {
            let rho = random_density(n, n, &mut s);
            let f = fidelity(&rho, &DensityMatrix::maximally_mixed(n)).unwrap();
            close(c_skew(&rho), 1.0 - f * f, 1e-9);
        }
    }

    #[test]
    fn distance_forms_match() {
        let mut s = SeededStream::new(4);
        for n in 2..5 {
            let rho = random_density(n, n, &mut s);
            close(c2_distance(&rho), c2(&rho), 1e-12);
            close(c_re_distance(&rho, 2.0), c_re(&rho, 2.0), 1e-9);
        }
    }

    #[test]
    fn pure_states_are_maximal() {
        let mut s = SeededStream::new(12);
        for n in 2..6 {
            let rho = random_pure(n, &mut s);
            let top = 1.0 - 1.0 / n as f64;
            close(c2(&rho), top, 1e-9);
            close(c_skew(&rho), top, 1e-9);
            close(c_re(&rho, 2.0), (n as f64).log2(), 1e-9);
        }
    }

    #[test]
    fn report_fields_and_order() {
        let r = measure_report(&mixed_qubit(), 2.0, None).unwrap();
        assert!(r.c1.is_none());
        close(r.c2, r.purity - 0.5, 1e-12);
        let json = serde_json::to_string(&r).unwrap();
        let keys: Vec<&str> = ["\"dim\"", "\"purity\"", "\"c2\"", "\"c_re\"", "\"c_skew\"", "\"c_trace\"", "\"log_base\""].to_vec();
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{json}");
        assert!(!json.contains("c1"));

        let pure = measure_report(&DensityMatrix::pure(&[c64(1.0, 0.0), c64(0.0, 0.0)]).unwrap(), 2.0, None).unwrap();
        close(pure.c2, 0.5, 1e-12);
        close(pure.c_re, 1.0, 1e-12);
        close(pure.c_skew, 0.5, 1e-12);
        close(pure.c_trace, 1.0, 1e-12);

        assert!(measure_report(&mixed_qubit(), 1.0, None).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let e = basis_coherence_l2(&mixed_qubit(), &UnitaryMatrix::identity(3));
        assert!(matches!(e, Err(Error::DimensionMismatch { .. })));
    }
}
