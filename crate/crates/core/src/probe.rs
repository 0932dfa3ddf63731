//! DQC1-style probing schemes.
//!
//! A probe qubit `rho_p = (1 + P.sigma)/2` passes through a Hadamard and then
//! controls a unitary `U` on a system `rho_s`. Its reduced state afterwards is
//!
//! ```text
//! rho_pf = 1/2 [ 1 + P1                     (P3 + i P2) Tr(rho_s U^dag) ]
//!              [ (P3 - i P2) Tr(rho_s U)    1 - P1                      ]
//! ```
//!
//! and the drop of its l2 total coherence,
//! `dC_U = (P2^2 + P3^2)/2 * (1 - |Tr rho_s U|^2)`, is the cost of that use of
//! `U`. A scheme's cost sums `dC` over its controlled unitaries.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::c2;
use crate::qmat::{c64, check_dims, gates, partial_trace_matrix, ComplexMatrix, DensityMatrix, Keep, UnitaryMatrix, C64};
use crate::swapcirc::{controlled_unitary, generalized_swap};

pub const BLOCH_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        let v = Self([p1, p2, p3]);
        if !v.0.iter().all(|x| x.is_finite()) || v.norm() > 1.0 + BLOCH_TOL {
            return Err(Error::InvalidBloch { norm: v.norm() });
        }
        Ok(v)
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `P2^2 + P3^2`, the part of the probe that can pick up information.
    pub fn transverse_sq(&self) -> f64 {
        self.0[1] * self.0[1] + self.0[2] * self.0[2]
    }
}

/// `(1 + P1 sigma_x + P2 sigma_y + P3 sigma_z) / 2`.
pub fn probe_state(p: &BlochVector) -> DensityMatrix {
    let [p1, p2, p3] = p.0;
    let m = ComplexMatrix::from_row_major(
        2,
        2,
        vec![c64((1.0 + p3) / 2.0, 0.0), c64(p1 / 2.0, -p2 / 2.0), c64(p1 / 2.0, p2 / 2.0), c64((1.0 - p3) / 2.0, 0.0)],
    )
    .expect("2x2");
    DensityMatrix::new_unchecked(m)
}

/// `Tr(rho U)`.
pub fn overlap_trace(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<C64> {
    check_dims(rho.dim(), u.dim())?;
    Ok((rho.matrix() * u.matrix()).trace())
}

#[derive(Clone, Debug)]
pub struct ProbeOutcome {
    /// Reduced probe state from the closed form.
    pub closed: DensityMatrix,
    /// Reduced probe state from simulating the joint circuit.
    pub simulated: DensityMatrix,
}

/// Closed-form probe state after the controlled-`U` step.
pub fn final_probe_closed(p: &BlochVector, system: &DensityMatrix, u: &UnitaryMatrix) -> Result<DensityMatrix> {
    let [p1, p2, p3] = p.0;
    let t = overlap_trace(system, u)?;
    let upper = c64(p3, p2) * t.conj() / 2.0;
    let m = ComplexMatrix::from_row_major(2, 2, vec![c64((1.0 + p1) / 2.0, 0.0), upper, upper.conj(), c64((1.0 - p1) / 2.0, 0.0)])?;
    Ok(DensityMatrix::new_unchecked(m))
}

/// Partial trace over the system of `(1 (+) U)(H rho_p H (x) rho_s)(1 (+) U^dag)`.
pub fn final_probe_simulated(p: &BlochVector, system: &DensityMatrix, u: &UnitaryMatrix) -> Result<DensityMatrix> {
    check_dims(system.dim(), u.dim())?;
    let h = gates::hadamard();
    let rotated = probe_state(p).matrix().conjugate_by(h.matrix());
    let joint = rotated.kron(system.matrix());
    let evolved = joint.conjugate_by(controlled_unitary(u).matrix());
    let reduced = partial_trace_matrix(&evolved, (2, system.dim()), Keep::A)?;
    Ok(DensityMatrix::new_unchecked(reduced))
}

/// Runs both routes to the final probe state.
pub fn run_probe_circuit(p: &BlochVector, system: &DensityMatrix, u: &UnitaryMatrix) -> Result<ProbeOutcome> {
    if p.transverse_sq() == 0.0 {
        log::warn!("P2 and P3 both vanish: the probe cannot pick up Tr(rho_s U)");
    }
    if u.matrix().max_abs_diff(&ComplexMatrix::identity(u.dim())) == 0.0 {
        log::warn!("controlled unitary is the identity: the probe learns nothing");
    }
    Ok(ProbeOutcome { closed: final_probe_closed(p, system, u)?, simulated: final_probe_simulated(p, system, u)? })
}

/// `(P2^2 + P3^2)/2 * (1 - |Tr rho_s U|^2)`.
pub fn delta_c(p: &BlochVector, system: &DensityMatrix, u: &UnitaryMatrix) -> Result<f64> {
    let t = overlap_trace(system, u)?;
    Ok(p.transverse_sq() / 2.0 * (1.0 - t.norm_sqr()))
}

/// `C2(rho_p) - C2(rho_pf)` from the simulated circuit.
pub fn delta_c_simulated(p: &BlochVector, system: &DensityMatrix, u: &UnitaryMatrix) -> Result<f64> {
    let before = c2(&probe_state(p));
    let after = c2(&final_probe_simulated(p, system, u)?);
    // |Tr rho_s U| <= 1, so the probe never gains coherence
    debug_assert!(after <= before + 1e-12, "probe coherence increased: {before} -> {after}");
    Ok(before - after)
}

#[derive(Clone, Debug)]
pub struct ProbeScheme {
    pub bloch: BlochVector,
    pub system: DensityMatrix,
    pub unitaries: Vec<UnitaryMatrix>,
}

impl ProbeScheme {
    pub fn new(bloch: BlochVector, system: DensityMatrix, unitaries: Vec<UnitaryMatrix>) -> Result<Self> {
        for u in &unitaries {
            check_dims(system.dim(), u.dim())?;
        }
        Ok(Self { bloch, system, unitaries })
    }

    pub fn deltas(&self) -> Vec<f64> {
        self.unitaries.iter().map(|u| delta_c(&self.bloch, &self.system, u).expect("dimensions checked on construction")).collect()
    }

    /// True when no step can change the probe: `P2 = P3 = 0` or every
    /// `|Tr rho_s U_k| = 1` (within `tol`).
    pub fn is_trivial(&self, tol: f64) -> bool {
        self.bloch.transverse_sq() <= tol
            || self.unitaries.iter().all(|u| {
                let t = overlap_trace(&self.system, u).expect("dimensions checked on construction");
                (t.norm() - 1.0).abs() <= tol
            })
    }
}

/// How the cost of a scheme is accumulated.
#[derive(Clone, Debug)]
pub enum CostMode {
    /// One term per listed controlled unitary.
    PerUnitary,
    /// One term per gate; `gates[k]` is a user-supplied decomposition of `U_k`.
    PerGate(Vec<Vec<UnitaryMatrix>>),
}

/// Sum of `dC` over the scheme's controlled unitaries.
pub fn probe_cost(scheme: &ProbeScheme) -> f64 {
    scheme.deltas().iter().sum()
}

pub fn probe_cost_with(scheme: &ProbeScheme, mode: &CostMode) -> Result<f64> {
    match mode {
        CostMode::PerUnitary => Ok(probe_cost(scheme)),
        CostMode::PerGate(decomposition) => {
            if decomposition.len() != scheme.unitaries.len() {
                return Err(Error::InvalidArgument(format!(
                    "gate decomposition lists {} unitaries, scheme has {}",
                    decomposition.len(),
                    scheme.unitaries.len()
                )));
            }
            let mut total = 0.0;
            for gate in decomposition.iter().flatten() {
                total += delta_c(&scheme.bloch, &scheme.system, gate)?;
            }
            Ok(total)
        }
    }
}

/// DQC1 on `n` qubits: returns `Tr U / 2^n` and `P3^2/2 (1 - |Tr U / 2^n|^2)`.
pub fn dqc1_delta(u: &UnitaryMatrix, p3: f64) -> Result<(C64, f64)> {
    let dim = u.dim();
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    if !(p3.abs() <= 1.0) {
        return Err(Error::InvalidBloch { norm: p3.abs() });
    }
    let t = u.matrix().trace() / dim as f64;
    Ok((t, p3 * p3 / 2.0 * (1.0 - t.norm_sqr())))
}

/// Overlap measurement: `Tr rho1 rho2` and `(1 - (Tr rho1 rho2)^2) / 2`.
pub fn qom_overlap(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<(f64, f64)> {
    check_dims(rho1.dim(), rho2.dim())?;
    let overlap = (rho1.matrix() * rho2.matrix()).trace().re;
    Ok((overlap, 0.5 * (1.0 - overlap * overlap)))
}

/// The overlap scheme as a general probe: `P = (0,0,1)`, `rho_s = rho1 (x) rho2`, `U = V_2`.
pub fn qom_as_scheme(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<ProbeScheme> {
    check_dims(rho1.dim(), rho2.dim())?;
    let swap = generalized_swap(2, rho1.dim())?;
    ProbeScheme::new(BlochVector::new(0.0, 0.0, 1.0)?, rho1.tensor(rho2), vec![swap])
}
