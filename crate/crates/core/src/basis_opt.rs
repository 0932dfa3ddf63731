//! Maximization of basis-dependent coherence over the unitary group.
//!
//! Unitaries are charted by the Hermitian exponential `U = exp(iH(theta))`
//! with `n^2` real parameters: `n` diagonal entries, then the real and
//! imaginary part of each upper-triangular entry in row-major order.
//!
//! The search is multi-restart gradient ascent. Each step works in the chart
//! centred at the current iterate (`U <- exp(iH(t g)) U`), with a central
//! finite-difference gradient `g` and a backtracking (Armijo) line search, so
//! the objective trace of a restart never decreases. Restart 0 starts from
//! the uniformizing unitary; the remaining restarts start from Haar samples.

use rayon::prelude::*;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::measures::{self, off_diagonal_l1, uniformizing_unitary};
use crate::qmat::{c64, eigh, matrix_sqrt, purity, von_neumann_entropy, ComplexMatrix, DensityMatrix, UnitaryMatrix, C64};
use crate::sampling::{haar_unitary, SeededStream};

/// Seed used when no seed is supplied.
pub const DEFAULT_SEED: u64 = 0x00C0_4E4E;

/// Improvements larger than this over the uniform-diagonal start are logged.
pub const FINDING_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct OptimizerConfig {
    /// Number of Haar-seeded restarts (the uniformizer restart is extra).
    pub restarts: usize,
    pub max_iters: usize,
    pub step_init: f64,
    /// Objective stall threshold per iteration.
    pub tol: f64,
    pub fd_step: f64,
    pub stream: SeededStream,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 16, max_iters: 2000, step_init: 0.1, tol: 1e-10, fd_step: 1e-6, stream: SeededStream::new(DEFAULT_SEED) }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { stream: SeededStream::new(seed), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !(self.step_init > 0.0) || !(self.fd_step > 0.0) {
            return Err(Error::InvalidArgument("optimizer tol, step_init and fd_step must be > 0".into()));
        }
        Ok(())
    }
}

/// Coherence objectives that can be maximized over bases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Objective {
    /// Off-diagonal l1 norm of `U rho U^dag`.
    L1,
    /// `||U rho U^dag - 1/n||_1` (entry-wise).
    L1Distance,
    /// `Tr rho^2 - sum |(U rho U^dag)_ii|^2`.
    L2,
    /// `S(sigma_U) - S(rho)`.
    RelativeEntropy { base: f64 },
    /// Summed skew information in the basis `U`.
    Skew,
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::L1 => "l1",
            Objective::L1Distance => "l1_distance",
            Objective::L2 => "l2",
            Objective::RelativeEntropy { .. } => "relative_entropy",
            Objective::Skew => "skew",
        }
    }

    /// Closed-form maximum, where one is known.
    pub fn closed_form(&self, rho: &DensityMatrix) -> Option<f64> {
        match *self {
            Objective::L2 => Some(measures::c2(rho)),
            Objective::RelativeEntropy { base } => Some(measures::c_re(rho, base)),
            Objective::Skew => Some(measures::c_skew(rho)),
            Objective::L1 | Objective::L1Distance => None,
        }
    }
}

/// The state-dependent matrices an objective needs, rotated together.
struct Evaluator {
    objective: Objective,
    n: usize,
    bases: Vec<ComplexMatrix>,
    purity: f64,
    entropy: f64,
}

impl Evaluator {
    fn new(rho: &DensityMatrix, objective: Objective) -> Result<Self> {
        let mut bases = vec![rho.matrix().clone()];
        if objective == Objective::Skew {
            bases.push(matrix_sqrt(rho)?);
        }
        let entropy = match objective {
            Objective::RelativeEntropy { base } => von_neumann_entropy(rho, base),
            _ => 0.0,
        };
        Ok(Self { objective, n: rho.dim(), bases, purity: purity(rho), entropy })
    }

    fn rotate(&self, u: &ComplexMatrix) -> Vec<ComplexMatrix> {
        self.bases.iter().map(|b| b.conjugate_by(u)).collect()
    }

    fn value(&self, rotated: &[ComplexMatrix]) -> f64 {
        let r = &rotated[0];
        match self.objective {
            Objective::L1 => off_diagonal_l1(r),
            Objective::L1Distance => {
                let inv = 1.0 / self.n as f64;
                off_diagonal_l1(r) + r.diagonal().iter().map(|z| (z - c64(inv, 0.0)).norm()).sum::<f64>()
            }
            Objective::L2 => self.purity - r.diagonal().iter().map(|z| z.norm_sqr()).sum::<f64>(),
            Objective::RelativeEntropy { base } => {
                let ln_base = base.ln();
                let dephased: f64 =
                    -r.diagonal().iter().map(|z| z.re).filter(|&p| p > 0.0).map(|p| p * p.ln() / ln_base).sum::<f64>();
                dephased - self.entropy
            }
            Objective::Skew => {
                let s = &rotated[1];
                r.diagonal().iter().zip(s.diagonal()).map(|(p, q)| p.re - q.re * q.re).sum()
            }
        }
    }

    fn value_at(&self, u: &UnitaryMatrix) -> f64 {
        self.value(&self.rotate(u.matrix()))
    }
}

fn param_count_error(found: usize) -> Error {
    Error::ParameterCount { expected: "a perfect square n^2 with n >= 1".into(), found }
}

/// Hermitian matrix from `n^2` chart parameters.
pub fn hermitian_from_params(theta: &[f64]) -> Result<ComplexMatrix> {
    let n = (theta.len() as f64).sqrt().round() as usize;
    if n == 0 || n * n != theta.len() {
        return Err(param_count_error(theta.len()));
    }
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        h.set(i, i, c64(theta[i], 0.0));
    }
    let mut p = n;
    for j in 0..n {
        for k in (j + 1)..n {
            let z = c64(theta[p], theta[p + 1]);
            h.set(j, k, z);
            h.set(k, j, z.conj());
            p += 2;
        }
    }
    Ok(h)
}

/// `exp(i H)` for Hermitian `H`, via its eigendecomposition.
pub fn exp_i_hermitian(h: &ComplexMatrix) -> Result<UnitaryMatrix> {
    let (values, vecs) = eigh(h)?;
    let v = vecs.matrix();
    let n = values.len();
    let mut phases = ComplexMatrix::zeros(n, n);
    for (i, &l) in values.iter().enumerate() {
        phases.set(i, i, C64::from_polar(1.0, l));
    }
    UnitaryMatrix::new(&(v * &phases) * &v.adjoint())
}

/// `U = exp(i H(theta))`.
pub fn unitary_from_params(theta: &[f64]) -> Result<UnitaryMatrix> {
    exp_i_hermitian(&hermitian_from_params(theta)?)
}

/// Chart parameters of `H` (inverse of [`hermitian_from_params`]).
pub fn params_from_hermitian(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.rows();
    let mut theta: Vec<f64> = (0..n).map(|i| h.get(i, i).re).collect();
    for j in 0..n {
        for k in (j + 1)..n {
            theta.push(h.get(j, k).re);
            theta.push(h.get(j, k).im);
        }
    }
    theta
}

#[derive(Clone, Debug)]
pub struct OptimizationResult {
    pub value: f64,
    pub unitary: UnitaryMatrix,
    /// Iterations used by the winning restart.
    pub iterations: usize,
    pub converged: bool,
    /// Index of the winning restart (0 is the uniformizer start).
    pub restart: usize,
    /// Objective value at the uniformizing unitary.
    pub uniform_start_value: f64,
    /// Objective value after every accepted step of the winning restart.
    pub history: Vec<f64>,
}

struct RestartOutcome {
    value: f64,
    unitary: UnitaryMatrix,
    iterations: usize,
    converged: bool,
    history: Vec<f64>,
}

/// Precomputed `exp(+-i h G_j)` for each chart generator `G_j`.
struct Probes {
    plus: Vec<ComplexMatrix>,
    minus: Vec<ComplexMatrix>,
}

impl Probes {
    fn new(n: usize, h: f64) -> Result<Self> {
        let m = n * n;
        let mut plus = Vec::with_capacity(m);
        let mut minus = Vec::with_capacity(m);
        for j in 0..m {
            let mut theta = vec![0.0; m];
            theta[j] = h;
            plus.push(unitary_from_params(&theta)?.matrix().clone());
            theta[j] = -h;
            minus.push(unitary_from_params(&theta)?.matrix().clone());
        }
        Ok(Self { plus, minus })
    }
}

fn ascend(eval: &Evaluator, probes: &Probes, start: UnitaryMatrix, cfg: &OptimizerConfig) -> Result<RestartOutcome> {
    const ARMIJO: f64 = 1e-4;
    const MIN_STEP: f64 = 1e-14;
    const MAX_STEP: f64 = 10.0;

    let mut u = start.matrix().clone();
    let mut cur = eval.rotate(&u);
    let mut f = eval.value(&cur);
    let mut history = vec![f];
    let mut step = cfg.step_init;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < cfg.max_iters {
        iterations += 1;
        let grad: Vec<f64> = probes
            .plus
            .iter()
            .zip(&probes.minus)
            .map(|(p, m)| {
                let fp = eval.value(&cur.iter().map(|c| c.conjugate_by(p)).collect::<Vec<_>>());
                let fm = eval.value(&cur.iter().map(|c| c.conjugate_by(m)).collect::<Vec<_>>());
                (fp - fm) / (2.0 * cfg.fd_step)
            })
            .collect();
        let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
        if gnorm2.sqrt() < 1e-12 {
            converged = true;
            break;
        }
        let direction = hermitian_from_params(&grad)?;

        let mut accepted = None;
        while step >= MIN_STEP {
            let w = exp_i_hermitian(&direction.scale(c64(step, 0.0)))?;
            let cand: Vec<ComplexMatrix> = cur.iter().map(|c| c.conjugate_by(w.matrix())).collect();
            let fc = eval.value(&cand);
            if fc >= f + ARMIJO * step * gnorm2 {
                accepted = Some((w, cand, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((w, cand, fc)) = accepted else {
            converged = true;
            break;
        };
        let gain = fc - f;
        u = w.matrix() * &u;
        cur = cand;
        f = fc;
        history.push(f);
        step = (step * 2.0).min(MAX_STEP);
        if gain < cfg.tol {
            converged = true;
            break;
        }
    }

    // re-project onto the unitary group to remove accumulated rounding
    let unitary = reunitarize(&u)?;
    let value = eval.value_at(&unitary);
    Ok(RestartOutcome { value, unitary, iterations, converged, history })
}

/// Polar projection `U (U^dag U)^{-1/2}`.
fn reunitarize(u: &ComplexMatrix) -> Result<UnitaryMatrix> {
    let gram = &u.adjoint() * u;
    let (values, vecs) = eigh(&gram.hermitian_part())?;
    let v = vecs.matrix();
    let inv_root = ComplexMatrix::from_real_diagonal(&values.iter().map(|l| 1.0 / l.sqrt()).collect::<Vec<_>>());
    UnitaryMatrix::new(&(u * &(v * &inv_root)) * &v.adjoint())
}

/// Multi-restart maximization of `objective` over all bases.
pub fn maximize_over_basis(rho: &DensityMatrix, objective: Objective, cfg: &OptimizerConfig) -> Result<OptimizationResult> {
    cfg.validate()?;
    if let Objective::RelativeEntropy { base } = objective {
        measures::check_base(base)?;
    }
    let n = rho.dim();
    let eval = Evaluator::new(rho, objective)?;
    let probes = Probes::new(n, cfg.fd_step)?;
    let uniform = uniformizing_unitary(rho);
    let uniform_start_value = eval.value_at(&uniform);

    let outcomes: Vec<Result<RestartOutcome>> = (0..=cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 { uniform.clone() } else { haar_unitary(n, &mut cfg.stream.split(r as u64)) };
            ascend(&eval, &probes, start, cfg)
        })
        .collect();

    let mut best: Option<(usize, RestartOutcome)> = None;
    for (r, outcome) in outcomes.into_iter().enumerate() {
        let outcome = outcome?;
        // strict comparison keeps the lowest index on ties
        if best.as_ref().is_none_or(|(_, b)| outcome.value > b.value) {
            best = Some((r, outcome));
        }
    }
    let (restart, b) = best.expect("at least the uniformizer restart runs");
    Ok(OptimizationResult {
        value: b.value,
        unitary: b.unitary,
        iterations: b.iterations,
        converged: b.converged,
        restart,
        uniform_start_value,
        history: b.history,
    })
}

/// `max_U sum_{i != j} |(U rho U^dag)_ij|`.
pub fn c1(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<f64> {
    let res = maximize_over_basis(rho, Objective::L1, cfg)?;
    if res.value > res.uniform_start_value + FINDING_THRESHOLD {
        log::warn!(
            "l1 optimum {} exceeds the uniform-diagonal value {} (restart {})",
            res.value,
            res.uniform_start_value,
            res.restart
        );
    }
    Ok(res.value)
}

/// `max_U ||U rho U^dag - 1/n||_1`.
pub fn c1_distance(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<f64> {
    Ok(maximize_over_basis(rho, Objective::L1Distance, cfg)?.value)
}

/// Tolerance for closed-form dominance and attainment checks.
pub const CLOSED_FORM_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct ObjectiveCheck {
    pub objective: &'static str,
    pub closed_form: f64,
    pub uniformizer_value: f64,
    pub sampled_max: f64,
    pub optimized_max: f64,
    /// `closed_form - max(sampled_max, optimized_max)`.
    pub gap: f64,
}

#[derive(Debug, Error)]
pub enum ValidationError {
    #[error("{objective}: value {found} at witness exceeds closed form {closed_form}")]
    Exceeded { objective: &'static str, closed_form: f64, found: f64, witness: UnitaryMatrix },
    #[error("{objective}: uniformizing unitary gives {found}, closed form is {closed_form}")]
    NotAttained { objective: &'static str, closed_form: f64, found: f64, witness: UnitaryMatrix },
    #[error(transparent)]
    Numeric(#[from] Error),
}

/// Checks that sampled and optimized maxima of the l2, relative-entropy and
/// skew objectives never beat their closed forms, and that the uniformizing
/// unitary attains them.
pub fn validate_closed_forms(
    rho: &DensityMatrix,
    n_samples: usize,
    base: f64,
    cfg: &OptimizerConfig,
) -> std::result::Result<Vec<ObjectiveCheck>, ValidationError> {
    let objectives = [Objective::L2, Objective::RelativeEntropy { base }, Objective::Skew];
    let uniform = uniformizing_unitary(rho);
    let mut sample_stream = cfg.stream.split(u64::MAX);
    let samples: Vec<UnitaryMatrix> = (0..n_samples).map(|_| haar_unitary(rho.dim(), &mut sample_stream)).collect();

    let mut checks = Vec::with_capacity(objectives.len());
    for objective in objectives {
        let eval = Evaluator::new(rho, objective)?;
        let closed_form = objective.closed_form(rho).expect("closed form exists");
        let name = objective.name();

        let uniformizer_value = eval.value_at(&uniform);
        if (uniformizer_value - closed_form).abs() > CLOSED_FORM_TOL {
            return Err(ValidationError::NotAttained { objective: name, closed_form, found: uniformizer_value, witness: uniform });
        }

        let mut sampled_max = f64::NEG_INFINITY;
        for u in &samples {
            let v = eval.value_at(u);
            if v > closed_form + CLOSED_FORM_TOL {
                return Err(ValidationError::Exceeded { objective: name, closed_form, found: v, witness: u.clone() });
            }
            sampled_max = sampled_max.max(v);
        }

        let opt = maximize_over_basis(rho, objective, cfg)?;
        if opt.value > closed_form + CLOSED_FORM_TOL {
            return Err(ValidationError::Exceeded { objective: name, closed_form, found: opt.value, witness: opt.unitary });
        }
        let best = sampled_max.max(opt.value);
        checks.push(ObjectiveCheck {
            objective: name,
            closed_form,
            uniformizer_value,
            sampled_max,
            optimized_max: opt.value,
            gap: closed_form - best,
        });
    }
    Ok(checks)
}
