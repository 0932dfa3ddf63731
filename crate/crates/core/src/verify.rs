//! Randomized property suites.
//!
//! Each suite draws `samples` independent cases. Case `i` uses the child
//! stream `SeededStream::new(seed).split(i)`, so a report depends only on
//! `(suite, samples, seed)` and not on how cases are spread over threads.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis_opt::{self, OptimizerConfig};
use crate::error::{Error, Result};
use crate::measures::{self, c2, c_re, c_skew, c_trace, uniformizing_unitary};
use crate::probe::{self, BlochVector};
use crate::qmat::{fidelity, purity, DensityMatrix};
use crate::sampling::{self, haar_unitary, random_density, random_mixed_unitary, random_pure, SeededStream};
use crate::swapcirc;

/// Equality tolerance for closed-form identities.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Tolerance for circuit simulation against closed forms.
pub const CIRCUIT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    ClosedForms,
    Optimality,
    Invariance,
    Convexity,
    Monotonicity,
    Purity,
    Average,
    Circuit,
    Probe,
    C1Oracle,
    Shots,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::ClosedForms,
        Suite::Optimality,
        Suite::Invariance,
        Suite::Convexity,
        Suite::Monotonicity,
        Suite::Purity,
        Suite::Average,
        Suite::Circuit,
        Suite::Probe,
        Suite::C1Oracle,
        Suite::Shots,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::ClosedForms => "closed-forms",
            Suite::Optimality => "optimality",
            Suite::Invariance => "invariance",
            Suite::Convexity => "convexity",
            Suite::Monotonicity => "monotonicity",
            Suite::Purity => "purity",
            Suite::Average => "average",
            Suite::Circuit => "circuit",
            Suite::Probe => "probe",
            Suite::C1Oracle => "c1-oracle",
            Suite::Shots => "shots",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub samples: usize,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    /// Largest observed excess over the check's bound (negative when all pass).
    pub worst_excess: f64,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "suite={} samples={} seed={} passed={} failed={} worst_excess={:.3e}",
            self.suite, self.samples, self.seed, self.passed, self.failed, self.worst_excess
        )
    }
}

/// Tracks `value - bound` over every check of one case.
struct Checks {
    worst: f64,
}

impl Checks {
    fn new() -> Self {
        Self { worst: f64::NEG_INFINITY }
    }

    /// Records `value <= bound`.
    fn le(&mut self, value: f64, bound: f64) {
        let excess = if value.is_nan() { f64::INFINITY } else { value - bound };
        self.worst = self.worst.max(excess);
    }

    /// Records `|a - b| <= tol`.
    fn close(&mut self, a: f64, b: f64, tol: f64) {
        self.le((a - b).abs(), tol);
    }
}

fn dim_for(i: usize) -> usize {
    2 + i % 3
}

fn closed_measures(rho: &DensityMatrix) -> [f64; 4] {
    [c2(rho), c_re(rho, 2.0), c_skew(rho), c_trace(rho)]
}

fn run_case(suite: Suite, i: usize, stream: &mut SeededStream) -> Result<f64> {
    let mut checks = Checks::new();
    let n = dim_for(i);
    match suite {
        Suite::ClosedForms => {
            let rho = random_density(n, n, stream);
            checks.close(c2(&rho), purity(&rho) - 1.0 / n as f64, IDENTITY_TOL);
            checks.close(measures::c2_distance(&rho), c2(&rho), IDENTITY_TOL);
            checks.close(measures::c_re_distance(&rho, 2.0), c_re(&rho, 2.0), IDENTITY_TOL);
            let f = fidelity(&rho, &DensityMatrix::maximally_mixed(n))?;
            checks.close(c_skew(&rho), 1.0 - f * f, IDENTITY_TOL);
        }
        Suite::Optimality => {
            let rank = 1 + stream.rng().random_range(0..n);
            let rho = random_density(n, rank, stream);
            let u0 = uniformizing_unitary(&rho);
            let (l2, re, skew) = (c2(&rho), c_re(&rho, 2.0), c_skew(&rho));
            checks.close(measures::basis_coherence_l2(&rho, &u0)?, l2, IDENTITY_TOL);
            checks.close(measures::basis_coherence_re(&rho, &u0, 2.0)?, re, IDENTITY_TOL);
            checks.close(measures::basis_coherence_skew(&rho, &u0)?, skew, IDENTITY_TOL);
            for _ in 0..500 {
                let u = haar_unitary(n, stream);
                checks.le(measures::basis_coherence_l2(&rho, &u)?, l2 + IDENTITY_TOL);
                checks.le(measures::basis_coherence_re(&rho, &u, 2.0)?, re + IDENTITY_TOL);
            }
        }
        Suite::Invariance => {
            let rho = random_density(n, n, stream);
            let rotated = rho.conjugate_by(&haar_unitary(n, stream))?;
            for (a, b) in closed_measures(&rho).iter().zip(closed_measures(&rotated)) {
                checks.close(*a, b, IDENTITY_TOL);
            }
        }
        Suite::Convexity => {
            let k = 2 + stream.rng().random_range(0..3);
            let weights = sampling::random_probabilities(k, stream);
            let states: Vec<DensityMatrix> = (0..k)
                .map(|_| {
                    let rank = 1 + stream.rng().random_range(0..n);
                    random_density(n, rank, stream)
                })
                .collect();
            let mix = DensityMatrix::mixture(&weights, &states)?;
            let lhs = closed_measures(&mix);
            for m in 0..4 {
                let rhs: f64 = weights.iter().zip(&states).map(|(w, s)| w * closed_measures(s)[m]).sum();
                checks.le(lhs[m], rhs + IDENTITY_TOL);
            }
        }
        Suite::Monotonicity | Suite::Purity => {
            let k = 1 + stream.rng().random_range(0..4);
            let channel = sampling::random_unital_channel(n, k, stream);
            let rho = random_density(n, 1 + stream.rng().random_range(0..n), stream);
            let out = sampling::apply_channel(&channel, &rho)?;
            if suite == Suite::Purity {
                checks.le(purity(&out), purity(&rho) + IDENTITY_TOL);
            } else {
                for (after, before) in closed_measures(&out).iter().zip(closed_measures(&rho)) {
                    checks.le(*after, before + IDENTITY_TOL);
                }
            }
        }
        Suite::Average => {
            let k = 1 + stream.rng().random_range(0..4);
            let channel = random_mixed_unitary(n, k, stream);
            let rho = random_density(n, n, stream);
            let base = closed_measures(&rho);
            for m in 0..4 {
                let mut avg = 0.0;
                for (p, u) in &channel.branches {
                    avg += p * closed_measures(&rho.conjugate_by(u)?)[m];
                }
                checks.close(avg, base[m], IDENTITY_TOL);
            }
        }
        Suite::Circuit => {
            let rho = random_density(n, n, stream);
            let k = 1 + stream.rng().random_range(0..4);
            let p = swapcirc::swap_test_probability(&rho, k)?;
            checks.close(p, (1.0 + rho.spectrum().power_sum(k as u32)) / 2.0, CIRCUIT_TOL);
            let moments = swapcirc::moments_from_circuit(&rho, n)?;
            let report = swapcirc::measures_from_moments(&moments, 2.0)?;
            checks.le(report.max_abs_diff(&measures::measure_report(&rho, 2.0, None)?), 1e-8);
        }
        Suite::Probe => {
            let bloch = random_bloch(stream)?;
            let rho = random_density(n, n, stream);
            let u = haar_unitary(n, stream);
            let out = probe::run_probe_circuit(&bloch, &rho, &u)?;
            checks.le(out.closed.matrix().max_abs_diff(out.simulated.matrix()), CIRCUIT_TOL);
            checks.close(probe::delta_c(&bloch, &rho, &u)?, probe::delta_c_simulated(&bloch, &rho, &u)?, CIRCUIT_TOL);
        }
        Suite::C1Oracle => {
            let rank = 1 + stream.rng().random_range(0..2);
            let rho = random_density(2, rank, stream);
            let cfg = OptimizerConfig { stream: stream.split(0), ..OptimizerConfig::default() };
            let radius = (2.0 * purity(&rho) - 1.0).max(0.0).sqrt();
            checks.close(basis_opt::c1(&rho, &cfg)?, radius, 1e-6);
        }
        Suite::Shots => {
            let rho = if i % 2 == 0 { random_density(n, n, stream) } else { random_pure(n, stream) };
            let shots = 100_000;
            let p = swapcirc::swap_test_probability(&rho, 2)?;
            let rec = swapcirc::sample_swap_test(&rho, 2, shots, stream)?;
            let sigma = 2.0 * (p * (1.0 - p) / shots as f64).sqrt();
            checks.le((rec.estimate - (2.0 * p - 1.0)).abs(), 5.0 * sigma + 1e-12);
        }
    }
    Ok(checks.worst)
}

/// Uniform point in the Bloch ball.
pub fn random_bloch(stream: &mut SeededStream) -> Result<BlochVector> {
    let v = [stream.normal(), stream.normal(), stream.normal()];
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let r = stream.uniform().cbrt() / norm;
    BlochVector::new(v[0] * r, v[1] * r, v[2] * r)
}

/// Runs `samples` cases of `suite` on the current rayon pool.
pub fn run_suite(suite: Suite, samples: usize, seed: u64) -> Result<SuiteReport> {
    let root = SeededStream::new(seed);
    let outcomes: Vec<Result<f64>> =
        (0..samples).into_par_iter().map(|i| run_case(suite, i, &mut root.split(i as u64))).collect();
    let mut passed = 0;
    let mut worst = f64::NEG_INFINITY;
    for o in outcomes {
        let excess = o?;
        if excess <= 0.0 {
            passed += 1;
        }
        worst = worst.max(excess);
    }
    Ok(SuiteReport { suite: suite.name().into(), samples, seed, passed, failed: samples - passed, worst_excess: worst })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn quick_suites_pass_and_repeat() {
        for s in [Suite::ClosedForms, Suite::Invariance, Suite::Monotonicity, Suite::Probe] {
            let a = run_suite(s, 20, 7).unwrap();
            assert!(a.ok(), "{a}");
            assert_eq!(a, run_suite(s, 20, 7).unwrap());
        }
    }

    #[test]
    fn bloch_samples_stay_in_ball() {
        let mut s = SeededStream::new(1);
        for _ in 0..100 {
            assert!(random_bloch(&mut s).unwrap().norm() <= 1.0);
        }
    }
}
