use cohere::basis_opt::{c1, maximize_over_basis, Objective, OptimizerConfig};
use cohere::io::{matrix_to_json, parse_matrix};
use cohere::measures::{c2, c_re, c_skew, c_trace};
use cohere::probe::{self, BlochVector, ProbeScheme};
use cohere::qmat::{c64, eigh, fidelity, partial_trace, ComplexMatrix, DensityMatrix, Keep, C64};
use cohere::sampling::{haar_unitary, random_density, random_mixed_unitary, random_pure, SeededStream};
use cohere::swapcirc::{moments_from_circuit, spectrum_from_moments};
use proptest::prelude::*;

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-1.0f64..1.0, n * n * 2).prop_map(move |xs| {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let k = 2 * (i * n + j);
                m.set(i, j, c64(xs[k], xs[k + 1]));
            }
        }
        m.hermitian_part()
    })
}

fn sized_hermitian() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..=8).prop_flat_map(hermitian)
}

/// Dimension, rank and seed for a library-sampled state.
fn state_params() -> impl Strategy<Value = (usize, usize, u64)> {
    (2usize..=4).prop_flat_map(|n| (Just(n), 1..=n, any::<u64>()))
}

fn measures4(rho: &DensityMatrix) -> [f64; 4] {
    [c2(rho), c_re(rho, 2.0), c_skew(rho), c_trace(rho)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eigh_reconstructs(h in sized_hermitian()) {
        let (values, vecs) = eigh(&h).unwrap();
        prop_assert!(values.windows(2).all(|w| w[0] >= w[1]));
        let v = vecs.matrix();
        let rebuilt = &(v * &ComplexMatrix::from_real_diagonal(&values)) * &v.adjoint();
        prop_assert!(rebuilt.max_abs_diff(&h) <= 1e-9);
        prop_assert!(vecs.unitarity_deviation() <= 1e-9);
        let trace: f64 = values.iter().sum();
        prop_assert!((trace - h.trace().re).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn measures_are_unitarily_invariant((n, rank, seed) in state_params()) {
        let mut s = SeededStream::new(seed);
        let rho = random_density(n, rank, &mut s);
        let rotated = rho.conjugate_by(&haar_unitary(n, &mut s)).unwrap();
        for (a, b) in measures4(&rho).iter().zip(measures4(&rotated)) {
            prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn measures_are_bounded((n, rank, seed) in state_params()) {
        let rho = random_density(n, rank, &mut SeededStream::new(seed));
        let nf = n as f64;
        let [l2, re, skew, tr] = measures4(&rho);
        prop_assert!((0.0..=1.0 - 1.0 / nf + 1e-12).contains(&l2));
        prop_assert!((0.0..=nf.log2() + 1e-12).contains(&re));
        prop_assert!((0.0..=1.0 - 1.0 / nf + 1e-12).contains(&skew));
        prop_assert!((0.0..=2.0 * (1.0 - 1.0 / nf) + 1e-12).contains(&tr));
    }

    #[test]
    fn measures_are_convex((n, _rank, seed) in state_params(), w in 0.0f64..=1.0) {
        let mut s = SeededStream::new(seed);
        let a = random_density(n, 1 + seed as usize % n, &mut s);
        let b = random_density(n, n, &mut s);
        let mix = DensityMatrix::mixture(&[w, 1.0 - w], &[a.clone(), b.clone()]).unwrap();
        let (ma, mb, mm) = (measures4(&a), measures4(&b), measures4(&mix));
        for i in 0..4 {
            prop_assert!(mm[i] <= w * ma[i] + (1.0 - w) * mb[i] + 1e-9);
        }
    }

    #[test]
    fn mixed_unitary_channels_do_not_increase_measures((n, rank, seed) in state_params(), k in 1usize..5) {
        let mut s = SeededStream::new(seed);
        let rho = random_density(n, rank, &mut s);
        let ch = random_mixed_unitary(n, k, &mut s);
        let kraus = ch.to_kraus();
        prop_assert!(kraus.is_trace_preserving() && kraus.is_unital());
        let out = cohere::sampling::apply_channel(&kraus, &rho).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() <= 1e-10);
        for (after, before) in measures4(&out).iter().zip(measures4(&rho)) {
            prop_assert!(*after <= before + 1e-9);
        }

        // each branch is a unitary rotation, so the weighted average is unchanged
        let base = measures4(&rho);
        for m in 0..4 {
            let avg: f64 = ch.branches.iter().map(|(p, u)| p * measures4(&rho.conjugate_by(u).unwrap())[m]).sum();
            prop_assert!((avg - base[m]).abs() <= 1e-9);
        }
    }

    #[test]
    fn fidelity_is_bounded_symmetric_and_invariant((n, rank, seed) in state_params()) {
        let mut s = SeededStream::new(seed);
        let a = random_density(n, rank, &mut s);
        let b = random_density(n, n, &mut s);
        let f = fidelity(&a, &b).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-9).contains(&f));
        prop_assert!((f - fidelity(&b, &a).unwrap()).abs() <= 1e-8);
        let u = haar_unitary(n, &mut s);
        let g = fidelity(&a.conjugate_by(&u).unwrap(), &b.conjugate_by(&u).unwrap()).unwrap();
        prop_assert!((f - g).abs() <= 1e-8);
        prop_assert!((fidelity(&b, &b).unwrap() - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn partial_trace_keeps_trace_and_factors(da in 1usize..=3, db in 1usize..=3, seed in any::<u64>()) {
        let mut s = SeededStream::new(seed);
        let a = random_density(da, da, &mut s);
        let b = random_density(db, db, &mut s);
        let joint = a.tensor(&b);
        let ra = partial_trace(&joint, (da, db), Keep::A).unwrap();
        let rb = partial_trace(&joint, (da, db), Keep::B).unwrap();
        prop_assert!(ra.matrix().max_abs_diff(a.matrix()) <= 1e-12);
        prop_assert!(rb.matrix().max_abs_diff(b.matrix()) <= 1e-12);

        let mixed = random_density(da * db, da * db, &mut s);
        let r = partial_trace(&mixed, (da, db), Keep::B).unwrap();
        prop_assert!((r.matrix().trace().re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn moments_recover_spectrum((n, rank, seed) in state_params()) {
        let rho = random_density(n, rank, &mut SeededStream::new(seed));
        let m = moments_from_circuit(&rho, n).unwrap();
        prop_assert!(m.moments().windows(2).all(|w| w[1] <= w[0] + 1e-12));
        let recovered = spectrum_from_moments(&m).unwrap();
        let direct = rho.spectrum();
        for (a, b) in recovered.values().iter().zip(direct.values()) {
            prop_assert!((a - b).abs() <= 1e-6, "{:?} vs {:?}", recovered.values(), direct.values());
        }
    }

    #[test]
    fn matrix_files_round_trip(h in sized_hermitian()) {
        prop_assert_eq!(parse_matrix(&matrix_to_json(&h)).unwrap(), h);
    }

    #[test]
    fn probe_cost_ignores_global_phase((n, rank, seed) in state_params(), phi in 0.0f64..std::f64::consts::TAU) {
        let mut s = SeededStream::new(seed);
        let rho = random_density(n, rank, &mut s);
        let u = haar_unitary(n, &mut s);
        let p = BlochVector::new(0.3, -0.5, 0.6).unwrap();
        let shifted = u.scale_phase(phi);
        let (a, b) = (probe::delta_c(&p, &rho, &u).unwrap(), probe::delta_c(&p, &rho, &shifted).unwrap());
        prop_assert!((a - b).abs() <= 1e-12);
        prop_assert!((b - probe::delta_c_simulated(&p, &rho, &shifted).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn zero_cost_exactly_when_trivial(seed in any::<u64>(), transverse in any::<bool>(), eigen in any::<bool>()) {
        let mut s = SeededStream::new(seed);
        let n = 2 + (seed % 3) as usize;
        let p = if transverse { BlochVector::new(0.0, 0.6, 0.8).unwrap() } else { BlochVector::new(0.7, 0.0, 0.0).unwrap() };
        // a basis state under a diagonal U has |Tr rho U| = 1
        let (system, u) = if eigen {
            let mut d = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                d.set(i, i, C64::from_polar(1.0, std::f64::consts::TAU * s.uniform()));
            }
            (DensityMatrix::basis_state(n, 0), cohere::UnitaryMatrix::new(d).unwrap())
        } else {
            (random_density(n, n, &mut s), haar_unitary(n, &mut s))
        };
        let scheme = ProbeScheme::new(p, system, vec![u]).unwrap();
        let cost = probe::probe_cost(&scheme);
        prop_assert_eq!(scheme.is_trivial(1e-12), cost.abs() <= 1e-12, "cost {}", cost);
        prop_assert_eq!(scheme.is_trivial(1e-12), !transverse || eigen);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn c1_is_unitarily_invariant_on_qubits(seed in any::<u64>()) {
        let mut s = SeededStream::new(seed);
        let rho = random_density(2, 2, &mut s);
        let rotated = rho.conjugate_by(&haar_unitary(2, &mut s)).unwrap();
        let cfg = OptimizerConfig::with_seed(seed);
        let (a, b) = (c1(&rho, &cfg).unwrap(), c1(&rotated, &cfg).unwrap());
        prop_assert!((a - b).abs() <= 1e-5, "{a} vs {b}");
    }
}

#[test]
fn pure_qutrit_reaches_uniform_superposition_bound() {
    let mut s = SeededStream::new(11);
    let psi = random_pure(3, &mut s);
    let cfg = OptimizerConfig::default();
    let value = c1(&psi, &cfg).unwrap();
    assert!((value - 2.0).abs() <= 1e-6, "{value}");

    // brute force: no sampled basis exceeds (sum |a_i|)^2 - 1 <= n - 1
    let mut best: f64 = 0.0;
    for _ in 0..2000 {
        let r = psi.conjugate_by(&haar_unitary(3, &mut s)).unwrap();
        let mut off = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    off += r.matrix().get(i, j).norm();
                }
            }
        }
        best = best.max(off);
    }
    assert!(best <= 2.0 + 1e-12 && best > 1.5, "{best}");
}

#[test]
fn l2_optimizer_meets_closed_form() {
    let mut s = SeededStream::new(3);
    for n in 2..=4 {
        let rho = random_density(n, n, &mut s);
        let r = maximize_over_basis(&rho, Objective::L2, &OptimizerConfig::with_seed(5)).unwrap();
        assert!((r.value - c2(&rho)).abs() <= 1e-8, "n={n}: {} vs {}", r.value, c2(&rho));
    }
}
