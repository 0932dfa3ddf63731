//! Seeded random generators for states, unitaries and unital channels.
//!
//! Every generator draws from a [`SeededStream`]. Streams are never shared
//! between workers; use [`SeededStream::split`] to derive independent child
//! streams from a parent seed.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::qmat::{c64, check_dims, ComplexMatrix, DensityMatrix, UnitaryMatrix, C64};

/// Algorithm identifier of the generator behind every stream.
pub const STREAM_ALGORITHM: &str = "chacha20";

/// Tolerance for the trace-preservation and unitality checks on channels.
pub const CHANNEL_TOL: f64 = 1e-9;

/// A reproducible random stream: identical seed and algorithm yield an
/// identical sample sequence.
#[derive(Clone, Debug)]
pub struct SeededStream {
    seed: u64,
    rng: ChaCha20Rng,
}

impl SeededStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, rng: ChaCha20Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn algorithm(&self) -> &'static str {
        STREAM_ALGORITHM
    }

    /// Independent child stream for worker or sample `index`.
    pub fn split(&self, index: u64) -> SeededStream {
        SeededStream::new(splitmix64(self.seed ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d))))
    }

    pub fn rng(&mut self) -> &mut ChaCha20Rng {
        &mut self.rng
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn complex_normal(&mut self) -> C64 {
        c64(self.normal(), self.normal())
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn ginibre(rows: usize, cols: usize, stream: &mut SeededStream) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(rows, cols);
    // fill row-major so the sample order does not depend on storage layout
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = stream.complex_normal();
        }
    }
    m
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary(n: usize, stream: &mut SeededStream) -> UnitaryMatrix {
    assert!(n >= 1, "haar_unitary needs n >= 1");
    let qr = ginibre(n, n, stream).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::new_unchecked(ComplexMatrix::from_dmatrix(q))
}

/// `G G^dag / Tr(G G^dag)` with `G` an `n x rank` complex Gaussian matrix.
pub fn random_density(n: usize, rank: usize, stream: &mut SeededStream) -> DensityMatrix {
    assert!(rank >= 1 && rank <= n, "random_density needs 1 <= rank <= n");
    let g = ginibre(n, rank, stream);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::new_unchecked(ComplexMatrix::from_dmatrix(w / c64(tr, 0.0)))
}

/// Projector onto a normalized complex Gaussian vector.
pub fn random_pure(n: usize, stream: &mut SeededStream) -> DensityMatrix {
    assert!(n >= 1, "random_pure needs n >= 1");
    let v: Vec<C64> = (0..n).map(|_| stream.complex_normal()).collect();
    DensityMatrix::pure(&v).expect("gaussian vector is nonzero")
}

/// Uniform point on the probability simplex (normalized exponentials).
pub fn random_probabilities(k: usize, stream: &mut SeededStream) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| stream.rng().sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// A channel in Kraus form, with its trace-preservation and unitality flags.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    dim: usize,
    ops: Vec<ComplexMatrix>,
    trace_preserving: bool,
    unital: bool,
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::InvalidArgument("channel needs at least one Kraus operator".into()))?;
        let dim = first.rows();
        for k in &ops {
            if !k.is_square() {
                return Err(Error::DimensionMismatch { expected: k.rows(), found: k.cols() });
            }
            check_dims(dim, k.rows())?;
        }
        let id = ComplexMatrix::identity(dim);
        let trace_preserving = sum_products(&ops, true).max_abs_diff(&id) <= CHANNEL_TOL;
        let unital = sum_products(&ops, false).max_abs_diff(&id) <= CHANNEL_TOL;
        Ok(Self { dim, ops, trace_preserving, unital })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    /// Largest deviation of `sum K^dag K` from the identity.
    pub fn trace_preservation_deviation(&self) -> f64 {
        sum_products(&self.ops, true).max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(n)]).expect("identity channel")
    }
}

/// `sum K^dag K` when `dagger_first`, else `sum K K^dag`.
fn sum_products(ops: &[ComplexMatrix], dagger_first: bool) -> ComplexMatrix {
    let n = ops[0].rows();
    ops.iter().fold(ComplexMatrix::zeros(n, n), |acc, k| {
        let p = if dagger_first { &k.adjoint() * k } else { k * &k.adjoint() };
        &acc + &p
    })
}

/// A mixed-unitary channel `rho -> sum p_i U_i rho U_i^dag` with its branches
/// kept explicit.
#[derive(Clone, Debug)]
pub struct MixedUnitary {
    pub branches: Vec<(f64, UnitaryMatrix)>,
}

impl MixedUnitary {
    pub fn new(branches: Vec<(f64, UnitaryMatrix)>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidArgument("mixed-unitary channel needs a branch".into()));
        }
        let total: f64 = branches.iter().map(|(p, _)| *p).sum();
        if branches.iter().any(|(p, _)| *p < 0.0) || (total - 1.0).abs() > CHANNEL_TOL {
            return Err(Error::InvalidArgument("branch weights must form a probability vector".into()));
        }
        let n = branches[0].1.dim();
        for (_, u) in &branches {
            check_dims(n, u.dim())?;
        }
        Ok(Self { branches })
    }

    pub fn dim(&self) -> usize {
        self.branches[0].1.dim()
    }

    /// Kraus operators `sqrt(p_i) U_i`.
    pub fn to_kraus(&self) -> KrausChannel {
        let ops = self.branches.iter().map(|(p, u)| u.matrix().scale(c64(p.sqrt(), 0.0))).collect();
        KrausChannel::new(ops).expect("branches share a dimension")
    }
}

pub fn random_mixed_unitary(n: usize, k: usize, stream: &mut SeededStream) -> MixedUnitary {
    assert!(k >= 1, "channel needs k >= 1 components");
    let probs = random_probabilities(k, stream);
    let branches = probs.into_iter().map(|p| (p, haar_unitary(n, stream))).collect();
    MixedUnitary { branches }
}

/// Random mixed-unitary (hence unital and trace-preserving) channel with `k`
/// Haar branches.
pub fn random_unital_channel(n: usize, k: usize, stream: &mut SeededStream) -> KrausChannel {
    random_mixed_unitary(n, k, stream).to_kraus()
}

/// `sum_i K_i rho K_i^dag`.
pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_dims(ch.dim(), rho.dim())?;
    if !ch.is_trace_preserving() {
        return Err(Error::NotTracePreserving { deviation: ch.trace_preservation_deviation() });
    }
    let n = rho.dim();
    let out = ch
        .kraus_ops()
        .iter()
        .fold(ComplexMatrix::zeros(n, n), |acc, k| &acc + &(&(k * rho.matrix()) * &k.adjoint()));
    DensityMatrix::new(out)
}
