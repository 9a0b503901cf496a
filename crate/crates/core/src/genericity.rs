//! Approximating arbitrary states by nonseparable ones.
//!
//! [`separating_perturbation`] fills every vanishing Schmidt slot of a
//! tripartite vector across `1 | (2,3)` with a small common amplitude, which
//! makes the vector separating for operators on `H2 ⊗ H3` (hence 1-cyclic).
//! [`entangling_perturbation`] chains purification, that perturbation and the
//! reduction map: since `‖Φ(u) − Φ(v)‖₁ ≤ 2‖u − v‖`, a vector budget of `ε/2`
//! keeps the reduced state within `ε` of the input.
//!
//! # Randomness
//!
//! Samplers take an explicit 64-bit seed and draw from a ChaCha20 stream
//! (`ChaCha20Rng::seed_from_u64`). Gaussian variates come from
//! `rand_distr::StandardNormal`; a complex Gaussian is `(g_re + i g_im)/√2`
//! with the real part drawn first. Matrices are filled row-major. Per-sample
//! seeds in sweeps come from [`derive_seed`].

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linops::{self, ComplexMatrix, C64, RANK_TOL};
use crate::separability::{self, WitnessReport};
use crate::states::{
    phi, purify, schmidt, trace_distance, DensityOperator, DimensionProfile, StateVector,
};

/// Fraction of the vector budget targeted by the fill-amplitude bisection.
const BUDGET_MARGIN: f64 = 1e-6;

/// Ceiling on the targeted vector distance. Distances approach `√2` only as
/// the fill amplitude diverges.
const MAX_TARGET_DISTANCE: f64 = 1.0;

/// How a vector was nudged to become separating.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationPlan {
    /// Trace-norm budget on the reduced state; always `2 · vector_budget`.
    pub epsilon: f64,
    /// Common amplitude written into every filled slot, before global
    /// renormalization. `None` when no slot needed filling.
    pub delta: Option<f64>,
    /// Schmidt slots (descending order) whose coefficient was zero.
    pub filled_slots: Vec<usize>,
    pub vector_budget: f64,
}

/// Returns a separating vector `u` with `‖u − v‖ ≤ vector_budget`.
///
/// Nonzero Schmidt coefficients are kept, every zero one (below the relative
/// rank threshold) is replaced by a common `δ`, and the result is normalized.
/// `δ` is bisected so that `‖u − v‖ = vector_budget · (1 − 10⁻⁶)`, capped at a
/// distance of 1.
pub fn separating_perturbation(
    v: &StateVector,
    vector_budget: f64,
) -> Result<(StateVector, PerturbationPlan)> {
    if !(vector_budget > 0.0 && vector_budget.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "vector budget {vector_budget} must be positive"
        )));
    }
    let dims = v.dims();
    let Some(d3) = dims.d3() else {
        return Err(Error::DimensionMismatch(format!(
            "separating perturbation needs three factors, got {dims}"
        )));
    };
    let required = dims.d2() * d3;
    if dims.d1() < required {
        return Err(Error::InsufficientDimension {
            d1: dims.d1(),
            required,
        });
    }
    let sc = schmidt(v, 1)?;
    let cutoff = linops::rank_cutoff(&sc.coefficients, RANK_TOL);
    let filled_slots: Vec<usize> = (0..sc.coefficients.len())
        .filter(|&i| sc.coefficients[i] <= cutoff)
        .collect();
    let mut plan = PerturbationPlan {
        epsilon: 2.0 * vector_budget,
        delta: None,
        filled_slots,
        vector_budget,
    };
    if plan.filled_slots.is_empty() {
        return Ok((v.clone(), plan));
    }

    let n = dims.total();
    let mut kept = DVector::<C64>::zeros(n);
    let mut fill = DVector::<C64>::zeros(n);
    let mut kept_weight = 0.0;
    for (i, &a) in sc.coefficients.iter().enumerate() {
        let term = linops::kron_vec(&sc.left[i], &sc.right[i]);
        if plan.filled_slots.contains(&i) {
            fill += term;
        } else {
            kept += term * C64::new(a, 0.0);
            kept_weight += a * a;
        }
    }
    let slots = plan.filled_slots.len() as f64;
    let candidate = |delta: f64| -> DVector<C64> {
        let norm = (kept_weight + slots * delta * delta).sqrt();
        (&kept + &fill * C64::new(delta, 0.0)).unscale(norm)
    };
    let distance = |delta: f64| (candidate(delta) - v.amplitudes()).norm();

    let target = (vector_budget * (1.0 - BUDGET_MARGIN)).min(MAX_TARGET_DISTANCE);
    if distance(0.0) >= target {
        return Err(Error::InvalidParameter(format!(
            "vector budget {vector_budget:e} is below numerical resolution"
        )));
    }
    let mut hi = target.max(1e-300);
    while distance(hi) < target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if distance(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = StateVector::normalized(dims.clone(), candidate(lo))?;
    if !separability::separating(&u) {
        return Err(Error::InvalidParameter(format!(
            "vector budget {vector_budget:e} too small to lift {} zero Schmidt slots",
            plan.filled_slots.len()
        )));
    }
    plan.delta = Some(lo);
    Ok((u, plan))
}

/// Bookkeeping for one run of [`entangling_perturbation`].
#[derive(Clone, Debug)]
pub struct DensityWitnessRecord {
    pub input_dims: DimensionProfile,
    /// Dimensions after enlarging the first factor.
    pub enlarged_dims: DimensionProfile,
    /// Ancilla dimension, equal to the rank of the input.
    pub ancilla_dim: usize,
    pub epsilon: f64,
    /// Trace distance between the embedded input and the output.
    pub achieved_trace_distance: f64,
    /// `‖u − v‖` between purification and its perturbation.
    pub vector_distance: f64,
    pub filled_slots: usize,
    pub verdict: WitnessReport,
    /// Provenance label of the input (e.g. its sampler seed).
    pub seed: u64,
    pub elapsed: Duration,
}

impl DensityWitnessRecord {
    /// Equality on every field except `elapsed`, bit-exact on floats.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.input_dims == other.input_dims
            && self.enlarged_dims == other.enlarged_dims
            && self.ancilla_dim == other.ancilla_dim
            && self.epsilon.to_bits() == other.epsilon.to_bits()
            && self.achieved_trace_distance.to_bits() == other.achieved_trace_distance.to_bits()
            && self.vector_distance.to_bits() == other.vector_distance.to_bits()
            && self.filled_slots == other.filled_slots
            && self.verdict.verdict == other.verdict.verdict
            && self.verdict.negativity.to_bits() == other.verdict.negativity.to_bits()
            && self.verdict.min_pt_eigenvalue.to_bits() == other.verdict.min_pt_eigenvalue.to_bits()
            && self.seed == other.seed
    }
}

/// Maps `d` on `H1 ⊗ H2` to a nonseparable state on `H1' ⊗ H2` within trace
/// distance `epsilon` of `d` embedded into `H1'`.
///
/// With `r = rank(d)`, the first factor grows to `max(d1, d2·r)` by zero
/// padding, the embedded state is purified with an `r`-dimensional ancilla,
/// the purification is made separating with budget `epsilon/2`, and the
/// result is reduced back. `seed` is carried into the record untouched.
pub fn entangling_perturbation(
    d: &DensityOperator,
    epsilon: f64,
    seed: u64,
) -> Result<(DensityOperator, DensityWitnessRecord)> {
    let start = Instant::now();
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "epsilon {epsilon} must be positive"
        )));
    }
    let (d1, d2) = d.dims().as_pair()?;
    let rank = d.rank();
    let embedded = d.embed_first(d1.max(d2 * rank))?;
    let v = purify(&embedded, rank)?;
    let (u, plan) = separating_perturbation(&v, epsilon / 2.0)?;
    let perturbed = phi(&u)?;
    let achieved = trace_distance(&embedded, &perturbed)?;
    if achieved >= epsilon {
        return Err(Error::BudgetExceeded { achieved, epsilon });
    }
    let verdict = separability::witness(&perturbed)?;
    let record = DensityWitnessRecord {
        input_dims: d.dims().clone(),
        enlarged_dims: embedded.dims().clone(),
        ancilla_dim: rank,
        epsilon,
        achieved_trace_distance: achieved,
        vector_distance: u.distance(&v)?,
        filled_slots: plan.filled_slots.len(),
        verdict,
        seed,
        elapsed: start.elapsed(),
    };
    Ok((perturbed, record))
}

/// `(‖Φ(u) − Φ(v)‖₁, 2‖u − v‖)`; the first never exceeds the second.
pub fn continuity_gap(u: &StateVector, v: &StateVector) -> Result<(f64, f64)> {
    let rhs = 2.0 * u.distance(v)?;
    let lhs = trace_distance(&phi(u)?, &phi(v)?)?;
    Ok((lhs, rhs))
}

/// SplitMix64 finalizer applied to `base + (index + 1) · 0x9E3779B97F4A7C15`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<C64> {
    DVector::from_iterator(n, (0..n).map(|_| complex_gaussian(rng)))
}

/// Haar-random unit vector.
pub fn sample_state(dims: &DimensionProfile, seed: u64) -> StateVector {
    let mut rng = rng_from_seed(seed);
    let v = gaussian_vector(&mut rng, dims.total());
    StateVector::from_trusted(dims.clone(), v)
}

/// Induced (Hilbert–Schmidt when full width) random density operator
/// `GG*/Tr(GG*)`, with `G` an `n × rank` complex Ginibre matrix.
pub fn sample_density(
    dims: &DimensionProfile,
    rank: Option<usize>,
    seed: u64,
) -> Result<DensityOperator> {
    let n = dims.total();
    let width = rank.unwrap_or(n);
    if width == 0 || width > n {
        return Err(Error::BadRank {
            rank: width,
            dim: n,
        });
    }
    let mut rng = rng_from_seed(seed);
    let entries: Vec<C64> = (0..n * width).map(|_| complex_gaussian(&mut rng)).collect();
    let g = DMatrix::from_row_slice(n, width, &entries);
    let rho = &g * g.adjoint();
    Ok(DensityOperator::from_trusted(
        dims.clone(),
        ComplexMatrix::from_raw(rho),
    ))
}

/// `Σ λ_i P_{x_i} ⊗ P_{y_i}` with flat-Dirichlet weights (normalized `Exp(1)`
/// draws, all drawn first) and Haar-random factors `x_i`, `y_i` drawn in
/// that order per component.
pub fn sample_separable(dims: &DimensionProfile, k: usize, seed: u64) -> Result<DensityOperator> {
    let (da, db) = dims.as_pair()?;
    if k == 0 {
        return Err(Error::InvalidParameter("component count must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let raw: Vec<f64> = (0..k).map(|_| rng.sample(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let n = da * db;
    let mut acc = DMatrix::<C64>::zeros(n, n);
    for w in raw {
        let x = gaussian_vector(&mut rng, da).normalize();
        let y = gaussian_vector(&mut rng, db).normalize();
        let xy = linops::kron_vec(&x, &y);
        acc += (&xy * xy.adjoint()) * C64::new(w / total, 0.0);
    }
    Ok(DensityOperator::from_trusted(
        dims.clone(),
        ComplexMatrix::from_raw(acc),
    ))
}
