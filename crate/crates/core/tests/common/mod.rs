#![allow(dead_code)]

#[path = "../../src/oracle.rs"]
pub mod oracle;

use nalgebra::{DMatrix, DVector};
use nonsep::genericity::{derive_seed, rng_from_seed};
use nonsep::linops::{kron_vec, ComplexMatrix, C64};
use nonsep::states::{DensityOperator, DimensionProfile, StateVector};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn gaussian_vec<R: Rng>(rng: &mut R, n: usize) -> DVector<C64> {
    DVector::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

pub fn bell_vector() -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(
        DimensionProfile::bipartite(2, 2).unwrap(),
        DVector::from_vec(vec![c(s), c(0.0), c(0.0), c(s)]),
    )
    .unwrap()
}

/// `p · Bell + (1 − p) · I/4`.
pub fn mixed_bell(p: f64) -> DensityOperator {
    let dims = DimensionProfile::bipartite(2, 2).unwrap();
    let bell = bell_vector().to_density();
    let id = DensityOperator::maximally_mixed(dims.clone());
    let m = &bell.matrix().scale(p) + &id.matrix().scale(1.0 - p);
    DensityOperator::new(dims, m).unwrap()
}

/// A unit vector on `d1 × d2 × d3` with Schmidt rank exactly `rank` across
/// `1 | (2,3)` (generically), built from `rank` random product terms.
pub fn vector_with_schmidt_rank(d1: usize, d2: usize, d3: usize, rank: usize, seed: u64) -> StateVector {
    let mut rng = rng_from_seed(seed);
    let mut amp = DVector::zeros(d1 * d2 * d3);
    for _ in 0..rank {
        amp += kron_vec(&gaussian_vec(&mut rng, d1), &gaussian_vec(&mut rng, d2 * d3));
    }
    StateVector::normalized(DimensionProfile::tripartite(d1, d2, d3).unwrap(), amp).unwrap()
}

/// Random pure state on `da × db` whose Schmidt rank is exactly `rank`.
pub fn pure_with_schmidt_rank(da: usize, db: usize, rank: usize, seed: u64) -> StateVector {
    let mut rng = rng_from_seed(seed);
    let mut amp = DVector::zeros(da * db);
    for _ in 0..rank {
        amp += kron_vec(&gaussian_vec(&mut rng, da), &gaussian_vec(&mut rng, db));
    }
    StateVector::normalized(DimensionProfile::bipartite(da, db).unwrap(), amp).unwrap()
}

pub fn seeds(base: u64, n: usize) -> impl Iterator<Item = u64> {
    (0..n as u64).map(move |i| derive_seed(base, i))
}

pub fn oracle_trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    oracle::hermitian_trace_norm(&(a.as_dmatrix() - b.as_dmatrix()))
}
