//! Pure and mixed states on tensor-product spaces, the reduction map, the
//! purification that inverts it, Schmidt decompositions, and the
//! conjugate-renormalize calculus `D ↦ ADA*/‖ADA*‖₁` on mixtures.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linops::{
    self, hermitian_eig, trace_norm, ComplexMatrix, HermitianSpectrum, C64, RANK_TOL,
};

/// Upper bound on the product of factor dimensions.
pub const MAX_TOTAL_DIM: usize = 4096;

/// Unit-norm tolerance for state vectors.
pub const UNIT_TOL: f64 = 1e-10;

/// Trace tolerance for density operators.
pub const TRACE_TOL: f64 = 1e-10;

/// Eigenvalues in `[-NEGATIVITY_CLIP, 0)` are clipped to zero on construction.
pub const NEGATIVITY_CLIP: f64 = 1e-9;

/// Eigenvalues at or below this are exact zeros when counting purification rank.
pub const PURIFY_RANK_TOL: f64 = 1e-12;

/// Trace norms at or below this count as the zero operator.
pub const ZERO_TRACE_NORM: f64 = 1e-14;

/// Dimensions of the tensor factors, in order. One to three factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DimensionProfile {
    factors: Vec<usize>,
}

impl DimensionProfile {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        Self::with_max(factors, MAX_TOTAL_DIM)
    }

    pub fn with_max(factors: Vec<usize>, max_total: usize) -> Result<Self> {
        if factors.is_empty() || factors.len() > 3 {
            return Err(Error::DimensionMismatch(format!(
                "expected one to three factors, got {}",
                factors.len()
            )));
        }
        if factors.contains(&0) {
            return Err(Error::DimensionMismatch(format!(
                "zero factor dimension in {factors:?}"
            )));
        }
        let total = factors
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&t| t <= max_total);
        if total.is_none() {
            return Err(Error::DimensionMismatch(format!(
                "total dimension of {factors:?} exceeds {max_total}"
            )));
        }
        Ok(Self { factors })
    }

    pub fn bipartite(d1: usize, d2: usize) -> Result<Self> {
        Self::new(vec![d1, d2])
    }

    pub fn tripartite(d1: usize, d2: usize, d3: usize) -> Result<Self> {
        Self::new(vec![d1, d2, d3])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn d1(&self) -> usize {
        self.factors[0]
    }

    pub fn d2(&self) -> usize {
        self.factors.get(1).copied().unwrap_or(1)
    }

    pub fn d3(&self) -> Option<usize> {
        self.factors.get(2).copied()
    }

    pub fn total(&self) -> usize {
        self.factors.iter().product()
    }

    pub fn is_bipartite(&self) -> bool {
        self.factors.len() == 2
    }

    /// `(d_a, d_b)` of a bipartite profile.
    pub fn as_pair(&self) -> Result<(usize, usize)> {
        match self.factors[..] {
            [a, b] => Ok((a, b)),
            _ => Err(Error::DimensionMismatch(format!(
                "expected a bipartite space, got factors {:?}",
                self.factors
            ))),
        }
    }

    fn keep(&self, keep: &[usize]) -> Result<Self> {
        let keep = linops::validate_keep(&self.factors, keep)?;
        if keep.is_empty() {
            return Self::new(vec![1]);
        }
        Self::new(keep.iter().map(|&f| self.factors[f]).collect())
    }
}

impl std::fmt::Display for DimensionProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

/// A unit vector in a tensor-product space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dims: DimensionProfile,
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Requires unit norm within [`UNIT_TOL`].
    pub fn new(dims: DimensionProfile, amplitudes: DVector<C64>) -> Result<Self> {
        check_len(&dims, amplitudes.len())?;
        check_finite(&amplitudes)?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidState(format!("norm {norm} is not 1")));
        }
        Ok(Self { dims, amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(dims: DimensionProfile, amplitudes: DVector<C64>) -> Result<Self> {
        check_len(&dims, amplitudes.len())?;
        check_finite(&amplitudes)?;
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Ok(Self {
            dims,
            amplitudes: amplitudes.unscale(norm),
        })
    }

    /// `x_1 ⊗ x_2 ⊗ …`, each factor normalized first.
    pub fn product(factors: &[DVector<C64>]) -> Result<Self> {
        let dims = DimensionProfile::new(factors.iter().map(|f| f.len()).collect())?;
        let mut amp = DVector::from_element(1, C64::new(1.0, 0.0));
        for f in factors {
            let norm = f.norm();
            if norm == 0.0 {
                return Err(Error::InvalidState("zero factor".into()));
            }
            amp = linops::kron_vec(&amp, &f.unscale(norm));
        }
        Self::normalized(dims, amp)
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dims: DimensionProfile, index: usize) -> Result<Self> {
        let n = dims.total();
        if index >= n {
            return Err(Error::DimensionMismatch(format!(
                "basis index {index} out of range for dimension {n}"
            )));
        }
        let mut amp = DVector::zeros(n);
        amp[index] = C64::new(1.0, 0.0);
        Ok(Self { dims, amplitudes: amp })
    }

    pub(crate) fn from_trusted(dims: DimensionProfile, amplitudes: DVector<C64>) -> Self {
        let norm = amplitudes.norm();
        Self {
            dims,
            amplitudes: amplitudes.unscale(norm),
        }
    }

    pub fn dims(&self) -> &DimensionProfile {
        &self.dims
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        same_dims(&self.dims, &other.dims)?;
        Ok((&self.amplitudes - &other.amplitudes).norm())
    }

    /// `|v⟩⟨v|` as a density operator on the full space.
    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::from_trusted(
            self.dims.clone(),
            ComplexMatrix::outer(&self.amplitudes),
        )
    }
}

fn check_len(dims: &DimensionProfile, len: usize) -> Result<()> {
    if len != dims.total() {
        return Err(Error::DimensionMismatch(format!(
            "{len} amplitudes for dims {dims}"
        )));
    }
    Ok(())
}

fn check_finite(v: &DVector<C64>) -> Result<()> {
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn same_dims(a: &DimensionProfile, b: &DimensionProfile) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(format!("{a} vs {b}")));
    }
    Ok(())
}

/// A positive, trace-one Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    dims: DimensionProfile,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates and cleans up a candidate density matrix.
    ///
    /// The matrix is symmetrized; eigenvalues in `[-1e-9, 0)` are clipped to
    /// zero and the trace renormalized. Larger negativity, a trace off by more
    /// than `1e-10`, or a Hermiticity defect above `1e-9` are errors.
    pub fn new(dims: DimensionProfile, matrix: ComplexMatrix) -> Result<Self> {
        let n = dims.total();
        if !matrix.is_square() || matrix.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for dims {dims}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let spectrum = hermitian_eig(&matrix).map_err(|e| match e {
            Error::NotHermitian { deviation, .. } => {
                Error::InvalidDensity(format!("Hermiticity defect {deviation:e}"))
            }
            other => other,
        })?;
        let trace: f64 = spectrum.eigenvalues.iter().sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {trace} is not 1")));
        }
        let min = spectrum.min();
        if min < -NEGATIVITY_CLIP {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        let matrix = if min < 0.0 {
            let mut clipped = spectrum;
            for lambda in clipped.eigenvalues.iter_mut() {
                *lambda = lambda.max(0.0);
            }
            let total: f64 = clipped.eigenvalues.iter().sum();
            for lambda in clipped.eigenvalues.iter_mut() {
                *lambda /= total;
            }
            clipped.reconstruct().hermitian_part()
        } else {
            matrix.hermitian_part()
        };
        Ok(Self { dims, matrix })
    }

    /// Wraps a matrix that is positive and trace-one by construction, up to
    /// roundoff; the trace is renormalized.
    pub(crate) fn from_trusted(dims: DimensionProfile, matrix: ComplexMatrix) -> Self {
        let tr = matrix.trace().re;
        Self {
            dims,
            matrix: matrix.hermitian_part().scale(1.0 / tr),
        }
    }

    /// `I/n`.
    pub fn maximally_mixed(dims: DimensionProfile) -> Self {
        let n = dims.total();
        let matrix = ComplexMatrix::from_diagonal(&vec![1.0 / n as f64; n]);
        Self { dims, matrix }
    }

    /// `D_1 ⊗ D_2 ⊗ …` with the factors' profiles concatenated.
    pub fn tensor(&self, other: &DensityOperator) -> Result<Self> {
        let mut factors = self.dims.factors().to_vec();
        factors.extend_from_slice(other.dims.factors());
        let dims = DimensionProfile::new(factors)?;
        Ok(Self::from_trusted(
            dims,
            linops::kron(&self.matrix, &other.matrix),
        ))
    }

    pub fn dims(&self) -> &DimensionProfile {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> HermitianSpectrum {
        linops::hermitian_eig_unchecked(self.matrix.as_dmatrix())
    }

    /// Number of eigenvalues above [`PURIFY_RANK_TOL`].
    pub fn rank(&self) -> usize {
        self.spectrum()
            .eigenvalues
            .iter()
            .filter(|&&l| l > PURIFY_RANK_TOL)
            .count()
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Embeds the first factor isometrically into dimension `new_d1 ≥ d1`,
    /// placing the old basis at the leading positions (zero padding).
    pub fn embed_first(&self, new_d1: usize) -> Result<Self> {
        let d1 = self.dims.d1();
        if new_d1 < d1 {
            return Err(Error::DimensionMismatch(format!(
                "cannot embed dimension {d1} into {new_d1}"
            )));
        }
        let mut factors = self.dims.factors().to_vec();
        factors[0] = new_d1;
        let dims = DimensionProfile::new(factors)?;
        let n = dims.total();
        let old = self.dims.total();
        // The tail factors are unchanged, so old composite indices keep their
        // positions and occupy the leading block.
        let mut m = DMatrix::zeros(n, n);
        m.view_mut((0, 0), (old, old)).copy_from(self.matrix.as_dmatrix());
        Ok(Self {
            dims,
            matrix: ComplexMatrix::from_raw(m),
        })
    }
}

/// Reduced density operator on the factors listed in `keep` (0-based):
/// the unique `D` with `⟨v, (A ⊗ I) v⟩ = Tr(D A)`.
pub fn reduce(v: &StateVector, keep: &[usize]) -> Result<DensityOperator> {
    let dims = v.dims.keep(keep)?;
    let keep = linops::validate_keep(v.dims.factors(), keep)?;
    let kept_dim = dims.total();
    let traced_dim = v.dims.total() / kept_dim;
    let mut reshaped = DMatrix::zeros(kept_dim, traced_dim);
    for (i, (k, t)) in linops::kept_and_traced(v.dims.factors(), &keep)
        .into_iter()
        .enumerate()
    {
        reshaped[(k, t)] = v.amplitudes[i];
    }
    let rho = &reshaped * reshaped.adjoint();
    Ok(DensityOperator::from_trusted(dims, ComplexMatrix::from_raw(rho)))
}

/// The reduction map `Φ`: traces the ancilla out of a vector on `H1⊗H2⊗H3`.
pub fn phi(v: &StateVector) -> Result<DensityOperator> {
    if v.dims.len() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "reduction map needs three factors, got {}",
            v.dims
        )));
    }
    reduce(v, &[0, 1])
}

/// A vector `v` on `H1⊗H2⊗H3` with `Φ(v) = d`.
///
/// `v = Σ √λ_i (x_i ⊗ e_i)` over the eigenpairs of `d` with `λ_i > 1e-12`,
/// eigenvalues descending and `e_i` the standard basis of the ancilla.
pub fn purify(d: &DensityOperator, d3: usize) -> Result<StateVector> {
    let (d1, d2) = d.dims.as_pair()?;
    let spectrum = d.spectrum();
    let rank = spectrum
        .eigenvalues
        .iter()
        .filter(|&&l| l > PURIFY_RANK_TOL)
        .count();
    if d3 < rank {
        return Err(Error::InsufficientAncilla { rank, ancilla: d3 });
    }
    let dims = DimensionProfile::tripartite(d1, d2, d3)?;
    let n12 = d1 * d2;
    let mut amp = DVector::zeros(n12 * d3);
    for k in 0..rank {
        let weight = spectrum.eigenvalues[k].sqrt();
        for i in 0..n12 {
            amp[i * d3 + k] = spectrum.eigenvectors[(i, k)] * weight;
        }
    }
    Ok(StateVector::from_trusted(dims, amp))
}

/// Schmidt decomposition `v = Σ a_i (x_i ⊗ y_i)` across a contiguous cut.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Number of leading factors on the left of the cut.
    pub split: usize,
    pub left_dim: usize,
    pub right_dim: usize,
    /// `min(left_dim, right_dim)` values, descending; trailing ones may be zero.
    pub coefficients: Vec<f64>,
    pub left: Vec<DVector<C64>>,
    pub right: Vec<DVector<C64>>,
}

impl SchmidtDecomposition {
    pub fn rank(&self, tol: f64) -> usize {
        linops::numerical_rank(&self.coefficients, tol)
    }

    pub fn reconstruct(&self) -> DVector<C64> {
        let mut out = DVector::zeros(self.left_dim * self.right_dim);
        for ((a, x), y) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            out += linops::kron_vec(x, y) * C64::new(*a, 0.0);
        }
        out
    }
}

/// Decomposes `v` across the cut after its first `split` factors.
pub fn schmidt(v: &StateVector, split: usize) -> Result<SchmidtDecomposition> {
    let factors = v.dims.factors();
    if split == 0 || split >= factors.len() {
        return Err(Error::DimensionMismatch(format!(
            "cut after {split} factors of {}",
            v.dims
        )));
    }
    let left_dim: usize = factors[..split].iter().product();
    let right_dim: usize = factors[split..].iter().product();
    let reshaped = DMatrix::from_row_slice(left_dim, right_dim, v.amplitudes.as_slice());
    let dec = linops::svd(&ComplexMatrix::from_raw(reshaped));
    let k = dec.singular_values.len();
    let left = orthonormal_columns(&dec.left, &dec.singular_values);
    // M = U Σ V*, so M_ij = Σ a_k U_ik conj(V_jk) and y_k = conj(V[:, k]).
    let right_raw = dec.right.map(|z| z.conj());
    let right = orthonormal_columns(&right_raw, &dec.singular_values);
    debug_assert_eq!(left.len(), k);
    Ok(SchmidtDecomposition {
        split,
        left_dim,
        right_dim,
        coefficients: dec.singular_values,
        left,
        right,
    })
}

/// Columns of `basis`, with those paired to numerically-zero singular values
/// re-orthonormalized against the rest. Those directions are arbitrary in
/// the decomposition, but callers fill them, so they must be a genuine
/// orthonormal completion.
fn orthonormal_columns(basis: &DMatrix<C64>, singular_values: &[f64]) -> Vec<DVector<C64>> {
    let rank = linops::numerical_rank(singular_values, RANK_TOL);
    let n = basis.nrows();
    let mut out: Vec<DVector<C64>> = (0..rank).map(|k| basis.column(k).into_owned()).collect();
    let mut candidates = (rank..basis.ncols())
        .map(|k| basis.column(k).into_owned())
        .chain((0..n).map(|i| {
            let mut e = DVector::zeros(n);
            e[i] = C64::new(1.0, 0.0);
            e
        }));
    while out.len() < basis.ncols() {
        let Some(mut c) = candidates.next() else { break };
        for _ in 0..2 {
            for q in &out {
                let proj = q.dotc(&c);
                c -= q * proj;
            }
        }
        let norm = c.norm();
        if norm > 1e-6 {
            out.push(c.unscale(norm));
        }
    }
    out
}

/// Result of `D ↦ ADA*/‖ADA*‖₁`: a density operator, or the zero operator
/// when `ADA*` vanishes.
#[derive(Clone, Debug, PartialEq)]
pub enum Conjugated {
    Density(DensityOperator),
    Zero,
}

impl Conjugated {
    pub fn density(&self) -> Option<&DensityOperator> {
        match self {
            Conjugated::Density(d) => Some(d),
            Conjugated::Zero => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Conjugated::Zero)
    }
}

/// `ADA*`, the unnormalized conjugation.
fn conjugate(d: &DensityOperator, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() || a.rows() != d.matrix.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on a space of dimension {}",
            a.rows(),
            a.cols(),
            d.matrix.rows()
        )));
    }
    Ok(&(a * &d.matrix) * &a.adjoint())
}

/// `ADA*/‖ADA*‖₁`, or [`Conjugated::Zero`] when `‖ADA*‖₁ ≤ 1e-14`.
///
/// `a` acts on the whole space of `d`; build `A ⊗ I` with [`linops::kron`].
pub fn conjugate_renormalize(d: &DensityOperator, a: &ComplexMatrix) -> Result<Conjugated> {
    let image = conjugate(d, a)?;
    let norm = trace_norm(&image);
    if norm <= ZERO_TRACE_NORM {
        return Ok(Conjugated::Zero);
    }
    Ok(Conjugated::Density(DensityOperator::from_trusted(
        d.dims.clone(),
        image.scale(1.0 / norm),
    )))
}

/// Weights `λ_i > 0` summing to one, paired with density operators on a
/// common space.
#[derive(Clone, Debug)]
pub struct MixtureEnsemble {
    weights: Vec<f64>,
    components: Vec<DensityOperator>,
}

impl MixtureEnsemble {
    pub fn new(weights: Vec<f64>, components: Vec<DensityOperator>) -> Result<Self> {
        if weights.is_empty() || weights.len() != components.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} weights for {} components",
                weights.len(),
                components.len()
            )));
        }
        if weights.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
            return Err(Error::InvalidEnsemble("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}")));
        }
        let dims = components[0].dims();
        if let Some(bad) = components.iter().find(|c| c.dims() != dims) {
            return Err(Error::DimensionMismatch(format!(
                "component on {} in an ensemble on {dims}",
                bad.dims()
            )));
        }
        Ok(Self {
            weights,
            components,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[DensityOperator] {
        &self.components
    }

    pub fn dims(&self) -> &DimensionProfile {
        self.components[0].dims()
    }
}

/// `Σ λ_i D_i`.
pub fn mix(ens: &MixtureEnsemble) -> DensityOperator {
    let n = ens.dims().total();
    let mut acc = DMatrix::zeros(n, n);
    for (w, c) in ens.weights.iter().zip(&ens.components) {
        acc += c.matrix.as_dmatrix() * C64::new(*w, 0.0);
    }
    DensityOperator::from_trusted(ens.dims().clone(), ComplexMatrix::from_raw(acc))
}

/// A mixture pushed through `D ↦ D^A`.
#[derive(Clone, Debug)]
pub struct Pushforward {
    /// `λ_i^A = λ_i ‖A D_i A*‖₁ / ‖A D A*‖₁`; zero where `D_i^A` vanishes.
    pub weights: Vec<f64>,
    pub components: Vec<Conjugated>,
}

impl Pushforward {
    /// `Σ λ_i^A D_i^A`.
    pub fn recombine(&self) -> ComplexMatrix {
        let n = self
            .components
            .iter()
            .find_map(|c| c.density())
            .map(|d| d.matrix.rows())
            .expect("at least one surviving component");
        let mut acc = DMatrix::zeros(n, n);
        for (w, c) in self.weights.iter().zip(&self.components) {
            if let Conjugated::Density(d) = c {
                acc += d.matrix.as_dmatrix() * C64::new(*w, 0.0);
            }
        }
        ComplexMatrix::from_raw(acc)
    }
}

/// Decomposes `D^A` for `D = mix(ens)` as the mixture `Σ λ_i^A D_i^A`.
pub fn pushforward_weights(ens: &MixtureEnsemble, a: &ComplexMatrix) -> Result<Pushforward> {
    let total = trace_norm(&conjugate(&mix(ens), a)?);
    if total <= ZERO_TRACE_NORM {
        return Err(Error::ZeroImage(total));
    }
    let mut weights = Vec::with_capacity(ens.weights.len());
    let mut components = Vec::with_capacity(ens.weights.len());
    for (w, d) in ens.weights.iter().zip(&ens.components) {
        let image = conjugate(d, a)?;
        let norm = trace_norm(&image);
        if norm <= ZERO_TRACE_NORM {
            weights.push(0.0);
            components.push(Conjugated::Zero);
        } else {
            weights.push(w * norm / total);
            components.push(Conjugated::Density(DensityOperator::from_trusted(
                d.dims.clone(),
                image.scale(1.0 / norm),
            )));
        }
    }
    Ok(Pushforward {
        weights,
        components,
    })
}

/// `‖a − b‖₁`.
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    same_dims(&a.dims, &b.dims)?;
    Ok(trace_norm(&(&a.matrix - &b.matrix)))
}
