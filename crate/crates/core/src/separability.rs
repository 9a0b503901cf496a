//! Entanglement witnesses and structural vector tests.
//!
//! The partial-transpose witness certifies entanglement whenever the partial
//! transpose has an eigenvalue below `-1e-10`. Positivity certifies
//! separability only on `2×2`, `2×3` and `3×2`; elsewhere a positive partial
//! transpose is reported as [`Verdict::Inconclusive`].

use std::fmt;

use crate::error::Result;
use crate::linops::{self, partial_transpose, Factor, RANK_TOL};
use crate::states::{schmidt, DensityOperator, StateVector};

/// Partial-transpose eigenvalues below this certify entanglement.
pub const PPT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    EntangledCertified,
    SeparableCertified,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::EntangledCertified => "EntangledCertified",
            Verdict::SeparableCertified => "SeparableCertified",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "EntangledCertified" => Ok(Verdict::EntangledCertified),
            "SeparableCertified" => Ok(Verdict::SeparableCertified),
            "Inconclusive" => Ok(Verdict::Inconclusive),
            other => Err(format!("unknown verdict {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    pub verdict: Verdict,
    /// Sum of `|λ|` over partial-transpose eigenvalues below `-1e-10`.
    pub negativity: f64,
    pub min_pt_eigenvalue: f64,
    /// `"npt"`, `"ppt-sufficient"` or `"ppt-undecided"`.
    pub basis_of_verdict: &'static str,
}

fn ppt_is_sufficient(da: usize, db: usize) -> bool {
    matches!((da, db), (2, 2) | (2, 3) | (3, 2))
}

/// Peres partial-transpose test on a bipartite density operator.
pub fn witness(d: &DensityOperator) -> Result<WitnessReport> {
    let (da, db) = d.dims().as_pair()?;
    let pt = partial_transpose(d.matrix(), (da, db), Factor::Second)?;
    let spectrum = linops::hermitian_eig(&pt)?;
    let min_pt_eigenvalue = spectrum.min();
    let negativity: f64 = spectrum
        .eigenvalues
        .iter()
        .filter(|&&l| l < -PPT_TOL)
        .fold(0.0, |acc, l| acc - l);
    let (verdict, basis_of_verdict) = if min_pt_eigenvalue < -PPT_TOL {
        (Verdict::EntangledCertified, "npt")
    } else if ppt_is_sufficient(da, db) {
        (Verdict::SeparableCertified, "ppt-sufficient")
    } else {
        (Verdict::Inconclusive, "ppt-undecided")
    };
    Ok(WitnessReport {
        verdict,
        negativity,
        min_pt_eigenvalue,
        basis_of_verdict,
    })
}

/// Schmidt coefficients across the cut after the first factor, or `None`
/// for single-factor vectors.
fn first_cut_coefficients(v: &StateVector) -> Option<(Vec<f64>, usize)> {
    if v.dims().len() < 2 {
        return None;
    }
    let sc = schmidt(v, 1).ok()?;
    Some((sc.coefficients, sc.right_dim))
}

/// Whether `{(A ⊗ I ⊗ I) v}` spans the whole space: full Schmidt rank
/// `d2·d3` across the cut `1 | (2,3)`. Needs `d1 ≥ d2·d3` to ever hold.
pub fn is_one_cyclic(v: &StateVector, tol: f64) -> bool {
    match first_cut_coefficients(v) {
        Some((coefficients, rest)) => linops::numerical_rank(&coefficients, tol) == rest,
        None => false,
    }
}

/// Whether `(I ⊗ B) v = 0` forces `B = 0` for operators `B` on `H2 ⊗ H3`:
/// all `d2·d3` Schmidt coefficients across `1 | (2,3)` exceed the threshold.
pub fn is_separating(v: &StateVector, tol: f64) -> bool {
    match first_cut_coefficients(v) {
        Some((coefficients, rest)) => {
            let cutoff = linops::rank_cutoff(&coefficients, tol);
            coefficients.len() == rest && coefficients.iter().all(|&a| a > cutoff)
        }
        None => false,
    }
}

/// [`is_one_cyclic`] at the default rank threshold.
pub fn one_cyclic(v: &StateVector) -> bool {
    is_one_cyclic(v, RANK_TOL)
}

/// [`is_separating`] at the default rank threshold.
pub fn separating(v: &StateVector) -> bool {
    is_separating(v, RANK_TOL)
}

/// Sufficient separability test: every state with `Tr(ρ²) ≤ 1/(n − 1)`,
/// `n = d_a·d_b`, lies in the separable ball around `I/n`.
pub fn separable_ball_check(d: &DensityOperator) -> bool {
    let n = d.dims().total();
    if n <= 1 {
        return true;
    }
    d.purity() <= 1.0 / (n as f64 - 1.0)
}
