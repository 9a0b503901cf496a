//! Conjugating a mixture by an operator: D ↦ ADA*/‖ADA*‖₁ and how the mixture
//! weights transform.
//!
//! `cargo run --example conjugation`

use nonsep::genericity::sample_density;
use nonsep::linops::{kron, trace_norm, ComplexMatrix};
use nonsep::states::{conjugate_renormalize, mix, pushforward_weights, DimensionProfile, MixtureEnsemble};

fn main() -> nonsep::Result<()> {
    let dims = DimensionProfile::bipartite(2, 2)?;
    let comps = (0..3)
        .map(|i| sample_density(&dims, Some(1 + i), 100 + i as u64))
        .collect::<nonsep::Result<Vec<_>>>()?;
    let ens = MixtureEnsemble::new(vec![0.5, 0.3, 0.2], comps)?;

    // A local filter on the first factor.
    let a = kron(
        &ComplexMatrix::from_real_rows(2, 2, &[1.0, 0.0, 0.0, 0.2])?,
        &ComplexMatrix::identity(2),
    );
    let push = pushforward_weights(&ens, &a)?;
    println!("weights before: {:?}", ens.weights());
    println!("weights after:  {:.6?}", push.weights);

    let direct = conjugate_renormalize(&mix(&ens), &a)?;
    let direct = direct.density().expect("filter is invertible");
    println!(
        "|sum of conjugated components - conjugated mixture|_1 = {:.2e}",
        trace_norm(&(&push.recombine() - direct.matrix()))
    );
    Ok(())
}
