//! Partial-transpose verdicts for a few textbook states.
//!
//! `cargo run --example witness`

use nonsep::genericity::{sample_density, sample_separable};
use nonsep::linops::ComplexMatrix;
use nonsep::separability::{separable_ball_check, witness};
use nonsep::states::{DensityOperator, DimensionProfile};

fn main() -> nonsep::Result<()> {
    let d22 = DimensionProfile::bipartite(2, 2)?;
    let h = 0.5;
    let bell = DensityOperator::new(
        d22.clone(),
        ComplexMatrix::from_real_rows(
            4,
            4,
            &[h, 0.0, 0.0, h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, h, 0.0, 0.0, h],
        )?,
    )?;
    let cases = [
        ("Bell state", bell),
        ("I/4", DensityOperator::maximally_mixed(d22.clone())),
        ("random separable 2x2", sample_separable(&d22, 3, 1)?),
        ("random 3x3 (HS)", sample_density(&DimensionProfile::bipartite(3, 3)?, None, 2)?),
        ("I/9", DensityOperator::maximally_mixed(DimensionProfile::bipartite(3, 3)?)),
    ];
    for (name, d) in cases {
        let r = witness(&d)?;
        println!(
            "{name:22} {:18} negativity={:.6} min_pt={:+.6} basis={} in_ball={}",
            r.verdict.to_string(),
            r.negativity,
            r.min_pt_eigenvalue,
            r.basis_of_verdict,
            separable_ball_check(&d)
        );
    }
    Ok(())
}
