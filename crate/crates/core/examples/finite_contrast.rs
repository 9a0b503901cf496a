//! In fixed finite dimension the separable states contain a ball around I/n,
//! so small perturbations of I/4 stay separable. Walk the family
//! p·Bell + (1−p)·I/4 and compare the ball test with the witness.
//!
//! `cargo run --example finite_contrast`

use nonsep::linops::ComplexMatrix;
use nonsep::separability::{separable_ball_check, witness};
use nonsep::states::{DensityOperator, DimensionProfile};

fn main() -> nonsep::Result<()> {
    let dims = DimensionProfile::bipartite(2, 2)?;
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let (a, b) = ((1.0 + p) / 4.0, (1.0 - p) / 4.0);
        let m = ComplexMatrix::from_real_rows(
            4,
            4,
            &[a, 0.0, 0.0, p / 2.0, 0.0, b, 0.0, 0.0, 0.0, 0.0, b, 0.0, p / 2.0, 0.0, 0.0, a],
        )?;
        let d = DensityOperator::new(dims.clone(), m)?;
        let r = witness(&d)?;
        println!(
            "p={p:.1} purity={:.4} in_ball={:5} {}",
            d.purity(),
            separable_ball_check(&d),
            r.verdict
        );
    }
    Ok(())
}
