//! Schmidt decomposition of a pure state across different cuts.
//!
//! `cargo run --example schmidt`

use nonsep::genericity::sample_state;
use nonsep::linops::RANK_TOL;
use nonsep::states::{schmidt, DimensionProfile};

fn main() -> nonsep::Result<()> {
    let dims = DimensionProfile::tripartite(3, 2, 2)?;
    let v = sample_state(&dims, 42);
    for split in 1..=2 {
        let sc = schmidt(&v, split)?;
        let recon = (sc.reconstruct() - v.amplitudes()).norm();
        println!(
            "cut after factor {split}: {}|{} coefficients {:.6?} rank {} reconstruction error {recon:.1e}",
            sc.left_dim,
            sc.right_dim,
            sc.coefficients,
            sc.rank(RANK_TOL)
        );
    }
    Ok(())
}
