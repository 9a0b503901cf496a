//! Seeded random states: Haar vectors, induced density operators and
//! separable mixtures.
//!
//! `cargo run --example sampling`

use nonsep::genericity::{derive_seed, sample_density, sample_separable, sample_state};
use nonsep::states::DimensionProfile;

fn main() -> nonsep::Result<()> {
    let dims = DimensionProfile::bipartite(2, 3)?;
    let v = sample_state(&dims, 1);
    println!("state norm {:.15}", v.amplitudes().norm());
    for i in 0..4 {
        let seed = derive_seed(2024, i);
        let d = sample_density(&dims, Some(2), seed)?;
        let s = sample_separable(&dims, 3, seed)?;
        println!(
            "seed {seed:>20}: induced rank {} purity {:.4} | separable rank {} purity {:.4}",
            d.rank(),
            d.purity(),
            s.rank(),
            s.purity()
        );
    }
    Ok(())
}
