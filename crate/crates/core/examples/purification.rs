//! Purify a mixed state with a minimal ancilla and reduce it back.
//!
//! `cargo run --example purification`

use nonsep::genericity::sample_density;
use nonsep::states::{phi, purify, trace_distance, DimensionProfile};

fn main() -> nonsep::Result<()> {
    let dims = DimensionProfile::bipartite(3, 2)?;
    for rank in [1, 3, 6] {
        let d = sample_density(&dims, Some(rank), 7)?;
        let v = purify(&d, d.rank())?;
        let back = phi(&v)?;
        println!(
            "rank {rank}: purified on {} (|v| = {:.15}), |phi(v) - d|_1 = {:.2e}",
            v.dims(),
            v.amplitudes().norm(),
            trace_distance(&back, &d)?
        );
    }
    Ok(())
}
