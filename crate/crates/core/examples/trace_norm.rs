//! Trace norm and trace distance.
//!
//! `cargo run --example trace_norm`

use nonsep::linops::{svd, trace_norm, ComplexMatrix};
use nonsep::states::{trace_distance, DensityOperator, DimensionProfile};

fn main() -> nonsep::Result<()> {
    let m = ComplexMatrix::from_real_rows(2, 3, &[1.0, 2.0, 0.0, 0.0, -1.0, 3.0])?;
    let dec = svd(&m);
    println!("singular values: {:?}", dec.singular_values);
    println!("trace norm:      {:.12}", trace_norm(&m));

    let dims = DimensionProfile::bipartite(1, 2)?;
    let up = DensityOperator::new(dims.clone(), ComplexMatrix::from_diagonal(&[1.0, 0.0]))?;
    let mixed = DensityOperator::maximally_mixed(dims);
    // ‖|0⟩⟨0| − I/2‖₁ = 1.
    println!("|P0 - I/2|_1 = {}", trace_distance(&up, &mixed)?);
    Ok(())
}
