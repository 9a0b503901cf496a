//! Partial trace and partial transpose on a composite system.
//!
//! `cargo run --example partial_operations`

use nonsep::linops::{hermitian_eig, kron, partial_trace, partial_transpose, ComplexMatrix, Factor};

fn main() -> nonsep::Result<()> {
    let rho = ComplexMatrix::from_real_rows(2, 2, &[0.7, 0.2, 0.2, 0.3])?;
    let sigma = ComplexMatrix::from_diagonal(&[0.5, 0.25, 0.25]);
    let joint = kron(&rho, &sigma);

    let back = partial_trace(&joint, &[2, 3], &[0])?;
    println!("Tr_B(rho ⊗ sigma) recovers rho: max deviation {:.2e}", back.max_abs_diff(&rho));

    // The Bell projector has a negative eigenvalue after transposing one factor.
    let h = 0.5;
    let bell = ComplexMatrix::from_real_rows(
        4,
        4,
        &[h, 0.0, 0.0, h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, h, 0.0, 0.0, h],
    )?;
    let pt = partial_transpose(&bell, (2, 2), Factor::Second)?;
    println!("spectrum of the partial transpose: {:?}", hermitian_eig(&pt)?.eigenvalues);
    Ok(())
}
