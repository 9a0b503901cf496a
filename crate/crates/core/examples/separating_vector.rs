//! Nudge a rank-deficient tripartite vector into a separating one.
//!
//! `cargo run --example separating_vector`

use nonsep::genericity::{sample_state, separating_perturbation};
use nonsep::separability::{one_cyclic, separating};
use nonsep::states::{DimensionProfile, StateVector};

fn main() -> nonsep::Result<()> {
    // A product vector on 4×2×2: Schmidt rank one across 1|(2,3).
    let dims = DimensionProfile::tripartite(4, 2, 2)?;
    let v = StateVector::basis(dims, 0)?;
    println!("before: separating={} one-cyclic={}", separating(&v), one_cyclic(&v));

    for budget in [0.5, 1e-2, 1e-6] {
        let (u, plan) = separating_perturbation(&v, budget)?;
        println!(
            "budget {budget:e}: filled slots {:?} delta {:.3e} distance {:.6e} separating={}",
            plan.filled_slots,
            plan.delta.unwrap_or(0.0),
            u.distance(&v)?,
            separating(&u)
        );
    }

    let generic = sample_state(v.dims(), 3);
    let (u, plan) = separating_perturbation(&generic, 0.1)?;
    println!("generic input untouched: {} (filled {:?})", u == generic, plan.filled_slots);
    Ok(())
}
