//! Programmatic version of `nonsep sweep`: seeded separable inputs, several
//! budgets, CSV on stdout.
//!
//! `cargo run --example sweep`

use nonsep::cli::{parse_config, render_csv, run_sweep};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = parse_config("dims = 3, 2\nepsilons = 0.2, 0.02\nsamples = 5\ncomponents = 2\nseed = 7\n")?;
    let rows = run_sweep(&config)?;
    print!("{}", render_csv(&rows, None));
    Ok(())
}
