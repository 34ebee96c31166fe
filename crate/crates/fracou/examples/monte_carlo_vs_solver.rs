//! Cross-validate the spectral solver against the particle oracle: exact
//! transition sampling shares no code with the solver, so a histogram match
//! within binomial error bars is real evidence.
//!
//! ```bash
//! cargo run --release --example monte_carlo_vs_solver
//! ```

use fracou::{
    compare_densities, empirical_density, simulate_ensemble, Grid, InitialData, SolvePlan,
    StableLaw,
};

fn main() -> fracou::Result<()> {
    let n_samples = 400_000;
    let u0 = InitialData::indicator_box(vec![-1.0], vec![1.0])?;
    for &alpha in &[1.0, 1.5] {
        let law = StableLaw::new(alpha, 1)?;
        let out = Grid::new(1, 128, 8.0)?;
        let plan = SolvePlan::new(law, out, 1.0, 1e-6)?;
        let solved = plan.solve(&plan.discretize(&u0)?, 1.0)?;

        let ensemble = simulate_ensemble(law, &u0, 1.0, n_samples, 42)?;
        let hist = empirical_density(&ensemble, out)?;
        let report = compare_densities(&hist.field, &solved, &hist.std_err, 5.0)?;
        println!(
            "alpha = {alpha}: sup distance {:.3e}, L1 distance {:.3e}, \
             bins beyond 5 standard errors: {}, off-grid mass {:.4}%",
            report.sup_distance,
            report.l1_distance,
            report.bins_exceeding,
            100.0 * hist.outside_fraction
        );
    }
    Ok(())
}
