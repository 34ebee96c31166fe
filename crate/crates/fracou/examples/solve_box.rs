//! Solve the Cauchy problem for indicator initial data and cross-check a few
//! points against the direct kernel contraction (the oracle path).
//!
//! ```bash
//! cargo run --release --example solve_box
//! ```

use fracou::{ou_solve_direct, InitialData, Grid, SolvePlan, StableLaw};

fn main() -> fracou::Result<()> {
    let law = StableLaw::new(1.0, 1)?;
    let u0 = InitialData::indicator_box(vec![-1.0], vec![1.0])?;
    let out = Grid::new(1, 512, 8.0)?;
    let t_max = 1.0;
    let plan = SolvePlan::new(law, out, t_max, 1e-6)?;
    println!(
        "output window [-8, 8) with {} points; planned input window [-{:.1}, {:.1}) with {} points",
        out.n(),
        plan.input.half_width(),
        plan.input.half_width(),
        plan.input.n()
    );

    let field0 = plan.discretize(&u0)?;
    for &t in &[0.1, 0.5, 1.0] {
        let u = plan.solve(&field0, t)?;
        println!("t = {t}: lattice mass = {:.8}, peak = {:.6}", u.mass(), {
            u.values().iter().cloned().fold(0.0f64, f64::max)
        });
    }

    let u1 = plan.solve(&field0, 1.0)?;
    println!("\nsolver vs direct kernel contraction at t = 1:");
    for &x in &[0.0, 0.8, 2.0, 4.0] {
        let grid_value = u1.sample_cubic(&[x]);
        let direct = ou_solve_direct(law, &field0, 1.0, &[x], 1e-9)?;
        println!(
            "  x = {x}: solver {grid_value:.9}, contraction {direct:.9}, diff {:.2e}",
            (grid_value - direct).abs()
        );
    }
    Ok(())
}
