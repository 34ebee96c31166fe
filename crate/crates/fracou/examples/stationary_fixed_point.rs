//! Propagate the invariant density through the solver: it must come back
//! unchanged at every horizon.
//!
//! ```bash
//! cargo run --release --example stationary_fixed_point
//! ```

use fracou::{stationary_field, Grid, SolvePlan, StableLaw};

fn main() -> fracou::Result<()> {
    for &alpha in &[0.6, 1.0, 1.5, 2.0] {
        let law = StableLaw::new(alpha, 1)?;
        let out = Grid::new(1, 256, 10.0)?;
        let reference = stationary_field(law, &out)?;
        print!("alpha = {alpha}: sup |solve(invariant, t) - invariant| =");
        for &t in &[0.5, 1.0, 5.0] {
            let plan = SolvePlan::new(law, out, t, 2e-5)?;
            let u0 = stationary_field(law, &plan.input)?;
            let u = plan.solve(&u0, t)?;
            let dev = u
                .values()
                .iter()
                .zip(reference.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            print!("  {dev:.2e} (t={t})");
        }
        println!();
    }
    Ok(())
}
