//! Probe the initial-time continuity of the solution at a continuity point
//! of rough initial data: `u(t_k, x_k) -> u0(x0)` along `t_k = 2^{-k}` with
//! `x_k` sliding in at the self-similar rate.
//!
//! ```bash
//! cargo run --release --example continuity_probe
//! ```

use fracou::{initial_continuity_check, InitialData, StableLaw};

fn main() -> fracou::Result<()> {
    let u0 = InitialData::indicator_box(vec![-1.0], vec![1.0])?;
    for &alpha in &[0.6, 1.0, 1.5, 2.0] {
        let law = StableLaw::new(alpha, 1)?;
        let report = initial_continuity_check(law, &u0, &[0.0], 3, 10)?;
        println!("alpha = {alpha}: |u(t_k, x_k) - u0(0)| over k = 3..10");
        for ((k, t), dev) in report
            .ks
            .iter()
            .zip(&report.times)
            .zip(&report.deviations)
        {
            println!("  k = {k:>2}  t = {t:<12.6}  deviation = {dev:.6e}");
        }
        println!(
            "  monotone beyond k=5: {}, tail deviation: {:.2e}\n",
            report.monotone_beyond_k5, report.tail_deviation
        );
    }

    // At a box edge the hypothesis fails and the probe must refuse to run.
    let law = StableLaw::new(1.0, 1)?;
    match initial_continuity_check(law, &u0, &[1.0], 3, 10) {
        Err(e) => println!("probe at the box edge is rejected, as it should be: {e}"),
        Ok(_) => println!("unexpected: the edge probe ran"),
    }
    Ok(())
}
