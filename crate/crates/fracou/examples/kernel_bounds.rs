//! Measure the ratio of the kernel to its two-sided envelope
//! `min(t/r^(d+alpha), t^(-d/alpha))` over a sweep, and watch it collapse
//! onto a single function of the reduced radius `|x| t^(-1/alpha)`.
//!
//! ```bash
//! cargo run --release --example kernel_bounds
//! ```

use fracou::{heat_kernel, sharp_bound, StableLaw};

fn main() -> fracou::Result<()> {
    for &alpha in &[0.6, 1.0, 1.5] {
        let law = StableLaw::new(alpha, 1)?;
        let mut c1 = f64::INFINITY;
        let mut c2 = 0.0f64;
        println!("alpha = {alpha}: ratio kernel/envelope vs reduced radius");
        for i in 0..=12 {
            let reduced = 10f64.powf(-2.0 + 4.0 * i as f64 / 12.0);
            // two scaling-equivalent points must give the same ratio
            let mut row = Vec::new();
            for &t in &[0.1f64, 1.0, 10.0] {
                let x = reduced * t.powf(1.0 / alpha);
                let bound = sharp_bound(law, t, x)?.value;
                let kernel = heat_kernel(law, t, &[x], (bound * 1e-8).max(1e-14))?;
                row.push(kernel / bound);
            }
            let spread = (row[0] - row[2]).abs().max((row[1] - row[2]).abs());
            c1 = c1.min(row[1]);
            c2 = c2.max(row[1]);
            println!(
                "  reduced={reduced:>9.4}: ratio={:.8} (collapse spread {spread:.1e})",
                row[1]
            );
        }
        println!("  recorded c1 = {c1:.6}, c2 = {c2:.6}\n");
    }
    Ok(())
}
