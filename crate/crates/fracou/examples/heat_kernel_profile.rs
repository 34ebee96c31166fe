//! Evaluate the stable heat kernel along a ray for several stability
//! indices, cross-checking against the closed forms where they exist.
//!
//! ```bash
//! cargo run --release --example heat_kernel_profile
//! ```

use fracou::{heat_kernel, heat_kernel_closed_form, StableLaw};

fn main() -> fracou::Result<()> {
    let t = 1.0;
    let radii: Vec<f64> = (0..=8).map(|i| i as f64 * 0.75).collect();

    println!("heat kernel p(t=1, x) along a ray, d = 1");
    print!("{:>8}", "x");
    for &alpha in &[0.6, 1.0, 1.5, 2.0] {
        print!("  alpha={alpha:<8}");
    }
    println!();
    for &r in &radii {
        print!("{r:>8.3}");
        for &alpha in &[0.6, 1.0, 1.5, 2.0] {
            let law = StableLaw::new(alpha, 1)?;
            let v = heat_kernel(law, t, &[r], 1e-10)?;
            print!("  {v:<14.8}");
        }
        println!();
    }

    // Where a closed form exists the quadrature must reproduce it.
    for &alpha in &[1.0, 2.0] {
        let law = StableLaw::new(alpha, 1)?;
        let mut worst = 0.0f64;
        for &r in &radii {
            let closed = heat_kernel_closed_form(law, t, &[r])?;
            let dispatched = heat_kernel(law, t, &[r], 1e-12)?;
            worst = worst.max((closed - dispatched).abs());
        }
        println!("alpha = {alpha}: max |dispatch - closed form| = {worst:.2e}");
    }
    Ok(())
}
