//! The drift kernel admits two algebraically identical evaluations: the
//! dilated-time route `e^{dt} q((e^{at}-1)/a, y - e^t x)` and the
//! effective-time route `q((1-e^{-at})/a, x - e^{-t} y)`. This example
//! evaluates both across six orders of magnitude in `t`, including horizons
//! where only the reduced route survives inside `ou_kernel` itself.
//!
//! ```bash
//! cargo run --release --example ou_kernel_routes
//! ```

use fracou::{
    ou_kernel_via_dilation, ou_kernel_via_effective_time, stationary_density, StableLaw,
};

fn main() -> fracou::Result<()> {
    let law = StableLaw::new(1.5, 1)?;
    let (x, y) = ([0.4], [-0.7]);
    println!("alpha = 1.5, x = 0.4, y = -0.7");
    println!(
        "{:>8}  {:>22}  {:>22}  {:>10}",
        "t", "dilated route", "effective-time route", "|diff|"
    );
    for &t in &[0.001, 0.01, 0.1, 1.0, 10.0, 30.0, 50.0] {
        let a = ou_kernel_via_dilation(law, t, &x, &y, 1e-11)?;
        let b = ou_kernel_via_effective_time(law, t, &x, &y, 1e-11)?;
        println!("{t:>8}  {a:>22.15}  {b:>22.15}  {:>10.2e}", (a - b).abs());
    }
    let limit = stationary_density(law, &x, 1e-11)?;
    println!("\nt -> infinity limit (invariant density at x): {limit:.15}");
    Ok(())
}
