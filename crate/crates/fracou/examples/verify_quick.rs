//! Run the quick verification suite and print the report table.
//!
//! ```bash
//! cargo run --release --example verify_quick
//! ```

use fracou::verify::{run_suite, Suite};

fn main() -> fracou::Result<()> {
    let report = run_suite(Suite::Quick, 42)?;
    print!("{}", report.text_table());
    std::process::exit(if report.passed() { 0 } else { 1 });
}
