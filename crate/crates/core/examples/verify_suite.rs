//! Running the seeded property suites and reading the report.

use padic_mobius::verify::{run_suite, SuiteConfig, PROPERTIES};

pub fn run_example() -> padic_mobius::Result<()> {
    println!("{} properties, for example:", PROPERTIES.len());
    for p in PROPERTIES.iter().take(3) {
        println!("  {:<24} {}", p.id, p.summary);
    }
    let report = run_suite(&SuiteConfig::new(2, 7, 3))?;
    print!("{}", report.to_text());
    Ok(())
}

#[allow(dead_code)]
fn main() -> padic_mobius::Result<()> {
    run_example()
}
