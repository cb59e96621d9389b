//! Convergent maps of continued fractions and the unit-case divergence test.

use padic_mobius::{CFSpec, Divergence, FieldElem, PadicContext};

pub fn run_example() -> padic_mobius::Result<()> {
    let ctx = PadicContext::new(5, None)?;
    let ones = CFSpec::unit_ones(8);
    for (n, (t, gap)) in ones.convergents(8)?.iter().zip(ctx.gap_sequence(&ones, 8)?).enumerate() {
        println!("n = {}  T_n = {t:<16} T_n(0) = {:<6} gap {gap}", n + 1, ones.convergent_value(n + 1)?);
    }
    println!("{:?}", ctx.diverges_classically_unit_case(&ones)?);

    // Large partial denominators pull T_n(0) and T_n(inf) together.
    let b: Vec<FieldElem> = (0..6).map(|_| FieldElem::from_ratio(1, 5)).collect();
    let spec = CFSpec::new(vec![FieldElem::one(); 6], b)?;
    let gaps: Vec<String> = ctx.gap_sequence(&spec, 6)?.iter().map(|g| g.to_string()).collect();
    println!("b_n = 1/5: gaps {}", gaps.join(" "));
    if let Divergence::Undetermined { reason } = ctx.diverges_classically_unit_case(&spec)? {
        println!("certificate does not apply: {reason}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> padic_mobius::Result<()> {
    run_example()
}
