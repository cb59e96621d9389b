//! Exact absolute values in Q_p and in quadratic extensions Q_p(sqrt D).

use padic_mobius::padic::{rat, SquareClass};
use padic_mobius::{FieldElem, PadicContext};

pub fn run_example() -> padic_mobius::Result<()> {
    let q3 = PadicContext::new(3, None)?;
    for (n, d) in [(9, 1), (1, 27), (10, 7), (-18, 5)] {
        let x = FieldElem::from_ratio(n, d);
        println!("|{x}|_3 = {}", q3.abs(&x)?);
    }

    // 7 is a square in Q_3 (7 = 1 mod 3); the root is known digit by digit.
    if let SquareClass::Square(root) = q3.sqrt_in_qp(&rat(7, 1))? {
        println!("sqrt(7) in Q_3: valuation {}, digits {:?}", root.valuation(), &root.digits()[..8]);
    }

    // Non-split: |a + b sqrt(-1)| is the square root of |a^2 + b^2|.
    let ext = PadicContext::new(3, Some(-1))?;
    let z = FieldElem::new(rat(1, 1), rat(3, 1), Some(-1));
    println!("in Q_3(i): |{z}| = {}, |3i| = {}", ext.abs(&z)?, ext.abs(&FieldElem::new(rat(0, 1), rat(3, 1), Some(-1)))?);

    // Ramified: sqrt(3) has absolute value 3^(-1/2).
    let ram = PadicContext::new(3, Some(3))?;
    println!("in Q_3(sqrt 3): |sqrt(3)| = {}", ram.abs(&FieldElem::sqrt_disc(3))?);

    for k in 1..=3 {
        println!("|zeta_(2^{k}) - 1|_2 = {}", PadicContext::new(2, None)?.cyclotomic_abs(1 << k));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> padic_mobius::Result<()> {
    run_example()
}
