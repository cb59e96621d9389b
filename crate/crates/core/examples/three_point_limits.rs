//! Recovering maps from three point images and watching the uniform metric
//! shrink along a converging sequence.

use padic_mobius::parse::parse_map;
use padic_mobius::{FieldElem, MobiusMap, PadicContext, ProjPoint};

pub fn run_example() -> padic_mobius::Result<()> {
    let ctx = PadicContext::new(5, None)?;
    let f = parse_map(&ctx, "2,1;1,3")?;
    let z = [ProjPoint::zero(), ProjPoint::one(), ProjPoint::Infinity];
    for n in 1..=5 {
        // f_n = (I + 5^n E) f with E = (0, 1; 0, 0).
        let u = MobiusMap::new(FieldElem::one(), ctx.p_power(n), FieldElem::zero(), FieldElem::one())?;
        let fnn = u.compose(&f);
        let w: Vec<ProjPoint> = z.iter().map(|x| fnn.apply(x)).collect();
        let g = ctx.mobius_through_three_points([&z[0], &z[1], &z[2]], [&w[0], &w[1], &w[2]])?;
        println!("n = {n}: recovered {g:<24} rho0(f_n, f) = {}", ctx.rho0(&g, &f)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> padic_mobius::Result<()> {
    run_example()
}
