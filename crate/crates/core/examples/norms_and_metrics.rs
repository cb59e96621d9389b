//! Operator norm, Lipschitz constant, uniform distance to the identity and
//! the fixed-point gauges that bracket it.

use padic_mobius::parse::parse_map;
use padic_mobius::{PadicContext, Rho0};

pub fn run_example() -> padic_mobius::Result<()> {
    for p in [2u64, 3, 5] {
        let ctx = PadicContext::new(p, None)?;
        println!("p = {p}");
        for text in ["1,1;0,1", "1,0;0,4", "0,1;1,0", "1,1/9;0,1"] {
            let g = parse_map(&ctx, text)?;
            let rho = match ctx.rho0_identity(&g)? {
                Rho0::Exact { value, witness } => format!("{value} at {witness}"),
                Rho0::Bracket { lower, upper, witness, witness_value } => {
                    format!("in [{lower}, {upper}], {witness_value} at {witness}")
                }
            };
            println!(
                "  {text:<10} ||g|| = {:<9} L = {:<7} M = {:<9} eps1 = {:<9} rho0(g, I) {rho}",
                ctx.norm(&g)?.to_string(),
                ctx.lipschitz(&g)?.to_string(),
                ctx.M_norm(&g)?.to_string(),
                ctx.epsilon1(&g)?.to_string(),
            );
        }
    }

    let ctx = PadicContext::new(3, None)?;
    let g = parse_map(&ctx, "9,0;0,1")?;
    let (z, w) = ctx.lipschitz_witness(&g)?;
    println!(
        "z -> 9z stretches rho({z}, {w}) = {} to {}",
        ctx.chordal(&z, &w)?,
        ctx.chordal(&g.apply(&z), &g.apply(&w))?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> padic_mobius::Result<()> {
    run_example()
}
