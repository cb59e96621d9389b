//! Writing a map as a unitary map after an antipodal loxodromic one, and the
//! distance from a map to the unitary group.

use padic_mobius::parse::parse_map;
use padic_mobius::{FixedPoints, PadicContext};

pub fn run_example() -> padic_mobius::Result<()> {
    for p in [2u64, 3] {
        let ctx = PadicContext::new(p, None)?;
        for text in ["1,1;0,1", "3,0;1,1", "1/2,3;5,7", "9,4;2,1"] {
            let g = parse_map(&ctx, text)?;
            let (u, f) = ctx.decompose_unitary_loxodromic(&g)?;
            let ends = match ctx.fixed_points(&f)? {
                FixedPoints::Two(a, b) => format!("fixed {a}, {b} at chordal distance {}", ctx.chordal(&a, &b)?),
                _ => "identity".into(),
            };
            let d = ctx.d_to_unitary(&g)?;
            println!("p = {p}: {text:<9} u = {:<14} f = {:<14} {ends}; d(g, U) = {d}", u.to_string(), f.to_string());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> padic_mobius::Result<()> {
    run_example()
}
