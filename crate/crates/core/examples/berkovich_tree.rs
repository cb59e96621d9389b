//! Disks as points of the Berkovich tree: joins, distances, medians and the
//! action of Moebius maps.

use padic_mobius::parse::{parse_berk, parse_map};
use padic_mobius::{BerkPoint, PadicContext};

pub fn run_example() -> padic_mobius::Result<()> {
    let ctx = PadicContext::new(3, None)?;
    let x = parse_berk(&ctx, "D(0, 3^(-2))")?;
    let y = parse_berk(&ctx, "D(1, 3^(-1))")?;
    let z = parse_berk(&ctx, "D(9, 3^(-3))")?;
    let show = |b: &BerkPoint| ctx.point_string(b);

    println!("join({}, {}) = {}", show(&x), show(&y), show(&ctx.join(&x, &y)?));
    println!("rho({}, {}) = {}", show(&x), show(&y), ctx.hyp_dist(&x, &y)?);
    println!("median = {}", show(&ctx.median(&x, &y, &z)?));

    let g = parse_map(&ctx, "3,0;0,1")?;
    let gauss = BerkPoint::gauss();
    let moved = ctx.act(&g, &gauss)?;
    println!("z -> 3z sends gauss to {}, distance {}", show(&moved), ctx.hyp_dist(&gauss, &moved)?);

    let inv = parse_map(&ctx, "0,1;1,0")?;
    println!("z -> 1/z sends {} to {}", show(&z), show(&ctx.act(&inv, &z)?));

    let h = ctx.conjugator_to_gauss(&y)?;
    println!("{h} carries {} to {}", show(&y), show(&ctx.act(&h, &y)?));
    Ok(())
}

#[allow(dead_code)]
fn main() -> padic_mobius::Result<()> {
    run_example()
}
