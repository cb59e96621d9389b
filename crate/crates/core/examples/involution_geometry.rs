//! Axes, involution factorizations and fixed sets in the tree.

use padic_mobius::parse::{parse_berk, parse_map};
use padic_mobius::PadicContext;

pub fn run_example() -> padic_mobius::Result<()> {
    let ctx = PadicContext::new(3, Some(-1))?;
    for text in ["9,0;0,1", "1,0;0,4", "-1,0;0,1", "1,1;0,1"] {
        let g = parse_map(&ctx, text)?;
        let (f, h) = ctx.factor_involutions(&g)?;
        let locus = ctx.fixed_locus(&g)?;
        println!("{:<14} g = ({f}) . ({h})", ctx.classify(&g)?.to_string());
        match ctx.nearest_to_gauss(&locus) {
            Ok(x) => println!("               fixed set {locus}, nearest to gauss {}", ctx.point_string(&x)),
            Err(_) => println!("               fixed set {locus}"),
        }
        if let (Ok(a), Ok(b)) = (ctx.axis(&f), ctx.axis(&h)) {
            let meet = ctx.segment_intersection(&a.segment(), &b.segment())?;
            println!("               axes {a} and {b} meet: {}", meet.map_or("no".into(), |x| ctx.point_string(&x)));
        }
    }

    let g = parse_map(&ctx, "4,0;0,1")?;
    let x = parse_berk(&ctx, "D(1, 3^(-1))")?;
    let y = parse_berk(&ctx, "D(1, 3^(-2))")?;
    for pt in [x, y] {
        println!("z -> 4z fixes {}: {}", ctx.point_string(&pt), ctx.locus_membership(&g, &pt)?);
    }

    let two = PadicContext::new(2, None)?;
    let f = parse_map(&two, "0,1;1,0")?;
    let t = two.tailed_axis(&f)?;
    println!("p = 2: 1/z has axis {} with tail to {}", t.axis, two.point_string(&t.tail));
    Ok(())
}

#[allow(dead_code)]
fn main() -> padic_mobius::Result<()> {
    run_example()
}
