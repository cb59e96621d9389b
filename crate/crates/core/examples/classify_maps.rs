//! Classifying Moebius maps and locating their fixed points.

use padic_mobius::parse::parse_map;
use padic_mobius::PadicContext;

pub fn run_example() -> padic_mobius::Result<()> {
    let ctx = PadicContext::new(3, None)?;
    for text in ["1,0;0,1", "1,1;0,1", "3,0;0,1", "2,0;0,1", "4,0;0,1", "1,1;-1,0"] {
        let g = parse_map(&ctx, text)?;
        let class = ctx.classify(&g)?;
        let fixed = match ctx.fixed_points(&g) {
            Ok(f) => format!("{:?}", f.points().iter().map(|z| z.to_string()).collect::<Vec<_>>()),
            Err(e) => e.to_string(),
        };
        println!("{text:>10}  {:<14} tr^2/det = {:<6} fixed: {fixed}", class.to_string(), g.sigma().to_string());
    }

    // The rotation z -> 1/(1 - z) needs sqrt(-3) for its fixed points.
    let ext = PadicContext::new(3, Some(-3))?;
    let g = parse_map(&ext, "0,1;-1,1")?;
    println!("over Q_3(sqrt -3): {} fixes {:?}", ext.classify(&g)?, ext.fixed_points(&g)?.points().iter().map(|z| z.to_string()).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> padic_mobius::Result<()> {
    run_example()
}
