//! Word balls, discreteness certificates, common fixed points and orbits.

use padic_mobius::parse::parse_map;
use padic_mobius::{CommonFixed, GroupSpec, PadicContext, ProjPoint};

pub fn run_example() -> padic_mobius::Result<()> {
    let ctx = PadicContext::new(3, None)?;
    let lox = parse_map(&ctx, "9,1;1,0")?;
    let schottky = GroupSpec::new(vec![parse_map(&ctx, "3,0;0,1")?, lox.conjugate_by(&parse_map(&ctx, "1,1;0,1")?)], 3);
    let report = ctx.discreteness_report(&schottky)?;
    println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("json"));

    let with_rotation = GroupSpec::new(vec![parse_map(&ctx, "3,0;0,1")?, parse_map(&ctx, "0,-1;1,0")?], 3);
    let r = ctx.discreteness_report(&with_rotation)?;
    println!("adding 1/z: {} (unitary words {:?})", r.verdict.as_str(), r.unitary_words.iter().take(3).collect::<Vec<_>>());

    // The fixed points of -1/z are +-sqrt(-1).
    let ext = ctx.with_disc(Some(-1))?;
    let elliptic = vec![parse_map(&ext, "2,0;0,1")?, parse_map(&ext, "0,-1;1,0")?];
    match ext.common_fixed_point(&elliptic)? {
        CommonFixed::Point(x) => println!("2z and -1/z both fix {}", ext.point_string(&x)),
        CommonFixed::Failed { counterexample } => println!("no common point: {counterexample}"),
    }

    let s = ctx.orbit_sample(&GroupSpec::new(vec![parse_map(&ctx, "1,1;0,1")?], 6), &ProjPoint::zero(), 6)?;
    println!(
        "orbit of 0 under z + 1: {} points, min distance {:?}, accumulation suspected {}",
        s.points.len(),
        s.min_distance.map(|m| m.to_string()),
        s.accumulation_suspected
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> padic_mobius::Result<()> {
    run_example()
}
