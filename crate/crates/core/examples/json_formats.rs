//! Text and JSON formats for maps, points and continued fractions, and the
//! command-line front end driven in-process.

use padic_mobius::cli;
use padic_mobius::parse::{berk_from_json, berk_to_json, map_from_json, map_to_json, parse_berk, parse_map};
use padic_mobius::PadicContext;

pub fn run_example() -> padic_mobius::Result<()> {
    let ctx = PadicContext::new(7, Some(3))?;
    let g = parse_map(&ctx, "1+sqrt(3),2;1/7,-sqrt(3)")?;
    let doc = map_to_json(&g);
    println!("{doc}");
    assert_eq!(map_from_json(&ctx, &doc)?, g);

    let x = parse_berk(&ctx, "D(1/7, 7^(2))")?;
    let doc = berk_to_json(&ctx, &x);
    println!("{doc}");
    assert!(ctx.berk_eq(&berk_from_json(&ctx, &doc)?, &x)?);

    let out = cli::run(["padic-mobius", "classify", "--p", "7", "--disc", "3", "--map", "1+sqrt(3),2;1/7,-sqrt(3)"]);
    print!("exit {}\n{}", out.code, out.stdout);
    let out = cli::run(["padic-mobius", "classify", "--p", "7", "--map", "1,oops;0,1"]);
    print!("exit {}: {}", out.code, out.stderr);
    Ok(())
}

#[allow(dead_code)]
fn main() -> padic_mobius::Result<()> {
    run_example()
}
