//! Command-line front end.
//!
//! [`run`] parses arguments, executes one command and returns the exit code
//! together with the captured output, so the binary only forwards it.
//! Text output is rendered from the same JSON object that `--json` prints.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::berkovich::BerkPoint;
use crate::cfrac::{CFSpec, Divergence};
use crate::error::{Error, Result};
use crate::groups::GroupSpec;
use crate::moebius::{ElementClass, FixedPoints, MobiusMap, Rho0};
use crate::padic::{Magnitude, PadicContext};
use crate::parse::{berk_to_json, cf_from_json, map_to_json, maps_from_json, parse_berk, parse_map, parse_point, point_to_json};
use crate::projective::ProjPoint;
use crate::random::Window;
use crate::verify::{run_suite, SuiteConfig};

#[derive(Parser, Debug)]
#[command(name = "padic-mobius", version, about = "Exact p-adic Moebius maps")]
pub struct Cli {
    /// Residue characteristic.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Squarefree D; the working field is Q_p(sqrt D).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub disc: Option<i64>,
    #[arg(long, global = true)]
    pub json: bool,
    /// Maximal number of p-adic digits for square roots.
    #[arg(long, global = true)]
    pub precision_cap: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Class, invariants and fixed points of a map.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
    },
    /// Norms, metrics and distances of a map.
    Norms {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
    },
    /// Image of a point of the line or of the tree.
    Act {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Factor a map as unitary times loxodromic.
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
    },
    /// Convergents, gaps and the divergence certificate of a continued fraction.
    Cf {
        /// Use a_n = b_n = 1.
        #[arg(long, conflicts_with = "spec")]
        unit_ones: bool,
        /// JSON file {"a": [...], "b": [...]}.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Number of convergents; defaults to the length of the spec.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Discreteness report for a finitely generated group.
    Group {
        /// JSON array of maps.
        #[arg(long)]
        gens: PathBuf,
        #[arg(long, default_value_t = 4)]
        maxlen: usize,
        #[arg(long)]
        budget: Option<usize>,
        /// Also sample the orbit of this point.
        #[arg(long, allow_hyphen_values = true)]
        orbit: Option<String>,
        /// Word length for the orbit sample; defaults to --maxlen.
        #[arg(long)]
        depth: Option<usize>,
        /// Also search for a common fixed point of the generators.
        #[arg(long)]
        common_fixed: bool,
    },
    /// Run the seeded property suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, allow_negative_numbers = true, default_value_t = Window::default().lo)]
        exp_lo: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = Window::default().hi)]
        exp_hi: i64,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_PARSE: i32 = 2;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_PARSE, stdout: String::new(), stderr: text },
            };
        }
    };
    match execute(&cli) {
        Ok((value, text, code)) => {
            let stdout = if cli.json { format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable")) } else { text };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => {
            let code = if e.is_parse() { EXIT_PARSE } else { EXIT_DOMAIN };
            let stderr = if cli.json {
                format!("{}\n", json!({"error": e.to_string(), "exit_code": code}))
            } else {
                format!("error: {e}\n")
            };
            Outcome { code, stdout: String::new(), stderr }
        }
    }
}

fn context(cli: &Cli) -> Result<PadicContext> {
    let p = cli.p.ok_or_else(|| Error::Parse("--p is required".into()))?;
    match cli.precision_cap {
        Some(cap) => PadicContext::with_precision_cap(p, cli.disc, cap),
        None => PadicContext::new(p, cli.disc),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

/// Value of a quantity, or the extension it needs.
fn or_unsupported<T: ToString>(r: Result<T>) -> Result<Value> {
    match r {
        Ok(v) => Ok(json!(v.to_string())),
        Err(Error::UnsupportedExtension { needed }) => Ok(json!(format!("unavailable: needs sqrt({needed})"))),
        Err(e) => Err(e),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn execute(cli: &Cli) -> Result<(Value, String, i32)> {
    let ctx = context(cli)?;
    let obj = match &cli.command {
        Command::Classify { map } => classify(&ctx, &parse_map(&ctx, map)?)?,
        Command::Norms { map } => norms(&ctx, &parse_map(&ctx, map)?)?,
        Command::Act { map, point } => act(&ctx, &parse_map(&ctx, map)?, &parse_berk(&ctx, point)?)?,
        Command::Decompose { map } => decompose(&ctx, &parse_map(&ctx, map)?)?,
        Command::Cf { unit_ones, spec, n } => {
            let spec = match (spec, unit_ones) {
                (Some(path), _) => cf_from_json(&ctx, &read(path)?)?,
                (None, true) => CFSpec::unit_ones(n.unwrap_or(10)),
                (None, false) => return Err(Error::Parse("cf needs --unit-ones or --spec FILE".into())),
            };
            cf(&ctx, &spec, n.unwrap_or(spec.len()))?
        }
        Command::Group { gens, maxlen, budget, orbit, depth, common_fixed } => {
            let gens = maps_from_json(&ctx, &read(gens)?)?;
            let orbit = orbit.as_deref().map(|s| parse_point(&ctx, s)).transpose()?;
            let mut spec = GroupSpec::new(gens, *maxlen);
            if let Some(b) = budget {
                spec = spec.with_budget(*b);
            }
            group(&ctx, &spec, orbit.as_ref(), depth.unwrap_or(*maxlen), *common_fixed)?
        }
        Command::Verify { seed, trials, exp_lo, exp_hi } => {
            if exp_lo > exp_hi {
                return Err(Error::Parse(format!("empty exponent window {exp_lo}..{exp_hi}")));
            }
            let config = SuiteConfig {
                p: ctx.p(),
                disc: ctx.disc(),
                seed: *seed,
                trials: *trials,
                window: Window { lo: *exp_lo, hi: *exp_hi },
                fault: None,
            };
            let report = run_suite(&config)?;
            let code = if report.passed() { EXIT_OK } else { EXIT_DOMAIN };
            return Ok((report.to_json(), report.to_text(), code));
        }
    };
    let value = Value::Object(obj);
    let text = render(&value);
    Ok((value, text, EXIT_OK))
}

fn classify(ctx: &PadicContext, g: &MobiusMap) -> Result<Map<String, Value>> {
    let class = ctx.classify(g)?;
    let sigma = g.sigma();
    let mut o = Map::new();
    o.insert("map".into(), map_to_json(g));
    o.insert("class".into(), json!(class.as_str()));
    o.insert("tr^2/det".into(), json!(sigma.to_string()));
    o.insert("|tr^2/det - 4|".into(), json!(ctx.abs(&(&sigma - &crate::padic::FieldElem::from_i64(4)))?.to_string()));
    o.insert("norm".into(), json!(ctx.norm(g)?.to_string()));
    o.insert("lipschitz".into(), json!(ctx.lipschitz(g)?.to_string()));
    o.insert("M".into(), json!(ctx.M_norm(g)?.to_string()));
    let fixed = match ctx.fixed_points(g) {
        Ok(FixedPoints::All) => json!("all"),
        Ok(fp) => json!(fp.points().iter().map(point_to_json).collect::<Vec<_>>()),
        Err(Error::UnsupportedExtension { needed }) => json!(format!("not in the field: needs sqrt({needed})")),
        Err(e) => return Err(e),
    };
    o.insert("fixed_points".into(), fixed);
    Ok(o)
}

fn rho0_json(r: &Rho0) -> Value {
    match r {
        Rho0::Exact { value, witness } => json!({"value": value.to_string(), "witness": witness.to_string()}),
        Rho0::Bracket { lower, upper, witness, witness_value } => json!({
            "lower": lower.to_string(),
            "upper": upper.to_string(),
            "witness": witness.to_string(),
            "witness_value": witness_value.to_string(),
        }),
    }
}

fn norms(ctx: &PadicContext, g: &MobiusMap) -> Result<Map<String, Value>> {
    let mut o = Map::new();
    o.insert("map".into(), map_to_json(g));
    o.insert("norm".into(), json!(ctx.norm(g)?.to_string()));
    o.insert("unitary".into(), json!(yes_no(ctx.is_unitary(g)?)));
    o.insert("lipschitz".into(), json!(ctx.lipschitz(g)?.to_string()));
    o.insert("gauss_displacement".into(), json!(ctx.displacement_gauss(g)?.to_string()));
    o.insert("m".into(), json!(ctx.m_norm(g)?.to_string()));
    o.insert("M".into(), json!(ctx.M_norm(g)?.to_string()));
    o.insert(
        "rho0(g, I)".into(),
        match ctx.rho0_identity(g) {
            Ok(r) => rho0_json(&r),
            Err(e) => or_unsupported::<String>(Err(e))?,
        },
    );
    o.insert("||g - I||".into(), or_unsupported(ctx.dist_to_identity(g))?);
    o.insert("epsilon".into(), or_unsupported(ctx.epsilon(g))?);
    o.insert("epsilon1".into(), or_unsupported(ctx.epsilon1(g))?);
    o.insert("epsilon2".into(), or_unsupported(ctx.epsilon2(g))?);
    o.insert("d(g, U)".into(), json!(ctx.d_to_unitary(g)?.to_string()));
    Ok(o)
}

fn act(ctx: &PadicContext, g: &MobiusMap, x: &BerkPoint) -> Result<Map<String, Value>> {
    let y = ctx.act(g, x)?;
    let mut o = Map::new();
    o.insert("map".into(), map_to_json(g));
    o.insert("point".into(), berk_to_json(ctx, x));
    o.insert("image".into(), berk_to_json(ctx, &y));
    if x.is_type_ii() {
        o.insert("distance".into(), json!(ctx.hyp_dist(x, &y)?.to_string()));
    }
    Ok(o)
}

fn decompose(ctx: &PadicContext, g: &MobiusMap) -> Result<Map<String, Value>> {
    let (u, f) = ctx.decompose_unitary_loxodromic(g)?;
    let antipodal = if f.is_identity() {
        "yes (f is the identity)".to_string()
    } else {
        let ok = ctx.classify(&f)? == ElementClass::Loxodromic
            && match ctx.fixed_points(&f)? {
                FixedPoints::Two(a, b) => ctx.antipodal_witness(&a, &b)?.is_some(),
                _ => false,
            };
        yes_no(ok).to_string()
    };
    let mut o = Map::new();
    o.insert("g".into(), map_to_json(g));
    o.insert("u".into(), map_to_json(&u));
    o.insert("f".into(), map_to_json(&f));
    o.insert("u unitary".into(), json!(yes_no(ctx.is_unitary(&u)?)));
    o.insert("f antipodal loxodromic".into(), json!(antipodal));
    o.insert("u∘f=g".into(), json!(yes_no(&u.compose(&f) == g)));
    Ok(o)
}

fn cf(ctx: &PadicContext, spec: &CFSpec, n: usize) -> Result<Map<String, Value>> {
    let maps = spec.convergents(n)?;
    let gaps = ctx.gap_sequence(spec, n)?;
    let rows: Vec<Value> = maps
        .iter()
        .zip(&gaps)
        .enumerate()
        .map(|(k, (t, gap))| {
            json!({
                "n": k + 1,
                "T_n": map_to_json(t),
                "value": t.apply(&ProjPoint::zero()).to_string(),
                "gap": gap.to_string(),
            })
        })
        .collect();
    let mut o = Map::new();
    o.insert("convergents".into(), Value::Array(rows));
    match ctx.diverges_classically_unit_case(spec)? {
        Divergence::Diverges { checked_terms } => {
            o.insert("verdict".into(), json!("diverges classically"));
            o.insert(
                "certificate".into(),
                json!(format!("a_n = 1 and |b_n| <= 1 for n <= {checked_terms}: every T_n is unitary, so rho(T_n(0), T_n(inf)) = 1")),
            );
        }
        Divergence::Undetermined { reason } => {
            o.insert("verdict".into(), json!("undetermined"));
            o.insert("reason".into(), json!(reason));
        }
    }
    Ok(o)
}

fn magnitude_or_none(m: &Option<Magnitude>) -> Value {
    m.as_ref().map_or(Value::Null, |m| json!(m.to_string()))
}

fn group(
    ctx: &PadicContext,
    spec: &GroupSpec,
    orbit: Option<&ProjPoint>,
    depth: usize,
    common_fixed: bool,
) -> Result<Map<String, Value>> {
    let report = ctx.discreteness_report(spec)?;
    let Value::Object(mut o) = report.to_json() else { unreachable!("report is an object") };
    if let Some(z) = orbit {
        let s = ctx.orbit_sample(spec, z, depth)?;
        o.insert(
            "orbit".into(),
            json!({
                "seed": z.to_string(),
                "depth": depth,
                "points": s.points.len(),
                "min_distance": magnitude_or_none(&s.min_distance),
                "min_distance_half_depth": magnitude_or_none(&s.min_distance_half_depth),
                "accumulation_suspected": yes_no(s.accumulation_suspected),
            }),
        );
    }
    if common_fixed {
        let v = match ctx.common_fixed_point(&spec.generators) {
            Ok(crate::groups::CommonFixed::Point(x)) => berk_to_json(ctx, &x),
            Ok(crate::groups::CommonFixed::Failed { counterexample }) => json!(format!("none: {counterexample}")),
            Err(e @ Error::NotAllElliptic { .. }) => json!(format!("none: {e}")),
            Err(e) => return Err(e),
        };
        o.insert("common_fixed_point".into(), v);
    }
    Ok(o)
}

/// Inline form of a value: maps as `a,b;c,d`, tree points by their display.
fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Object(o) if o.len() == 4 && ["a", "b", "c", "d"].iter().all(|k| o.contains_key(*k)) => {
            let e = |k: &str| inline(&o[k]);
            format!("{},{};{},{}", e("a"), e("b"), e("c"), e("d"))
        }
        Value::Object(o) if o.get("type").and_then(Value::as_str) == Some("I") => inline(&o["point"]),
        Value::Object(o) if o.contains_key("display") => inline(&o["display"]),
        Value::Object(o) => o.iter().map(|(k, v)| format!("{k}={}", inline(v))).collect::<Vec<_>>().join(" "),
        Value::Array(a) => a.iter().map(inline).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

fn render(v: &Value) -> String {
    let mut out = String::new();
    let Value::Object(o) = v else { return format!("{}\n", inline(v)) };
    for (k, v) in o {
        match v {
            Value::Array(rows) if rows.iter().any(Value::is_object) && !rows.is_empty() => {
                let _ = writeln!(out, "{k}:");
                for r in rows {
                    let _ = writeln!(out, "  {}", inline(r));
                }
            }
            _ => {
                let _ = writeln!(out, "{k}: {}", inline(v));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("padic-mobius").chain(args.iter().copied()))
    }

    #[test]
    fn classify_records() {
        let o = go(&["classify", "--p", "3", "--map", "3,0;0,1"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("class: LOXODROMIC"));
        assert!(o.stdout.contains("norm: 3^(1/2)"));
        assert!(o.stdout.contains("lipschitz: 3^(1)\n"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(go(&["classify", "--p", "3", "--map", "1,x;0,1"]).code, 2);
        assert_eq!(go(&["classify", "--map", "1,1;0,1"]).code, 2);
        assert_eq!(go(&["classify", "--p", "4", "--map", "1,1;0,1"]).code, 1);
        assert_eq!(go(&["frobnicate"]).code, 2);
    }
}
