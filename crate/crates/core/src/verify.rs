//! Seeded property suites over random maps, points and disks.
//!
//! Every property draws from its own ChaCha stream derived from the suite
//! seed and the property's position in [`PROPERTIES`], so a run is a pure
//! function of the configuration and properties can run in parallel.

use std::fmt::Write as _;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::berkovich::BerkPoint;
use crate::cfrac::{CFSpec, Divergence};
use crate::error::Error;
use crate::geometry::{involution_with_fixed_points, normalizer, to_infinity, FixedLocus, Geodesic};
use crate::groups::{CommonFixed, GroupSpec, Verdict};
use crate::moebius::{ElementClass, FixedPoints, MobiusMap, Rho0};
use crate::padic::{int, rat, Exponent, FieldElem, Magnitude, PadicContext};
use crate::projective::ProjPoint;
use crate::random::{Sampler, Window};

/// Deliberate defects used to check that the suite notices them.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Report `p * ||g||` instead of `||g||`.
    ScaleNorm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub p: u64,
    pub disc: Option<i64>,
    pub seed: u64,
    pub trials: usize,
    pub window: Window,
    #[doc(hidden)]
    pub fault: Option<Fault>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { p: 3, disc: None, seed: 0, trials: 20, window: Window::default(), fault: None }
    }
}

impl SuiteConfig {
    pub fn new(p: u64, seed: u64, trials: usize) -> Self {
        SuiteConfig { p, seed, trials, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Applies {
    All,
    OddP,
    P2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyResult {
    pub id: &'static str,
    pub status: Status,
    /// Completed trials.
    pub trials: usize,
    /// Trials abandoned because they needed a larger field.
    pub unsupported: usize,
    pub counterexample: Option<String>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub results: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.status != Status::Fail)
    }

    pub fn count(&self, s: Status) -> usize {
        self.results.iter().filter(|r| r.status == s).count()
    }

    pub fn result(&self, id: &str) -> Option<&PropertyResult> {
        self.results.iter().find(|r| r.id == id)
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let disc = c.disc.map_or("none".to_string(), |d| d.to_string());
        let mut out = format!("verify p={} D={} seed={} trials={}\n", c.p, disc, c.seed, c.trials);
        for r in &self.results {
            let _ = write!(out, "{:<7} {:<34} trials={}", r.status.as_str(), r.id, r.trials);
            if r.unsupported > 0 {
                let _ = write!(out, " unsupported={}", r.unsupported);
            }
            out.push('\n');
            if let Some(x) = &r.counterexample {
                let _ = writeln!(out, "        counterexample: {x}");
            }
            if let Some(n) = &r.note {
                let _ = writeln!(out, "        note: {n}");
            }
        }
        let _ = writeln!(
            out,
            "summary: {} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        );
        out
    }

    pub fn to_json(&self) -> Value {
        let c = &self.config;
        json!({
            "config": {"p": c.p, "disc": c.disc, "seed": c.seed, "trials": c.trials,
                       "window": [c.window.lo, c.window.hi]},
            "properties": self.results.iter().map(|r| json!({
                "id": r.id,
                "status": r.status.as_str(),
                "trials": r.trials,
                "unsupported": r.unsupported,
                "counterexample": r.counterexample,
                "note": r.note,
            })).collect::<Vec<_>>(),
            "passed": self.count(Status::Pass),
            "failed": self.count(Status::Fail),
            "skipped": self.count(Status::Skipped),
        })
    }
}

/// How a single trial ended, when it did not succeed.
enum Miss {
    Unsupported,
    Counter(String),
}

impl From<Error> for Miss {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedExtension { .. } => Miss::Unsupported,
            other => Miss::Counter(other.to_string()),
        }
    }
}

type Trial = std::result::Result<(), Miss>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(Miss::Counter(format!($($fmt)+)));
        }
    };
}

/// Shared state of one property run.
pub struct Run<'a> {
    ctx: &'a PadicContext,
    s: Sampler<'a, ChaCha8Rng>,
    n: usize,
    fault: Option<Fault>,
    done: usize,
    unsupported: usize,
    note: Option<String>,
}

impl<'a> Run<'a> {
    fn trials(&mut self, count: usize, mut f: impl FnMut(&mut Self) -> Trial) -> std::result::Result<(), String> {
        for _ in 0..count {
            match f(self) {
                Ok(()) => self.done += 1,
                Err(Miss::Unsupported) => self.unsupported += 1,
                Err(Miss::Counter(c)) => return Err(c),
            }
        }
        Ok(())
    }

    fn norm(&self, g: &MobiusMap) -> crate::Result<Magnitude> {
        let n = self.ctx.norm(g)?;
        Ok(match self.fault {
            Some(Fault::ScaleNorm) => n.scale(&int(self.ctx.p() as i64)),
            None => n,
        })
    }

    fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.s.rng
    }
}

type PropFn = for<'a, 'b> fn(&'b mut Run<'a>) -> std::result::Result<(), String>;

pub struct Property {
    pub id: &'static str,
    pub applies: Applies,
    pub summary: &'static str,
    run: PropFn,
}

pub const PROPERTIES: &[Property] = &[
    Property { id: "abs-ultrametric", applies: Applies::All, summary: "|x+y| <= max(|x|,|y|), equality when the two differ", run: abs_ultrametric },
    Property { id: "abs-multiplicative", applies: Applies::All, summary: "|xy| = |x||y|", run: abs_multiplicative },
    Property { id: "abs-conjugate", applies: Applies::All, summary: "conjugates have equal absolute value in a non-split extension", run: abs_conjugate },
    Property { id: "magnitude-order", applies: Applies::All, summary: "magnitude order agrees with floating point when floats separate", run: magnitude_order },
    Property { id: "cyclotomic-increasing", applies: Applies::All, summary: "|zeta_{p^k} - 1| increases toward 1", run: cyclotomic_increasing },
    Property { id: "chordal-ultrametric", applies: Applies::All, summary: "chordal distance is an ultrametric bounded by 1", run: chordal_ultrametric },
    Property { id: "chordal-unitary-isometry", applies: Applies::All, summary: "unitary maps preserve chordal distance", run: chordal_unitary_isometry },
    Property { id: "cross-ratio-invariance", applies: Applies::All, summary: "chordal cross ratio is invariant under maps", run: cross_ratio_invariance },
    Property { id: "unitary-equivalences", applies: Applies::All, summary: "norm 1, Lipschitz 1, Gauss fixed, chordal isometry, norm invariance", run: unitary_equivalences },
    Property { id: "classify-conjugation", applies: Applies::All, summary: "class is invariant under conjugation", run: classify_conjugation },
    Property { id: "scale-invariance", applies: Applies::All, summary: "invariants ignore scaling of the matrix", run: scale_invariance },
    Property { id: "lipschitz-sharp", applies: Applies::All, summary: "Lipschitz bound holds and the witness pair attains it", run: lipschitz_sharp },
    Property { id: "rho0-below-dist-identity", applies: Applies::All, summary: "rho_0(g, I) <= ||g - I||", run: rho0_below_dist_identity },
    Property { id: "epsilon-bracket", applies: Applies::All, summary: "eps/2 <= M <= 6 eps", run: epsilon_bracket },
    Property { id: "epsilon1-bracket", applies: Applies::All, summary: "eps1/2 <= M <= eps1, and eps2 likewise for parabolic maps", run: epsilon1_bracket },
    Property { id: "rho0-exact", applies: Applies::OddP, summary: "rho_0(g, I) = M(g) with an attaining witness", run: rho0_exact },
    Property { id: "rho0-bracket", applies: Applies::P2, summary: "displacements lie in [M/2, 2M] at p = 2", run: rho0_bracket },
    Property { id: "three-point-convergence", applies: Applies::All, summary: "three-point data converging at rate p^-n recover the limit", run: three_point_convergence },
    Property { id: "berkovich-isometry", applies: Applies::All, summary: "maps are isometries of the tree", run: berkovich_isometry },
    Property { id: "gauss-displacement", applies: Applies::All, summary: "rho(g Gauss, Gauss) = 2 log_p ||g||", run: gauss_displacement },
    Property { id: "action-composition", applies: Applies::All, summary: "act(g h, x) = act(g, act(h, x))", run: action_composition },
    Property { id: "tree-laws", applies: Applies::All, summary: "join laws and the four-point condition", run: tree_laws },
    Property { id: "unitary-fixes-gauss", applies: Applies::All, summary: "unitary iff the Gauss point is fixed", run: unitary_fixes_gauss },
    Property { id: "involution-census", applies: Applies::All, summary: "involution axes characterize the class", run: involution_census },
    Property { id: "orthogonality-symmetric", applies: Applies::All, summary: "orthogonality is symmetric", run: orthogonality_symmetric },
    Property { id: "orthogonal-pairs-meet", applies: Applies::All, summary: "orthogonal geodesics meet once (p odd) or not at all (p = 2)", run: orthogonal_pairs_meet },
    Property { id: "fixed-locus-grid", applies: Applies::All, summary: "fixed set descriptors agree with the action on a disk grid", run: fixed_locus_grid },
    Property { id: "unitary-loxodromic-decomposition", applies: Applies::All, summary: "g = u f with u unitary, f trivial or antipodal loxodromic", run: decomposition },
    Property { id: "distance-to-unitary", applies: Applies::All, summary: "d(g, U) is 0 or 1 with witnesses", run: distance_to_unitary },
    Property { id: "common-fixed-point", applies: Applies::All, summary: "elliptic families share a fixed point", run: common_fixed_point },
    Property { id: "parabolic-family", applies: Applies::All, summary: "z + p^-n has no common fixed point", run: parabolic_family },
    Property { id: "discreteness-certificate", applies: Applies::All, summary: "cyclic loxodromic groups certify, a unitary generator revokes", run: discreteness_certificate },
    Property { id: "cf-unit-case", applies: Applies::All, summary: "unit continued fractions are unitary with unit gaps", run: cf_unit_case },
    Property { id: "cf-nested-oracle", applies: Applies::All, summary: "convergents agree with nested evaluation", run: cf_nested_oracle },
    Property { id: "class-generators", applies: Applies::All, summary: "random maps have the requested class", run: class_generators },
];

fn stream_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64 + 1)
}

/// Runs one property by id in the given context.
pub fn run_property(id: &str, ctx: &PadicContext, seed: u64, trials: usize) -> PropertyResult {
    run_property_with(id, ctx, seed, trials, Window::default(), None)
}

#[doc(hidden)]
pub fn run_property_with(
    id: &str,
    ctx: &PadicContext,
    seed: u64,
    trials: usize,
    window: Window,
    fault: Option<Fault>,
) -> PropertyResult {
    let (index, prop) = PROPERTIES.iter().enumerate().find(|(_, p)| p.id == id).unwrap_or_else(|| panic!("unknown property {id}"));
    let skip = match prop.applies {
        Applies::OddP if ctx.p() == 2 => Some("requires p >= 3"),
        Applies::P2 if ctx.p() != 2 => Some("requires p = 2"),
        _ => None,
    };
    if let Some(reason) = skip {
        return PropertyResult {
            id: prop.id,
            status: Status::Skipped,
            trials: 0,
            unsupported: 0,
            counterexample: None,
            note: Some(reason.into()),
        };
    }
    let rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, index));
    let mut run = Run {
        ctx,
        s: Sampler::new(ctx, rng).with_window(window),
        n: trials,
        fault,
        done: 0,
        unsupported: 0,
        note: None,
    };
    let outcome = (prop.run)(&mut run);
    let (status, counterexample) = match outcome {
        Ok(()) if run.done == 0 && run.unsupported > 0 => {
            (Status::Skipped, None)
        }
        Ok(()) => (Status::Pass, None),
        Err(c) => (Status::Fail, Some(c)),
    };
    let mut note = run.note;
    if status == Status::Skipped {
        note = Some("every trial needed a larger field".into());
    }
    PropertyResult { id: prop.id, status, trials: run.done, unsupported: run.unsupported, counterexample, note }
}

pub fn run_suite(config: &SuiteConfig) -> crate::Result<SuiteReport> {
    let ctx = PadicContext::new(config.p, config.disc)?;
    let results = PROPERTIES
        .par_iter()
        .map(|p| run_property_with(p.id, &ctx, config.seed, config.trials, config.window, config.fault))
        .collect();
    Ok(SuiteReport { config: config.clone(), results })
}

/// The context used for constructions that need fixed points of elliptic
/// maps: the configured field, or `sqrt(-3)` at p = 2 and `sqrt(-1)` at p = 3.
pub fn extended_context(ctx: &PadicContext) -> crate::Result<PadicContext> {
    if ctx.disc().is_some() {
        return Ok(ctx.clone());
    }
    match ctx.p() {
        2 => ctx.with_disc(Some(-3)),
        3 => ctx.with_disc(Some(-1)),
        _ => Ok(ctx.clone()),
    }
}

fn nonsplit_context(ctx: &PadicContext) -> crate::Result<PadicContext> {
    if ctx.disc().is_some() && !ctx.disc_is_split() {
        return Ok(ctx.clone());
    }
    for d in [-1i64, -2, -3, -5, -6, -7, 2, 3, 5, 6, 7, 10, 11, 13] {
        let c = ctx.with_disc(Some(d))?;
        if !c.disc_is_split() {
            return Ok(c);
        }
    }
    unreachable!("some small discriminant is a non-square")
}

/// A sampler over another context sharing this run's random stream.
fn resample<'c>(run: &mut Run<'_>, ctx: &'c PadicContext) -> Sampler<'c, ChaCha8Rng> {
    let seed = run.rng().gen();
    Sampler::new(ctx, ChaCha8Rng::seed_from_u64(seed)).with_window(run.s.window)
}

fn random_class(run: &mut Run<'_>) -> ElementClass {
    ElementClass::NONTRIVIAL[run.rng().gen_range(0..4)]
}

// ---------------------------------------------------------------------------
// absolute values

fn abs_ultrametric(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n * 10;
    run.trials(n, |r| {
        let (x, y) = (r.s.elem_or_zero(0.05), r.s.elem_or_zero(0.05));
        let (ax, ay, s) = (r.ctx.abs(&x)?, r.ctx.abs(&y)?, r.ctx.abs(&(&x + &y))?);
        let m = ax.clone().max(ay.clone());
        ensure!(s <= m, "|{x} + {y}| = {s} > {m}");
        ensure!(ax == ay || s == m, "|{x} + {y}| = {s} differs from {m}");
        Ok(())
    })
}

fn abs_multiplicative(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n * 10;
    run.trials(n, |r| {
        let (x, y) = (r.s.elem_or_zero(0.05), r.s.elem_or_zero(0.05));
        let lhs = r.ctx.abs(&(&x * &y))?;
        let rhs = &r.ctx.abs(&x)? * &r.ctx.abs(&y)?;
        ensure!(lhs == rhs, "|{x} * {y}| = {lhs}, product of absolute values {rhs}");
        Ok(())
    })
}

fn abs_conjugate(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let ctx = nonsplit_context(run.ctx).map_err(|e| e.to_string())?;
    let mut s = resample(run, &ctx);
    let n = run.n * 10;
    run.note = Some(format!("D = {}", ctx.disc().expect("extension")));
    run.trials(n, |_| {
        let x = s.elem();
        let (a, b) = (ctx.abs(&x)?, ctx.abs(&x.conj())?);
        ensure!(a == b, "|{x}| = {a} but its conjugate has {b}");
        Ok(())
    })
}

fn magnitude_order(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n * 50;
    run.trials(n, |r| {
        let six = int(6);
        let x = r.ctx.abs(&r.s.elem())?;
        let y = r.ctx.abs(&r.s.elem())?;
        let x = if r.rng().gen_bool(0.3) { x.scale(&six) } else { x };
        let (fx, fy) = (x.to_f64(), y.to_f64());
        if (fx - fy).abs() > 10.0 * f64::EPSILON * fx.abs().max(fy.abs()) {
            ensure!((x < y) == (fx < fy), "order of {x} and {y} disagrees with {fx} and {fy}");
        }
        Ok(())
    })
}

fn cyclotomic_increasing(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let p = run.ctx.p();
    let mut prev = Magnitude::zero(p);
    run.trials(6, |r| {
        let k = r.done as u32 + 1;
        let v = r.ctx.cyclotomic_abs(p.pow(k));
        ensure!(v > prev && v < Magnitude::one(p), "|zeta_{{p^{k}}} - 1| = {v} after {prev}");
        prev = v;
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// chordal metric

fn chordal_ultrametric(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n * 10;
    run.trials(n, |r| {
        let (x, y, z) = (r.s.point(), r.s.point(), r.s.point());
        let (xy, yz, xz) = (r.ctx.chordal(&x, &y)?, r.ctx.chordal(&y, &z)?, r.ctx.chordal(&x, &z)?);
        ensure!(xz <= xy.clone().max(yz), "rho({x}, {z}) exceeds the ultrametric bound through {y}");
        ensure!(xz <= Magnitude::one(r.ctx.p()), "rho({x}, {z}) = {xz} > 1");
        Ok(())
    })
}

fn chordal_unitary_isometry(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n;
    run.trials(n, |r| {
        let g = r.s.unitary();
        for _ in 0..10 {
            let (z, w) = (r.s.point(), r.s.point());
            let (a, b) = (r.ctx.chordal(&g.apply(&z), &g.apply(&w))?, r.ctx.chordal(&z, &w)?);
            ensure!(a == b, "unitary {g} moves rho({z}, {w}) from {b} to {a}");
        }
        Ok(())
    })
}

fn cross_ratio_invariance(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n;
    run.trials(n, |r| {
        let g = r.s.map();
        let mut pts: Vec<ProjPoint> = vec![];
        while pts.len() < 4 {
            let z = r.s.point();
            if !pts.contains(&z) {
                pts.push(z);
            }
        }
        let img: Vec<ProjPoint> = pts.iter().map(|z| g.apply(z)).collect();
        let a = r.ctx.cross_ratio_chordal(&pts[0], &pts[1], &pts[2], &pts[3])?;
        let b = r.ctx.cross_ratio_chordal(&img[0], &img[1], &img[2], &img[3])?;
        ensure!(a == b, "{g} changes the cross ratio of {}, {}, {}, {} from {a} to {b}", pts[0], pts[1], pts[2], pts[3]);
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// maps

fn unitary_equivalences(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n;
    run.trials(n, |r| {
        let g = r.s.unitary();
        let one = Magnitude::one(r.ctx.p());
        let norm = r.norm(&g)?;
        ensure!(norm == one, "unitary {g} has norm {norm}");
        let l = r.ctx.lipschitz(&g)?;
        ensure!(l == one, "unitary {g} has Lipschitz constant {l}");
        let d = r.ctx.displacement_gauss(&g)?;
        ensure!(d.is_zero(), "unitary {g} displaces the Gauss point by {d}");
        ensure!(r.ctx.fixes_gauss(&g)?, "unitary {g} moves the Gauss point");
        for _ in 0..50 {
            let (z, w) = (r.s.point(), r.s.point());
            ensure!(
                r.ctx.chordal(&g.apply(&z), &g.apply(&w))? == r.ctx.chordal(&z, &w)?,
                "unitary {g} is not isometric on {z}, {w}"
            );
        }
        for _ in 0..20 {
            let h = r.s.map();
            let nh = r.norm(&h)?;
            for (name, x) in [("gh", g.compose(&h)), ("hg", h.compose(&g)), ("ghg^-1", h.conjugate_by(&g))] {
                let nx = r.norm(&x)?;
                ensure!(nx == nh, "unitary {g}: ||{name}|| = {nx} but ||h|| = {nh} for h = {h}");
            }
        }
        Ok(())
    })
}

fn classify_conjugation(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n * 4;
    run.trials(n, |r| {
        let class = random_class(r);
        let g = r.s.map_of_class(class)?;
        let h = r.s.map();
        let c = r.ctx.classify(&g.conjugate_by(&h))?;
        ensure!(c == class, "{g} is {class} but its conjugate by {h} is {c}");
        Ok(())
    })
}

fn scale_invariance(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n * 4;
    run.trials(n, |r| {
        let g = r.s.map();
        let t = r.s.elem();
        let h = MobiusMap::new(
            &t * g.a(),
            &t * g.b(),
            &t * g.c(),
            &t * g.d(),
        )?;
        ensure!(h == g, "{g} scaled by {t} is a different map");
        let same = r.ctx.norm(&h)? == r.ctx.norm(&g)?
            && r.ctx.M_norm(&h)? == r.ctx.M_norm(&g)?
            && r.ctx.classify(&h)? == r.ctx.classify(&g)?;
        ensure!(same, "invariants of {g} change under scaling by {t}");
        match (r.ctx.fixed_points(&h), r.ctx.fixed_points(&g)) {
            (Ok(a), Ok(b)) => ensure!(a == b, "fixed points of {g} change under scaling"),
            (Err(a), Err(b)) => ensure!(a == b, "fixed point errors of {g} change under scaling"),
            _ => return Err(Miss::Counter(format!("fixed points of {g} depend on scaling"))),
        }
        Ok(())
    })
}

fn lipschitz_sharp(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n;
    run.trials(n, |r| {
        let g = r.s.map();
        let l = r.ctx.lipschitz(&g)?;
        for _ in 0..500 {
            let (z, w) = (r.s.point(), r.s.point());
            let lhs = r.ctx.chordal(&g.apply(&z), &g.apply(&w))?;
            ensure!(lhs <= &l * &r.ctx.chordal(&z, &w)?, "{g} stretches rho({z}, {w}) beyond L = {l}");
        }
        let (z, w) = r.ctx.lipschitz_witness(&g)?;
        let lhs = r.ctx.chordal(&g.apply(&z), &g.apply(&w))?;
        ensure!(z != w && lhs == &l * &r.ctx.chordal(&z, &w)?, "witness {z}, {w} of {g} misses L = {l}");
        Ok(())
    })
}

/// `I + p^j E` with `E` integral and not divisible by p.
fn near_identity(s: &mut Sampler<'_, ChaCha8Rng>, j: i64) -> MobiusMap {
    near_identity_with(s, j, false)
}

/// As [`near_identity`]; with `unit_corner` the upper right entry of `E` is a
/// unit, which makes `rho_0(u, I)` exactly of order `p^-j`.
fn near_identity_with(s: &mut Sampler<'_, ChaCha8Rng>, j: i64, unit_corner: bool) -> MobiusMap {
    loop {
        let mut e: Vec<FieldElem> = (0..4).map(|_| s.integral(0.3)).collect();
        if unit_corner {
            e[1] = s.unit_rational();
        }
        if e.iter().all(|x| s.ctx.abs(x).map(|m| m < Magnitude::one(s.ctx.p())).unwrap_or(true)) {
            continue;
        }
        let pj = s.ctx.p_power(j);
        let one = FieldElem::one();
        let m = [&one + &(&pj * &e[0]), &pj * &e[1], &pj * &e[2], &one + &(&pj * &e[3])];
        let [a, b, c, d] = m;
        if let Ok(g) = MobiusMap::new(a, b, c, d) {
            return g;
        }
    }
}

fn rho0_below_dist_identity(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n * 5;
    run.trials(n, |r| {
        // Four classes, then a map close to the identity.
        let g = match ElementClass::NONTRIVIAL.get(r.done % 5) {
            Some(&class) => r.s.map_of_class(class)?,
            None => {
                let j = r.rng().gen_range(1..=4);
                near_identity(&mut r.s, j)
            }
        };
        let dist = r.ctx.dist_to_identity(&g)?;
        match r.ctx.rho0_identity(&g)? {
            Rho0::Exact { value, .. } => ensure!(value <= dist, "rho_0({g}, I) = {value} > ||g - I|| = {dist}"),
            Rho0::Bracket { witness, witness_value, .. } => {
                ensure!(witness_value <= dist, "rho({g} {witness}, {witness}) = {witness_value} > ||g - I|| = {dist}")
            }
        }
        Ok(())
    })
}

fn epsilon_bracket(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let rational = run.ctx.with_disc(None).map_err(|e| e.to_string())?;
    let mut s = resample(run, &rational);
    let n = run.n;
    run.trials(n * 5, |r| {
        let class = ElementClass::ALL[r.done % 5];
        let g = s.map_of_class(class)?;
        let (m, e) = (r.ctx.M_norm(&g)?, r.ctx.epsilon(&g)?);
        ensure!(e.scale(&rat(1, 2)) <= m && m <= e.scale(&int(6)), "{class} {g}: M = {m}, eps = {e}");
        Ok(())
    })
}

fn epsilon1_bracket(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n;
    run.trials(n * 5, |r| {
        let class = ElementClass::ALL[r.done % 5];
        let g = r.s.map_of_class(class)?;
        let (m, e) = (r.ctx.M_norm(&g)?, r.ctx.epsilon1(&g)?);
        ensure!(e.scale(&rat(1, 2)) <= m && m <= e, "{class} {g}: M = {m}, eps1 = {e}");
        if class == ElementClass::Parabolic {
            let e2 = r.ctx.epsilon2(&g)?;
            ensure!(e2.scale(&rat(1, 2)) <= m && m <= e2, "parabolic {g}: M = {m}, eps2 = {e2}");
        }
        Ok(())
    })
}

fn rho0_exact(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n;
    run.trials(n * 5, |r| {
        let class = ElementClass::ALL[r.done % 5];
        let g = r.s.map_of_class(class)?;
        let m = r.ctx.M_norm(&g)?;
        let Rho0::Exact { value, witness } = r.ctx.rho0_identity(&g)? else {
            return Err(Miss::Counter(format!("no exact value for {g}")));
        };
        ensure!(value == m, "rho_0({g}, I) = {value} but M = {m}");
        ensure!(r.ctx.displacement(&g, &witness)? == m, "witness {witness} of {g} misses M = {m}");
        for _ in 0..500 {
            let z = r.s.point();
            let d = r.ctx.displacement(&g, &z)?;
            ensure!(d <= m, "rho({g} {z}, {z}) = {d} > M = {m}");
        }
        Ok(())
    })
}

fn rho0_bracket(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n;
    run.trials(n * 5, |r| {
        let class = ElementClass::ALL[r.done % 5];
        let g = r.s.map_of_class(class)?;
        let m = r.ctx.M_norm(&g)?;
        let rho = r.ctx.rho0_identity(&g)?;
        let Rho0::Bracket { lower, upper, witness, witness_value } = &rho else {
            return Err(Miss::Counter(format!("exact value at p = 2 for {g}")));
        };
        ensure!(*lower == m.scale(&rat(1, 2)) && *upper == m.scale(&int(2)), "bracket {rho} for M = {m}");
        ensure!(r.ctx.displacement(&g, witness)? == *witness_value, "witness value of {g} is wrong");
        let mut best = witness_value.clone();
        for _ in 0..500 {
            let z = r.s.point();
            let d = r.ctx.displacement(&g, &z)?;
            ensure!(d <= *upper, "rho({g} {z}, {z}) = {d} > 2M = {upper}");
            best = best.max(d);
        }
        ensure!(best >= *lower, "no sampled displacement of {g} reaches M/2 = {lower}");
        Ok(())
    })
}

fn three_point_convergence(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n;
    run.trials(n, |r| {
        let f = r.s.map();
        let p = r.ctx.p();
        let big = r.ctx.max_entry(&f)?;
        let k = &big * &big;
        let j0 = 1 + big.exponent().map_or(0, |e| e.ceil().to_integer().max(0));
        let z = [ProjPoint::zero(), ProjPoint::one(), ProjPoint::Infinity];
        let mut prev: Option<Magnitude> = None;
        for j in j0..j0 + 8 {
            let u = near_identity_with(&mut r.s, j, true);
            let fj = u.compose(&f);
            let w: Vec<ProjPoint> = z.iter().map(|x| fj.apply(x)).collect();
            let g = r.ctx.mobius_through_three_points([&z[0], &z[1], &z[2]], [&w[0], &w[1], &w[2]])?;
            ensure!(g == fj, "three-point reconstruction of {fj} gave {g}");
            // Rescale the recovered map to the representative U F.
            let [ua, ub, uc, ud] = u.entries();
            let [fa, fb, fc, fd] = f.entries();
            let raw = [ua * fa + ub * fc, ua * fb + ub * fd, uc * fa + ud * fc, uc * fb + ud * fd];
            let lead = g.entries().iter().position(|x| !x.is_zero()).expect("nonzero map");
            let rep = g.scaled_entries(&raw[lead]);
            let mut diff = Magnitude::zero(p);
            for (x, y) in rep.iter().zip(f.entries()) {
                diff = diff.max(r.ctx.abs(&(x - y))?);
            }
            let bound = &k * &Magnitude::p_pow_int(p, -j);
            ensure!(diff <= bound, "entries of f_{j} are {diff} from f = {f}, above {bound}");
            let rho = r.ctx.rho0(&fj, &f)?;
            let (value, cap) = match &rho {
                Rho0::Exact { value, .. } => (value.clone(), Magnitude::p_pow_int(p, -j)),
                Rho0::Bracket { upper, .. } => (upper.clone(), Magnitude::p_pow_int(p, 1 - j)),
            };
            ensure!(value <= cap, "rho_0(f_{j}, f) = {rho} exceeds {cap}");
            if let Some(pv) = &prev {
                ensure!(value <= *pv, "rho_0(f_n, f) increased from {pv} to {value}");
            }
            prev = Some(value);
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Berkovich tree

fn berkovich_isometry(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n;
    run.trials(n, |r| {
        let g = r.s.map();
        for _ in 0..10 {
            let (x, y) = (r.s.disk(), r.s.disk());
            let a = r.ctx.hyp_dist(&x, &y)?;
            let b = r.ctx.hyp_dist(&r.ctx.act(&g, &x)?, &r.ctx.act(&g, &y)?)?;
            ensure!(a == b, "{g} changes rho({x}, {y}) from {a} to {b}");
        }
        Ok(())
    })
}

fn gauss_displacement(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n;
    run.trials(n * 5, |r| {
        let class = ElementClass::ALL[r.done % 5];
        let g = r.s.map_of_class(class)?;
        let gauss = BerkPoint::gauss();
        let d = r.ctx.hyp_dist(&r.ctx.act(&g, &gauss)?, &gauss)?;
        let e = r.norm(&g)?.exponent().expect("norms are powers of p") * 2;
        ensure!(d == e, "{g} moves the Gauss point by {d}, 2 log ||g|| = {e}");
        Ok(())
    })
}

fn action_composition(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n * 4;
    run.trials(n, |r| {
        let (g, h) = (r.s.map(), r.s.map());
        let x = if r.rng().gen_bool(0.2) { BerkPoint::TypeI(r.s.point()) } else { r.s.disk() };
        let a = r.ctx.act(&g.compose(&h), &x)?;
        let b = r.ctx.act(&g, &r.ctx.act(&h, &x)?)?;
        ensure!(r.ctx.berk_eq(&a, &b)?, "act({g} . {h}, {x}) = {a} but stepwise {b}");
        Ok(())
    })
}

fn tree_laws(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n * 4;
    run.trials(n, |r| {
        let c = r.ctx;
        let pick = |r: &mut Run<'_>| {
            if r.rng().gen_bool(0.2) {
                let z = r.s.elem_or_zero(0.2);
                BerkPoint::TypeI(ProjPoint::Finite(z))
            } else {
                r.s.disk()
            }
        };
        let (x, y, z) = (pick(r), pick(r), pick(r));
        ensure!(c.berk_eq(&c.join(&x, &y)?, &c.join(&y, &x)?)?, "join of {x}, {y} is not symmetric");
        ensure!(c.berk_eq(&c.join(&x, &x)?, &x)?, "join of {x} with itself moved");
        let l = c.join(&c.join(&x, &y)?, &z)?;
        let rr = c.join(&x, &c.join(&y, &z)?)?;
        ensure!(c.berk_eq(&l, &rr)?, "join of {x}, {y}, {z} is not associative");
        let q: Vec<BerkPoint> = (0..4).map(|_| r.s.disk()).collect();
        let d = |i: usize, j: usize| c.hyp_dist(&q[i], &q[j]);
        let mut sums = [d(0, 1)? + d(2, 3)?, d(0, 2)? + d(1, 3)?, d(0, 3)? + d(1, 2)?];
        sums.sort();
        ensure!(sums[1] == sums[2], "four-point condition fails on {}, {}, {}, {}", q[0], q[1], q[2], q[3]);
        Ok(())
    })
}

fn unitary_fixes_gauss(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n * 4;
    run.trials(n, |r| {
        let g = if r.rng().gen_bool(0.5) { r.s.unitary() } else { r.s.map() };
        let (u, f) = (r.ctx.is_unitary(&g)?, r.ctx.fixes_gauss(&g)?);
        ensure!(u == f, "{g}: unitary {u}, fixes Gauss {f}");
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// geometry

/// `lambda` with `z -> lambda^2 z` of the class.
fn square_root_multiplier(s: &mut Sampler<'_, ChaCha8Rng>, class: ElementClass) -> crate::Result<FieldElem> {
    let ctx = s.ctx;
    let p = ctx.p();
    let one = FieldElem::one();
    loop {
        let j = s.rng.gen_range(1..=3);
        let lambda = match class {
            ElementClass::Loxodromic => {
                let e = if s.rng.gen_bool(0.5) { j } else { -j };
                &ctx.p_power(e) * &s.unit_rational()
            }
            ElementClass::WildElliptic => &one + &(&ctx.p_power(j) * &s.unit_rational()),
            ElementClass::TameElliptic => match (p, ctx.disc()) {
                (2, Some(-3)) => {
                    let w = FieldElem::new(rat(-1, 2), rat(1, 2), Some(-3));
                    &w * &(&one + &(&ctx.p_power(j) * &s.unit_rational()))
                }
                (3, Some(-1)) => {
                    let i = FieldElem::sqrt_disc(-1);
                    &i * &(&one + &(&ctx.p_power(j) * &s.unit_rational()))
                }
                (2, _) | (3, _) => return Err(Error::unsupported(if p == 2 { -3 } else { -1 })),
                _ => s.unit_rational(),
            },
            _ => unreachable!("multipliers exist for elliptic and loxodromic classes"),
        };
        let k = &lambda * &lambda;
        let g = MobiusMap::diag(k, one.clone())?;
        if ctx.classify(&g)? == class {
            return Ok(lambda);
        }
    }
}

fn involution_census(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let ctx = extended_context(run.ctx).map_err(|e| e.to_string())?;
    let mut s = resample(run, &ctx);
    let n = run.n;
    let p = ctx.p();
    run.trials(n * 4, |r| {
        let class = ElementClass::NONTRIVIAL[r.done % 4];
        let h = s.map();
        let g = match class {
            ElementClass::Parabolic => MobiusMap::from_ints(1, 1, 0, 1)?.conjugate_by(&h),
            _ => {
                let l = square_root_multiplier(&mut s, class)?;
                MobiusMap::diag(&l * &l, FieldElem::one())?.conjugate_by(&h)
            }
        };
        ensure!(ctx.classify(&g)? == class, "constructed {g} is not {class}");
        let (f, inv) = ctx.factor_involutions_with(&g, &FieldElem::one())?;
        ensure!(f.compose(&inv) == g, "{f} . {inv} != {g}");
        ensure!(f.compose(&f).is_identity() && inv.compose(&inv).is_identity(), "factors of {g} are not involutions");
        let (af, ah) = (ctx.axis(&f)?, ctx.axis(&inv)?);
        let shared: Vec<&ProjPoint> = [&af.alpha, &af.beta].into_iter().filter(|z| ah.has_end(z)).collect();
        if class == ElementClass::Parabolic {
            ensure!(shared.len() == 1, "axes {af}, {ah} of parabolic {g} share {} ends", shared.len());
            ensure!(ctx.fixed_points(&g)? == FixedPoints::One(shared[0].clone()), "shared end is not fixed by {g}");
            return Ok(());
        }
        ensure!(shared.is_empty(), "axes {af}, {ah} of {class} {g} share an end");
        let ag = ctx.axis(&g)?;
        ensure!(ctx.is_orthogonal(&ag, &af)? && ctx.is_orthogonal(&ag, &ah)?, "involution axes of {g} are not orthogonal to {ag}");
        let elliptic = class.is_elliptic();
        if p == 2 {
            let tf = ctx.tailed_axis_relative(&f, &ag)?;
            let th = ctx.tailed_axis_relative(&inv, &ag)?;
            let meet = ctx.tailed_axes_meet(&tf, &th)?;
            ensure!(meet == elliptic, "{class} {g}: tailed axes meet = {meet}");
            return Ok(());
        }
        let (sf, sh) = (af.segment(), ah.segment());
        let meet = ctx.segment_intersection(&sf, &sh)?;
        ensure!(meet.is_some() == elliptic, "{class} {g}: axes {af}, {ah} meet = {}", meet.is_some());
        if elliptic {
            let mc = ctx.project(&sf, &sh.a)?;
            let md = ctx.project(&sf, &sh.b)?;
            let single = ctx.berk_eq(&mc, &md)?;
            ensure!(single == (class == ElementClass::TameElliptic), "{class} {g}: intersection is a single point = {single}");
            for x in [&mc, &md] {
                ensure!(ctx.locus_membership(&g, x)?, "intersection point {x} of the axes is not fixed by {g}");
            }
        }
        Ok(())
    })
}

fn random_geodesic(s: &mut Sampler<'_, ChaCha8Rng>) -> Geodesic {
    loop {
        if let Ok(g) = Geodesic::new(s.point(), s.point()) {
            return g;
        }
    }
}

fn orthogonal_to(s: &mut Sampler<'_, ChaCha8Rng>, a: &Geodesic) -> crate::Result<Geodesic> {
    let sigma = involution_with_fixed_points(&a.alpha, &a.beta)?;
    loop {
        let z = s.point();
        let w = sigma.apply(&z);
        if z != w {
            return Geodesic::new(z, w);
        }
    }
}

fn orthogonality_symmetric(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n * 4;
    run.trials(n, |r| {
        let a = random_geodesic(&mut r.s);
        let b = if r.rng().gen_bool(0.5) { orthogonal_to(&mut r.s, &a)? } else { random_geodesic(&mut r.s) };
        let (x, y) = (r.ctx.is_orthogonal(&a, &b)?, r.ctx.is_orthogonal(&b, &a)?);
        ensure!(x == y, "{a} perp {b} is {x} but the converse is {y}");
        Ok(())
    })
}

fn orthogonal_pairs_meet(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n * 2;
    run.trials(n, |r| {
        let a = random_geodesic(&mut r.s);
        let b = orthogonal_to(&mut r.s, &a)?;
        ensure!(r.ctx.is_orthogonal(&a, &b)?, "constructed {b} is not orthogonal to {a}");
        let meet = r.ctx.locus_intersect(&FixedLocus::Axis(a.clone()), &FixedLocus::Axis(b.clone()))?;
        if r.ctx.p() == 2 {
            ensure!(meet.is_none(), "orthogonal {a}, {b} meet at p = 2");
        } else {
            let (sa, sb) = (a.segment(), b.segment());
            let single = r.ctx.berk_eq(&r.ctx.project(&sa, &sb.a)?, &r.ctx.project(&sa, &sb.b)?)?;
            ensure!(meet.is_some() && single, "orthogonal {a}, {b} do not meet in exactly one point");
        }
        Ok(())
    })
}

fn grid_disks(ctx: &PadicContext, extra: &[ProjPoint]) -> Vec<BerkPoint> {
    let mut centers = vec![FieldElem::zero()];
    let units = [FieldElem::one(), &FieldElem::one() + &ctx.p_elem()];
    for k in -3..=3 {
        for u in &units {
            let x = &ctx.p_power(k) * u;
            centers.push(-&x);
            centers.push(x);
        }
    }
    centers.extend(extra.iter().filter_map(|z| z.finite().cloned()));
    let mut out = vec![];
    for c in &centers {
        for s in -6..=6 {
            out.push(BerkPoint::disk(c.clone(), Exponent::new(s, 2)));
        }
    }
    out
}

fn fixed_locus_grid(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let ctx = extended_context(run.ctx).map_err(|e| e.to_string())?;
    let mut s = resample(run, &ctx);
    let n = run.n;
    let random_disks = 10;
    let half = Exponent::new(1, 2);
    run.trials(n * 5, |r| {
        let class = ElementClass::ALL[r.done % 5];
        let g = s.diagonalizable_of_class(class)?;
        let locus = ctx.fixed_locus(&g)?;
        let fixed = ctx.fixed_points(&g)?.points();
        let mut disks = grid_disks(&ctx, &fixed);
        disks.extend((0..random_disks).map(|_| s.disk()));
        for x in &disks {
            let (a, b) = (ctx.locus_contains(&locus, x)?, ctx.locus_membership(&g, x)?);
            ensure!(a == b, "{class} {g}: {locus} contains {x} = {a}, fixed = {b}");
        }
        let edge = match &locus {
            FixedLocus::Axis(geo) | FixedLocus::Tube(geo, _) => {
                let r0 = locus.axis_and_radius()?.1;
                let back = normalizer(&geo.alpha, &geo.beta)?.inverse();
                Some((
                    ctx.act(&back, &BerkPoint::disk(FieldElem::one(), -r0))?,
                    ctx.act(&back, &BerkPoint::disk(FieldElem::one(), -r0 - half))?,
                ))
            }
            FixedLocus::Horoball { fixed_point, boundary } => {
                let phi = to_infinity(fixed_point);
                let e = ctx.act(&phi, boundary)?.radius_exp().expect("type II");
                let back = phi.inverse();
                Some((boundary.clone(), ctx.act(&back, &BerkPoint::disk(FieldElem::zero(), e - half))?))
            }
            _ => None,
        };
        if let Some((inside, outside)) = edge {
            ensure!(ctx.locus_membership(&g, &inside)?, "{class} {g}: boundary point {inside} is not fixed");
            ensure!(!ctx.locus_membership(&g, &outside)?, "{class} {g}: {outside} beyond the boundary is fixed");
            ensure!(
                ctx.locus_contains(&locus, &inside)? && !ctx.locus_contains(&locus, &outside)?,
                "{class} {g}: descriptor {locus} misplaces its boundary"
            );
        }
        Ok(())
    })
}

fn decomposition(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n;
    run.trials(n * 5, |r| {
        let class = ElementClass::ALL[r.done % 5];
        let g = r.s.map_of_class(class)?;
        let (u, f) = r.ctx.decompose_unitary_loxodromic(&g)?;
        ensure!(r.ctx.is_unitary(&u)?, "{g}: u = {u} is not unitary");
        ensure!(u.compose(&f) == g, "{g}: u . f = {} differs", u.compose(&f));
        if !f.is_identity() {
            ensure!(r.ctx.classify(&f)? == ElementClass::Loxodromic, "{g}: f = {f} is not loxodromic");
            let FixedPoints::Two(a, b) = r.ctx.fixed_points(&f)? else {
                return Err(Miss::Counter(format!("{g}: f = {f} lacks two fixed points")));
            };
            let w = r.ctx.antipodal_witness(&a, &b)?;
            let ok = match &w {
                Some(w) => r.ctx.is_unitary(w)? && w.apply(&ProjPoint::zero()) == a && w.apply(&ProjPoint::Infinity) == b,
                None => false,
            };
            ensure!(ok, "{g}: fixed points {a}, {b} of f are not antipodal");
        }
        Ok(())
    })
}

fn distance_to_unitary(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n;
    run.trials(n * 2, |r| {
        let one = Magnitude::one(r.ctx.p());
        if r.done % 2 == 0 {
            let g = r.s.unitary();
            let d = r.ctx.d_to_unitary(&g)?;
            ensure!(d.is_zero(), "unitary {g} has d(g, U) = {d}");
            return Ok(());
        }
        let g = loop {
            let g = r.s.map();
            if !r.ctx.is_unitary(&g)? {
                break g;
            }
        };
        let d = r.ctx.d_to_unitary(&g)?;
        ensure!(d == one, "non-unitary {g} has d(g, U) = {d}");
        for _ in 0..10 {
            let u = r.s.unitary();
            let z = r.ctx.unitary_distance_witness(&g, &u)?;
            let v = r.ctx.chordal(&g.apply(&z), &u.apply(&z))?;
            ensure!(v == one, "witness {z} for {g} against {u} gives {v}");
            if let Rho0::Exact { value, .. } = r.ctx.rho0(&g, &u)? {
                ensure!(value == one, "rho_0({g}, {u}) = {value}");
            }
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// groups

/// Elliptic conjugates of `z -> k z` by unitary maps; all fix the Gauss point.
fn elliptic_family(s: &mut Sampler<'_, ChaCha8Rng>, size: usize) -> crate::Result<Vec<MobiusMap>> {
    let mut out = vec![];
    for i in 0..size {
        let class = if i % 2 == 0 || s.rng.gen_bool(0.5) { ElementClass::TameElliptic } else { ElementClass::WildElliptic };
        let u = s.unitary();
        out.push(s.diagonalizable_conjugated(class, &u)?);
    }
    Ok(out)
}

fn common_fixed_point(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let ctx = extended_context(run.ctx).map_err(|e| e.to_string())?;
    let mut s = resample(run, &ctx);
    let n = run.n;
    run.trials(n, |_| {
        let size = s.rng.gen_range(2..=4);
        let mut family = None;
        for _ in 0..50 {
            let fam = elliptic_family(&mut s, size)?;
            match ctx.common_fixed_point(&fam) {
                Err(Error::NotAllElliptic { .. }) => continue,
                other => {
                    family = Some((fam, other?));
                    break;
                }
            }
        }
        let Some((fam, found)) = family else {
            return Err(Miss::Counter("no all-elliptic family in 50 draws".into()));
        };
        let names: Vec<String> = fam.iter().map(|g| g.to_string()).collect();
        let CommonFixed::Point(x) = found else {
            return Err(Miss::Counter(format!("no common fixed point for [{}]", names.join("; "))));
        };
        for g in &fam {
            ensure!(ctx.locus_membership(g, &x)?, "{x} is not fixed by {g}");
        }
        let mut bad = fam.clone();
        bad.push(s.map_of_class(ElementClass::Loxodromic)?);
        match ctx.common_fixed_point(&bad) {
            Err(Error::NotAllElliptic { .. }) => Ok(()),
            other => Err(Miss::Counter(format!("loxodromic member accepted: {other:?}"))),
        }
    })
}

fn parabolic_family(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let ctx = run.ctx;
    run.trials(1, |_| {
        let gens: Vec<MobiusMap> = (1..=3)
            .map(|k| MobiusMap::new(FieldElem::one(), ctx.p_power(-k), FieldElem::zero(), FieldElem::one()))
            .collect::<crate::Result<_>>()?;
        ensure!(
            matches!(ctx.common_fixed_point(&gens), Err(Error::NotAllElliptic { .. })),
            "parabolic family passed the ellipticity check"
        );
        let loci: Vec<FixedLocus> = gens.iter().map(|g| ctx.fixed_locus(g)).collect::<crate::Result<_>>()?;
        let mut disks = grid_disks(ctx, &[]);
        for c in [FieldElem::zero(), FieldElem::one()] {
            disks.extend((-3..=8).map(|s| BerkPoint::disk(c.clone(), Exponent::from_integer(s))));
        }
        for depth in 1..=3 {
            let mut lowest: Option<Exponent> = None;
            for x in &disks {
                let mut inside = true;
                for (g, l) in gens[..depth].iter().zip(&loci) {
                    let (a, b) = (ctx.locus_contains(l, x)?, ctx.locus_membership(g, x)?);
                    ensure!(a == b, "{l} and the action of {g} disagree on {x}");
                    inside &= a;
                }
                if inside {
                    let s = x.radius_exp().expect("type II");
                    lowest = Some(lowest.map_or(s, |m: Exponent| m.min(s)));
                }
            }
            ensure!(
                lowest == Some(Exponent::from_integer(depth as i64)),
                "first {depth} horoballs reach down to radius exponent {lowest:?}"
            );
        }
        Ok(())
    })
}

fn discreteness_certificate(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n;
    run.trials(n, |r| {
        let g = r.s.map_of_class(ElementClass::Loxodromic)?;
        let rep = r.ctx.discreteness_report(&GroupSpec::new(vec![g.clone()], 4))?;
        ensure!(rep.verdict == Verdict::DiscreteCertified, "<{g}> is not certified: {}", rep.to_json());
        if let Some(m) = &rep.min_distance_to_identity {
            ensure!(*m >= Magnitude::one(r.ctx.p()), "<{g}> has min ||h - I|| = {m} < 1");
        }
        let u = loop {
            let u = r.s.unitary();
            if !u.is_identity() {
                break u;
            }
        };
        let rep = r.ctx.discreteness_report(&GroupSpec::new(vec![g.clone(), u.clone()], 2))?;
        ensure!(rep.verdict == Verdict::NotCertified, "<{g}, {u}> is certified despite a unitary generator");
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// continued fractions

fn cf_unit_case(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n.div_ceil(4).max(1);
    run.trials(n, |r| {
        let len = 50;
        let ones = r.rng().gen_bool(0.3);
        let b: Vec<FieldElem> = (0..len).map(|_| if ones { FieldElem::one() } else { r.s.integral(0.2) }).collect();
        let spec = CFSpec::new(vec![FieldElem::one(); len], b)?;
        for (k, t) in spec.convergents(len)?.iter().enumerate() {
            ensure!(r.ctx.is_unitary(t)?, "T_{} = {t} is not unitary", k + 1);
        }
        let one = Magnitude::one(r.ctx.p());
        let gaps = r.ctx.gap_sequence(&spec, len)?;
        ensure!(gaps.iter().all(|g| *g == one), "gap below 1 in a unit fraction");
        ensure!(
            matches!(r.ctx.diverges_classically_unit_case(&spec)?, Divergence::Diverges { .. }),
            "divergence certificate did not fire"
        );
        Ok(())
    })
}

fn cf_nested_oracle(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = run.n;
    run.trials(n, |r| {
        let len = 20;
        let a: Vec<FieldElem> = (0..len).map(|_| r.s.elem()).collect();
        let b: Vec<FieldElem> = (0..len).map(|_| r.s.elem_or_zero(0.2)).collect();
        let spec = CFSpec::new(a, b)?;
        let maps = spec.convergents(len)?;
        for k in 1..=len {
            let (v, w) = (maps[k - 1].apply(&ProjPoint::zero()), spec.nested_value(k)?);
            ensure!(v == w, "T_{k}(0) = {v} but nested evaluation gives {w}");
            if k < len {
                ensure!(maps[k].apply(&ProjPoint::Infinity) == v, "T_{}(inf) != T_{k}(0)", k + 1);
            }
        }
        Ok(())
    })
}

fn class_generators(run: &mut Run<'_>) -> std::result::Result<(), String> {
    let n = 5 * run.n.max(1000);
    run.trials(n, |r| {
        let class = ElementClass::ALL[r.done % 5];
        let g = r.s.map_of_class(class)?;
        let c = r.ctx.classify(&g)?;
        ensure!(c == class, "generator for {class} produced {g} of class {c}");
        match r.s.diagonalizable_of_class(class) {
            Ok(g) => {
                let c = r.ctx.classify(&g)?;
                ensure!(c == class, "diagonal generator for {class} produced {g} of class {c}");
            }
            Err(Error::UnsupportedExtension { .. }) => {}
            Err(e) => return Err(e.into()),
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_is_deterministic() {
        let cfg = SuiteConfig { trials: 2, ..SuiteConfig::default() };
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert!(a.passed(), "{}", a.to_text());
    }

    #[test]
    fn scaled_norm_is_caught() {
        let ctx = PadicContext::new(3, None).unwrap();
        let r = run_property_with("unitary-equivalences", &ctx, 0, 3, Window::default(), Some(Fault::ScaleNorm));
        assert_eq!(r.status, Status::Fail);
        assert!(r.counterexample.unwrap().contains("norm"));
    }
}
