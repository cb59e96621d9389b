//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines always reach the log; exits nonzero if any criterion fails.

use std::time::Instant;

use padic_mobius::verify::{run_property, run_property_with, run_suite, PropertyResult, Status, SuiteConfig};
use padic_mobius::{CFSpec, Divergence, Magnitude, PadicContext};
use padic_mobius::random::Window;

const SEED: u64 = 20_240_501;

struct Check {
    ok: bool,
    detail: String,
}

impl Check {
    fn new() -> Self {
        Check { ok: true, detail: String::new() }
    }

    fn note(&mut self, s: impl AsRef<str>) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(s.as_ref());
    }

    fn fail(&mut self, s: impl AsRef<str>) {
        self.ok = false;
        self.note(format!("FAILED {}", s.as_ref()));
    }

    /// Records a property run that must pass with at least `min` trials.
    fn property(&mut self, label: &str, r: &PropertyResult, min: usize) {
        let mut line = format!("{label} {}x", r.trials);
        if r.unsupported > 0 {
            line.push_str(&format!(" (+{} outside the field)", r.unsupported));
        }
        match r.status {
            Status::Pass if r.trials >= min => self.note(line),
            Status::Pass => self.fail(format!("{line}: fewer than {min} trials")),
            Status::Skipped => self.fail(format!("{line}: skipped")),
            Status::Fail => self.fail(format!("{line}: {}", r.counterexample.as_deref().unwrap_or("?"))),
        }
    }
}

fn ctx(p: u64, d: Option<i64>) -> PadicContext {
    PadicContext::new(p, d).expect("valid context")
}

fn c1() -> Check {
    let mut c = Check::new();
    for p in [2, 3, 5] {
        c.property(&format!("p={p}"), &run_property("unitary-equivalences", &ctx(p, None), SEED, 300), 300);
    }
    c
}

fn c2() -> Check {
    let mut c = Check::new();
    for p in [2, 3, 5] {
        c.property(&format!("p={p}"), &run_property("gauss-displacement", &ctx(p, None), SEED, 200), 1000);
    }
    c
}

fn c3() -> Check {
    let mut c = Check::new();
    for p in [2, 3, 5] {
        c.property(&format!("p={p}"), &run_property("lipschitz-sharp", &ctx(p, None), SEED, 100), 100);
    }
    c
}

fn c4() -> Check {
    let mut c = Check::new();
    for p in [3, 5] {
        c.property(&format!("exact p={p}"), &run_property("rho0-exact", &ctx(p, None), SEED, 20), 100);
    }
    c.property("bracket p=2", &run_property("rho0-bracket", &ctx(2, None), SEED, 20), 100);
    c
}

fn c5() -> Check {
    let mut c = Check::new();
    for p in [2, 3, 5] {
        let k = ctx(p, None);
        c.property(&format!("eps p={p}"), &run_property("epsilon-bracket", &k, SEED, 200), 1000);
        c.property(&format!("eps1/eps2 p={p}"), &run_property("epsilon1-bracket", &k, SEED, 200), 1000);
        c.property(&format!("rho0<=||g-I|| p={p}"), &run_property("rho0-below-dist-identity", &k, SEED, 200), 800);
    }
    c
}

fn c6() -> Check {
    let mut c = Check::new();
    for p in [3, 5] {
        c.property(&format!("p={p}"), &run_property("distance-to-unitary", &ctx(p, None), SEED, 100), 200);
    }
    c
}

fn c7() -> Check {
    let mut c = Check::new();
    for p in [2i64, 3] {
        for d in [-1, -3, p] {
            let r = run_property("unitary-loxodromic-decomposition", &ctx(p as u64, Some(d)), SEED, 100);
            let total = r.trials + r.unsupported;
            c.property(&format!("p={p} D={d}"), &r, 400);
            if r.unsupported * 5 >= total {
                c.fail(format!("p={p} D={d}: {} of {total} draws outside the field", r.unsupported));
            }
        }
    }
    c
}

fn c8() -> Check {
    let mut c = Check::new();
    for p in [2, 3] {
        c.property(&format!("p={p}"), &run_property("involution-census", &ctx(p, None), SEED, 50), 200);
    }
    c
}

fn c9() -> Check {
    let mut c = Check::new();
    for p in [2, 3, 5] {
        c.property(&format!("p={p}"), &run_property("fixed-locus-grid", &ctx(p, None), SEED, 20), 100);
    }
    c
}

fn c10() -> Check {
    let mut c = Check::new();
    for p in [2, 3, 5] {
        c.property(&format!("p={p}"), &run_property("common-fixed-point", &ctx(p, None), SEED, 20), 20);
    }
    c
}

fn c11() -> Check {
    let mut c = Check::new();
    let ones = CFSpec::unit_ones(50);
    for p in [2, 3, 5] {
        let k = ctx(p, None);
        let gaps = k.gap_sequence(&ones, 50).expect("gaps");
        if !gaps.iter().all(|g| *g == Magnitude::one(p)) {
            c.fail(format!("p={p}: gap below 1"));
        }
        match k.diverges_classically_unit_case(&ones).expect("test") {
            Divergence::Diverges { checked_terms: 50 } => {}
            other => c.fail(format!("p={p}: {other:?}")),
        }
        for n in 1..=50 {
            if ones.convergent_value(n).unwrap() != ones.nested_value(n).unwrap() {
                c.fail(format!("p={p}: T_{n}(0) differs from nested evaluation"));
            }
        }
        c.property(&format!("p={p} random unit"), &run_property("cf-unit-case", &k, SEED, 20), 5);
        c.property(&format!("p={p} nested"), &run_property("cf-nested-oracle", &k, SEED, 20), 20);
    }
    c.note("all-ones: 50 unit gaps and certificate at p=2,3,5");
    c
}

fn c12() -> Check {
    let mut c = Check::new();
    for p in [3, 5] {
        c.property(&format!("p={p}"), &run_property("three-point-convergence", &ctx(p, None), SEED, 10), 10);
    }
    c
}

fn c13() -> Check {
    let mut c = Check::new();
    for p in [3, 2] {
        let cfg = SuiteConfig::new(p, 0, 20);
        let a = run_suite(&cfg).expect("suite");
        let b = run_suite(&cfg).expect("suite");
        let same = a.to_text() == b.to_text() && a.to_json() == b.to_json();
        if !same {
            c.fail(format!("p={p}: transcripts differ"));
        }
        if !a.passed() {
            c.fail(format!("p={p}: suite failed\n{}", a.to_text()));
        }
        c.note(format!(
            "p={p}: identical transcripts, {} pass {} skipped",
            a.count(Status::Pass),
            a.count(Status::Skipped)
        ));
    }
    let fault = run_property_with(
        "unitary-equivalences",
        &ctx(3, None),
        0,
        5,
        Window::default(),
        Some(padic_mobius::verify::Fault::ScaleNorm),
    );
    if fault.status != Status::Fail {
        c.fail("corrupted norm went unnoticed");
    }
    c
}

fn main() {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 13] = [
        ("unitary equivalences", c1),
        ("Gauss displacement equals 2 log ||g||", c2),
        ("Lipschitz sharpness", c3),
        ("uniform distance to the identity", c4),
        ("inequality battery", c5),
        ("distance to the unitary group", c6),
        ("unitary-loxodromic decomposition", c7),
        ("involution geometry census", c8),
        ("fixed loci on the disk grid", c9),
        ("common fixed points of elliptic families", c10),
        ("continued fraction divergence", c11),
        ("three-point convergence", c12),
        ("determinism", c13),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let c = f();
        if !c.ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name} [{:.1}s] {}",
            i + 1,
            if c.ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            c.detail
        );
    }
    println!("acceptance: {} of 13 passed in {:.1}s", 13 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
