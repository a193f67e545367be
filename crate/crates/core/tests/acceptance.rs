//! The eight acceptance criteria. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use frobhecke::frobenius::builtin;
use frobhecke::sample::Sampler;
use frobhecke::verify::{self, Suite};

const SEED: u64 = 20_240_611;

type Criterion<'a> = (&'static str, Box<dyn FnOnce(&mut Sampler) -> Suite + 'a>);

fn main() -> ExitCode {
    let algs = builtin::all();
    let mut root = Sampler::new(SEED);
    let criteria: Vec<Criterion> = vec![
        ("1 frobenius", Box::new(|_| verify::frobenius_suite(&algs))),
        ("2 teleporter", Box::new(|_| verify::teleporter_suite(&algs))),
        ("3 demazure", Box::new(|r| verify::demazure_suite(&algs, r, 500))),
        ("4 wreath", Box::new(|r| verify::wreath_suite(&algs, r, 200))),
        ("5 oracle", Box::new(|r| verify::oracle_suite(&algs, r, 200, 100))),
        ("6 higher-level", Box::new(|r| verify::higher_suite(&algs, r, 200, 100, 20))),
        ("7 cyclotomic", Box::new(verify::cyclotomic_suite)),
        ("8 center", Box::new(verify::center_suite)),
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        let mut rng = root.fork(name);
        if !filters.is_empty() && !filters.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let suite = run(&mut rng);
        let secs = start.elapsed().as_secs_f64();
        let verdict = if suite.passed() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {name}: {} ({secs:.1}s)", suite.summary());
        for c in suite.failures() {
            println!("    failed: {} {}", c.name, c.detail);
        }
        if !suite.passed() {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed (seed {SEED})");
        ExitCode::FAILURE
    }
}
