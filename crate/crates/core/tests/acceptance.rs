//! Acceptance run: one line per criterion.
//!
//! Criterion 2 is expected red (see the project notes); every other failure
//! makes the run exit nonzero.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hhsg::cli::suites::{self, SuiteConfig};
use hhsg::complex::{sg_dimension, Check, SgConfig};
use hhsg::exactla::Field;
use hhsg::quiver::Quiver;

const KNOWN_RED: &[usize] = &[2];

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_checks(checks: &[Check]) -> Outcome {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    match failed.first() {
        None => Outcome {
            passed: true,
            detail: format!("{} checks", checks.len()),
        },
        Some(c) => Outcome {
            passed: false,
            detail: format!("{} of {} failed; first: {}: {}", failed.len(), checks.len(), c.name, c.detail),
        },
    }
}

fn run(checks: hhsg::Result<Vec<Check>>) -> Outcome {
    match checks {
        Ok(c) => from_checks(&c),
        Err(e) => Outcome {
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Degree, stabilized value, onset.
type Row = (i64, Option<usize>, Option<usize>);

fn sg_values(q: &Quiver, degrees: impl Iterator<Item = i64>, cfg: &SgConfig) -> hhsg::Result<Vec<Row>> {
    degrees
        .map(|n| sg_dimension(q, n, cfg).map(|r| (n, r.value, r.onset())))
        .collect()
}

fn one_loop() -> hhsg::Result<Vec<Check>> {
    let q = Quiver::one_loop();
    let cfg = SgConfig::default();
    Ok(sg_values(&q, -8..=8, &cfg)?
        .into_iter()
        .map(|(n, v, onset)| Check {
            name: format!("n={n}"),
            passed: v == Some(1) && onset.is_some_and(|p| p <= 10),
            detail: format!("value {v:?} from p {onset:?}"),
        })
        .collect())
}

fn crowns() -> hhsg::Result<Vec<Check>> {
    let cfg = SgConfig::default();
    let mut out = Vec::new();
    for c in [2usize, 4] {
        let q = Quiver::crown(c);
        let r = 2 * c as i64 + 1;
        for (n, v, _) in sg_values(&q, -r..=r, &cfg)? {
            let want = if [0, 1].contains(&n.rem_euclid(2 * c as i64)) { 1 } else { 0 };
            let cyc = if [0, 1].contains(&n.rem_euclid(c as i64)) { 1 } else { 0 };
            out.push(Check {
                name: format!("c={c} n={n}"),
                passed: v == Some(want),
                detail: format!("value {v:?}, stated {want}, mod-c pattern {cyc}"),
            });
        }
    }
    Ok(out)
}

fn acyclic() -> hhsg::Result<Vec<Check>> {
    let cfg = SgConfig::default();
    let mut out = Vec::new();
    for k in [2usize, 3] {
        for (n, v, _) in sg_values(&Quiver::linear(k), -4..=4, &cfg)? {
            out.push(Check {
                name: format!("A{k} n={n}"),
                passed: v == Some(0),
                detail: format!("value {v:?}"),
            });
        }
    }
    Ok(out)
}

fn structure() -> hhsg::Result<Vec<Check>> {
    let field = Field::Rational;
    let mut out = Vec::new();
    for q in [Quiver::two_loops(), Quiver::loop_edge_edge_loop()] {
        out.extend(hhsg::complex::structure_checks(&q, 4, field)?);
    }
    let cfg = SgConfig {
        p_max: 7,
        ..SgConfig::default()
    };
    let r = sg_dimension(&Quiver::two_loops(), 0, &cfg)?;
    let ranks: Vec<usize> = r.stages.iter().map(|s| s.window_rank).collect();
    out.push(Check {
        name: "two loops n=0 not stabilized at p_max 7".into(),
        passed: !r.stabilized,
        detail: format!("window ranks {ranks:?}"),
    });
    Ok(out)
}

fn suite(s: suites::Suite, q: Option<&Quiver>) -> hhsg::Result<Vec<Check>> {
    Ok(suites::run_suite(s, q, &SuiteConfig::default())?.checks)
}

fn main() -> ExitCode {
    let one = Quiver::one_loop();
    let two = Quiver::two_loops();
    let crown2 = Quiver::crown(2);
    let leel = Quiver::loop_edge_edge_loop();
    type Job<'a> = (usize, &'a str, Duration, Box<dyn Fn() -> hhsg::Result<Vec<Check>> + 'a>);
    let jobs: Vec<Job> = vec![
        (1, "one-loop dimensions", Duration::from_secs(5), Box::new(one_loop)),
        (2, "crown dimensions", Duration::from_secs(10), Box::new(crowns)),
        (3, "acyclic vanishing", Duration::from_secs(1), Box::new(acyclic)),
        (4, "kernel and injectivity", Duration::from_secs(30), Box::new(structure)),
        (5, "Witt constants", Duration::from_secs(5), Box::new(|| suite(suites::Suite::Witt, Some(&one)))),
        (6, "BV model", Duration::from_secs(1), Box::new(|| suite(suites::Suite::BvModel, None))),
        (7, "two-loops sl2", Duration::from_secs(1), Box::new(|| suite(suites::Suite::Sl2, Some(&two)))),
        (8, "crown brackets", Duration::from_secs(5), Box::new(|| suite(suites::Suite::Crown, Some(&crown2)))),
        (9, "PROP laws", Duration::from_secs(60), Box::new(|| suite(suites::Suite::JacobiProp, Some(&two)))),
        (10, "tensor correspondence", Duration::from_secs(30), Box::new(|| suite(suites::Suite::Correspondence, Some(&two)))),
        (11, "gl bracket", Duration::from_secs(5), Box::new(|| suite(suites::Suite::JacobiGl, None))),
        (
            12,
            "cup vanishing",
            Duration::from_secs(5),
            Box::new(|| suites::cup_vanishing_checks(&[&two, &leel], Field::Rational, 3)),
        ),
    ];
    let mut unexpected = 0;
    for (id, name, budget, job) in &jobs {
        let start = Instant::now();
        let mut o = run(job());
        let took = start.elapsed();
        if o.passed && took > *budget {
            o.passed = false;
            o.detail = format!("{}; over budget {:?}", o.detail, budget);
        }
        let tag = if o.passed { "PASS" } else { "FAIL" };
        let note = if !o.passed && KNOWN_RED.contains(id) { " (known)" } else { "" };
        println!("criterion {id:>2} {tag}{note} {:>8.3}s  {name}: {}", took.as_secs_f64(), o.detail);
        if !o.passed && !KNOWN_RED.contains(id) {
            unexpected += 1;
        }
        if o.passed && KNOWN_RED.contains(id) {
            println!("criterion {id:>2} is listed as known red but passed");
        }
    }
    if unexpected > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
