//! Runs every acceptance criterion once with a fixed seed and prints one
//! line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use qctree_cli::suite::{run_suite, Sense, SuiteReport};
use qctree_cli::{ExperimentConfig, Tolerances};

const SEED: u64 = 0x5eed;

/// Tolerances fixed by the criteria, independent of the library defaults.
const TOLERANCES: Tolerances = Tolerances {
    isometry: 1e-9,
    gap: 1e-6,
    bound: 1e-9,
};

struct Criterion {
    number: u32,
    title: &'static str,
    /// Suites with the trial count and size bound each must run.
    suites: &'static [(&'static str, usize, usize)],
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "Whitney covering bound",
        suites: &[("whitney", 200, 25)],
    },
    Criterion {
        number: 2,
        title: "double quotient isometry",
        suites: &[("doublequotient", 100, 20)],
    },
    Criterion {
        number: 3,
        title: "Whitney isometry at eps = 1/2",
        suites: &[("whitneyiso", 100, 20)],
    },
    Criterion {
        number: 4,
        title: "chain lift to relative 8 alpha-chains",
        suites: &[("chainlift", 200, 12)],
    },
    Criterion {
        number: 5,
        title: "branch-set uniform disconnectedness",
        suites: &[("uniform", 50, 40)],
    },
    Criterion {
        number: 6,
        title: "pre-coproduct sandwich",
        suites: &[("precoproduct", 100, 40)],
    },
    Criterion {
        number: 7,
        title: "coproduct classification",
        suites: &[("coproduct", 100, 40)],
    },
    Criterion {
        number: 8,
        title: "quotient map lightness",
        suites: &[("quotientlight", 100, 20)],
    },
    Criterion {
        number: 9,
        title: "gluing bounds",
        suites: &[("twopiece", 100, 24), ("subsetcomponents", 100, 60), ("wreath", 100, 60)],
    },
    Criterion {
        number: 10,
        title: "end-to-end builders",
        suites: &[("treemap", 30, 150), ("unionmap", 30, 150), ("quotienttreemap", 30, 150)],
    },
    Criterion {
        number: 11,
        title: "lightness measurement exactness",
        suites: &[("liplightdef", 100, 12)],
    },
    Criterion {
        number: 12,
        title: "free-norm identities",
        suites: &[
            ("freegap", 500, 12),
            ("isometry", 50, 12),
            ("sumdecomp", 100, 12),
            ("quotientduality", 100, 12),
            ("exactnorm", 20, 8),
        ],
    },
    Criterion {
        number: 13,
        title: "bi-Lipschitz norm comparison",
        suites: &[("bilipschitz", 50, 20)],
    },
];

fn describe(s: &SuiteReport) -> String {
    let worst = s
        .worst
        .iter()
        .filter(|w| w.limit.is_finite())
        .map(|w| {
            let op = match w.sense {
                Sense::AtMost => "<=",
                Sense::AtLeast => ">=",
            };
            format!("{} {} {op} {}", w.name, w.value, w.limit)
        })
        .collect::<Vec<_>>()
        .join(", ");
    format!("{} {}/{} [{}]", s.tag, s.passed, s.trials, worst)
}

fn run(c: &Criterion) -> Result<(bool, String), String> {
    let mut parts = Vec::new();
    let mut ok = true;
    for &(tag, trials, max_n) in c.suites {
        let config = ExperimentConfig {
            seed: SEED,
            trial_count: Some(trials),
            max_n: Some(max_n),
            tags: vec![tag.to_string()],
            tolerances: TOLERANCES,
            ..ExperimentConfig::default()
        };
        let report = run_suite(&config).map_err(|e| e.to_string())?;
        let s = &report.suites[0];
        ok &= s.ok() && s.trials == trials;
        parts.push(describe(s));
        for w in s.witnesses.iter().take(3) {
            parts.push(format!("trial {}: {}", w.params.trial, w.reasons.join("; ")));
        }
    }
    Ok((ok, parts.join("; ")))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut failed = 0;
    for c in CRITERIA {
        let t = Instant::now();
        let (ok, detail) = run(c).unwrap_or_else(|e| (false, e));
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2}: {} {} ({:.1} s) {}",
            c.number,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            t.elapsed().as_secs_f64(),
            detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1} s",
        CRITERIA.len() - failed,
        CRITERIA.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
