//! Seeded suites of lemma checks and their aggregate report.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Tolerances, TrialParams};
use crate::doc::{SCHEMA, SCHEMA_VERSION, TOOL_VERSION};
use crate::error::CliError;
use crate::lemmas;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    AtMost,
    AtLeast,
}

/// A measured quantity compared against a limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub name: String,
    #[serde(with = "crate::float")]
    pub value: f64,
    #[serde(with = "crate::float")]
    pub limit: f64,
    pub sense: Sense,
    pub holds: bool,
}

/// The outcome of checking one instance.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub measurements: Vec<Measurement>,
    /// Violated conditions that are not numeric comparisons.
    pub failures: Vec<String>,
}

impl Verdict {
    pub fn at_most(&mut self, name: &str, value: f64, limit: f64, tol: &Tolerances) {
        let holds = !value.is_nan() && tol.within(value, limit);
        self.push(name, value, limit, Sense::AtMost, holds);
    }

    /// `value <= limit` with no slack.
    pub fn exact_at_most(&mut self, name: &str, value: f64, limit: f64) {
        self.push(name, value, limit, Sense::AtMost, value <= limit);
    }

    pub fn at_least(&mut self, name: &str, value: f64, limit: f64, tol: &Tolerances) {
        let holds = !value.is_nan() && tol.within(-value, -limit);
        self.push(name, value, limit, Sense::AtLeast, holds);
    }

    /// A quantity reported for its worst case only.
    pub fn observe(&mut self, name: &str, value: f64) {
        self.push(name, value, f64::INFINITY, Sense::AtMost, !value.is_nan());
    }

    pub fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn push(&mut self, name: &str, value: f64, limit: f64, sense: Sense, holds: bool) {
        self.measurements.push(Measurement {
            name: name.to_string(),
            value,
            limit,
            sense,
            holds,
        });
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.measurements.iter().all(|m| m.holds)
    }

    fn reasons(&self) -> Vec<String> {
        let mut r = self.failures.clone();
        for m in self.measurements.iter().filter(|m| !m.holds) {
            let op = match m.sense {
                Sense::AtMost => "<=",
                Sense::AtLeast => ">=",
            };
            r.push(format!("{} = {} violates {op} {}", m.name, m.value, m.limit));
        }
        r
    }
}

/// A family of checks over randomly generated instances.
pub trait Lemma {
    const TAG: &'static str;
    const SUMMARY: &'static str;
    const TRIALS: usize;
    const MAX_N: usize;
    type Instance: Serialize + DeserializeOwned;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<Self::Instance>;
    fn check(inst: &Self::Instance, tol: &Tolerances) -> qctree::Result<Verdict>;
}

/// Everything needed to rerun one failed trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub schema: String,
    pub schema_version: u32,
    pub tag: String,
    pub params: TrialParams,
    pub tolerances: Tolerances,
    pub reasons: Vec<String>,
    /// The generated input; absent when generation itself failed.
    pub instance: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub passed: bool,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

fn record<L: Lemma>(
    params: &TrialParams,
    tol: &Tolerances,
    instance: qctree::Result<L::Instance>,
) -> TrialRecord {
    let (verdict, value) = match instance {
        Err(e) => (
            Verdict {
                measurements: Vec::new(),
                failures: vec![format!("instance generation failed: {e}")],
            },
            None,
        ),
        Ok(inst) => {
            let v = L::check(&inst, tol).unwrap_or_else(|e| Verdict {
                measurements: Vec::new(),
                failures: vec![format!("error: {e}")],
            });
            (v, Some(inst))
        }
    };
    let passed = verdict.passed();
    let witness = (!passed).then(|| Witness {
        schema: SCHEMA.to_string(),
        schema_version: SCHEMA_VERSION,
        tag: L::TAG.to_string(),
        params: params.clone(),
        tolerances: *tol,
        reasons: verdict.reasons(),
        instance: value.map(|i| serde_json::to_value(i).expect("serializable instance")),
    });
    TrialRecord {
        trial: params.trial,
        passed,
        verdict,
        witness,
    }
}

fn run_one<L: Lemma>(params: &TrialParams, tol: &Tolerances) -> TrialRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(params.trial_seed());
    let inst = L::generate(params, &mut rng);
    record::<L>(params, tol, inst)
}

fn replay_one<L: Lemma>(w: &Witness, tol: &Tolerances) -> Result<TrialRecord, CliError> {
    let inst = match &w.instance {
        Some(v) => Ok(serde_json::from_value::<L::Instance>(v.clone())
            .map_err(|e| CliError::Input(format!("witness instance: {e}")))?),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(w.params.trial_seed());
            L::generate(&w.params, &mut rng)
        }
    };
    Ok(record::<L>(&w.params, tol, inst))
}

/// A registered suite.
pub struct Entry {
    pub tag: &'static str,
    pub summary: &'static str,
    pub trials: usize,
    pub max_n: usize,
    run: fn(&TrialParams, &Tolerances) -> TrialRecord,
    replay: fn(&Witness, &Tolerances) -> Result<TrialRecord, CliError>,
}

impl Entry {
    pub const fn of<L: Lemma>() -> Entry {
        Entry {
            tag: L::TAG,
            summary: L::SUMMARY,
            trials: L::TRIALS,
            max_n: L::MAX_N,
            run: run_one::<L>,
            replay: replay_one::<L>,
        }
    }
}

pub fn lookup(tag: &str) -> Result<&'static Entry, CliError> {
    lemmas::REGISTRY.iter().find(|e| e.tag == tag).ok_or_else(|| {
        let known: Vec<&str> = lemmas::REGISTRY.iter().map(|e| e.tag).collect();
        CliError::UnknownTag(tag.to_string(), known.join(", "))
    })
}

/// Worst value of one measurement over a suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Worst {
    pub name: String,
    #[serde(with = "crate::float")]
    pub value: f64,
    #[serde(with = "crate::float")]
    pub limit: f64,
    pub sense: Sense,
    pub trial: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub tag: String,
    pub summary: String,
    pub trials: usize,
    pub max_n: usize,
    pub passed: usize,
    pub failed: usize,
    pub worst: Vec<Worst>,
    pub witnesses: Vec<Witness>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

fn worse(sense: Sense, new: f64, old: f64) -> bool {
    match sense {
        Sense::AtMost => new > old,
        Sense::AtLeast => new < old,
    }
}

fn aggregate(entry: &Entry, max_n: usize, records: Vec<TrialRecord>) -> SuiteReport {
    let mut worst: Vec<Worst> = Vec::new();
    let mut witnesses = Vec::new();
    let mut passed = 0;
    for r in records {
        for m in &r.verdict.measurements {
            match worst.iter_mut().find(|w| w.name == m.name) {
                Some(w) => {
                    if worse(m.sense, m.value, w.value) || m.value.is_nan() {
                        w.value = m.value;
                        w.limit = m.limit;
                        w.trial = r.trial;
                    }
                }
                None => worst.push(Worst {
                    name: m.name.clone(),
                    value: m.value,
                    limit: m.limit,
                    sense: m.sense,
                    trial: r.trial,
                }),
            }
        }
        if r.passed {
            passed += 1;
        }
        witnesses.extend(r.witness);
    }
    SuiteReport {
        tag: entry.tag.to_string(),
        summary: entry.summary.to_string(),
        trials: passed + witnesses.len(),
        max_n,
        passed,
        failed: witnesses.len(),
        worst,
        witnesses,
    }
}

/// Runs `entry` for the configured number of trials. Trials run in
/// parallel; results are ordered by trial index.
pub fn run_entry(entry: &Entry, config: &ExperimentConfig) -> SuiteReport {
    let trials = config.trial_count.unwrap_or(entry.trials);
    let max_n = config.max_n.unwrap_or(entry.max_n);
    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let params = TrialParams {
                trial,
                seed: config.seed,
                min_n: config.min_n,
                max_n,
                profiles: config.profiles.clone(),
            };
            (entry.run)(&params, &config.tolerances)
        })
        .collect();
    aggregate(entry, max_n, records)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub schema_version: u32,
    pub tool_version: String,
    pub seed: u64,
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Runs every tagged suite of `config`, in tag order.
pub fn run_suite(config: &ExperimentConfig) -> Result<Report, CliError> {
    let entries = config
        .tags
        .iter()
        .map(|t| lookup(t))
        .collect::<Result<Vec<_>, _>>()?;
    let suites: Vec<SuiteReport> = entries.iter().map(|e| run_entry(e, config)).collect();
    Ok(Report {
        schema: SCHEMA.to_string(),
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        seed: config.seed,
        config_hash: config.hash(),
        config: config.clone(),
        passed: suites.iter().all(SuiteReport::ok),
        suites,
    })
}

/// Reruns the trial recorded in a witness.
pub fn replay(w: &Witness, tol: Option<Tolerances>) -> Result<TrialRecord, CliError> {
    if w.schema_version != SCHEMA_VERSION {
        return Err(CliError::Schema(format!(
            "witness version {} is not supported (expected version {SCHEMA_VERSION})",
            w.schema_version
        )));
    }
    let entry = lookup(&w.tag)?;
    (entry.replay)(w, &tol.unwrap_or(w.tolerances))
}
