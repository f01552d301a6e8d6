use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use qctree::tree::Profile;

/// Comparison tolerances. `isometry` is the default taken from
/// `QCTREE_TOL` by the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Distances that should coincide.
    pub isometry: f64,
    /// Gaps between values that should coincide after two solves.
    pub gap: f64,
    /// Slack on measured-versus-bound inequalities, relative to `1 + |bound|`.
    pub bound: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            isometry: 1e-9,
            gap: 1e-6,
            bound: qctree::TOL,
        }
    }
}

impl Tolerances {
    pub fn within(&self, measured: f64, bound: f64) -> bool {
        measured <= bound + self.bound * (1.0 + bound.abs())
    }
}

/// Everything that determines a suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Trials per tag; each tag has its own default when absent.
    pub trial_count: Option<usize>,
    /// Smallest instance size.
    pub min_n: usize,
    /// Largest instance size; each tag has its own default when absent.
    pub max_n: Option<usize>,
    /// Tree profiles, used round-robin by trial index.
    pub profiles: Vec<Profile>,
    pub tags: Vec<String>,
    pub tolerances: Tolerances,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            trial_count: None,
            min_n: 4,
            max_n: None,
            profiles: vec![Profile::Geodesic, Profile::Snowflake { s: 0.6 }],
            tags: Vec::new(),
            tolerances: Tolerances::default(),
        }
    }
}

impl ExperimentConfig {
    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("serializable config");
        hex::encode(Sha256::digest(bytes))
    }
}

/// The parameters one trial sees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialParams {
    pub trial: usize,
    pub seed: u64,
    pub min_n: usize,
    pub max_n: usize,
    pub profiles: Vec<Profile>,
}

impl TrialParams {
    /// Trials are seeded independently of each other, so they can run in
    /// any order.
    pub fn trial_seed(&self) -> u64 {
        self.seed.wrapping_add(self.trial as u64)
    }

    pub fn profile(&self) -> Profile {
        if self.profiles.is_empty() {
            Profile::Geodesic
        } else {
            self.profiles[self.trial % self.profiles.len()]
        }
    }
}
