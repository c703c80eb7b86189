//! Runtime configuration: tolerances, caps, seeds, parallelism.

use serde::{Deserialize, Serialize};

/// Output format for CLI artifacts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Config {
    /// Eigenvalue-clustering tolerance for spectral routines.
    pub tol_eigen: f64,
    /// Tolerance for rounding near-integers (degrees, multiplicities, dims).
    pub tol_round: f64,
    /// Max-abs coefficient tolerance for projection equality.
    pub tol_proj: f64,
    /// Base seed for all randomized routines.
    pub seed: u64,
    /// Cap on group order during closure.
    pub cap_group_order: usize,
    /// Cap on the number of subgroups during lattice enumeration.
    pub cap_subgroups: usize,
    pub format: OutputFormat,
    /// Worker threads for the verification pool (0 = all cores).
    pub parallelism: usize,
    /// Samples per randomized sub-test.
    pub samples: u32,
    /// Retry budget for randomized spectral searches.
    pub retries: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol_eigen: 1e-8,
            tol_round: 1e-6,
            tol_proj: 1e-7,
            seed: 0xB1F0,
            cap_group_order: 10_000,
            cap_subgroups: 100_000,
            format: OutputFormat::Text,
            parallelism: 0,
            samples: 32,
            retries: 16,
        }
    }
}

impl Config {
    /// Default config with every field optionally overridden by a
    /// `LATBOX_*` environment variable.
    pub fn from_env() -> Self {
        let mut c = Config::default();
        fn get<T: std::str::FromStr>(name: &str, slot: &mut T) {
            if let Ok(v) = std::env::var(name) {
                if let Ok(parsed) = v.parse() {
                    *slot = parsed;
                }
            }
        }
        get("LATBOX_TOL_EIGEN", &mut c.tol_eigen);
        get("LATBOX_TOL_ROUND", &mut c.tol_round);
        get("LATBOX_TOL_PROJ", &mut c.tol_proj);
        get("LATBOX_SEED", &mut c.seed);
        get("LATBOX_CAP_GROUP_ORDER", &mut c.cap_group_order);
        get("LATBOX_CAP_SUBGROUPS", &mut c.cap_subgroups);
        get("LATBOX_PARALLELISM", &mut c.parallelism);
        get("LATBOX_SAMPLES", &mut c.samples);
        get("LATBOX_RETRIES", &mut c.retries);
        if let Ok(v) = std::env::var("LATBOX_FORMAT") {
            match v.as_str() {
                "text" => c.format = OutputFormat::Text,
                "json" => c.format = OutputFormat::Json,
                "dot" => c.format = OutputFormat::Dot,
                _ => {}
            }
        }
        c
    }

    /// Derive a per-task seed from the base seed and a context label.
    ///
    /// Splitmix-style mixing keeps task seeds independent of the order in
    /// which tasks are scheduled, so parallel runs stay reproducible.
    pub fn task_seed(&self, label: &str) -> u64 {
        let mut h = self.seed ^ 0x9E37_79B9_7F4A_7C15;
        for b in label.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0xBF58_476D_1CE4_E5B9);
            h ^= h >> 27;
        }
        h = h.wrapping_mul(0x94D0_49BB_1331_11EB);
        h ^ (h >> 31)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_seeds_differ_by_label_and_base() {
        let c = Config::default();
        assert_ne!(c.task_seed("a"), c.task_seed("b"));
        let mut c2 = Config::default();
        c2.seed = 1;
        assert_ne!(c.task_seed("a"), c2.task_seed("a"));
        assert_eq!(c.task_seed("a"), c.task_seed("a"));
    }
}
