//! Seeded property-suite runner.
//!
//! Every suite is a pure function of `(suite name, seed, trials)`: trial `i`
//! draws from ChaCha substream `i` of the configured seed, and the
//! aggregation (pass counts, max residual, failure list ordered by trial
//! index) is associative, so reports are identical whether trials run on
//! one thread or many.
//!
//! | suite | checks | default tolerance |
//! |-------|--------|-------------------|
//! | `appendix-identities`   | epsilon antisymmetrization, determinant, inverse, inverse-differential | 1e-12 |
//! | `jet-consistency`       | jet derivatives vs central differences | 1e-6 |
//! | `roundtrip`             | twistor lift followed by its inverse | 1e-9 |
//! | `locality`              | image spread over alpha-tangent curve families | 1e-9 |
//! | `psi-independence`      | pipeline invariance under the auxiliary spinor | 1e-10 |
//! | `conformal`             | degree-1 pipeline vs Moebius form, pi-independence, composition | 1e-10 |
//! | `degree2-paths`         | pipeline vs quadratic closed form vs explicit-psi fraction | 1e-9 |
//! | `degree2-pi-dependence` | image separation witness (fraction >= 0.95) | 1e-3 |
//! | `null-preservation-sd`  | self-dual image tangent determinants | 1e-9 |
//! | `null-preservation-causal` | causal image tangent determinants | 1e-9 |
//! | `causal-two-path`       | closed form vs lift-map-invert route | 1e-9 |
//! | `causal-equivariance`   | right action and twistor rescaling invariance | 1e-10 |
//! | `tangent-consistency`   | image curve derivative vs image null direction | 1e-8 |
//! | `g-locality`            | image one-jet agreement for one-jet-equal curves | 1e-9 |
//! | `nonlocality`           | naive route second-derivative dependence (fraction >= 0.95) | 1e-3 |
//! | `beta-order`            | first-order beta-plane model error ratio in [3.5, 4.5] | - |

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{default_sample_points, DegreeBounds};
use crate::error::{Error, Result};
use crate::spinor::C64;
use crate::suites::{self, TrialOutcome};

/// Configuration of one suite run.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite_name: String,
    pub trials: usize,
    pub seed: u64,
    /// Named tolerances; unset names fall back to the suite defaults.
    pub tolerances: BTreeMap<String, f64>,
    pub sample_points: Vec<C64>,
    pub degree_bounds: DegreeBounds,
}

impl SuiteConfig {
    pub fn new(suite_name: &str, trials: usize, seed: u64) -> Self {
        Self {
            suite_name: suite_name.to_string(),
            trials,
            seed,
            tolerances: BTreeMap::new(),
            sample_points: default_sample_points(),
            degree_bounds: DegreeBounds::default(),
        }
    }

    /// Override the suite's primary tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        let key = primary_tolerance_key(&self.suite_name);
        self.tolerances.insert(key.to_string(), tol);
        self
    }

    /// Look up a named tolerance, falling back to the suite default.
    pub fn tol(&self, name: &str) -> f64 {
        if let Some(v) = self.tolerances.get(name) {
            return *v;
        }
        suite_spec(&self.suite_name)
            .and_then(|s| {
                s.default_tols.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
            })
            .unwrap_or_else(|| panic!("suite '{}' has no tolerance '{name}'", self.suite_name))
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::ConfigInvalid("trials must be at least 1".into()));
        }
        if self.tolerances.values().any(|t| !t.is_finite() || *t <= 0.0) {
            return Err(Error::ConfigInvalid("tolerances must be positive".into()));
        }
        if self.sample_points.is_empty() {
            return Err(Error::ConfigInvalid("need at least one sample point".into()));
        }
        if self
            .sample_points
            .iter()
            .any(|s| !s.re.is_finite() || !s.im.is_finite())
        {
            return Err(Error::ConfigInvalid("sample points must be finite".into()));
        }
        Ok(())
    }
}

/// One failed trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub seed_index: u64,
    pub residual: f64,
    pub error_kind: String,
}

/// Aggregated result of a suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite_name: String,
    pub trials: usize,
    pub pass_count: usize,
    pub max_residual: f64,
    /// Fraction of trials that must pass for the suite to pass (1.0 for
    /// exact suites, 0.95 for genericity witnesses).
    pub required_pass_fraction: f64,
    pub failures: Vec<FailureRecord>,
    /// Wall time in seconds; excluded from determinism comparisons.
    pub wall_time_s: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        (self.pass_count as f64) + 1e-12 >= self.required_pass_fraction * (self.trials as f64)
    }

    /// The report with wall time zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> SuiteReport {
        let mut r = self.clone();
        r.wall_time_s = 0.0;
        r
    }
}

struct SuiteSpec {
    name: &'static str,
    description: &'static str,
    default_trials: usize,
    default_tols: &'static [(&'static str, f64)],
    required_pass_fraction: f64,
    run: fn(&SuiteConfig, u64) -> TrialOutcome,
}

static SUITES: &[SuiteSpec] = &[
    SuiteSpec {
        name: "appendix-identities",
        description: "epsilon-convention identity battery",
        default_trials: 1000,
        default_tols: &[("tol", 1e-12)],
        required_pass_fraction: 1.0,
        run: suites::trial_appendix_identities,
    },
    SuiteSpec {
        name: "jet-consistency",
        description: "jet derivatives against central finite differences",
        default_trials: 500,
        default_tols: &[("tol", 1e-6)],
        required_pass_fraction: 1.0,
        run: suites::trial_jet_consistency,
    },
    SuiteSpec {
        name: "roundtrip",
        description: "twistor lift and inverse on random null curves",
        default_trials: 100,
        default_tols: &[("tol", 1e-9)],
        required_pass_fraction: 1.0,
        run: suites::trial_roundtrip,
    },
    SuiteSpec {
        name: "locality",
        description: "image spread over alpha-tangent families",
        default_trials: 100,
        default_tols: &[("tol", 1e-9)],
        required_pass_fraction: 1.0,
        run: suites::trial_locality,
    },
    SuiteSpec {
        name: "psi-independence",
        description: "pipeline invariance under the auxiliary variation",
        default_trials: 1000,
        default_tols: &[("tol", 1e-10)],
        required_pass_fraction: 1.0,
        run: suites::trial_psi_independence,
    },
    SuiteSpec {
        name: "conformal",
        description: "degree-1 closed form, pi-independence, composition",
        default_trials: 1000,
        default_tols: &[("tol", 1e-10)],
        required_pass_fraction: 1.0,
        run: suites::trial_conformal,
    },
    SuiteSpec {
        name: "degree2-paths",
        description: "three-path agreement for quadratic morphisms",
        default_trials: 1000,
        default_tols: &[("tol", 1e-9)],
        required_pass_fraction: 1.0,
        run: suites::trial_degree2_paths,
    },
    SuiteSpec {
        name: "degree2-pi-dependence",
        description: "quadratic image separation witness",
        default_trials: 1000,
        default_tols: &[("threshold", 1e-3)],
        required_pass_fraction: 0.95,
        run: suites::trial_pi_dependence,
    },
    SuiteSpec {
        name: "null-preservation-sd",
        description: "self-dual image tangents stay null",
        default_trials: 100,
        default_tols: &[("tol", 1e-9)],
        required_pass_fraction: 1.0,
        run: suites::trial_null_preservation_sd,
    },
    SuiteSpec {
        name: "null-preservation-causal",
        description: "causal image tangents stay null",
        default_trials: 100,
        default_tols: &[("tol", 1e-9)],
        required_pass_fraction: 1.0,
        run: suites::trial_null_preservation_causal,
    },
    SuiteSpec {
        name: "causal-two-path",
        description: "closed form against the lift-map-invert route",
        default_trials: 100,
        default_tols: &[("tol", 1e-9)],
        required_pass_fraction: 1.0,
        run: suites::trial_causal_two_path,
    },
    SuiteSpec {
        name: "causal-equivariance",
        description: "right-action and rescaling invariance",
        default_trials: 1000,
        default_tols: &[("tol", 1e-10)],
        required_pass_fraction: 1.0,
        run: suites::trial_causal_equivariance,
    },
    SuiteSpec {
        name: "tangent-consistency",
        description: "image curve derivatives align with image directions",
        default_trials: 50,
        default_tols: &[("tol", 1e-8)],
        required_pass_fraction: 1.0,
        run: suites::trial_tangent_consistency,
    },
    SuiteSpec {
        name: "g-locality",
        description: "one-jet-equal curves get one-jet-equal images",
        default_trials: 100,
        default_tols: &[("tol", 1e-9)],
        required_pass_fraction: 1.0,
        run: suites::trial_g_locality,
    },
    SuiteSpec {
        name: "nonlocality",
        description: "naive route depends on second derivatives",
        default_trials: 100,
        default_tols: &[("threshold", 1e-3)],
        required_pass_fraction: 0.95,
        run: suites::trial_nonlocality,
    },
    SuiteSpec {
        name: "beta-order",
        description: "first-order beta-plane model error scales as O(t^2)",
        default_trials: 100,
        default_tols: &[("ratio-low", 3.5), ("ratio-high", 4.5)],
        required_pass_fraction: 1.0,
        run: suites::trial_beta_order,
    },
];

fn suite_spec(name: &str) -> Option<&'static SuiteSpec> {
    SUITES.iter().find(|s| s.name == name)
}

fn primary_tolerance_key(name: &str) -> &'static str {
    match suite_spec(name) {
        Some(spec) => spec.default_tols.first().map(|(n, _)| *n).unwrap_or("tol"),
        None => "tol",
    }
}

/// All registered suite names in declaration order.
pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// One-line description of a suite.
pub fn suite_description(name: &str) -> Option<&'static str> {
    suite_spec(name).map(|s| s.description)
}

/// Default trial count of a suite.
pub fn suite_default_trials(name: &str) -> Option<usize> {
    suite_spec(name).map(|s| s.default_trials)
}

/// Run one suite. Deterministic in `(suite_name, seed, trials)` and
/// independent of thread count.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let spec = suite_spec(&cfg.suite_name)
        .ok_or_else(|| Error::UnknownSuite(cfg.suite_name.clone()))?;
    let start = Instant::now();
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| (spec.run)(cfg, i))
        .collect();
    let mut pass_count = 0;
    let mut max_residual = 0.0f64;
    let mut failures = Vec::new();
    for (i, outcome) in outcomes.iter().enumerate() {
        if outcome.residual.is_finite() {
            max_residual = max_residual.max(outcome.residual);
        }
        if outcome.pass {
            pass_count += 1;
        } else {
            failures.push(FailureRecord {
                seed_index: i as u64,
                residual: outcome.residual,
                error_kind: outcome
                    .error_kind
                    .clone()
                    .unwrap_or_else(|| "residual above tolerance".into()),
            });
        }
    }
    Ok(SuiteReport {
        suite_name: cfg.suite_name.clone(),
        trials: cfg.trials,
        pass_count,
        max_residual,
        required_pass_fraction: spec.required_pass_fraction,
        failures,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Run every registered suite with its default trial count.
pub fn run_all_suites(seed: u64) -> Result<Vec<SuiteReport>> {
    SUITES
        .iter()
        .map(|spec| run_suite(&SuiteConfig::new(spec.name, spec.default_trials, seed)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_is_invalid() {
        let cfg = SuiteConfig::new("roundtrip", 0, 7);
        assert!(matches!(run_suite(&cfg), Err(Error::ConfigInvalid(_))));
    }

    #[test]
    fn unknown_suite_is_reported() {
        let cfg = SuiteConfig::new("no-such-suite", 5, 7);
        assert!(matches!(run_suite(&cfg), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn negative_tolerance_is_invalid() {
        let mut cfg = SuiteConfig::new("roundtrip", 5, 7);
        cfg.tolerances.insert("tol".into(), -1.0);
        assert!(matches!(run_suite(&cfg), Err(Error::ConfigInvalid(_))));
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = SuiteConfig::new("appendix-identities", 20, 13);
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        assert_eq!(a.without_timing(), b.without_timing());
        assert!(a.passed());
    }

    #[test]
    fn reports_do_not_depend_on_thread_count() {
        let cfg = SuiteConfig::new("roundtrip", 24, 5);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_suite(&cfg).unwrap());
        let multi = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| run_suite(&cfg).unwrap());
        assert_eq!(single.without_timing(), multi.without_timing());
    }

    #[test]
    fn tightened_tolerance_fails_the_suite() {
        let cfg = SuiteConfig::new("roundtrip", 10, 7).with_tol(1e-30);
        let report = run_suite(&cfg).unwrap();
        assert!(!report.passed());
        assert_eq!(report.pass_count + report.failures.len(), report.trials);
    }
}
