//! Executable checks of the spectral characterizations of odd-bipartite
//! hypergraphs and of Cartesian products, collected into reports.
//!
//! Every check is a pure function of its instance and configuration, so a
//! report is reproducible byte for byte. Statements about whole spectra that
//! cannot be computed are checked through computable consequences; those
//! checks carry `consequence_checked: true`.

mod checks;
mod suite;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use checks::{
    check_cartesian, check_mixed_product, check_monotonicity, check_sign_similarity,
    check_spectrum_transfer, check_zero_eigenvalue, exhaustive_sign_diagonals,
    mixed_product_deviation, rho_by_components, ComponentRho, SignSearch, EXACT_TOLERANCE,
    PAIR_TOLERANCE,
};
pub use suite::{fixtures, run_suite, SuiteConfig};

use crate::hypergraph::{Hypergraph, HypergraphError};
use crate::spectral::SpectralError;
use crate::tensor::TensorError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("check needs a connected hypergraph")]
    NotConnected,
    #[error("check needs at least one edge")]
    NoEdges,
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("invalid suite config: {0}")]
    InvalidConfig(String),
}

/// Outcome of a single check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Passed,
    Failed,
    /// The check does not apply or has no finite procedure on this instance.
    NotChecked,
    /// Skipped because the instance exceeds a size guard.
    Bounded,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Passed => "passed",
            CheckStatus::Failed => "failed",
            CheckStatus::NotChecked => "not_checked",
            CheckStatus::Bounded => "bounded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Plain statement of what is being checked.
    pub statement: String,
    /// Labels of the instances the check ran on.
    pub instances: Vec<String>,
    pub status: CheckStatus,
    /// `false` only for [`CheckStatus::Failed`].
    pub pass: bool,
    pub evidence: BTreeMap<String, f64>,
    pub tolerance: f64,
    /// The statement is verified through a computable consequence only.
    pub consequence_checked: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    pub fn new(name: &str, statement: &str, instances: &[&str], tolerance: f64) -> Self {
        Self {
            name: name.into(),
            statement: statement.into(),
            instances: instances.iter().map(|s| s.to_string()).collect(),
            status: CheckStatus::NotChecked,
            pass: true,
            evidence: BTreeMap::new(),
            tolerance,
            consequence_checked: false,
            error: None,
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.evidence.insert(key.into(), value);
        self
    }

    pub fn flag(self, key: &str, value: bool) -> Self {
        self.with(key, if value { 1.0 } else { 0.0 })
    }

    pub fn consequence(mut self) -> Self {
        self.consequence_checked = true;
        self
    }

    pub fn verdict(mut self, pass: bool) -> Self {
        self.status = if pass {
            CheckStatus::Passed
        } else {
            CheckStatus::Failed
        };
        self.pass = pass;
        self
    }

    pub fn skipped(mut self, status: CheckStatus, why: &str) -> Self {
        debug_assert!(matches!(
            status,
            CheckStatus::NotChecked | CheckStatus::Bounded
        ));
        self.status = status;
        self.pass = true;
        self.error = Some(why.into());
        self
    }

    /// A check that could not run because of an error.
    pub fn errored(name: &str, instances: &[&str], err: &VerifyError) -> Self {
        let mut c = Check::new(name, "check ran to completion", instances, 0.0).verdict(false);
        c.error = Some(err.to_string());
        c
    }
}

/// Description of one input hypergraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceInfo {
    pub label: String,
    pub fingerprint: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub connected: bool,
    pub odd_bipartite: bool,
}

impl InstanceInfo {
    pub fn describe(label: &str, g: &Hypergraph, seed: Option<u64>) -> Self {
        Self {
            label: label.into(),
            fingerprint: g.fingerprint(),
            seed,
            n: g.n(),
            k: g.k(),
            m: g.num_edges(),
            connected: g.is_connected(),
            odd_bipartite: crate::hypergraph::odd_bipartition(g).is_certificate(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub not_checked: usize,
    pub bounded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: SuiteConfig,
    pub instances: Vec<InstanceInfo>,
    pub checks: Vec<Check>,
    pub summary: Summary,
    /// Conjunction of every check's `pass`.
    pub overall: bool,
}

impl VerificationReport {
    pub fn new(config: SuiteConfig, instances: Vec<InstanceInfo>, checks: Vec<Check>) -> Self {
        let mut summary = Summary {
            total: checks.len(),
            ..Summary::default()
        };
        for c in &checks {
            match c.status {
                CheckStatus::Passed => summary.passed += 1,
                CheckStatus::Failed => summary.failed += 1,
                CheckStatus::NotChecked => summary.not_checked += 1,
                CheckStatus::Bounded => summary.bounded += 1,
            }
        }
        let overall = checks.iter().all(|c| c.pass);
        Self {
            config,
            instances,
            checks,
            summary,
            overall,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row per check; evidence is flattened to `key=value` pairs joined
    /// by `;`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "name",
            "instances",
            "status",
            "pass",
            "tolerance",
            "consequence_checked",
            "evidence",
            "error",
        ])
        .expect("in-memory write");
        for c in &self.checks {
            let evidence = c
                .evidence
                .iter()
                .map(|(k, v)| format!("{k}={v:?}"))
                .collect::<Vec<_>>()
                .join(";");
            w.write_record([
                c.name.as_str(),
                &c.instances.join(";"),
                c.status.as_str(),
                if c.pass { "true" } else { "false" },
                &format!("{:?}", c.tolerance),
                if c.consequence_checked {
                    "true"
                } else {
                    "false"
                },
                &evidence,
                c.error.as_deref().unwrap_or(""),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Short human-readable listing.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:<11} {:<40} {}\n",
                c.status.as_str(),
                c.name,
                c.instances.join(" x ")
            ));
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} checks: {} passed, {} failed, {} not checked, {} bounded; overall {}\n",
            s.total,
            s.passed,
            s.failed,
            s.not_checked,
            s.bounded,
            if self.overall { "PASS" } else { "FAIL" }
        ));
        out
    }
}
