use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    check_cartesian, check_mixed_product, check_monotonicity, check_sign_similarity,
    check_spectrum_transfer, check_zero_eigenvalue, Check, CheckStatus, InstanceInfo,
    VerificationReport, VerifyError,
};
use crate::hypergraph::{generate, GenerateKind, GenerateOptions, Hypergraph, SplitMix64};
use crate::spectral::PowerIterationConfig;
use crate::tensor::{TensorLimits, DEFAULT_ENTRY_CAP, MAX_UNIFORMITY};

/// Parameters of [`run_suite`]. Missing fields in a JSON config take their
/// defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// One generated instance per seed and uniformity.
    pub seeds: Vec<u64>,
    /// Largest vertex count of a generated instance.
    pub n_max: usize,
    pub ks: Vec<usize>,
    pub tol: f64,
    pub max_iter: usize,
    pub shift: f64,
    /// Adds the named small hypergraphs from [`fixtures`].
    pub fixtures: bool,
    /// Largest `n` for the exhaustive sign-diagonal search.
    pub exhaustive_limit: usize,
    /// Cartesian product pairs per uniformity, drawn from the instances.
    pub product_pairs: usize,
    /// Largest vertex count of a Cartesian product.
    pub product_max_vertices: usize,
    pub deletion_trials: usize,
    pub mixed_product_trials: usize,
    pub max_entries: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let power = PowerIterationConfig::default();
        Self {
            seeds: (1..=20).collect(),
            n_max: 10,
            ks: vec![2, 4],
            tol: power.tol,
            max_iter: power.max_iter,
            shift: power.shift,
            fixtures: true,
            exhaustive_limit: 20,
            product_pairs: 4,
            product_max_vertices: 30,
            deletion_trials: 2,
            mixed_product_trials: 20,
            max_entries: DEFAULT_ENTRY_CAP,
        }
    }
}

impl SuiteConfig {
    pub fn power(&self) -> PowerIterationConfig {
        PowerIterationConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            shift: self.shift,
        }
    }

    pub fn limits(&self) -> TensorLimits {
        TensorLimits {
            max_entries: self.max_entries,
        }
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        self.power()
            .validate()
            .map_err(|e| VerifyError::InvalidConfig(e.to_string()))?;
        if let Some(k) = self
            .ks
            .iter()
            .find(|&&k| !(2..=MAX_UNIFORMITY).contains(&k))
        {
            return Err(VerifyError::InvalidConfig(format!(
                "uniformity {k} outside 2..={MAX_UNIFORMITY}"
            )));
        }
        if self.exhaustive_limit > 30 {
            return Err(VerifyError::InvalidConfig(format!(
                "exhaustive_limit {} exceeds 30",
                self.exhaustive_limit
            )));
        }
        Ok(())
    }
}

/// Small named hypergraphs covering both branches of every check.
pub fn fixtures() -> Vec<(&'static str, Hypergraph)> {
    let g = |n, k, edges: &[&[usize]]| {
        Hypergraph::new(n, k, edges.iter().map(|e| e.to_vec()).collect()).expect("valid fixture")
    };
    vec![
        ("single-edge-k4", g(4, 4, &[&[0, 1, 2, 3]])),
        (
            "triad-k4",
            g(6, 4, &[&[0, 1, 2, 3], &[2, 3, 4, 5], &[0, 1, 4, 5]]),
        ),
        ("triangle", g(3, 2, &[&[0, 1], &[1, 2], &[0, 2]])),
        ("path-p4", g(4, 2, &[&[0, 1], &[1, 2], &[2, 3]])),
        ("edge-k2", g(2, 2, &[&[0, 1]])),
    ]
}

struct Instance {
    label: String,
    graph: Hypergraph,
    seed: Option<u64>,
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k.min(n - k)).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn generated_instance(seed: u64, k: usize, n_max: usize) -> Result<Instance, VerifyError> {
    let mut rng = SplitMix64::new(seed ^ (k as u64) << 48);
    let n = k + rng.below((n_max - k + 1) as u64) as usize;
    let kind = if k.is_multiple_of(2) && seed % 2 == 1 {
        GenerateKind::OddBipartite
    } else {
        GenerateKind::UniformRandom
    };
    let total = binomial(n, k);
    let lo = (n - 1).div_ceil(k - 1).clamp(1, total);
    let hi = (lo + n / 2 + 1).min(total);
    let m = lo + rng.below((hi - lo + 1) as u64) as usize;
    let opts = GenerateOptions::default();
    let generated =
        generate(kind, n, k, m, seed, &opts).or_else(|_| generate(kind, n, k, lo, seed, &opts))?;
    let tag = match kind {
        GenerateKind::OddBipartite => "oddbip",
        GenerateKind::UniformRandom => "random",
    };
    let m = generated.graph.num_edges();
    Ok(Instance {
        label: format!("{tag}-n{n}-k{k}-m{m}-s{seed}"),
        graph: generated.graph,
        seed: Some(seed),
    })
}

fn record(out: &mut Vec<Check>, name: &str, at: &[&str], r: Result<Vec<Check>, VerifyError>) {
    match r {
        Ok(checks) => out.extend(checks),
        Err(e) => out.push(Check::errored(name, at, &e)),
    }
}

/// Generates the configured instances, runs every check on them and on
/// selected Cartesian product pairs, and aggregates the verdicts.
///
/// The output depends only on `config`.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport, VerifyError> {
    config.validate()?;
    let power = config.power();
    let limits = config.limits();
    let mut checks = Vec::new();

    let mut instances: Vec<Instance> = Vec::new();
    if config.fixtures {
        instances.extend(fixtures().into_iter().map(|(label, graph)| Instance {
            label: label.into(),
            graph,
            seed: None,
        }));
    }
    for &seed in &config.seeds {
        for &k in config.ks.iter().filter(|&&k| k <= config.n_max) {
            match generated_instance(seed, k, config.n_max) {
                Ok(inst) => instances.push(inst),
                Err(e) => checks.push(Check::errored(
                    "instance.generate",
                    &[&format!("k{k}-s{seed}")],
                    &e,
                )),
            }
        }
    }

    let usable = |g: &Hypergraph| g.num_edges() > 0 && g.is_connected();
    for (idx, inst) in instances.iter().enumerate() {
        let (g, at) = (&inst.graph, [inst.label.as_str()]);
        if !usable(g) {
            checks.push(
                Check::new(
                    "instance.connected",
                    "checks need a connected instance with an edge",
                    &at,
                    0.0,
                )
                .skipped(
                    CheckStatus::NotChecked,
                    "instance is disconnected or edgeless",
                ),
            );
            continue;
        }
        let local_seed = inst.seed.unwrap_or(idx as u64);
        record(
            &mut checks,
            "sign_similarity",
            &at,
            check_sign_similarity(g, &inst.label, &limits, config.exhaustive_limit),
        );
        record(
            &mut checks,
            "spectrum_transfer",
            &at,
            check_spectrum_transfer(g, &inst.label, &power, &limits),
        );
        record(
            &mut checks,
            "zero_signless_eigenvalue",
            &at,
            check_zero_eigenvalue(g, &inst.label, &limits),
        );
        if config.deletion_trials > 0 {
            record(
                &mut checks,
                "monotonicity",
                &at,
                check_monotonicity(g, &inst.label, &power, local_seed, config.deletion_trials)
                    .map(|c| vec![c]),
            );
        }
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let index: BTreeMap<&str, usize> = instances
        .iter()
        .enumerate()
        .map(|(i, inst)| (inst.label.as_str(), i))
        .collect();
    if config.fixtures {
        for (a, b) in [
            ("single-edge-k4", "single-edge-k4"),
            ("single-edge-k4", "triad-k4"),
            ("edge-k2", "edge-k2"),
            ("edge-k2", "path-p4"),
        ] {
            pairs.push((index[a], index[b]));
        }
    }
    for &k in &config.ks {
        let pool: Vec<usize> = (0..instances.len())
            .filter(|&i| instances[i].seed.is_some() && instances[i].graph.k() == k)
            .filter(|&i| usable(&instances[i].graph))
            .collect();
        let chosen = pool
            .windows(2)
            .map(|w| (w[0], w[1]))
            .filter(|&(a, b)| {
                instances[a].graph.n() * instances[b].graph.n() <= config.product_max_vertices
            })
            .take(config.product_pairs);
        pairs.extend(chosen);
    }
    for (p, &(a, b)) in pairs.iter().enumerate() {
        let (ga, gb) = (&instances[a], &instances[b]);
        let at = [ga.label.as_str(), gb.label.as_str()];
        record(
            &mut checks,
            "cartesian",
            &at,
            check_cartesian(
                &ga.graph, &ga.label, &gb.graph, &gb.label, &power, &limits, p as u64,
            ),
        );
    }
    if config.mixed_product_trials > 0 {
        let c = check_mixed_product(0, config.mixed_product_trials, &["random-tensors"], &limits)
            .unwrap_or_else(|e| Check::errored("cartesian.mixed_product", &["random-tensors"], &e));
        checks.push(c);
    }

    let infos = instances
        .iter()
        .map(|inst| InstanceInfo::describe(&inst.label, &inst.graph, inst.seed))
        .collect();
    Ok(VerificationReport::new(config.clone(), infos, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            seeds: (1..=4).collect(),
            n_max: 7,
            product_pairs: 1,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn small_suite_passes_and_exercises_both_branches() {
        let r = run_suite(&small()).unwrap();
        let failures: Vec<_> = r.failures().collect();
        assert!(r.overall, "{failures:#?}");
        let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
        for expected in [
            "sign_similarity.laplacian",
            "sign_similarity.exhaustive",
            "spectrum_transfer.matrix_spectra",
            "zero_signless_eigenvalue.certificate",
            "zero_signless_eigenvalue.reverse",
            "cartesian.rho_additivity.L",
            "cartesian.mixed_product",
            "monotonicity.edge_deletion",
        ] {
            assert!(names.contains(&expected), "missing {expected}");
        }
        assert!(r.summary.not_checked > 0);
    }

    #[test]
    fn suite_is_deterministic() {
        let cfg = SuiteConfig {
            seeds: vec![3, 8],
            ..small()
        };
        assert_eq!(
            run_suite(&cfg).unwrap().to_json(),
            run_suite(&cfg).unwrap().to_json()
        );
    }

    #[test]
    fn unreachable_tolerance_fails_with_evidence() {
        let cfg = SuiteConfig {
            seeds: vec![],
            tol: 1e-30,
            max_iter: 200,
            product_pairs: 0,
            ..SuiteConfig::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert!(!r.overall);
        let failed = r.failures().next().unwrap();
        assert_eq!(
            failed
                .evidence
                .get("converged")
                .or(failed.evidence.get("power_converged")),
            Some(&0.0)
        );
    }

    #[test]
    fn config_parsing() {
        let cfg: SuiteConfig = serde_json::from_str(r#"{"seeds":[5],"tol":1e-9}"#).unwrap();
        assert_eq!(cfg.seeds, vec![5]);
        assert_eq!(cfg.n_max, 10);
        assert!(serde_json::from_str::<SuiteConfig>(r#"{"sedes":[5]}"#).is_err());
        let bad = SuiteConfig {
            ks: vec![1],
            ..SuiteConfig::default()
        };
        assert!(run_suite(&bad).is_err());
    }
}
