//! Seeded instance generators.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{bipartition::is_odd_transversal, Hypergraph, HypergraphError};

/// The splitmix64 generator. Small, fast, and stable across platforms, which
/// is all the generators need.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `0..bound` by rejection (no modulo bias).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    /// Uniform float in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Sorted uniform `k`-subset of `0..n` (partial Fisher-Yates).
    pub fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut pool: Vec<usize> = (0..n).collect();
        self.partial_shuffle(&mut pool, k);
        let mut out = pool[..k].to_vec();
        out.sort_unstable();
        out
    }

    /// Moves a uniform sample of `k` items into `items[..k]`.
    pub fn partial_shuffle<T>(&mut self, items: &mut [T], k: usize) {
        let len = items.len();
        for i in 0..k.min(len) {
            let j = i + self.below((len - i) as u64) as usize;
            items.swap(i, j);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenerateKind {
    /// `m` distinct k-subsets, uniformly without replacement.
    UniformRandom,
    /// A planted V₁ and `m` distinct edges meeting it an odd number of times.
    OddBipartite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerateOptions {
    /// Instances drawn while looking for a connected one.
    pub max_attempts: usize,
    /// Above this many k-subsets, edges are drawn by rejection instead of
    /// from an enumerated pool.
    pub enumerate_limit: u128,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        Self {
            max_attempts: 1000,
            enumerate_limit: 200_000,
        }
    }
}

/// A generated instance plus how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub graph: Hypergraph,
    pub connected: bool,
    pub attempts: usize,
    /// The planted V₁ for [`GenerateKind::OddBipartite`].
    pub planted: Option<Vec<usize>>,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

/// Number of k-subsets meeting a fixed `a`-subset of `[n]` oddly.
fn odd_edge_count(n: usize, k: usize, a: usize) -> u128 {
    (1..=k.min(a))
        .step_by(2)
        .map(|r| binomial(a, r).saturating_mul(binomial(n - a, k - r)))
        .fold(0u128, u128::saturating_add)
}

/// Draws a hypergraph deterministically from `seed`.
///
/// Draws are repeated up to `opts.max_attempts` times until the result is
/// connected; the last draw is returned with `connected == false` if none
/// was.
pub fn generate(
    kind: GenerateKind,
    n: usize,
    k: usize,
    m: usize,
    seed: u64,
    opts: &GenerateOptions,
) -> Result<Generated, HypergraphError> {
    if k < 2 {
        return Err(HypergraphError::UniformityTooSmall(k));
    }
    if n < k {
        return Err(HypergraphError::InfeasibleParameters(format!(
            "need n >= k, got n = {n}, k = {k}"
        )));
    }
    let total = binomial(n, k);
    match kind {
        GenerateKind::UniformRandom => {
            if m as u128 > total {
                return Err(HypergraphError::InfeasibleParameters(format!(
                    "only {total} distinct {k}-subsets of {n} vertices, asked for {m}"
                )));
            }
        }
        GenerateKind::OddBipartite => {
            if k % 2 == 1 {
                return Err(HypergraphError::InfeasibleParameters(
                    "odd-bipartite instances need even k".into(),
                ));
            }
            let best = (1..n).map(|a| odd_edge_count(n, k, a)).max().unwrap_or(0);
            if (m as u128) > best {
                return Err(HypergraphError::InfeasibleParameters(format!(
                    "no proper V1 admits {m} edges meeting it oddly (at most {best})"
                )));
            }
        }
    }

    let mut rng = SplitMix64::new(seed);
    let attempts = opts.max_attempts.max(1);
    let mut last = None;
    for attempt in 1..=attempts {
        let drawn = match kind {
            GenerateKind::UniformRandom => {
                draw_edges(&mut rng, n, k, m, total, opts, |_| true).map(|e| (e, None))
            }
            GenerateKind::OddBipartite => {
                let a = 1 + rng.below(n as u64 - 1) as usize;
                let v1 = rng.subset(n, a);
                if odd_edge_count(n, k, a) < m as u128 {
                    continue;
                }
                let mut member = vec![false; n];
                for &v in &v1 {
                    member[v] = true;
                }
                draw_edges(&mut rng, n, k, m, total, opts, |e| {
                    e.iter().filter(|&&v| member[v]).count() % 2 == 1
                })
                .map(|e| (e, Some(v1)))
            }
        };
        let Some((edges, planted)) = drawn else {
            continue;
        };
        let graph = Hypergraph::new(n, k, edges)?;
        debug_assert!(planted
            .as_ref()
            .is_none_or(|v1| is_odd_transversal(&graph, v1)));
        let connected = graph.is_connected();
        let out = Generated {
            graph,
            connected,
            attempts: attempt,
            planted,
        };
        if connected {
            return Ok(out);
        }
        last = Some(out);
    }
    last.ok_or(HypergraphError::AttemptsExhausted(attempts))
}

/// Samples `m` distinct k-subsets accepted by `keep`, or `None` when the
/// rejection budget runs out.
fn draw_edges(
    rng: &mut SplitMix64,
    n: usize,
    k: usize,
    m: usize,
    total: u128,
    opts: &GenerateOptions,
    keep: impl Fn(&[usize]) -> bool,
) -> Option<Vec<Vec<usize>>> {
    if total <= opts.enumerate_limit {
        let mut pool: Vec<Vec<usize>> = (0..n).combinations(k).filter(|e| keep(e)).collect();
        if pool.len() < m {
            return None;
        }
        rng.partial_shuffle(&mut pool, m);
        pool.truncate(m);
        return Some(pool);
    }
    let mut chosen = BTreeSet::new();
    let mut order = Vec::with_capacity(m);
    let budget = 1000 + 200 * m;
    for _ in 0..budget {
        if order.len() == m {
            break;
        }
        let e = rng.subset(n, k);
        if keep(&e) && chosen.insert(e.clone()) {
            order.push(e);
        }
    }
    (order.len() == m).then_some(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::odd_bipartition;

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 1234567 from the reference C implementation.
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
        assert_eq!(rng.next_u64(), 9817491932198370423);
    }

    #[test]
    fn odd_bipartite_seed_one() {
        let g = generate(
            GenerateKind::OddBipartite,
            6,
            4,
            3,
            1,
            &GenerateOptions::default(),
        )
        .unwrap();
        assert_eq!(g.graph.num_edges(), 3);
        assert!(odd_bipartition(&g.graph).is_certificate());
        assert!(is_odd_transversal(&g.graph, g.planted.as_ref().unwrap()));
    }

    #[test]
    fn forced_single_edge() {
        for seed in [0, 7, u64::MAX] {
            let g = generate(
                GenerateKind::UniformRandom,
                4,
                4,
                1,
                seed,
                &Default::default(),
            )
            .unwrap();
            assert_eq!(g.graph.edges(), &[vec![0, 1, 2, 3]]);
            assert!(g.connected);
            assert_eq!(g.attempts, 1);
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let opts = GenerateOptions::default();
        for kind in [GenerateKind::UniformRandom, GenerateKind::OddBipartite] {
            let a = generate(kind, 9, 4, 6, 42, &opts).unwrap();
            let b = generate(kind, 9, 4, 6, 42, &opts).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rejection_path_is_used_for_large_pools() {
        let opts = GenerateOptions {
            enumerate_limit: 10,
            ..Default::default()
        };
        let g = generate(GenerateKind::OddBipartite, 10, 4, 12, 3, &opts).unwrap();
        assert_eq!(g.graph.num_edges(), 12);
        assert!(odd_bipartition(&g.graph).is_certificate());
        let g = generate(GenerateKind::UniformRandom, 10, 4, 12, 3, &opts).unwrap();
        assert_eq!(g.graph.num_edges(), 12);
    }

    #[test]
    fn sparse_draws_report_disconnection() {
        let opts = GenerateOptions {
            max_attempts: 5,
            ..Default::default()
        };
        let g = generate(GenerateKind::UniformRandom, 10, 2, 1, 9, &opts).unwrap();
        assert!(!g.connected);
        assert_eq!(g.attempts, 5);
    }

    #[test]
    fn infeasible_parameters() {
        let opts = GenerateOptions::default();
        assert!(matches!(
            generate(GenerateKind::UniformRandom, 4, 4, 2, 0, &opts),
            Err(HypergraphError::InfeasibleParameters(_))
        ));
        assert!(matches!(
            generate(GenerateKind::OddBipartite, 6, 3, 2, 0, &opts),
            Err(HypergraphError::InfeasibleParameters(_))
        ));
        assert!(matches!(
            generate(GenerateKind::UniformRandom, 3, 4, 1, 0, &opts),
            Err(HypergraphError::InfeasibleParameters(_))
        ));
        // With n = k = 4 every V1 of size 1 or 3 admits the lone edge, so two
        // edges are impossible.
        assert!(matches!(
            generate(GenerateKind::OddBipartite, 4, 4, 2, 0, &opts),
            Err(HypergraphError::InfeasibleParameters(_))
        ));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 4), 15);
        assert_eq!(binomial(4, 5), 0);
        // a = 2 in [6], k = 4: r = 1 gives 2 * C(4,3) = 8.
        assert_eq!(odd_edge_count(6, 4, 2), 8);
    }
}
