use serde::Serialize;

use super::gf2::{self, Gf2Solution};
use super::Hypergraph;

/// Why no odd bipartition was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfeasibleReason {
    /// The parity system has no solution; the witness proves it.
    Inconsistent,
    /// Odd-bipartiteness is only defined for even uniformity.
    KOdd,
}

/// Either a vertex set meeting every edge an odd number of times, or a proof
/// that none exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartition {
    Certificate {
        /// The certifying subset V₁, ascending.
        v1: Vec<usize>,
    },
    Infeasible {
        /// Edge indices whose incidence rows sum to zero over GF(2) while
        /// their count is odd. Empty when `reason` is [`InfeasibleReason::KOdd`].
        witness: Vec<usize>,
        reason: InfeasibleReason,
    },
}

/// Solves the parity system `M s = 1` over GF(2), where `M` is the
/// edge-vertex incidence matrix.
///
/// For even `k` a solution is returned as a certificate `V₁ = {i : s_i = 1}`;
/// free variables are fixed to 0. When the system is inconsistent, the
/// combination of edges that produced the contradiction `0 = 1` during
/// elimination is returned as the witness. Odd `k` always yields
/// [`InfeasibleReason::KOdd`] with an empty witness.
///
/// ```
/// use hyperspec::hypergraph::{odd_bipartition, parse_hypergraph, Bipartition};
///
/// let g = parse_hypergraph("p hg 4 4\ne 1 2 3 4").unwrap();
/// assert_eq!(odd_bipartition(&g), Bipartition::Certificate { v1: vec![0] });
/// ```
pub fn odd_bipartition(g: &Hypergraph) -> Bipartition {
    if g.k() % 2 == 1 {
        return Bipartition::Infeasible {
            witness: Vec::new(),
            reason: InfeasibleReason::KOdd,
        };
    }
    let equations: Vec<(Vec<usize>, bool)> = g.edges().iter().map(|e| (e.clone(), true)).collect();
    match gf2::solve(g.n(), &equations) {
        Gf2Solution::Solution(s) => Bipartition::Certificate {
            v1: s
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i)
                .collect(),
        },
        Gf2Solution::Inconsistent(witness) => Bipartition::Infeasible {
            witness,
            reason: InfeasibleReason::Inconsistent,
        },
    }
}

impl Bipartition {
    pub fn is_certificate(&self) -> bool {
        matches!(self, Bipartition::Certificate { .. })
    }

    pub fn v1(&self) -> Option<&[usize]> {
        match self {
            Bipartition::Certificate { v1 } => Some(v1),
            Bipartition::Infeasible { .. } => None,
        }
    }

    /// Checks the certificate or witness against `g` without trusting the
    /// solver that produced it.
    pub fn verify(&self, g: &Hypergraph) -> bool {
        match self {
            Bipartition::Certificate { v1 } => {
                g.k().is_multiple_of(2)
                    && v1.iter().all(|&v| v < g.n())
                    && is_odd_transversal(g, v1)
            }
            Bipartition::Infeasible {
                reason: InfeasibleReason::KOdd,
                witness,
            } => g.k() % 2 == 1 && witness.is_empty(),
            Bipartition::Infeasible {
                reason: InfeasibleReason::Inconsistent,
                witness,
            } => verify_witness(g, witness),
        }
    }

    /// ±1 sign vector with `-1` on V₁.
    pub fn signs(&self, n: usize) -> Option<Vec<f64>> {
        self.v1().map(|v1| {
            let mut s = vec![1.0; n];
            for &v in v1 {
                s[v] = -1.0;
            }
            s
        })
    }

    /// 1-based view for reports.
    pub fn report(&self) -> BipartitionReport {
        match self {
            Bipartition::Certificate { v1 } => BipartitionReport {
                kind: "certificate",
                v1: Some(v1.iter().map(|v| v + 1).collect()),
                witness: None,
                reason: None,
            },
            Bipartition::Infeasible { witness, reason } => BipartitionReport {
                kind: "infeasible-witness",
                v1: None,
                witness: Some(witness.clone()),
                reason: Some(*reason),
            },
        }
    }
}

/// JSON shape of a [`Bipartition`]: vertex labels 1-based, edge indices
/// 0-based positions in the canonical edge list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BipartitionReport {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v1: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<InfeasibleReason>,
}

/// `true` if every edge meets `v1` in an odd number of vertices.
pub fn is_odd_transversal(g: &Hypergraph, v1: &[usize]) -> bool {
    let mut member = vec![false; g.n()];
    for &v in v1 {
        member[v] = true;
    }
    g.edges()
        .iter()
        .all(|e| e.iter().filter(|&&v| member[v]).count() % 2 == 1)
}

/// Odd bipartition of `G □ H` from odd bipartitions of the factors (k even):
/// the pairs lying in both V₁ sets or in neither.
///
/// Vertex `(i, j)` is labelled `i * m + j` as in
/// [`Hypergraph::cartesian_product`].
pub fn product_odd_transversal(v1_g: &[usize], n: usize, v1_h: &[usize], m: usize) -> Vec<usize> {
    let mut in_g = vec![false; n];
    for &v in v1_g {
        in_g[v] = true;
    }
    let mut in_h = vec![false; m];
    for &v in v1_h {
        in_h[v] = true;
    }
    (0..n * m).filter(|&p| in_g[p / m] == in_h[p % m]).collect()
}

/// An edge set of odd size covering every vertex an even number of times
/// makes `M s = 1` unsolvable: summing those equations gives `0 = 1`.
pub fn verify_witness(g: &Hypergraph, witness: &[usize]) -> bool {
    if witness.len().is_multiple_of(2) || witness.iter().any(|&e| e >= g.num_edges()) {
        return false;
    }
    let mut distinct = witness.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != witness.len() {
        return false;
    }
    let mut cover = vec![0usize; g.n()];
    for &e in witness {
        for &v in &g.edges()[e] {
            cover[v] += 1;
        }
    }
    cover.iter().all(|c| c % 2 == 0)
}
