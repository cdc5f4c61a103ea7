//! Adjacency, degree, Laplacian and signless Laplacian tensors of a
//! k-uniform hypergraph, dense or as an edge-list operator.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{DenseTensor, TensorError, TensorLimits, TensorOperator};
use crate::hypergraph::Hypergraph;

/// Largest uniformity for which tensors are built; keeps `(k−1)!` and `n^k`
/// well inside `u64`.
pub const MAX_UNIFORMITY: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TensorKind {
    /// 𝔸: `1/(k−1)!` on every ordering of every edge.
    #[serde(rename = "A")]
    Adjacency,
    /// 𝔻: vertex degrees on the diagonal.
    #[serde(rename = "D")]
    Degree,
    /// 𝕃 = 𝔻 − 𝔸.
    #[serde(rename = "L")]
    Laplacian,
    /// ℚ = 𝔻 + 𝔸.
    #[serde(rename = "Q")]
    SignlessLaplacian,
}

impl TensorKind {
    pub const ALL: [TensorKind; 4] = [
        TensorKind::Adjacency,
        TensorKind::Degree,
        TensorKind::Laplacian,
        TensorKind::SignlessLaplacian,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            TensorKind::Adjacency => "A",
            TensorKind::Degree => "D",
            TensorKind::Laplacian => "L",
            TensorKind::SignlessLaplacian => "Q",
        }
    }

    /// Sign of the adjacency part: `+1`, `0` or `−1`.
    fn adjacency_sign(self) -> f64 {
        match self {
            TensorKind::Adjacency | TensorKind::SignlessLaplacian => 1.0,
            TensorKind::Degree => 0.0,
            TensorKind::Laplacian => -1.0,
        }
    }

    fn has_degree(self) -> bool {
        self != TensorKind::Adjacency
    }
}

impl std::str::FromStr for TensorKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "A" | "a" => Ok(TensorKind::Adjacency),
            "D" | "d" => Ok(TensorKind::Degree),
            "L" | "l" => Ok(TensorKind::Laplacian),
            "Q" | "q" => Ok(TensorKind::SignlessLaplacian),
            other => Err(format!(
                "unknown tensor `{other}`, expected one of A, D, L, Q"
            )),
        }
    }
}

/// `n!` in exact integer arithmetic, for `n ≤ 20`.
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn check_uniformity(g: &Hypergraph) -> Result<(), TensorError> {
    if g.k() > MAX_UNIFORMITY {
        return Err(TensorError::UniformityTooLarge(g.k()));
    }
    Ok(())
}

/// Materializes the `kind` tensor of `g`.
pub fn build_tensor(
    g: &Hypergraph,
    kind: TensorKind,
    limits: &TensorLimits,
) -> Result<DenseTensor, TensorError> {
    check_uniformity(g)?;
    let (n, k) = (g.n(), g.k());
    let mut t = DenseTensor::zeros_limited(k, n, limits)?;
    let sign = kind.adjacency_sign();
    if sign != 0.0 {
        let value = sign / factorial(k - 1) as f64;
        for edge in g.edges() {
            for perm in edge.iter().copied().permutations(k) {
                t.set(&perm, value);
            }
        }
    }
    if kind.has_degree() {
        let degrees = g.degrees();
        for i in 0..n {
            t.set(&vec![i; k], degrees[i] as f64);
        }
    }
    Ok(t)
}

pub fn adjacency_tensor(g: &Hypergraph) -> Result<DenseTensor, TensorError> {
    build_tensor(g, TensorKind::Adjacency, &TensorLimits::default())
}

pub fn degree_tensor(g: &Hypergraph) -> Result<DenseTensor, TensorError> {
    build_tensor(g, TensorKind::Degree, &TensorLimits::default())
}

pub fn laplacian_tensor(g: &Hypergraph) -> Result<DenseTensor, TensorError> {
    build_tensor(g, TensorKind::Laplacian, &TensorLimits::default())
}

pub fn signless_laplacian_tensor(g: &Hypergraph) -> Result<DenseTensor, TensorError> {
    build_tensor(g, TensorKind::SignlessLaplacian, &TensorLimits::default())
}

/// `x ↦ T x` for a hypergraph tensor without materializing `n^k` entries.
///
/// Each edge contributes `Π_{j ∈ e∖{i}} x_j` to every `i ∈ e`: the `(k−1)!`
/// orderings of the other vertices each carry weight `1/(k−1)!`. The cost
/// is `O(|E|·k)` per application.
#[derive(Debug, Clone, Copy)]
pub struct EdgeListOperator<'g> {
    graph: &'g Hypergraph,
    kind: TensorKind,
}

impl<'g> EdgeListOperator<'g> {
    pub fn new(graph: &'g Hypergraph, kind: TensorKind) -> Self {
        Self { graph, kind }
    }

    pub fn graph(&self) -> &'g Hypergraph {
        self.graph
    }

    pub fn kind(&self) -> TensorKind {
        self.kind
    }

    pub fn to_dense(&self, limits: &TensorLimits) -> Result<DenseTensor, TensorError> {
        build_tensor(self.graph, self.kind, limits)
    }
}

impl TensorOperator for EdgeListOperator<'_> {
    fn order(&self) -> usize {
        self.graph.k()
    }

    fn dim(&self) -> usize {
        self.graph.n()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>, TensorError> {
        let (n, k) = (self.graph.n(), self.graph.k());
        if x.len() != n {
            return Err(TensorError::DimensionMismatch(format!(
                "vector of length {} for a dimension-{n} tensor",
                x.len()
            )));
        }
        let mut out = vec![0.0; n];
        if self.kind.has_degree() {
            let degrees = self.graph.degrees();
            for (i, slot) in out.iter_mut().enumerate() {
                *slot = degrees[i] as f64 * x[i].powi(k as i32 - 1);
            }
        }
        let sign = self.kind.adjacency_sign();
        if sign != 0.0 {
            let mut prefix = vec![1.0; k + 1];
            for edge in self.graph.edges() {
                for (p, &v) in edge.iter().enumerate() {
                    prefix[p + 1] = prefix[p] * x[v];
                }
                let mut suffix = 1.0;
                for (p, &v) in edge.iter().enumerate().rev() {
                    out[v] += sign * prefix[p] * suffix;
                    suffix *= x[v];
                }
            }
        }
        Ok(out)
    }

    fn is_nonnegative(&self) -> bool {
        self.kind != TensorKind::Laplacian || self.graph.num_edges() == 0
    }

    fn is_weakly_irreducible(&self) -> Result<bool, TensorError> {
        if !self.is_nonnegative() {
            return Err(TensorError::NegativeEntry);
        }
        Ok(match self.kind {
            TensorKind::Degree => self.graph.n() == 1,
            _ => self.graph.is_connected(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::fixtures::*;
    use crate::hypergraph::{generate, GenerateKind, SplitMix64};
    use crate::tensor::weakly_irreducible;

    #[test]
    fn single_edge_adjacency() {
        let a = adjacency_tensor(&single_edge(4)).unwrap();
        let nz: Vec<_> = a.nonzeros().collect();
        assert_eq!(nz.len(), 24);
        assert!(nz.iter().all(|(_, v)| *v == 1.0 / 6.0));
        assert!(a.is_symmetric(0.0));
    }

    #[test]
    fn edgeless_is_zero() {
        let g = Hypergraph::edgeless(3, 3).unwrap();
        assert_eq!(adjacency_tensor(&g).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn triangle_matrices() {
        let g = triangle();
        let a = adjacency_tensor(&g).unwrap();
        let want = DenseTensor::matrix(&[
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(a, want);
        let l = laplacian_tensor(&g).unwrap();
        let two_i = DenseTensor::unit(2, 3).unwrap().scale(2.0);
        assert_eq!(l, two_i.sub(&want).unwrap());
    }

    #[test]
    fn single_edge_signless() {
        let q = signless_laplacian_tensor(&single_edge(4)).unwrap();
        for i in 0..4 {
            assert_eq!(q.get(&[i; 4]), 1.0);
        }
        assert_eq!(q.get(&[2, 0, 3, 1]), 1.0 / 6.0);
        assert_eq!(q.get(&[0, 0, 1, 2]), 0.0);
    }

    #[test]
    fn laplacian_plus_signless_is_twice_degree() {
        for g in [single_edge(5), triad(), triangle()] {
            let l = laplacian_tensor(&g).unwrap();
            let q = signless_laplacian_tensor(&g).unwrap();
            let d = degree_tensor(&g).unwrap();
            assert_eq!(l.add(&q).unwrap(), d.scale(2.0));
            assert_eq!(d.sub(&adjacency_tensor(&g).unwrap()).unwrap(), l);
        }
    }

    #[test]
    fn triad_signless_on_ones() {
        let g = triad();
        let q = signless_laplacian_tensor(&g).unwrap();
        let op = EdgeListOperator::new(&g, TensorKind::SignlessLaplacian);
        for y in [q.apply(&[1.0; 6]).unwrap(), op.apply(&[1.0; 6]).unwrap()] {
            assert!(y.iter().all(|v| (v - 4.0).abs() <= 1e-14), "{y:?}");
        }
    }

    #[test]
    fn single_edge_adjacency_on_ones() {
        let g = single_edge(4);
        let a = adjacency_tensor(&g).unwrap();
        let ones = [1.0; 4];
        let ax = a.apply(&ones).unwrap();
        assert!(ax.iter().all(|v| (v - 1.0).abs() <= 1e-15));
        assert_eq!(
            EdgeListOperator::new(&g, TensorKind::Adjacency)
                .apply(&ones)
                .unwrap(),
            ones
        );
    }

    #[test]
    fn edge_list_matches_dense() {
        let mut rng = SplitMix64::new(21);
        for (kind, n, k, m) in [
            (GenerateKind::UniformRandom, 6, 3, 6),
            (GenerateKind::OddBipartite, 7, 4, 8),
            (GenerateKind::UniformRandom, 8, 2, 10),
        ] {
            let g = generate(kind, n, k, m, 4, &Default::default())
                .unwrap()
                .graph;
            for tk in TensorKind::ALL {
                let dense = build_tensor(&g, tk, &TensorLimits::default()).unwrap();
                let op = EdgeListOperator::new(&g, tk);
                for _ in 0..100 {
                    let x: Vec<f64> = (0..n).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
                    let a = dense.apply(&x).unwrap();
                    let b = op.apply(&x).unwrap();
                    let scale = a.iter().map(|v| v.abs()).fold(1.0, f64::max);
                    for (u, v) in a.iter().zip(&b) {
                        assert!((u - v).abs() <= 1e-12 * scale, "{tk:?}: {u} vs {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn symmetric_under_permutations() {
        let g = generate(GenerateKind::UniformRandom, 6, 3, 7, 2, &Default::default())
            .unwrap()
            .graph;
        for tk in TensorKind::ALL {
            let t = build_tensor(&g, tk, &TensorLimits::default()).unwrap();
            assert!(t.is_symmetric(0.0));
            assert_eq!(t.permute_indices(&[2, 0, 1]).unwrap(), t);
        }
    }

    #[test]
    fn weak_irreducibility_matches_connectivity() {
        for (g, want) in [
            (single_edge(4), true),
            (single_edge(5), false),
            (triad(), true),
        ] {
            let a = adjacency_tensor(&g).unwrap();
            assert_eq!(weakly_irreducible(&a).unwrap(), want);
            let op = EdgeListOperator::new(&g, TensorKind::SignlessLaplacian);
            assert_eq!(op.is_weakly_irreducible().unwrap(), want);
        }
        let tri = triangle();
        let op = EdgeListOperator::new(&tri, TensorKind::Laplacian);
        assert_eq!(op.is_weakly_irreducible(), Err(TensorError::NegativeEntry));
    }

    #[test]
    fn guards() {
        let big = Hypergraph::edgeless(13, 13).unwrap();
        assert_eq!(
            adjacency_tensor(&big),
            Err(TensorError::UniformityTooLarge(13))
        );
        let g = single_edge(20);
        let cap = TensorLimits { max_entries: 1000 };
        assert!(matches!(
            build_tensor(&g, TensorKind::Adjacency, &cap),
            Err(TensorError::TooLarge { .. })
        ));
        assert_eq!(factorial(3), 6);
        assert_eq!(factorial(11), 39_916_800);
    }
}
