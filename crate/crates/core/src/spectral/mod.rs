//! H-eigenpairs of hypergraph tensors.
//!
//! The spectral radius of a nonnegative weakly irreducible tensor is found
//! by a shifted power iteration that also certifies an interval containing
//! it. Laplacian eigenpairs are obtained from signless Laplacian ones through
//! an odd bipartition, and eigenpairs of Kronecker sums are assembled from
//! eigenpairs of the factors.

mod matrix;

use serde::{Deserialize, Serialize};

pub use matrix::symmetric_eigenvalues;

use crate::hypergraph::{Bipartition, Hypergraph};
use crate::tensor::{EdgeListOperator, TensorError, TensorKind, TensorOperator};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("tensor is not weakly irreducible; the Perron bracket need not close")]
    NotWeaklyIrreducible,
    #[error("tensor has negative entries")]
    NegativeEntries,
    #[error("eigenvector must be nonzero")]
    ZeroVector,
    #[error("invalid power iteration config: {0}")]
    InvalidConfig(String),
    #[error("operation needs even uniformity, got k = {0}")]
    OddUniformity(usize),
    #[error("bipartition is not a valid odd-bipartition certificate for this hypergraph")]
    InvalidCertificate,
    #[error("hypergraph is not connected")]
    Disconnected,
    #[error("power iterate lost positivity at iteration {0}")]
    DegenerateIterate(usize),
    #[error("order mismatch: {0}")]
    OrderMismatch(String),
}

/// A numeric H-eigenpair `T x ≈ λ x^[m−1]` with `‖x‖∞ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub lambda: f64,
    pub x: Vec<f64>,
    /// `‖T x − λ x^[m−1]‖∞`.
    pub residual: f64,
    /// Order `m` of the tensor the pair belongs to.
    pub order: usize,
}

impl EigenPair {
    /// Normalizes `x` to unit ∞-norm and records its residual against `op`.
    pub fn new<T: TensorOperator + ?Sized>(
        op: &T,
        lambda: f64,
        x: Vec<f64>,
    ) -> Result<Self, SpectralError> {
        let x = normalize_inf(x)?;
        let residual = raw_residual(op, lambda, &x)?;
        Ok(Self {
            lambda,
            x,
            residual,
            order: op.order(),
        })
    }

    /// Recomputes the residual from scratch.
    pub fn recompute_residual<T: TensorOperator + ?Sized>(
        &self,
        op: &T,
    ) -> Result<f64, SpectralError> {
        residual(op, self.lambda, &self.x)
    }
}

fn normalize_inf(mut x: Vec<f64>) -> Result<Vec<f64>, SpectralError> {
    let norm = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if norm == 0.0 || !norm.is_finite() {
        return Err(SpectralError::ZeroVector);
    }
    if norm != 1.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    Ok(x)
}

fn raw_residual<T: TensorOperator + ?Sized>(
    op: &T,
    lambda: f64,
    x: &[f64],
) -> Result<f64, SpectralError> {
    let tx = op.apply(x)?;
    let e = op.order() as i32 - 1;
    Ok(tx
        .iter()
        .zip(x)
        .map(|(t, v)| (t - lambda * v.powi(e)).abs())
        .fold(0.0, f64::max))
}

/// `‖T x − λ x^[m−1]‖∞` after scaling `x` to unit ∞-norm.
///
/// ```
/// use hyperspec::hypergraph::parse_hypergraph;
/// use hyperspec::spectral::residual;
/// use hyperspec::tensor::{EdgeListOperator, TensorKind};
///
/// let g = parse_hypergraph("p hg 4 4\ne 1 2 3 4").unwrap();
/// let a = EdgeListOperator::new(&g, TensorKind::Adjacency);
/// assert_eq!(residual(&a, 0.5, &[1.0; 4]).unwrap(), 0.5);
/// ```
pub fn residual<T: TensorOperator + ?Sized>(
    op: &T,
    lambda: f64,
    x: &[f64],
) -> Result<f64, SpectralError> {
    let x = normalize_inf(x.to_vec())?;
    raw_residual(op, lambda, &x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PowerIterationConfig {
    /// Relative bracket width at which iteration stops.
    pub tol: f64,
    pub max_iter: usize,
    /// Diagonal shift `s`: the iteration runs on `T + s·𝕀`.
    pub shift: f64,
}

impl Default for PowerIterationConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100_000,
            shift: 1.0,
        }
    }
}

impl PowerIterationConfig {
    pub fn validate(&self) -> Result<(), SpectralError> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(SpectralError::InvalidConfig(format!(
                "tol must be > 0, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(SpectralError::InvalidConfig("max_iter must be > 0".into()));
        }
        if !(self.shift >= 0.0 && self.shift.is_finite()) {
            return Err(SpectralError::InvalidConfig(format!(
                "shift must be finite and >= 0, got {}",
                self.shift
            )));
        }
        Ok(())
    }
}

/// Outcome of [`power_rho`] and [`laplacian_rho_eigenpair`].
#[derive(Debug, Clone, PartialEq)]
pub struct PowerResult {
    pub pair: EigenPair,
    /// Certified interval `[lo, hi]` containing the spectral radius.
    pub bracket: [f64; 2],
    pub iterations: usize,
    pub converged: bool,
}

/// JSON shape of an eigenpair report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub lambda: f64,
    pub bracket: [f64; 2],
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
    pub vector: Vec<f64>,
}

impl PowerResult {
    pub fn report(&self) -> EigenReport {
        EigenReport {
            lambda: self.pair.lambda,
            bracket: self.bracket,
            iterations: self.iterations,
            converged: self.converged,
            residual: self.pair.residual,
            vector: self.pair.x.clone(),
        }
    }
}

/// Spectral radius of a nonnegative weakly irreducible tensor.
///
/// Iterates `x ← normalize((T' x)^[1/(m−1)])` on `T' = T + s·𝕀` from the
/// all-ones vector. For positive `x` the ratios `(T' x)_i / x_i^{m−1}`
/// bracket `ρ(T') = ρ(T) + s`, so every iteration yields a certified
/// interval. Iteration stops once the interval is narrower than
/// `tol·max(1, hi)` and the residual of the midpoint is at most `tol`.
///
/// When `max_iter` runs out the last bracket is returned with
/// `converged == false`.
///
/// ```
/// use hyperspec::hypergraph::parse_hypergraph;
/// use hyperspec::spectral::{power_rho, PowerIterationConfig};
/// use hyperspec::tensor::{EdgeListOperator, TensorKind};
///
/// let g = parse_hypergraph("p hg 3 2\ne 1 2\ne 2 3\ne 1 3").unwrap();
/// let q = EdgeListOperator::new(&g, TensorKind::SignlessLaplacian);
/// let r = power_rho(&q, &PowerIterationConfig::default()).unwrap();
/// assert!(r.converged);
/// assert!((r.pair.lambda - 4.0).abs() < 1e-9);
/// ```
pub fn power_rho<T: TensorOperator + ?Sized>(
    op: &T,
    cfg: &PowerIterationConfig,
) -> Result<PowerResult, SpectralError> {
    cfg.validate()?;
    let (m, n) = (op.order(), op.dim());
    if m < 2 {
        return Err(TensorError::OrderTooSmall { needed: 2, got: m }.into());
    }
    if !op.is_nonnegative() {
        return Err(SpectralError::NegativeEntries);
    }
    if !op.is_weakly_irreducible()? {
        return Err(SpectralError::NotWeaklyIrreducible);
    }
    let e = m as i32 - 1;
    let root = 1.0 / (m - 1) as f64;
    let mut x = vec![1.0; n];
    let mut last = None;
    for iteration in 1..=cfg.max_iter {
        let mut y = op.apply(&x)?;
        let powers: Vec<f64> = x.iter().map(|v| v.powi(e)).collect();
        for (yi, pi) in y.iter_mut().zip(&powers) {
            *yi += cfg.shift * pi;
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (yi, pi) in y.iter().zip(&powers) {
            let r = yi / pi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let lambda = 0.5 * (lo + hi) - cfg.shift;
        let res = y
            .iter()
            .zip(&powers)
            .map(|(yi, pi)| (yi - (cfg.shift + lambda) * pi).abs())
            .fold(0.0, f64::max);
        let bracket = [lo - cfg.shift, hi - cfg.shift];
        if hi - lo <= cfg.tol * hi.max(1.0) && res <= cfg.tol {
            return Ok(PowerResult {
                pair: EigenPair {
                    lambda,
                    x,
                    residual: res,
                    order: m,
                },
                bracket,
                iterations: iteration,
                converged: true,
            });
        }
        if y.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(SpectralError::DegenerateIterate(iteration));
        }
        let next: Vec<f64> = y.iter().map(|v| v.powf(root)).collect();
        last = Some((
            lambda,
            std::mem::replace(&mut x, normalize_inf(next)?),
            res,
            bracket,
        ));
    }
    let (lambda, x, residual, bracket) = last.expect("max_iter > 0");
    Ok(PowerResult {
        pair: EigenPair {
            lambda,
            x,
            residual,
            order: m,
        },
        bracket,
        iterations: cfg.max_iter,
        converged: false,
    })
}

fn require_certificate(g: &Hypergraph, cert: &Bipartition) -> Result<Vec<f64>, SpectralError> {
    if g.k() % 2 == 1 {
        return Err(SpectralError::OddUniformity(g.k()));
    }
    if !cert.is_certificate() || !cert.verify(g) {
        return Err(SpectralError::InvalidCertificate);
    }
    Ok(cert.signs(g.n()).expect("certificate has signs"))
}

/// Zero H-eigenpair of ℚ built from an odd bipartition.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroEigen {
    pub pair: EigenPair,
    /// `x_{i₁}^k + ⋯ + x_{i_k}^k + k·x_{i₁}⋯x_{i_k}` for each edge, all zero.
    pub edge_terms: Vec<f64>,
}

/// `x_i = −1` on V₁ and `+1` elsewhere solves `ℚ x = 0`.
///
/// Each edge meets V₁ oddly, so its vertex product is `−1` and the
/// adjacency term at `i` cancels the degree term `d_i x_i^{k−1}` exactly.
pub fn zero_q_eigenvector(g: &Hypergraph, cert: &Bipartition) -> Result<ZeroEigen, SpectralError> {
    let x = require_certificate(g, cert)?;
    let q = EdgeListOperator::new(g, TensorKind::SignlessLaplacian);
    let k = g.k();
    let edge_terms = g
        .edges()
        .iter()
        .map(|e| {
            let powers: f64 = e.iter().map(|&i| x[i].powi(k as i32)).sum();
            let product: f64 = e.iter().map(|&i| x[i]).product();
            powers + k as f64 * product
        })
        .collect();
    Ok(ZeroEigen {
        pair: EigenPair::new(&q, 0.0, x)?,
        edge_terms,
    })
}

/// Laplacian eigenpair at `ρ(ℚ)` for a connected odd-bipartite hypergraph.
///
/// Runs [`power_rho`] on ℚ and flips the sign of the Perron vector on V₁.
/// Since `𝕃 = P^{−(k−1)} ℚ P` for the sign diagonal `P`, the flipped
/// vector is an eigenvector of 𝕃 with the same eigenvalue and residual.
pub fn laplacian_rho_eigenpair(
    g: &Hypergraph,
    cert: &Bipartition,
    cfg: &PowerIterationConfig,
) -> Result<PowerResult, SpectralError> {
    let signs = require_certificate(g, cert)?;
    if !g.is_connected() {
        return Err(SpectralError::Disconnected);
    }
    let q = EdgeListOperator::new(g, TensorKind::SignlessLaplacian);
    let perron = power_rho(&q, cfg)?;
    let y: Vec<f64> = perron
        .pair
        .x
        .iter()
        .zip(&signs)
        .map(|(v, s)| v * s)
        .collect();
    let l = EdgeListOperator::new(g, TensorKind::Laplacian);
    Ok(PowerResult {
        pair: EigenPair::new(&l, perron.pair.lambda, y)?,
        ..perron
    })
}

/// Eigenpair `(λ + μ, u ⊗ v)` of the Kronecker sum `A ⊗ 𝕀_m + 𝕀_n ⊗ B`
/// from eigenpairs `(λ, u)` of `A` and `(μ, v)` of `B`. The residual is
/// evaluated against `combined`.
pub fn product_eigenpair<T: TensorOperator + ?Sized>(
    p: &EigenPair,
    q: &EigenPair,
    combined: &T,
) -> Result<EigenPair, SpectralError> {
    if p.order != q.order || combined.order() != p.order {
        return Err(SpectralError::OrderMismatch(format!(
            "factor orders {} and {}, combined order {}",
            p.order,
            q.order,
            combined.order()
        )));
    }
    let m = q.x.len();
    if combined.dim() != p.x.len() * m {
        return Err(TensorError::DimensionMismatch(format!(
            "combined dimension {} is not {} x {m}",
            combined.dim(),
            p.x.len()
        ))
        .into());
    }
    let w: Vec<f64> =
        p.x.iter()
            .flat_map(|u| q.x.iter().map(move |v| u * v))
            .collect();
    EigenPair::new(combined, p.lambda + q.lambda, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::fixtures::*;
    use crate::hypergraph::{generate, odd_bipartition, GenerateKind};
    use crate::tensor::{build_tensor, kronecker_sum, DenseTensor, TensorLimits};

    fn cfg() -> PowerIterationConfig {
        PowerIterationConfig::default()
    }

    #[test]
    fn single_edge_radii() {
        let g = single_edge(4);
        let q = power_rho(
            &EdgeListOperator::new(&g, TensorKind::SignlessLaplacian),
            &cfg(),
        )
        .unwrap();
        assert!((q.pair.lambda - 2.0).abs() <= 1e-9);
        assert!(q.pair.x.iter().all(|v| (v - 1.0).abs() <= 1e-12));
        let a = power_rho(&EdgeListOperator::new(&g, TensorKind::Adjacency), &cfg()).unwrap();
        assert!((a.pair.lambda - 1.0).abs() <= 1e-9);
        assert!(a.bracket[0] <= 1.0 && 1.0 <= a.bracket[1]);
    }

    #[test]
    fn dense_and_edge_list_agree() {
        let g = triad();
        let dense =
            build_tensor(&g, TensorKind::SignlessLaplacian, &TensorLimits::default()).unwrap();
        let a = power_rho(&dense, &cfg()).unwrap();
        let b = power_rho(
            &EdgeListOperator::new(&g, TensorKind::SignlessLaplacian),
            &cfg(),
        )
        .unwrap();
        // Triad is 2-regular: ρ(ℚ) = 2·2 = 4.
        assert!((a.pair.lambda - 4.0).abs() <= 1e-9);
        assert!((a.pair.lambda - b.pair.lambda).abs() <= 1e-9);
    }

    #[test]
    fn refuses_reducible_and_negative() {
        let g = single_edge(5);
        assert_eq!(
            power_rho(
                &EdgeListOperator::new(&g, TensorKind::SignlessLaplacian),
                &cfg()
            ),
            Err(SpectralError::NotWeaklyIrreducible)
        );
        let t = triangle();
        assert_eq!(
            power_rho(&EdgeListOperator::new(&t, TensorKind::Laplacian), &cfg()),
            Err(SpectralError::NegativeEntries)
        );
        let bad = PowerIterationConfig { tol: 0.0, ..cfg() };
        assert!(matches!(
            power_rho(&EdgeListOperator::new(&t, TensorKind::Adjacency), &bad),
            Err(SpectralError::InvalidConfig(_))
        ));
    }

    #[test]
    fn unreachable_tolerance_reports_non_convergence() {
        let g = generate(GenerateKind::UniformRandom, 7, 3, 6, 3, &Default::default())
            .unwrap()
            .graph;
        let op = EdgeListOperator::new(&g, TensorKind::SignlessLaplacian);
        let r = power_rho(
            &op,
            &PowerIterationConfig {
                tol: 1e-30,
                max_iter: 200,
                shift: 1.0,
            },
        )
        .unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 200);
        assert!(r.bracket[0] <= r.pair.lambda && r.pair.lambda <= r.bracket[1]);
    }

    #[test]
    fn residual_examples() {
        let g = single_edge(4);
        let q = EdgeListOperator::new(&g, TensorKind::SignlessLaplacian);
        assert_eq!(residual(&q, 2.0, &[1.0; 4]).unwrap(), 0.0);
        assert_eq!(residual(&q, 2.0, &[3.0; 4]).unwrap(), 0.0);
        assert_eq!(residual(&q, 2.0, &[0.0; 4]), Err(SpectralError::ZeroVector));
        let r = power_rho(&q, &cfg()).unwrap();
        assert!(r.pair.residual <= cfg().tol);
        assert_eq!(r.pair.recompute_residual(&q).unwrap(), r.pair.residual);
    }

    #[test]
    fn zero_eigenvector_single_edge() {
        let g = single_edge(4);
        let z = zero_q_eigenvector(&g, &odd_bipartition(&g)).unwrap();
        assert_eq!(z.pair.x, vec![-1.0, 1.0, 1.0, 1.0]);
        assert_eq!(z.pair.residual, 0.0);
        assert_eq!(z.edge_terms, vec![0.0]);
    }

    #[test]
    fn zero_eigenvector_errors() {
        let g = triad();
        assert_eq!(
            zero_q_eigenvector(&g, &odd_bipartition(&g)),
            Err(SpectralError::InvalidCertificate)
        );
        let forged = Bipartition::Certificate { v1: vec![0] };
        assert_eq!(
            zero_q_eigenvector(&g, &forged),
            Err(SpectralError::InvalidCertificate)
        );
        let odd = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(
            zero_q_eigenvector(&odd, &Bipartition::Certificate { v1: vec![0] }),
            Err(SpectralError::OddUniformity(3))
        );
    }

    #[test]
    fn laplacian_pair_single_edge_and_k2() {
        let g = single_edge(4);
        let r = laplacian_rho_eigenpair(&g, &odd_bipartition(&g), &cfg()).unwrap();
        assert!((r.pair.lambda - 2.0).abs() <= 1e-9);
        for (got, want) in r.pair.x.iter().zip([-1.0, 1.0, 1.0, 1.0]) {
            assert!((got - want).abs() <= 1e-12);
        }
        let l = EdgeListOperator::new(&g, TensorKind::Laplacian);
        assert_eq!(residual(&l, 2.0, &[-1.0, 1.0, 1.0, 1.0]).unwrap(), 0.0);

        let k2 = Hypergraph::new(2, 2, vec![vec![0, 1]]).unwrap();
        let r = laplacian_rho_eigenpair(&k2, &odd_bipartition(&k2), &cfg()).unwrap();
        assert!((r.pair.lambda - 2.0).abs() <= 1e-9);
        assert!((r.pair.x[0] + 1.0).abs() <= 1e-12 && (r.pair.x[1] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn laplacian_pair_generated() {
        let g = generate(GenerateKind::OddBipartite, 8, 4, 4, 7, &Default::default()).unwrap();
        if !g.connected {
            return;
        }
        let cert = odd_bipartition(&g.graph);
        let l = laplacian_rho_eigenpair(&g.graph, &cert, &cfg()).unwrap();
        let q = power_rho(
            &EdgeListOperator::new(&g.graph, TensorKind::SignlessLaplacian),
            &cfg(),
        )
        .unwrap();
        assert!(l.pair.residual <= 1e-8);
        assert_eq!(l.pair.residual, q.pair.residual);
        assert_eq!(l.pair.lambda, q.pair.lambda);
    }

    #[test]
    fn product_pairs() {
        let g = single_edge(4);
        let q = EdgeListOperator::new(&g, TensorKind::SignlessLaplacian);
        let p = power_rho(&q, &cfg()).unwrap().pair;
        let gh = g.cartesian_product(&g).unwrap();
        let combined = EdgeListOperator::new(&gh, TensorKind::SignlessLaplacian);
        let w = product_eigenpair(&p, &p, &combined).unwrap();
        assert!((w.lambda - 4.0).abs() <= 1e-9);
        assert_eq!(w.x.len(), 16);
        assert!(w.x.iter().all(|v| (v - 1.0).abs() <= 1e-12));
        assert!(w.residual <= 1e-8);

        let z = zero_q_eigenvector(&g, &odd_bipartition(&g)).unwrap().pair;
        let zz = product_eigenpair(&z, &z, &combined).unwrap();
        assert_eq!(zz.lambda, 0.0);
        assert_eq!(zz.residual, 0.0);
    }

    #[test]
    fn product_of_ones_pairs_on_dense_sum() {
        let a = DenseTensor::diagonal(3, &[2.0, 2.0]).unwrap();
        let b = DenseTensor::diagonal(3, &[5.0, 5.0, 5.0]).unwrap();
        let sum = kronecker_sum(&a, &b, &TensorLimits::default()).unwrap();
        let pa = EigenPair::new(&a, 2.0, vec![1.0; 2]).unwrap();
        let pb = EigenPair::new(&b, 5.0, vec![1.0; 3]).unwrap();
        let w = product_eigenpair(&pa, &pb, &sum).unwrap();
        assert_eq!(w.lambda, 7.0);
        assert_eq!(w.x, vec![1.0; 6]);
        assert_eq!(w.residual, 0.0);
        let wrong = DenseTensor::unit(2, 6).unwrap();
        assert!(matches!(
            product_eigenpair(&pa, &pb, &wrong),
            Err(SpectralError::OrderMismatch(_))
        ));
    }
}
