//! Dense real tensors and the products used on hypergraph tensors.
//!
//! A [`DenseTensor`] of order `m` and dimension `n` stores `n^m` entries in
//! row-major order: the first index varies slowest. Every allocation is
//! checked against [`TensorLimits::max_entries`] before memory is touched.

mod dump;
mod graph_tensors;
mod products;

use std::collections::VecDeque;

pub use dump::parse_dump;
pub use graph_tensors::{
    adjacency_tensor, build_tensor, degree_tensor, factorial, laplacian_tensor,
    signless_laplacian_tensor, EdgeListOperator, TensorKind, MAX_UNIFORMITY,
};
pub use products::{
    diag_similarity, direct_product, direct_product_limited, general_product,
    general_product_limited, kronecker_sum, matrix_sandwich,
};

/// Default cap on the number of stored entries (10⁸).
pub const DEFAULT_ENTRY_CAP: usize = 100_000_000;

/// Environment variable that overrides [`DEFAULT_ENTRY_CAP`] in
/// [`TensorLimits::from_env`].
pub const ENTRY_CAP_ENV: &str = "HYPERSPEC_ENTRY_CAP";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TensorError {
    #[error("tensor of order {order} and dimension {dim} needs {entries} entries, cap is {cap}")]
    TooLarge {
        order: usize,
        dim: usize,
        entries: String,
        cap: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("order mismatch: {0}")]
    OrderMismatch(String),
    #[error("operation needs order at least {needed}, got {got}")]
    OrderTooSmall { needed: usize, got: usize },
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("non-finite entry at position {0}")]
    NonFinite(usize),
    #[error("tensor has a negative entry")]
    NegativeEntry,
    #[error("diagonal entry {0} is zero")]
    ZeroDiagonal(usize),
    #[error("invalid exponent {0}")]
    InvalidExponent(f64),
    #[error("negative base {base} at position {index} with fractional exponent {exponent}")]
    NegativeBase {
        index: usize,
        base: f64,
        exponent: f64,
    },
    #[error("uniformity {0} exceeds the supported maximum of {MAX_UNIFORMITY}")]
    UniformityTooLarge(usize),
    #[error("malformed tensor dump at line {line}: {reason}")]
    MalformedDump { line: usize, reason: String },
}

/// Allocation limits for dense tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorLimits {
    pub max_entries: usize,
}

impl Default for TensorLimits {
    fn default() -> Self {
        Self {
            max_entries: DEFAULT_ENTRY_CAP,
        }
    }
}

impl TensorLimits {
    /// Reads `HYPERSPEC_ENTRY_CAP`, falling back to the default when unset or
    /// unparsable.
    pub fn from_env() -> Self {
        std::env::var(ENTRY_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(|max_entries| Self { max_entries })
            .unwrap_or_default()
    }

    /// Number of entries of an `order`/`dim` tensor, if within the cap.
    pub fn check(&self, order: usize, dim: usize) -> Result<usize, TensorError> {
        let too_large = |entries: String| TensorError::TooLarge {
            order,
            dim,
            entries,
            cap: self.max_entries,
        };
        match u32::try_from(order).ok().and_then(|o| dim.checked_pow(o)) {
            Some(len) if len <= self.max_entries => Ok(len),
            Some(len) => Err(too_large(len.to_string())),
            None => Err(too_large(format!("{dim}^{order}"))),
        }
    }
}

/// Anything that maps `x ↦ T x` for an order-`m`, dimension-`n` tensor `T`.
pub trait TensorOperator {
    fn order(&self) -> usize;
    fn dim(&self) -> usize;

    /// `(T x)_i = Σ t_{i i₂…i_m} x_{i₂}⋯x_{i_m}`.
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>, TensorError>;

    fn is_nonnegative(&self) -> bool;

    /// Strong connectivity of the representation digraph. Errors on tensors
    /// with negative entries.
    fn is_weakly_irreducible(&self) -> Result<bool, TensorError>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    order: usize,
    dim: usize,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn zeros(order: usize, dim: usize) -> Result<Self, TensorError> {
        Self::zeros_limited(order, dim, &TensorLimits::default())
    }

    pub fn zeros_limited(
        order: usize,
        dim: usize,
        limits: &TensorLimits,
    ) -> Result<Self, TensorError> {
        let len = limits.check(order, dim)?;
        Ok(Self {
            order,
            dim,
            data: vec![0.0; len],
        })
    }

    /// Wraps row-major `data`; the length must be `dim^order` and every
    /// entry finite.
    pub fn from_vec(order: usize, dim: usize, data: Vec<f64>) -> Result<Self, TensorError> {
        let expected = TensorLimits {
            max_entries: usize::MAX,
        }
        .check(order, dim)?;
        if data.len() != expected {
            return Err(TensorError::WrongLength {
                expected,
                got: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(TensorError::NonFinite(pos));
        }
        Ok(Self { order, dim, data })
    }

    pub fn from_fn(
        order: usize,
        dim: usize,
        mut f: impl FnMut(&[usize]) -> f64,
    ) -> Result<Self, TensorError> {
        let mut t = Self::zeros(order, dim)?;
        let mut idx = vec![0; order];
        for slot in t.data.iter_mut() {
            *slot = f(&idx);
            increment(&mut idx, dim);
        }
        Self::from_vec(order, dim, t.data)
    }

    /// The unit tensor: 1 on the main diagonal `(i, …, i)`, so `I x = x^[m−1]`.
    pub fn unit(order: usize, dim: usize) -> Result<Self, TensorError> {
        Self::diagonal(order, &vec![1.0; dim])
    }

    /// Diagonal tensor with `diag[i]` at `(i, …, i)`.
    pub fn diagonal(order: usize, diag: &[f64]) -> Result<Self, TensorError> {
        let mut t = Self::zeros(order, diag.len())?;
        let stride = t.diagonal_stride();
        for (i, &d) in diag.iter().enumerate() {
            t.data[i * stride] = d;
        }
        Ok(t)
    }

    /// Order-1 tensor holding a vector.
    pub fn vector(x: &[f64]) -> Result<Self, TensorError> {
        Self::from_vec(1, x.len(), x.to_vec())
    }

    /// Order-2 tensor from square row-major rows.
    pub fn matrix(rows: &[Vec<f64>]) -> Result<Self, TensorError> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(TensorError::DimensionMismatch(format!(
                "matrix row of length {} in a {n}-row matrix",
                bad.len()
            )));
        }
        Self::from_vec(2, n, rows.concat())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Row-major offset of a multi-index.
    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order);
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    /// Inverse of [`DenseTensor::offset`].
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.order];
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.dim;
            flat /= self.dim;
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let off = self.offset(idx);
        self.data[off] = value;
    }

    /// Offset step between consecutive diagonal entries `(i,…,i)`.
    fn diagonal_stride(&self) -> usize {
        (0..self.order).fold(0, |acc, _| acc * self.dim + 1)
    }

    fn same_shape(&self, other: &Self) -> Result<(), TensorError> {
        if self.order != other.order || self.dim != other.dim {
            return Err(TensorError::DimensionMismatch(format!(
                "order {} dim {} vs order {} dim {}",
                self.order, self.dim, other.order, other.dim
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self, TensorError> {
        self.same_shape(other)?;
        Ok(Self {
            order: self.order,
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, TensorError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TensorError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            order: self.order,
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// `max |a − b|` over all entries.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, TensorError> {
        self.same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Reorders indices: the result's index `p` is this tensor's index
    /// `perm[p]`.
    pub fn permute_indices(&self, perm: &[usize]) -> Result<Self, TensorError> {
        let mut seen = vec![false; self.order];
        if perm.len() != self.order
            || perm
                .iter()
                .any(|&p| p >= self.order || std::mem::replace(&mut seen[p], true))
        {
            return Err(TensorError::OrderMismatch(format!(
                "{perm:?} is not a permutation of 0..{}",
                self.order
            )));
        }
        let mut out = self.clone();
        let mut idx = vec![0; self.order];
        let mut src = vec![0; self.order];
        for slot in out.data.iter_mut() {
            for (p, &q) in perm.iter().enumerate() {
                src[q] = idx[p];
            }
            *slot = self.get(&src);
            increment(&mut idx, self.dim);
        }
        Ok(out)
    }

    /// Invariance under every permutation of the indices, checked on the
    /// adjacent transpositions that generate the symmetric group.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.order.saturating_sub(1)).all(|p| {
            let mut perm: Vec<usize> = (0..self.order).collect();
            perm.swap(p, p + 1);
            self.permute_indices(&perm)
                .and_then(|t| t.max_abs_diff(self))
                .is_ok_and(|d| d <= tol)
        })
    }

    /// Iterates `(multi-index, value)` over nonzero entries in ascending
    /// lexicographic order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(flat, &v)| (self.multi_index(flat), v))
    }

    /// Representation digraph: arc `i → j` when some positive entry has
    /// first index `i` and `j` among the remaining indices.
    fn representation_digraph(&self) -> Vec<Vec<usize>> {
        let n = self.dim;
        let mut arcs = vec![vec![false; n]; n];
        for (idx, _) in self.nonzeros() {
            for &j in &idx[1..] {
                arcs[idx[0]][j] = true;
            }
        }
        arcs.into_iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &a)| a)
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect()
    }
}

impl TensorOperator for DenseTensor {
    fn order(&self) -> usize {
        self.order
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>, TensorError> {
        if self.order < 2 {
            return Err(TensorError::OrderTooSmall {
                needed: 2,
                got: self.order,
            });
        }
        if x.len() != self.dim {
            return Err(TensorError::DimensionMismatch(format!(
                "vector of length {} for a dimension-{} tensor",
                x.len(),
                self.dim
            )));
        }
        // Contract the last index against x until one index remains.
        let mut cur: Vec<f64> = self
            .data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect();
        while cur.len() > self.dim {
            cur = cur
                .chunks_exact(self.dim)
                .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
                .collect();
        }
        Ok(cur)
    }

    fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= 0.0)
    }

    fn is_weakly_irreducible(&self) -> Result<bool, TensorError> {
        weakly_irreducible(self)
    }
}

/// Whether a nonnegative tensor of order ≥ 2 is weakly irreducible.
///
/// ```
/// use hyperspec::tensor::{weakly_irreducible, DenseTensor};
///
/// let diag = DenseTensor::unit(3, 2).unwrap();
/// assert!(!weakly_irreducible(&diag).unwrap());
/// ```
pub fn weakly_irreducible(t: &DenseTensor) -> Result<bool, TensorError> {
    if t.order < 2 {
        return Err(TensorError::OrderTooSmall {
            needed: 2,
            got: t.order,
        });
    }
    if !t.is_nonnegative() {
        return Err(TensorError::NegativeEntry);
    }
    Ok(strongly_connected(&t.representation_digraph()))
}

pub(crate) fn strongly_connected(out: &[Vec<usize>]) -> bool {
    let n = out.len();
    if n <= 1 {
        return true;
    }
    let mut rev = vec![Vec::new(); n];
    for (i, js) in out.iter().enumerate() {
        for &j in js {
            rev[j].push(i);
        }
    }
    let reaches_all = |adj: &[Vec<usize>]| {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    };
    reaches_all(out) && reaches_all(&rev)
}

/// Component-wise power `x^[r]`.
///
/// Integer exponents accept any sign; fractional exponents need `x ≥ 0`.
pub fn hadamard_power(x: &[f64], r: f64) -> Result<Vec<f64>, TensorError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(TensorError::InvalidExponent(r));
    }
    if r.fract() == 0.0 && r <= i32::MAX as f64 {
        let e = r as i32;
        return Ok(x.iter().map(|v| v.powi(e)).collect());
    }
    x.iter()
        .enumerate()
        .map(|(index, &base)| {
            if base < 0.0 {
                Err(TensorError::NegativeBase {
                    index,
                    base,
                    exponent: r,
                })
            } else {
                Ok(base.powf(r))
            }
        })
        .collect()
}

/// Advances a row-major multi-index in place.
pub(crate) fn increment(idx: &mut [usize], dim: usize) {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < dim {
            return;
        }
        *slot = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_indexing() {
        let t = DenseTensor::from_fn(3, 2, |i| (i[0] * 4 + i[1] * 2 + i[2]) as f64).unwrap();
        assert_eq!(t.len(), 8);
        assert_eq!(t.data(), &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
        assert_eq!(t.get(&[1, 0, 1]), 5.0);
        assert_eq!(t.multi_index(6), vec![1, 1, 0]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            DenseTensor::from_vec(2, 2, vec![0.0; 3]),
            Err(TensorError::WrongLength {
                expected: 4,
                got: 3
            })
        );
        assert_eq!(
            DenseTensor::from_vec(1, 2, vec![0.0, f64::NAN]),
            Err(TensorError::NonFinite(1))
        );
        let small = TensorLimits { max_entries: 10 };
        assert!(matches!(
            DenseTensor::zeros_limited(2, 4, &small),
            Err(TensorError::TooLarge { .. })
        ));
        assert!(matches!(
            DenseTensor::zeros(64, 10),
            Err(TensorError::TooLarge { .. })
        ));
    }

    #[test]
    fn unit_tensor_applies_as_power() {
        let i = DenseTensor::unit(4, 3).unwrap();
        let x = [2.0, -1.0, 0.5];
        assert_eq!(i.apply(&x).unwrap(), hadamard_power(&x, 3.0).unwrap());
    }

    #[test]
    fn diagonal_apply() {
        let d = DenseTensor::diagonal(3, &[2.0, 3.0]).unwrap();
        assert_eq!(d.apply(&[2.0, -1.0]).unwrap(), vec![8.0, 3.0]);
    }

    #[test]
    fn apply_matches_matrix_vector() {
        let a = DenseTensor::matrix(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(a.apply(&[1.0, -1.0]).unwrap(), vec![-1.0, -1.0]);
        assert!(matches!(
            a.apply(&[1.0]),
            Err(TensorError::DimensionMismatch(_))
        ));
        let v = DenseTensor::vector(&[1.0, 2.0]).unwrap();
        assert!(matches!(
            v.apply(&[1.0, 1.0]),
            Err(TensorError::OrderTooSmall { .. })
        ));
    }

    #[test]
    fn hadamard_power_examples() {
        assert_eq!(hadamard_power(&[2.0, 3.0], 2.0).unwrap(), vec![4.0, 9.0]);
        assert_eq!(hadamard_power(&[2.5, -3.0], 1.0).unwrap(), vec![2.5, -3.0]);
        assert_eq!(hadamard_power(&[-1.0, 1.0], 3.0).unwrap(), vec![-1.0, 1.0]);
        assert_eq!(hadamard_power(&[4.0, 9.0], 0.5).unwrap(), vec![2.0, 3.0]);
        assert!(matches!(
            hadamard_power(&[-4.0], 0.5),
            Err(TensorError::NegativeBase { index: 0, .. })
        ));
        assert!(matches!(
            hadamard_power(&[1.0], 0.0),
            Err(TensorError::InvalidExponent(_))
        ));
        assert!(matches!(
            hadamard_power(&[1.0], -2.0),
            Err(TensorError::InvalidExponent(_))
        ));
    }

    #[test]
    fn weak_irreducibility() {
        assert!(!weakly_irreducible(&DenseTensor::unit(3, 2).unwrap()).unwrap());
        assert!(weakly_irreducible(&DenseTensor::unit(3, 1).unwrap()).unwrap());
        // A directed 3-cycle is strongly connected.
        let mut t = DenseTensor::zeros(2, 3).unwrap();
        t.set(&[0, 1], 1.0);
        t.set(&[1, 2], 1.0);
        t.set(&[2, 0], 1.0);
        assert!(weakly_irreducible(&t).unwrap());
        t.set(&[2, 0], 0.0);
        assert!(!weakly_irreducible(&t).unwrap());
        t.set(&[2, 0], -1.0);
        assert_eq!(weakly_irreducible(&t), Err(TensorError::NegativeEntry));
    }

    #[test]
    fn permutation_and_symmetry() {
        let t = DenseTensor::from_fn(3, 2, |i| (i[0] * 4 + i[1] * 2 + i[2]) as f64).unwrap();
        let p = t.permute_indices(&[2, 0, 1]).unwrap();
        assert_eq!(p.get(&[1, 0, 0]), t.get(&[0, 0, 1]));
        assert!(!t.is_symmetric(0.0));
        assert!(DenseTensor::unit(3, 3).unwrap().is_symmetric(0.0));
        assert!(t.permute_indices(&[0, 0, 1]).is_err());
    }
}
