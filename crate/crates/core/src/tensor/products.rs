use super::{increment, DenseTensor, TensorError, TensorLimits};

/// Replaces one index of `cur` by the trailing `k − 1` indices of `b`:
///
/// `out[o, α, r] = Σ_t cur[o, t, r] · b[t, α]`
///
/// where `o` ranges over `outer` leading positions, `r` over `inner` trailing
/// positions, and `α` over `bcols = n^{k−1}` columns of `b`. Sums run over
/// `t` in ascending order.
fn contract_index(
    cur: &[f64],
    n: usize,
    outer: usize,
    inner: usize,
    b: &[f64],
    bcols: usize,
) -> Vec<f64> {
    let mut out = vec![0.0; outer * bcols * inner];
    for o in 0..outer {
        for t in 0..n {
            let src = &cur[(o * n + t) * inner..(o * n + t + 1) * inner];
            if src.iter().all(|&v| v == 0.0) {
                continue;
            }
            let brow = &b[t * bcols..(t + 1) * bcols];
            for (a, &bv) in brow.iter().enumerate() {
                if bv == 0.0 {
                    continue;
                }
                let dst = &mut out[(o * bcols + a) * inner..(o * bcols + a + 1) * inner];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d += s * bv;
                }
            }
        }
    }
    out
}

fn pow(n: usize, e: usize) -> usize {
    n.pow(e as u32)
}

/// General product `A·B` of an order-`m` tensor with an order-`k` tensor of
/// the same dimension, giving order `(m−1)(k−1)+1`:
///
/// `c_{i α₁…α_{m−1}} = Σ a_{i i₂…i_m} b_{i₂ α₁} ⋯ b_{i_m α_{m−1}}`
///
/// With `B` a vector this is [`TensorOperator::apply`](super::TensorOperator::apply);
/// with `B` a matrix the order is preserved.
pub fn general_product(a: &DenseTensor, b: &DenseTensor) -> Result<DenseTensor, TensorError> {
    general_product_limited(a, b, &TensorLimits::default())
}

pub fn general_product_limited(
    a: &DenseTensor,
    b: &DenseTensor,
    limits: &TensorLimits,
) -> Result<DenseTensor, TensorError> {
    let (m, k, n) = (a.order(), b.order(), a.dim());
    if m < 2 {
        return Err(TensorError::OrderTooSmall { needed: 2, got: m });
    }
    if k < 1 {
        return Err(TensorError::OrderTooSmall { needed: 1, got: k });
    }
    if b.dim() != n {
        return Err(TensorError::DimensionMismatch(format!(
            "general product of dimension {n} and {}",
            b.dim()
        )));
    }
    let out_order = (m - 1) * (k - 1) + 1;
    limits.check(out_order, n)?;
    let bcols = pow(n, k - 1);
    let mut cur = a.data().to_vec();
    let mut order = m;
    for p in 0..m - 1 {
        let q = 1 + p * (k - 1);
        let outer = pow(n, q);
        let inner = pow(n, order - q - 1);
        order = order - 1 + (k - 1);
        limits.check(order, n)?;
        cur = contract_index(&cur, n, outer, inner, b.data(), bcols);
    }
    debug_assert_eq!(order, out_order);
    DenseTensor::from_vec(out_order, n, cur)
}

fn transpose(p: &DenseTensor) -> Vec<f64> {
    let n = p.dim();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = p.data()[i * n + j];
        }
    }
    out
}

/// `P A Q` for matrices `P`, `Q`:
///
/// `b_{i₁…i_m} = Σ a_{j₁…j_m} p_{i₁j₁} q_{j₂i₂} ⋯ q_{j_m i_m}`
pub fn matrix_sandwich(
    p: &DenseTensor,
    a: &DenseTensor,
    q: &DenseTensor,
) -> Result<DenseTensor, TensorError> {
    for (name, mat) in [("P", p), ("Q", q)] {
        if mat.order() != 2 {
            return Err(TensorError::OrderMismatch(format!(
                "{name} must be a matrix, got order {}",
                mat.order()
            )));
        }
        if mat.dim() != a.dim() {
            return Err(TensorError::DimensionMismatch(format!(
                "{name} has dimension {}, tensor has {}",
                mat.dim(),
                a.dim()
            )));
        }
    }
    let (m, n) = (a.order(), a.dim());
    if m < 1 {
        return Err(TensorError::OrderTooSmall { needed: 1, got: m });
    }
    // Mode 0 multiplies by P from the left, i.e. contracts against Pᵀ.
    let mut cur = contract_index(a.data(), n, 1, pow(n, m - 1), &transpose(p), n);
    for mode in 1..m {
        cur = contract_index(&cur, n, pow(n, mode), pow(n, m - mode - 1), q.data(), n);
    }
    DenseTensor::from_vec(m, n, cur)
}

/// Diagonal similarity `D^{−(m−1)} A D` for the diagonal matrix `D = diag(d)`:
///
/// `b_{i₁…i_m} = d_{i₁}^{−(m−1)} a_{i₁…i_m} d_{i₂} ⋯ d_{i_m}`
///
/// For a ±1 sign diagonal every factor is ±1 and the result is exact.
pub fn diag_similarity(a: &DenseTensor, d: &[f64]) -> Result<DenseTensor, TensorError> {
    if d.len() != a.dim() {
        return Err(TensorError::DimensionMismatch(format!(
            "diagonal of length {} for a dimension-{} tensor",
            d.len(),
            a.dim()
        )));
    }
    if let Some(i) = d.iter().position(|&v| v == 0.0) {
        return Err(TensorError::ZeroDiagonal(i));
    }
    let m = a.order();
    let lead: Vec<f64> = d.iter().map(|v| v.powi(-(m as i32 - 1))).collect();
    let mut idx = vec![0; m];
    let mut out = Vec::with_capacity(a.len());
    for &v in a.data() {
        let scaled = if v == 0.0 || m == 0 {
            v
        } else {
            idx[1..].iter().fold(lead[idx[0]] * v, |acc, &j| acc * d[j])
        };
        out.push(scaled);
        increment(&mut idx, a.dim());
    }
    DenseTensor::from_vec(m, a.dim(), out)
}

/// Direct product `A ⊗ B` of two order-`k` tensors with dimensions `n` and
/// `m`. Pair indices `(i, j)` flatten to `i·m + j`.
pub fn direct_product(a: &DenseTensor, b: &DenseTensor) -> Result<DenseTensor, TensorError> {
    direct_product_limited(a, b, &TensorLimits::default())
}

pub fn direct_product_limited(
    a: &DenseTensor,
    b: &DenseTensor,
    limits: &TensorLimits,
) -> Result<DenseTensor, TensorError> {
    if a.order() != b.order() {
        return Err(TensorError::OrderMismatch(format!(
            "direct product of orders {} and {}",
            a.order(),
            b.order()
        )));
    }
    let (k, n, m) = (a.order(), a.dim(), b.dim());
    let nm = n.checked_mul(m).ok_or_else(|| TensorError::TooLarge {
        order: k,
        dim: usize::MAX,
        entries: "overflow".into(),
        cap: limits.max_entries,
    })?;
    let mut out = DenseTensor::zeros_limited(k, nm, limits)?;
    let b_nonzeros: Vec<(Vec<usize>, f64)> = b.nonzeros().collect();
    let mut pair = vec![0; k];
    for (ia, va) in a.nonzeros() {
        for (jb, vb) in &b_nonzeros {
            for p in 0..k {
                pair[p] = ia[p] * m + jb[p];
            }
            out.set(&pair, va * vb);
        }
    }
    Ok(out)
}

/// Kronecker sum `A ⊗ 𝕀_m + 𝕀_n ⊗ B` of two order-`k` tensors.
pub fn kronecker_sum(
    a: &DenseTensor,
    b: &DenseTensor,
    limits: &TensorLimits,
) -> Result<DenseTensor, TensorError> {
    let left = direct_product_limited(a, &DenseTensor::unit(b.order(), b.dim())?, limits)?;
    let right = direct_product_limited(&DenseTensor::unit(a.order(), a.dim())?, b, limits)?;
    left.add(&right)
}

#[cfg(test)]
mod tests {
    use super::super::TensorOperator;
    use super::*;
    use crate::hypergraph::SplitMix64;

    fn random(order: usize, dim: usize, rng: &mut SplitMix64) -> DenseTensor {
        DenseTensor::from_fn(order, dim, |_| rng.next_f64() * 2.0 - 1.0).unwrap()
    }

    #[test]
    fn identity_is_right_unit() {
        let mut rng = SplitMix64::new(5);
        let a = random(3, 3, &mut rng);
        let i = DenseTensor::unit(2, 3).unwrap();
        assert_eq!(general_product(&a, &i).unwrap(), a);
    }

    #[test]
    fn vector_product_is_apply() {
        let mut rng = SplitMix64::new(6);
        let a = random(4, 3, &mut rng);
        let x = [0.3, -1.2, 2.0];
        let c = general_product(&a, &DenseTensor::vector(&x).unwrap()).unwrap();
        assert_eq!(c.order(), 1);
        let ax = a.apply(&x).unwrap();
        for (u, v) in c.data().iter().zip(&ax) {
            assert!((u - v).abs() <= 1e-12 * v.abs().max(1.0));
        }
    }

    #[test]
    fn product_order() {
        let a = DenseTensor::zeros(3, 2).unwrap();
        let b = DenseTensor::zeros(3, 2).unwrap();
        assert_eq!(general_product(&a, &b).unwrap().order(), 5);
        let c = DenseTensor::zeros(3, 3).unwrap();
        assert!(matches!(
            general_product(&a, &c),
            Err(TensorError::DimensionMismatch(_))
        ));
        let tiny = TensorLimits { max_entries: 16 };
        assert!(matches!(
            general_product_limited(&a, &b, &tiny),
            Err(TensorError::TooLarge { .. })
        ));
    }

    #[test]
    fn associativity_on_matrices() {
        let mut rng = SplitMix64::new(8);
        for _ in 0..20 {
            let (a, b, c) = (
                random(2, 4, &mut rng),
                random(2, 4, &mut rng),
                random(2, 4, &mut rng),
            );
            let left = general_product(&general_product(&a, &b).unwrap(), &c).unwrap();
            let right = general_product(&a, &general_product(&b, &c).unwrap()).unwrap();
            assert!(left.max_abs_diff(&right).unwrap() <= 1e-12);
        }
    }

    /// Naive triple-loop matrix product.
    fn matmul(a: &DenseTensor, b: &DenseTensor) -> DenseTensor {
        let n = a.dim();
        DenseTensor::from_fn(2, n, |ij| {
            (0..n)
                .map(|t| a.get(&[ij[0], t]) * b.get(&[t, ij[1]]))
                .sum()
        })
        .unwrap()
    }

    #[test]
    fn sandwich_of_matrices_is_pa_q() {
        let mut rng = SplitMix64::new(9);
        let (p, a, q) = (
            random(2, 4, &mut rng),
            random(2, 4, &mut rng),
            random(2, 4, &mut rng),
        );
        let got = matrix_sandwich(&p, &a, &q).unwrap();
        let want = matmul(&matmul(&p, &a), &q);
        assert!(got.max_abs_diff(&want).unwrap() <= 1e-12);
    }

    #[test]
    fn sandwich_with_identity_and_diagonals() {
        let mut rng = SplitMix64::new(10);
        let a = random(3, 3, &mut rng);
        let i = DenseTensor::unit(2, 3).unwrap();
        assert_eq!(matrix_sandwich(&i, &a, &i).unwrap(), a);

        let (pd, qd) = ([2.0, -1.0, 0.5], [1.5, 3.0, -2.0]);
        let p = DenseTensor::diagonal(2, &pd).unwrap();
        let q = DenseTensor::diagonal(2, &qd).unwrap();
        let b = matrix_sandwich(&p, &a, &q).unwrap();
        let want =
            DenseTensor::from_fn(3, 3, |ix| pd[ix[0]] * qd[ix[1]] * qd[ix[2]] * a.get(ix)).unwrap();
        assert!(b.max_abs_diff(&want).unwrap() <= 1e-14);
    }

    #[test]
    fn sandwich_matches_general_product_composition() {
        let mut rng = SplitMix64::new(11);
        for order in 2..=4 {
            let a = random(order, 3, &mut rng);
            let (p, q) = (random(2, 3, &mut rng), random(2, 3, &mut rng));
            let composed = general_product(&p, &general_product(&a, &q).unwrap()).unwrap();
            let direct = matrix_sandwich(&p, &a, &q).unwrap();
            assert!(direct.max_abs_diff(&composed).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn diag_similarity_cases() {
        let mut rng = SplitMix64::new(12);
        let a = random(3, 3, &mut rng);
        assert_eq!(diag_similarity(&a, &[1.0; 3]).unwrap(), a);
        assert_eq!(
            diag_similarity(&a, &[1.0, 0.0, 1.0]),
            Err(TensorError::ZeroDiagonal(1))
        );

        let d = DenseTensor::diagonal(4, &[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(diag_similarity(&d, &[-1.0, 1.0, -1.0]).unwrap(), d);

        // Agrees with the sandwich D^{-(m-1)} · A · D.
        let dv = [2.0, -0.5, 1.5];
        let left = DenseTensor::diagonal(2, &dv.map(|v: f64| v.powi(-2))).unwrap();
        let right = DenseTensor::diagonal(2, &dv).unwrap();
        let want = matrix_sandwich(&left, &a, &right).unwrap();
        assert!(
            diag_similarity(&a, &dv)
                .unwrap()
                .max_abs_diff(&want)
                .unwrap()
                <= 1e-13
        );
    }

    #[test]
    fn direct_product_units_and_scalars() {
        let mut rng = SplitMix64::new(13);
        let a = random(3, 2, &mut rng);
        let one = DenseTensor::from_vec(3, 1, vec![1.0]).unwrap();
        assert_eq!(direct_product(&a, &one).unwrap(), a);
        assert_eq!(direct_product(&one, &a).unwrap(), a);
        let i = direct_product(
            &DenseTensor::unit(3, 2).unwrap(),
            &DenseTensor::unit(3, 3).unwrap(),
        )
        .unwrap();
        assert_eq!(i, DenseTensor::unit(3, 6).unwrap());
        assert!(matches!(
            direct_product(&a, &DenseTensor::unit(2, 2).unwrap()),
            Err(TensorError::OrderMismatch(_))
        ));
    }

    #[test]
    fn direct_product_entries() {
        let a = DenseTensor::matrix(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = DenseTensor::matrix(&[vec![0.0, 5.0], vec![6.0, 7.0]]).unwrap();
        let c = direct_product(&a, &b).unwrap();
        // Classical Kronecker product for matrices.
        assert_eq!(c.get(&[1, 2]), 2.0 * 6.0);
        assert_eq!(c.get(&[3, 0]), 3.0 * 6.0);
        assert_eq!(c.get(&[2, 3]), 4.0 * 5.0);
        assert_eq!(c.get(&[0, 0]), 0.0);
    }
}
