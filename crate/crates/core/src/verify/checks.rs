use std::collections::{BTreeMap, BTreeSet};

use super::{Check, CheckStatus, VerifyError};
use crate::hypergraph::{
    is_odd_transversal, odd_bipartition, product_odd_transversal, Bipartition, Hypergraph,
    SplitMix64,
};
use crate::spectral::{
    laplacian_rho_eigenpair, power_rho, product_eigenpair, symmetric_eigenvalues,
    zero_q_eigenvector, PowerIterationConfig, PowerResult,
};
use crate::tensor::{
    build_tensor, diag_similarity, direct_product_limited, general_product_limited, kronecker_sum,
    DenseTensor, EdgeListOperator, TensorError, TensorKind, TensorLimits,
};

/// Tolerance for identities whose arithmetic is sign flips and exact
/// rational constants. The observed deviation is recorded alongside.
pub const EXACT_TOLERANCE: f64 = 1e-13;

/// Tolerance for residuals of constructed eigenpairs and for comparisons
/// against the dense matrix eigensolver.
pub const PAIR_TOLERANCE: f64 = 1e-8;

const MIXED_PRODUCT_TOLERANCE: f64 = 1e-12;

fn require_nontrivial(g: &Hypergraph) -> Result<(), VerifyError> {
    if g.num_edges() == 0 {
        return Err(VerifyError::NoEdges);
    }
    if !g.is_connected() {
        return Err(VerifyError::NotConnected);
    }
    Ok(())
}

fn power_evidence(c: Check, prefix: &str, r: &PowerResult) -> Check {
    c.with(&format!("{prefix}rho"), r.pair.lambda)
        .with(&format!("{prefix}residual"), r.pair.residual)
        .with(&format!("{prefix}iterations"), r.iterations as f64)
        .flag(&format!("{prefix}converged"), r.converged)
}

/// Result of enumerating every ±1 sign diagonal `P ≠ −I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignSearch {
    pub searched: u64,
    /// Number of diagonals with `A = −P^{−(k−1)} A P`.
    pub valid: u64,
    /// Negative positions of the first valid diagonal found.
    pub first: Option<Vec<usize>>,
}

/// Searches all `2ⁿ − 1` sign diagonals `P ≠ −I` for `A = −P^{−(k−1)} A P`,
/// or returns `None` when `n > limit`.
///
/// The adjacency tensor is supported on edge permutations, where the
/// transformed entry at `(i, rest of e)` is `p_i^{−k} · Π_{j∈e} p_j` times the
/// original. The identity therefore holds iff that factor is `−1` for every
/// edge `e` and every `i ∈ e`.
pub fn exhaustive_sign_diagonals(g: &Hypergraph, limit: usize) -> Option<SignSearch> {
    let n = g.n();
    if n > limit || n >= 64 {
        return None;
    }
    let k_odd = g.k() % 2 == 1;
    let edge_masks: Vec<u64> = g
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u64, |acc, &v| acc | 1 << v))
        .collect();
    let full = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    let mut out = SignSearch {
        searched: 0,
        valid: 0,
        first: None,
    };
    for mask in 0..=full {
        if mask == full {
            continue;
        }
        out.searched += 1;
        let ok = g.edges().iter().zip(&edge_masks).all(|(e, &em)| {
            let product_negative = (mask & em).count_ones() % 2 == 1;
            e.iter().all(|&i| {
                let lead_negative = k_odd && mask >> i & 1 == 1;
                product_negative != lead_negative
            })
        });
        if ok {
            out.valid += 1;
            if out.first.is_none() {
                out.first = Some((0..n).filter(|&i| mask >> i & 1 == 1).collect());
            }
        }
    }
    Some(out)
}

/// Sign-similarity characterization on a connected hypergraph: with an odd
/// bipartition, `L = P^{−(k−1)} Q P` and `A = −P^{−(k−1)} A P` hold for its
/// sign diagonal and `k` is even; without one, no sign diagonal works.
pub fn check_sign_similarity(
    g: &Hypergraph,
    label: &str,
    limits: &TensorLimits,
    exhaustive_limit: usize,
) -> Result<Vec<Check>, VerifyError> {
    require_nontrivial(g)?;
    let cert = odd_bipartition(g);
    let at = [label];
    let mut out = vec![Check::new(
        "sign_similarity.bipartition_evidence",
        "the odd bipartition or infeasibility witness verifies independently of the solver",
        &at,
        0.0,
    )
    .flag("certificate", cert.is_certificate())
    .verdict(cert.verify(g))];

    if let Some(signs) = cert.signs(g.n()) {
        let a = build_tensor(g, TensorKind::Adjacency, limits)?;
        let l = build_tensor(g, TensorKind::Laplacian, limits)?;
        let q = build_tensor(g, TensorKind::SignlessLaplacian, limits)?;
        let dev = l.max_abs_diff(&diag_similarity(&q, &signs)?)?;
        out.push(
            Check::new(
                "sign_similarity.laplacian",
                "L = P^-(k-1) Q P for the sign diagonal P of the odd bipartition",
                &at,
                EXACT_TOLERANCE,
            )
            .with("max_deviation", dev)
            .flag("exact", dev == 0.0)
            .verdict(dev <= EXACT_TOLERANCE),
        );
        let dev = a.max_abs_diff(&diag_similarity(&a, &signs)?.scale(-1.0))?;
        out.push(
            Check::new(
                "sign_similarity.adjacency",
                "A = -P^-(k-1) A P for the sign diagonal P of the odd bipartition",
                &at,
                EXACT_TOLERANCE,
            )
            .with("max_deviation", dev)
            .flag("exact", dev == 0.0)
            .verdict(dev <= EXACT_TOLERANCE),
        );
        out.push(
            Check::new(
                "sign_similarity.even_uniformity",
                "a hypergraph with an odd bipartition has even uniformity",
                &at,
                0.0,
            )
            .with("k", g.k() as f64)
            .verdict(g.k().is_multiple_of(2)),
        );
    }

    let statement = "a sign diagonal P != -I with A = -P^-(k-1) A P exists exactly when an odd bipartition exists";
    let check = Check::new("sign_similarity.exhaustive", statement, &at, 0.0)
        .with("n", g.n() as f64)
        .flag("certificate", cert.is_certificate());
    out.push(match exhaustive_sign_diagonals(g, exhaustive_limit) {
        None => check.skipped(
            CheckStatus::Bounded,
            &format!("exhaustive search limited to n <= {exhaustive_limit}"),
        ),
        Some(search) => {
            let found = search.valid > 0;
            let negatives_are_transversal = search
                .first
                .as_ref()
                .is_none_or(|neg| g.k().is_multiple_of(2) && is_odd_transversal(g, neg));
            check
                .with("diagonals_searched", search.searched as f64)
                .with("valid_diagonals", search.valid as f64)
                .verdict(found == cert.is_certificate() && negatives_are_transversal)
        }
    });
    Ok(out)
}

/// Consequences of the equality of the Laplacian and signless Laplacian
/// spectra for odd-bipartite hypergraphs.
///
/// With an odd bipartition, the Perron vector of `Q` flipped on V₁ must be
/// an eigenvector of `L` for `ρ(Q)`. For graphs (`k = 2`) the full matrix
/// spectra are also compared: they coincide iff the graph is bipartite.
pub fn check_spectrum_transfer(
    g: &Hypergraph,
    label: &str,
    cfg: &PowerIterationConfig,
    limits: &TensorLimits,
) -> Result<Vec<Check>, VerifyError> {
    require_nontrivial(g)?;
    let cert = odd_bipartition(g);
    let at = [label];
    let mut out = Vec::new();
    let transfer = Check::new(
        "spectrum_transfer.laplacian_rho",
        "flipping the Perron vector of Q on V1 gives an eigenvector of L for rho(Q)",
        &at,
        PAIR_TOLERANCE,
    )
    .consequence();
    if cert.is_certificate() {
        let r = laplacian_rho_eigenpair(g, &cert, cfg)?;
        let pass = r.converged && r.pair.residual <= PAIR_TOLERANCE;
        out.push(
            power_evidence(transfer, "", &r)
                .with("bracket_lo", r.bracket[0])
                .with("bracket_hi", r.bracket[1])
                .verdict(pass),
        );
    } else {
        out.push(transfer.skipped(CheckStatus::NotChecked, "no odd bipartition"));
    }

    if g.k() == 2 {
        let l = build_tensor(g, TensorKind::Laplacian, limits)?;
        let q = build_tensor(g, TensorKind::SignlessLaplacian, limits)?;
        let el = symmetric_eigenvalues(&l)?;
        let eq = symmetric_eigenvalues(&q)?;
        let gap = el
            .iter()
            .zip(&eq)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let equal = gap <= PAIR_TOLERANCE;
        let rho_q = *eq.last().expect("nonempty graph");
        out.push(
            Check::new(
                "spectrum_transfer.matrix_spectra",
                "the Laplacian and signless Laplacian matrix spectra coincide exactly when the graph is bipartite",
                &at,
                PAIR_TOLERANCE,
            )
            .consequence()
            .with("max_spectrum_gap", gap)
            .with("rho_l", *el.last().expect("nonempty graph"))
            .with("rho_q", rho_q)
            .flag("bipartite", cert.is_certificate())
            .verdict(equal == cert.is_certificate()),
        );
        let r = power_rho(
            &EdgeListOperator::new(g, TensorKind::SignlessLaplacian),
            cfg,
        )?;
        let diff = (r.pair.lambda - rho_q).abs();
        out.push(
            power_evidence(
                Check::new(
                    "spectrum_transfer.matrix_rho",
                    "the power iteration value of rho(Q) matches the largest matrix eigenvalue",
                    &at,
                    PAIR_TOLERANCE,
                ),
                "power_",
                &r,
            )
            .with("matrix_rho", rho_q)
            .with("difference", diff)
            .verdict(r.converged && diff <= PAIR_TOLERANCE),
        );
    }
    Ok(out)
}

/// Zero as an eigenvalue of the signless Laplacian.
///
/// With an odd bipartition the ±1 sign vector is checked as a zero
/// eigenvector together with the per-edge identity behind it. Without one,
/// graphs (`k = 2`) are checked to have a positive definite `Q`; for larger
/// `k` there is no finite procedure and the check is recorded as not run.
pub fn check_zero_eigenvalue(
    g: &Hypergraph,
    label: &str,
    limits: &TensorLimits,
) -> Result<Vec<Check>, VerifyError> {
    require_nontrivial(g)?;
    let cert = odd_bipartition(g);
    let at = [label];
    if cert.is_certificate() {
        let z = zero_q_eigenvector(g, &cert)?;
        let worst_edge = z.edge_terms.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let residual = z.pair.residual;
        return Ok(vec![Check::new(
            "zero_signless_eigenvalue.certificate",
            "the +-1 sign vector of the odd bipartition is a zero eigenvector of Q, and each edge's term x_i1^k + ... + x_ik^k + k x_i1...x_ik vanishes",
            &at,
            EXACT_TOLERANCE,
        )
        .with("residual", residual)
        .with("max_edge_term", worst_edge)
        .flag("exact", residual == 0.0 && worst_edge == 0.0)
        .verdict(residual <= EXACT_TOLERANCE && worst_edge <= EXACT_TOLERANCE)]);
    }
    let reverse = Check::new(
        "zero_signless_eigenvalue.reverse",
        "without an odd bipartition, 0 is not an eigenvalue of Q",
        &at,
        PAIR_TOLERANCE,
    );
    if g.k() != 2 {
        return Ok(vec![reverse.skipped(
            CheckStatus::NotChecked,
            "no finite procedure excludes a zero eigenvalue for k > 2",
        )]);
    }
    let q = build_tensor(g, TensorKind::SignlessLaplacian, limits)?;
    let min = symmetric_eigenvalues(&q)?[0];
    Ok(vec![reverse
        .with("min_eigenvalue", min)
        .verdict(min > PAIR_TOLERANCE)])
}

/// `(A ⊗ B)(C ⊗ D) − (AC) ⊗ (BD)` in max norm, with the general product
/// and the direct product.
pub fn mixed_product_deviation(
    a: &DenseTensor,
    b: &DenseTensor,
    c: &DenseTensor,
    d: &DenseTensor,
    limits: &TensorLimits,
) -> Result<f64, TensorError> {
    let lhs = general_product_limited(
        &direct_product_limited(a, b, limits)?,
        &direct_product_limited(c, d, limits)?,
        limits,
    )?;
    let rhs = direct_product_limited(
        &general_product_limited(a, c, limits)?,
        &general_product_limited(b, d, limits)?,
        limits,
    )?;
    lhs.max_abs_diff(&rhs)
}

/// Mixed-product identity on `trials` random quadruples with dimensions and
/// orders at most 3, drawn from `seed`.
pub fn check_mixed_product(
    seed: u64,
    trials: usize,
    instances: &[&str],
    limits: &TensorLimits,
) -> Result<Check, VerifyError> {
    let mut rng = SplitMix64::new(seed);
    let random = |order: usize, dim: usize, rng: &mut SplitMix64| {
        DenseTensor::from_fn(order, dim, |_| 2.0 * rng.next_f64() - 1.0)
    };
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let n = 1 + rng.below(3) as usize;
        let m = 1 + rng.below(3) as usize;
        let outer = 2 + rng.below(2) as usize;
        let inner = 1 + rng.below(3) as usize;
        let a = random(outer, n, &mut rng)?;
        let b = random(outer, m, &mut rng)?;
        let c = random(inner, n, &mut rng)?;
        let d = random(inner, m, &mut rng)?;
        worst = worst.max(mixed_product_deviation(&a, &b, &c, &d, limits)?);
    }
    Ok(Check::new(
        "cartesian.mixed_product",
        "(A x B)(C x D) = (AC) x (BD) for the general product and the direct product",
        instances,
        MIXED_PRODUCT_TOLERANCE,
    )
    .with("trials", trials as f64)
    .with("max_deviation", worst)
    .verdict(worst <= MIXED_PRODUCT_TOLERANCE))
}

/// Tensor, certificate and spectral identities of the Cartesian product
/// `G □ H` of two hypergraphs with the same uniformity.
pub fn check_cartesian(
    g: &Hypergraph,
    g_label: &str,
    h: &Hypergraph,
    h_label: &str,
    cfg: &PowerIterationConfig,
    limits: &TensorLimits,
    seed: u64,
) -> Result<Vec<Check>, VerifyError> {
    let gh = g.cartesian_product(h)?;
    let at = [g_label, h_label];
    let mut out = Vec::new();
    let mut sums = BTreeMap::new();
    for kind in TensorKind::ALL {
        let product = build_tensor(&gh, kind, limits)?;
        let sum = kronecker_sum(
            &build_tensor(g, kind, limits)?,
            &build_tensor(h, kind, limits)?,
            limits,
        )?;
        let dev = product.max_abs_diff(&sum)?;
        out.push(
            Check::new(
                &format!("cartesian.identity.{}", kind.symbol()),
                &format!(
                    "{0}(G x H) = {0}(G) x I + I x {0}(H) for the Cartesian product",
                    kind.symbol()
                ),
                &at,
                EXACT_TOLERANCE,
            )
            .with("max_deviation", dev)
            .flag("exact", dev == 0.0)
            .verdict(dev <= EXACT_TOLERANCE),
        );
        sums.insert(kind.symbol(), sum);
    }
    out.push(check_mixed_product(seed, 4, &at, limits)?);

    let spectral_names = [
        "cartesian.rho_additivity.A",
        "cartesian.rho_additivity.Q",
        "cartesian.product_eigenpair.Q",
    ];
    let bip_names = [
        "cartesian.product_certificate",
        "cartesian.rho_additivity.L",
        "cartesian.product_eigenpair.L",
    ];
    let factors_ok = [g, h].iter().all(|f| f.num_edges() > 0 && f.is_connected());
    if !factors_ok {
        for name in spectral_names.iter().chain(&bip_names) {
            out.push(
                Check::new(
                    name,
                    "spectral identities of the Cartesian product",
                    &at,
                    0.0,
                )
                .skipped(
                    CheckStatus::NotChecked,
                    "factors must be connected with an edge",
                ),
            );
        }
        return Ok(out);
    }

    let additivity =
        |name: &str, what: &str, rg: &PowerResult, rh: &PowerResult, rgh: &PowerResult| {
            let gap = (rgh.pair.lambda - rg.pair.lambda - rh.pair.lambda).abs();
            let converged = rg.converged && rh.converged && rgh.converged;
            Check::new(
                name,
                &format!("rho({what}(G x H)) = rho({what}(G)) + rho({what}(H))"),
                &at,
                3.0 * cfg.tol,
            )
            .with("rho_g", rg.pair.lambda)
            .with("rho_h", rh.pair.lambda)
            .with("rho_product", rgh.pair.lambda)
            .with("gap", gap)
            .flag("converged", converged)
            .verdict(converged && gap <= 3.0 * cfg.tol)
        };
    let pair_check = |name: &str,
                      what: &str,
                      rg: &PowerResult,
                      rh: &PowerResult,
                      sum: &DenseTensor| {
        let pair = product_eigenpair(&rg.pair, &rh.pair, sum)?;
        let converged = rg.converged && rh.converged;
        Ok::<_, VerifyError>(
            Check::new(
                name,
                &format!(
                    "(lambda + mu, u x v) is an eigenpair of {what}(G) x I + I x {what}(H) for eigenpairs (lambda, u), (mu, v) of the factors"
                ),
                &at,
                PAIR_TOLERANCE,
            )
            .with("lambda", pair.lambda)
            .with("residual", pair.residual)
            .flag("inputs_converged", converged)
            .verdict(converged && pair.residual <= PAIR_TOLERANCE),
        )
    };

    let mut q_results = None;
    for kind in [TensorKind::Adjacency, TensorKind::SignlessLaplacian] {
        let rg = power_rho(&EdgeListOperator::new(g, kind), cfg)?;
        let rh = power_rho(&EdgeListOperator::new(h, kind), cfg)?;
        let rgh = power_rho(&EdgeListOperator::new(&gh, kind), cfg)?;
        let s = kind.symbol();
        out.push(additivity(
            &format!("cartesian.rho_additivity.{s}"),
            s,
            &rg,
            &rh,
            &rgh,
        ));
        if kind == TensorKind::SignlessLaplacian {
            q_results = Some((rg, rh));
        }
    }
    let (qg, qh) = q_results.expect("signless Laplacian processed");
    out.push(pair_check(
        "cartesian.product_eigenpair.Q",
        "Q",
        &qg,
        &qh,
        &sums["Q"],
    )?);

    let (cg, ch) = (odd_bipartition(g), odd_bipartition(h));
    let (Some(v1g), Some(v1h)) = (cg.v1(), ch.v1()) else {
        for name in bip_names {
            out.push(
                Check::new(
                    name,
                    "Laplacian identities of the Cartesian product",
                    &at,
                    0.0,
                )
                .skipped(
                    CheckStatus::NotChecked,
                    "both factors must be odd-bipartite",
                ),
            );
        }
        return Ok(out);
    };
    let v1 = product_odd_transversal(v1g, g.n(), v1h, h.n());
    let constructed = is_odd_transversal(&gh, &v1) && !v1.is_empty() && v1.len() < gh.n();
    let solver_agrees = odd_bipartition(&gh).is_certificate();
    out.push(
        Check::new(
            "cartesian.product_certificate",
            "(V1(G) x V1(H)) u (complement x complement) is an odd bipartition of G x H",
            &at,
            0.0,
        )
        .with("v1_size", v1.len() as f64)
        .flag("solver_agrees", solver_agrees)
        .verdict(constructed && solver_agrees),
    );
    let lg = laplacian_rho_eigenpair(g, &cg, cfg)?;
    let lh = laplacian_rho_eigenpair(h, &ch, cfg)?;
    let lgh = laplacian_rho_eigenpair(&gh, &Bipartition::Certificate { v1 }, cfg)?;
    out.push(additivity(
        "cartesian.rho_additivity.L",
        "L",
        &lg,
        &lh,
        &lgh,
    ));
    out.push(pair_check(
        "cartesian.product_eigenpair.L",
        "L",
        &lg,
        &lh,
        &sums["L"],
    )?);
    Ok(out)
}

/// Spectral radius of a nonnegative hypergraph tensor (`A` or `Q`) on a
/// possibly disconnected hypergraph, as the maximum over its components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentRho {
    pub rho: f64,
    pub converged: bool,
    pub components: usize,
}

pub fn rho_by_components(
    g: &Hypergraph,
    kind: TensorKind,
    cfg: &PowerIterationConfig,
) -> Result<ComponentRho, VerifyError> {
    let conn = g.connectivity();
    let mut members = vec![Vec::new(); conn.components];
    for (v, &c) in conn.component.iter().enumerate() {
        members[c].push(v);
    }
    let mut edges_of = vec![Vec::new(); conn.components];
    for e in g.edges() {
        edges_of[conn.component[e[0]]].push(e);
    }
    let mut out = ComponentRho {
        rho: 0.0,
        converged: true,
        components: conn.components,
    };
    for (verts, edges) in members.iter().zip(&edges_of) {
        if edges.is_empty() {
            continue;
        }
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        let sub = Hypergraph::new(
            verts.len(),
            g.k(),
            edges
                .iter()
                .map(|e| e.iter().map(|&v| local[v]).collect())
                .collect(),
        )?;
        let r = power_rho(&EdgeListOperator::new(&sub, kind), cfg)?;
        out.rho = out.rho.max(r.pair.lambda);
        out.converged &= r.converged;
    }
    Ok(out)
}

/// Deleting edges never increases `ρ(Q)`: `trials` random deletions drawn
/// from `seed`, each compared against the intact hypergraph within `2·tol`.
pub fn check_monotonicity(
    g: &Hypergraph,
    label: &str,
    cfg: &PowerIterationConfig,
    seed: u64,
    trials: usize,
) -> Result<Check, VerifyError> {
    require_nontrivial(g)?;
    let base = rho_by_components(g, TensorKind::SignlessLaplacian, cfg)?;
    let mut rng = SplitMix64::new(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut converged = base.converged;
    for _ in 0..trials {
        let m = g.num_edges();
        let count = 1 + rng.below(m as u64) as usize;
        let drop: BTreeSet<usize> = rng.subset(m, count).into_iter().collect();
        let r = rho_by_components(&g.without_edges(&drop), TensorKind::SignlessLaplacian, cfg)?;
        converged &= r.converged;
        worst = worst.max(r.rho - base.rho);
    }
    let tolerance = 2.0 * cfg.tol;
    Ok(Check::new(
        "monotonicity.edge_deletion",
        "deleting edges never increases rho(Q)",
        &[label],
        tolerance,
    )
    .with("rho", base.rho)
    .with("trials", trials as f64)
    .with("max_increase", if trials == 0 { 0.0 } else { worst })
    .flag("converged", converged)
    .verdict(converged && worst <= tolerance))
}
