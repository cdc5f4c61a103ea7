//! Spectral theory of k-uniform hypergraphs.
//!
//! * [`hypergraph`]: the combinatorial layer. Parsing, connectivity,
//!   odd-bipartition certificates over GF(2), Cartesian products and seeded
//!   generators.
//! * [`tensor`]: dense order-`m` tensors, the general and direct products,
//!   diagonal similarity, and the adjacency / degree / Laplacian / signless
//!   Laplacian tensors of a hypergraph.
//! * [`spectral`]: H-eigenpairs, a certified Perron-Frobenius power
//!   iteration, and explicit eigenvector constructions.
//! * [`verify`]: executable checks of the spectral characterizations of
//!   odd-bipartite hypergraphs, aggregated into reproducible reports.
//!
//! ```
//! use hyperspec::hypergraph::{odd_bipartition, parse_hypergraph};
//! use hyperspec::spectral::{laplacian_rho_eigenpair, PowerIterationConfig};
//!
//! let g = parse_hypergraph("p hg 4 4\ne 1 2 3 4").unwrap();
//! let cert = odd_bipartition(&g);
//! let l = laplacian_rho_eigenpair(&g, &cert, &PowerIterationConfig::default()).unwrap();
//! assert!((l.pair.lambda - 2.0).abs() < 1e-9);
//! ```
//!
//! The guide under `book/` walks through the concepts; its code blocks are
//! compiled and run as doctests of this crate.

pub mod hypergraph;
pub mod spectral;
pub mod tensor;
pub mod verify;

pub use hypergraph::{Bipartition, Hypergraph};
pub use spectral::{EigenPair, PowerIterationConfig};
pub use tensor::{DenseTensor, TensorKind, TensorOperator};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/hypergraphs.md")]
    mod hypergraphs {}
    #[doc = include_str!("../../../book/src/tensors.md")]
    mod tensors {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/products.md")]
    mod products {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
