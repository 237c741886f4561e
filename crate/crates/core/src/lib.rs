//! Inversion numbers of oriented graphs and tournaments.
//!
//! Inverting a vertex set `X` of a digraph reverses every edge with both ends
//! in `X`. The inversion number `inv(D)` is the least number of inversions
//! that make `D` acyclic. This crate provides:
//!
//! * [`digraph`] and [`f2`]: bitset digraphs, inversion families, and linear
//!   algebra over F_2;
//! * [`exact`]: backtracking solvers for `inv(D) ≤ k`, inversion distance and
//!   cycle transversal numbers;
//! * [`fpt`]: iterative compression deciding `inv(T) ≤ k` for tournaments in
//!   quadratic time for fixed `k`;
//! * [`constructions`]: named digraph families and seeded generators;
//! * [`bounds`]: bounds on the maximum inversion number, rank certificates and
//!   experiments;
//! * [`cli`]: the `inversion` command line.
//!
//! ```
//! use inversion::{constructions, exact};
//!
//! let r = exact::inversion_number(&constructions::v5(), 3, Default::default()).unwrap();
//! assert_eq!(r.value(), Some(2));
//! ```

pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod digraph;
pub mod error;
pub mod exact;
pub mod f2;
pub mod fpt;
mod text;

pub use digraph::{atoms, charvec, invert_family, is_acyclic, is_decycling, Digraph, InversionFamily, TotalOrder, VertexSet};
pub use error::{Error, Result};
pub use exact::{decide_inv_le, inversion_distance, inversion_number, Bounded, Limits, SearchOptions};
pub use f2::{BitMatrix, BitVec, SymMatrixF2};
pub use fpt::fpt_inversion;
