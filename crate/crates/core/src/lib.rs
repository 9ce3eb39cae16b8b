//! Textile systems built from two commuting nonnegative integer matrices.
//!
//! Given `A`, `B` with `AB = BA` and a specification `κ` gluing two-step
//! paths, this crate builds the Wang tile set `E_κ`, the pair set `Ω_κ` and
//! the 0/1 matrices `A_κ`, `B_κ`, `H_κ`. It then decides transitivity of
//! the tiling space and computes the K-groups of the Cuntz-Krieger algebra
//! `O_{H_κ}` in exact arithmetic:
//!
//! * [`graph`]: multigraphs, essentiality, irreducibility, condition (I)
//! * [`textile`]: specifications, tiles and the matrices `A_κ`, `B_κ`, `H_κ`
//! * [`tiling`]: finite patches, the diagonal property, staircase witnesses
//! * [`ktheory`]: Smith normal form, abelian groups, `K_0` and `K_1`
//! * [`closedform`]: the exchange systems on `[N]`, `[M]` and their
//!   closed-form K-groups through the Euclidean algorithm
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
extern crate alloc;

pub mod closedform;
pub mod corpus;
pub mod graph;
pub mod ktheory;
pub mod matrix;
pub mod textile;
pub mod tiling;

pub use graph::{DirectedMultigraph, EdgeId, GraphTag};
pub use ktheory::{AbelianGroup, KGroups};
pub use matrix::{IntMatrix, NonnegMatrix};
pub use textile::{Specification, TextileSystem, Tile};
