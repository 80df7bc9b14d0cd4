//! Quasiperiodic packings of G-clusters.
//!
//! A G-cluster `C = {±v_1, ..., ±v_k}` in physical dimension `d` (2 or 3) is a
//! symmetric union of orbits of a finite rotation group. Writing the cluster
//! coordinates row-wise gives `d` orthogonal vectors `w_a ∈ R^k` of equal norm
//! `κ`, which span the physical subspace `E` of the superspace `R^k`. Lattice
//! points of `Z^k` that fall into the strip `E + [-1/2, 1/2]^k + t` project to
//! a quasiperiodic packing of partially occupied copies of the cluster.
//!
//! The crate is organised as a pipeline:
//!
//! - [`cluster`]: cyclic `C_n` and icosahedral `Y` orbits, cluster assembly
//! - [`embed`]: the `w`-vector embedding and the two projectors
//! - [`strip`]: determinant constraints for strip membership, plus an
//!   independent slice-feasibility oracle
//! - [`generate`]: breadth-first lattice enumeration and the standard pattern
//! - [`modified`]: occupation-ordered projection with cluster completion
//! - [`diffract`]: direct Fourier intensity maps and peak extraction
//! - [`cli`]: JSON run configuration, exports and the `qpack` commands
//!
//! ```
//! use qpack::cluster::{build_cluster, GroupSpec, OrbitSeed};
//! use qpack::embed::embed;
//! use qpack::strip::StripSpec;
//! use qpack::generate::generate_standard;
//!
//! let cluster = build_cluster(GroupSpec::Cyclic(12), &[OrbitSeed::new(vec![1.0, 0.0])]).unwrap();
//! let emb = embed(&cluster).unwrap();
//! let spec = StripSpec::new(emb, vec![0.1; 6], 4.0, Some(500)).unwrap();
//! let pattern = generate_standard(&spec);
//! assert!(!pattern.points.is_empty());
//! ```

pub mod cli;
pub mod cluster;
pub mod diffract;
pub mod embed;
mod error;
pub mod generate;
pub mod modified;
mod spatial;
pub mod strip;

pub use error::{Error, Result};
