//! Linked embeddings of compact sets in Euclidean space, the topological
//! degree of their Gauss maps, activation flows as group homotopies, and
//! the separation / approximation experiments for width-limited networks
//! that those invariants obstruct.
//!
//! Module map:
//! - [`geometry`]: point clouds, linked/unlinked pair generators,
//!   homeomorphisms of a checkable subclass, sphere meshes.
//! - [`degree`]: Gauss map, linking numbers of closed curves in R^3,
//!   sphere/point degrees via winding angles and simplicial solid angles,
//!   projection probes.
//! - [`activation`]: scalar activations behind a registry, selected by
//!   descriptor strings.
//! - [`flow`]: the ODE flow dx/dt = mu(x) - x, its compactified homotopy,
//!   group-law checks, and link-preservation traces.
//! - [`net`]: fully connected networks with seeded init, forward
//!   evaluation, and full-batch gradient-descent training.
//! - [`analysis`]: separation verdicts with ball certificates, obstruction
//!   checks for linear and conjugated maps, approximation-gap reports.
//! - [`experiment`]: named end-to-end experiments behind a registry,
//!   writing JSON reports, aggregate CSV, and a manifest.

pub mod activation;
pub mod analysis;
pub mod degree;
pub mod error;
pub mod experiment;
pub mod flow;
pub mod geometry;
pub mod linalg;
pub mod net;
pub mod output;

pub use activation::ActivationKind;
pub use error::{Error, Result};
pub use geometry::{EmbeddedPair, Homeomorphism, PointCloud};
