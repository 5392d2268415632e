//! Theta invariants of euclidean lattices, their geometry-of-numbers
//! counterparts, and the convex-duality machinery connecting them.
//!
//! The crate computes, with certified truncation errors:
//!
//! - theta series theta_E(t) = sum over v in E of e^{-pi t |v|^2} and the
//!   invariants h0 = log theta_E(1), h1 = h0 of the dual lattice
//!   ([`mod@theta`]);
//! - counting profiles N_E, first minima, covering radii and transference
//!   bounds ([`profile`]);
//! - subadditivity defects of admissible short exact sequences and the Gext
//!   functional on the extension torus ([`ext`]);
//! - the log-Laplace / energy / entropy triple of a weighted energy space,
//!   Legendre duality, and the asymptotic counting invariant it computes
//!   ([`thermo`]);
//! - finite truncations of projective systems of lattices with summability
//!   checks and limit brackets ([`prolim`]);
//! - exact Haar sampling of rank-2 unimodular lattices and Monte Carlo
//!   verification of the Siegel mean values ([`siegel`]).
//!
//! Start with [`EuclideanLattice`]; every other object is derived from its
//! Gram matrix. The `examples/` directory has one runnable walk-through per
//! capability; the `theta-forge` binary exposes the same operations as thin
//! subcommands.

pub mod cli;
pub mod error;
pub mod ext;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod profile;
pub mod prolim;
pub mod quad;
pub mod rng;
pub mod siegel;
pub mod theta;
pub mod thermo;
pub mod verify;

mod intmat;

pub use error::{Error, Result};
pub use intmat::IMat;
pub use lattice::{
    direct_image_gram, AdmissibleSequence, EuclideanLattice, LatticeVector, DEFAULT_ENUM_CAP,
};
pub use linalg::Mat;
pub use theta::{h0_theta, h1_theta, tau, theta, ThetaResult};
