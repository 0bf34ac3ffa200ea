//! gnplab: a Monte Carlo laboratory for the structure of sparse random
//! graphs G(n, c/n).
//!
//! The crate provides
//! - reproducible G(n,p) sampling and the one-edge resampling coupling
//!   (G-, G+) ([`sample`]),
//! - connected components, the k-core peeling process and its local
//!   (ball-restricted) analogue ([`decomp`]),
//! - the membership indicators phi and their ball-local approximations
//!   phi_l, together with weighted neighbourhood counts and truncations
//!   ([`approx`]),
//! - the Poisson threshold equation x P[Poisson(x) <= k-1] = 1/e and its
//!   solver ([`threshold`]),
//! - the edge-resampling probe that checks the structural containment
//!   claims D within W exactly, per trial ([`probe`]),
//! - a CLT harness measuring normality of |L| and |V(K)| across n
//!   ([`clt`]).

pub mod approx;
pub mod clt;
pub mod decomp;
pub mod error;
pub mod graph;
pub mod probe;
pub mod sample;
pub mod stats;
pub mod threshold;

pub use error::{Error, Result};
pub use graph::{ball, Graph, LocalBall, Vertex};
pub use probe::Mode;
pub use sample::{make_coupled_pair, make_coupled_pair_at, sample_gnp, CoupledPair, RngStream};
