//! Orthogonal sign matrices as returns of a lattice random walk.
//!
//! An `n x t` matrix over `{-1, 1}` has pairwise orthogonal rows exactly when
//! the walk on `Z^{C(n,2)}` whose steps are the pairwise products of a column
//! returns to the origin after `t` steps. This crate counts those returns
//! exactly, evaluates the characteristic function of a step and its Fourier
//! inversion, enumerates the set where it has unit modulus, and checks the
//! analytic envelopes for the return probability numerically.
//!
//! ```
//! use hadamard_walk::{count_exact_dp, Parameters};
//!
//! let c = count_exact_dp(&Parameters::new(4, 4).unwrap()).unwrap();
//! assert_eq!(c.matrix_count, 768u32.into());
//! ```

pub mod appendix;
pub mod bounds;
pub mod charfn;
pub mod error;
pub mod exact;
pub mod integral;
pub mod lattice;
mod mc;
pub mod unitset;
pub mod verify;
pub mod walksim;

pub use error::{Error, Result};
pub use exact::{brute_force_count, count_closed_form, count_exact_dp, CountMethod, CountResult, N2Reading};
pub use lattice::{Parameters, TorusPoint};
