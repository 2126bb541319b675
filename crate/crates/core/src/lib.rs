//! Euclidean Jordan algebras, convex state spaces, and exact decision
//! procedures for spectrality, strong symmetry and regularity.
//!
//! The crate is organised bottom-up:
//!
//! * [`eja`]: arithmetic and spectral theory of the five simple Euclidean
//!   Jordan algebra families (floating point).
//! * [`lp`]: exact simplex over ordered fields ([`lp::QSqrt5`] and
//!   [`num_rational::BigRational`]).
//! * [`geometry`]: convex bodies, cone embeddings, barycenters, exposed
//!   faces and flags.
//! * [`operational`]: effects, measurements, frames, rank and spectrality.
//! * [`symmetry`]: automorphism groups, transitivity tests and Jordan frame
//!   transporters.
//! * [`classification`]: Farran–Robertson sections, symmetric space table
//!   data and the end-to-end verification drivers.
//!
//! Batch work (random trials, exposure certificates, sampling) goes through
//! [`par::Execution`], which uses rayon when the `parallel` feature is on and
//! falls back to a plain loop otherwise.

pub mod classification;
pub mod eja;
pub mod error;
pub mod geometry;
pub mod lp;
pub mod operational;
pub mod par;
pub mod symmetry;

pub use error::{Error, Result};
