//! Implicit fixed-point iterations in W-hyperbolic spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`wspace`]: metric spaces with a convexity mapping `W` (Euclidean space,
//!   the tripod R-tree and the Poincaré half-plane) and an axiom checker.
//! * [`mappings`]: self-maps carrying contraction certificates, approximate
//!   operators and the Zamfirescu / Osilike-Udomene hierarchy.
//! * [`schemes`]: the implicit S-, Ishikawa- and Mann-type iterations with an
//!   inner solver for the implicit equation of each step.
//! * [`bounds`]: theoretical error envelopes and rate comparison.
//! * [`experiments`]: end-to-end reproductions built from the pieces above,
//!   including an exact rational oracle for the halving map.
//! * [`cli`]: the command-line front end.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod format;
pub mod mappings;
pub mod registry;
pub mod schemes;
pub mod wspace;

pub use error::{Error, Result};
