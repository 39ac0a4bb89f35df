//! Exact-arithmetic discretizations of Teichmüller geodesic flow.
//!
//! The crate is organized around three renormalization schemes on flat
//! surfaces, all driven by the same exact scalar kernel:
//!
//! - [`iet`]: interval exchange transformations and Rauzy–Veech induction,
//!   including the explicit torus maps and their continued-fraction factors.
//! - [`hyp`]: quadrangulations of surfaces in hyperelliptic components,
//!   staircase moves, and the fundamental domain for the flow.
//! - [`castle`]: castle-polygon decompositions valid in every stratum,
//!   forward/backward diagonal changes, and closed-orbit detection.
//!
//! [`pa`] enumerates pseudo-Anosov mapping classes as positive loops in the
//! unlabeled diagonal-changes graph, and [`surface`] hosts the polygon-level
//! model (saddle connections, systoles, the flow itself).
//!
//! All geometric data is exact: rational or quadratic-field coordinates,
//! integer move matrices, and certified floating enclosures only at the
//! reporting boundary.

// Error variants carry the offending exact scalars for diagnostics;
// they are cold paths, so the size does not matter.
#![allow(clippy::result_large_err)]

pub mod castle;
pub mod hyp;
pub mod iet;
pub mod num;
pub mod pa;
pub mod render;
pub mod surface;

pub use num::{IntMatrix, PlanarVec, QuadScalar, Rational, Scalar};
