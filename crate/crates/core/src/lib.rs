//! Leading-order compound asymptotics for the Laplace equation on a disk
//! with a small circular inclusion under inhomogeneous Robin conditions.
//!
//! The approximation `u₀ᵉ = V₀ + c₀ G^κ(·, c) + w₀` is assembled from
//! per-mode solves on the disk and in the stretched exterior plane, and
//! checked against high-accuracy reference solutions of the exact problem.

// `!(x > 0.0)` style checks are used on purpose so NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod boundary_data;
pub mod compound;
pub mod config;
pub mod error;
pub mod exterior;
pub mod geometry;
pub mod grid;
pub mod interior;
pub mod reference;
pub mod series;

pub use boundary_data::{fourier_project, FourierData, RobinData};
pub use compound::{BuildOptions, CompoundApproximation};
pub use error::{Error, Result};
pub use exterior::{ExteriorCorrector, ExteriorScaling};
pub use geometry::{Boundary, BoundaryPoint, Geometry, Location, Point};
pub use interior::GreensFunction;
pub use reference::{ReferenceSolution, Sampling};
pub use series::{HarmonicSeries, SeriesKind};
