//! The perforated disk `Ω_ε = Ω \ D_ε`.
//!
//! `Ω` is the open disk of radius `R` about the origin and `D_ε` the closed
//! disk of radius `ε` about the inclusion center `c`. Normals are outward
//! with respect to `Ω_ε`: radial on the outer circle, pointing *into* the
//! inclusion on the inner circle.

use std::f64::consts::PI;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = Vector2<f64>;

/// Relative tolerance (times `R`) used by [`Geometry::classify`].
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeometry", into = "RawGeometry")]
pub struct Geometry {
    radius: f64,
    center: Point,
    eps: f64,
}

#[derive(Serialize, Deserialize)]
struct RawGeometry {
    radius: f64,
    center: [f64; 2],
    eps: f64,
}

impl TryFrom<RawGeometry> for Geometry {
    type Error = Error;

    fn try_from(raw: RawGeometry) -> Result<Self> {
        Geometry::new(
            raw.radius,
            Point::new(raw.center[0], raw.center[1]),
            raw.eps,
        )
    }
}

impl From<Geometry> for RawGeometry {
    fn from(g: Geometry) -> Self {
        RawGeometry {
            radius: g.radius,
            center: [g.center.x, g.center.y],
            eps: g.eps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Boundary {
    Outer,
    Inclusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    InsideInclusion,
    OnOuterBoundary,
    OnInclusionBoundary,
    Outside,
}

impl Location {
    /// True for points of the closed domain `Ω̄_ε`.
    pub fn in_closure(self) -> bool {
        !matches!(self, Location::InsideInclusion | Location::Outside)
    }
}

/// A point on one of the two circles, by angle in `[-π, π)` about that
/// circle's center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub which: Boundary,
    pub angle: f64,
}

impl Geometry {
    pub fn new(radius: f64, center: Point, eps: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Geometry(format!(
                "radius must be positive, got {radius}"
            )));
        }
        if !center.x.is_finite() || !center.y.is_finite() {
            return Err(Error::Geometry("inclusion center is not finite".into()));
        }
        if center.norm() >= radius {
            return Err(Error::Geometry(format!(
                "inclusion center |c| = {} is not inside the disk of radius {radius}",
                center.norm()
            )));
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Geometry(format!("eps must be positive, got {eps}")));
        }
        let limit = 0.5 * (radius - center.norm());
        if eps > limit {
            return Err(Error::EpsilonBound { eps, limit });
        }
        Ok(Geometry {
            radius,
            center,
            eps,
        })
    }

    /// Same outer disk and center, different inclusion radius.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Geometry::new(self.radius, self.center, eps)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Distance from `c` to the nearest point of `∂Ω`.
    pub fn r_min(&self) -> f64 {
        self.radius - self.center.norm()
    }

    /// Distance from `c` to the farthest point of `∂Ω`.
    pub fn r_max(&self) -> f64 {
        self.radius + self.center.norm()
    }

    pub fn is_centered(&self) -> bool {
        self.center.x == 0.0 && self.center.y == 0.0
    }

    pub fn classify(&self, x: &Point) -> Location {
        let tol = BOUNDARY_TOLERANCE * self.radius;
        let r = x.norm();
        let rho = (x - self.center).norm();
        if (r - self.radius).abs() <= tol {
            Location::OnOuterBoundary
        } else if r > self.radius {
            Location::Outside
        } else if (rho - self.eps).abs() <= tol {
            Location::OnInclusionBoundary
        } else if rho < self.eps {
            Location::InsideInclusion
        } else {
            Location::Interior
        }
    }

    pub fn sample_boundary(&self, which: Boundary, m: usize) -> Vec<BoundaryPoint> {
        equispaced_angles(m)
            .map(|angle| BoundaryPoint { which, angle })
            .collect()
    }

    pub fn position(&self, p: &BoundaryPoint) -> Point {
        let e = Point::new(p.angle.cos(), p.angle.sin());
        match p.which {
            Boundary::Outer => e * self.radius,
            Boundary::Inclusion => self.center + e * self.eps,
        }
    }

    /// Unit normal at `p`, outward with respect to `Ω_ε`.
    pub fn normal(&self, p: &BoundaryPoint) -> Point {
        let e = Point::new(p.angle.cos(), p.angle.sin());
        match p.which {
            Boundary::Outer => e,
            Boundary::Inclusion => -e,
        }
    }

    /// Distance from `c` to `∂Ω` along the ray at angle `angle` about `c`.
    pub fn ray_to_outer(&self, angle: f64) -> f64 {
        let e = Point::new(angle.cos(), angle.sin());
        let ce = self.center.dot(&e);
        -ce + (ce * ce - self.center.norm_squared() + self.radius * self.radius).sqrt()
    }
}

/// `θ_j = -π + 2πj/m` for `j = 0..m`.
pub fn equispaced_angles(m: usize) -> impl Iterator<Item = f64> + Clone {
    (0..m).map(move |j| -PI + 2.0 * PI * j as f64 / m as f64)
}
