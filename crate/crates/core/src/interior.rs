//! The two interior problems on the disk `Ω`: the Robin-harmonic `V₀` and
//! the regular part of the Robin Green's function with pole at `c`.
//!
//! On a disk both diagonalize in the angular Fourier basis: a mode
//! `a (r/R)ⁿ cos nθ` has Robin trace `a (1 + κn/R) cos nθ` on `r = R`.

use std::f64::consts::PI;

use crate::boundary_data::{project_fn, FourierData};
use crate::error::{Error, Result};
use crate::geometry::{equispaced_angles, Geometry, Point};
use crate::series::HarmonicSeries;

/// Default truncation order of the Green's function regular part.
pub const DEFAULT_GREEN_ORDER: usize = 64;

/// Robin residual accepted for the Green's function regular part.
pub const GREEN_RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Relative size of the last retained coefficient above which the Green's
/// function expansion is reported as under-resolved.
pub const TRUNCATION_WARNING: f64 = 1e-10;

pub(crate) fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "kappa must be positive and finite, got {kappa}"
        )))
    }
}

/// Harmonic `V₀` on `Ω` with `V₀ + κ ∂V₀/∂n = f_Ω` on `∂Ω`.
pub fn solve_v0(g: &Geometry, kappa: f64, f_outer: &FourierData) -> Result<HarmonicSeries> {
    check_kappa(kappa)?;
    let r = g.radius();
    let coeffs = f_outer
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, [c, s])| {
            let d = 1.0 + kappa * (k + 1) as f64 / r;
            [c / d, s / d]
        })
        .collect();
    Ok(HarmonicSeries::interior(
        Point::zeros(),
        r,
        f_outer.mean,
        coeffs,
    ))
}

/// `G^κ(x, c) = -(1/2π) log|x - c| + 𝒢^{κ,c}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreensFunction {
    pub regular_part: HarmonicSeries,
    pub source: Point,
    pub kappa: f64,
    /// `|last coefficient| / |largest coefficient|` of the regular part.
    pub truncation_ratio: f64,
    /// Max Robin residual of the full `G^κ` on an offset grid of `∂Ω`.
    pub residual: f64,
}

impl GreensFunction {
    pub fn eval(&self, x: &Point) -> Result<f64> {
        self.eval_with_gradient(x).map(|(v, _)| v)
    }

    pub fn eval_with_gradient(&self, x: &Point) -> Result<(f64, Point)> {
        let d = x - self.source;
        let r2 = d.norm_squared();
        if r2 == 0.0 {
            return Err(Error::AtCenter);
        }
        let (reg, reg_grad) = self.regular_part.eval_with_gradient(x)?;
        let value = -r2.ln() / (4.0 * PI) + reg;
        let grad = -d / (2.0 * PI * r2) + reg_grad;
        Ok((value, grad))
    }

    /// `𝒢^{κ,c}(c)`.
    pub fn regular_at_source(&self) -> f64 {
        self.regular_part
            .eval(&self.source)
            .expect("interior series")
    }

    /// `∇𝒢^{κ,c}(c)`.
    pub fn regular_gradient_at_source(&self) -> Point {
        self.regular_part
            .gradient(&self.source)
            .expect("interior series")
    }

    pub fn is_under_resolved(&self) -> bool {
        self.truncation_ratio > TRUNCATION_WARNING
    }
}

/// Robin data of the regular part on `∂Ω`:
/// `(1/2π) log|x - c| + (κ/2π) (x - c)·n / |x - c|²`.
fn green_boundary_data(g: &Geometry, kappa: f64, theta: f64) -> f64 {
    let n = Point::new(theta.cos(), theta.sin());
    let x = n * g.radius();
    let d = x - g.center();
    let r2 = d.norm_squared();
    r2.ln() / (4.0 * PI) + kappa / (2.0 * PI) * d.dot(&n) / r2
}

/// Regular part `𝒢^{κ,c}` of the Robin Green's function with pole at `c`,
/// expanded to `order` modes about the origin.
pub fn solve_green_regular(g: &Geometry, kappa: f64, order: usize) -> Result<GreensFunction> {
    check_kappa(kappa)?;
    let m = 4 * order + 2;
    let data = project_fn(|t| green_boundary_data(g, kappa, t), order, m)?;
    let regular_part = solve_v0(g, kappa, &data)?;
    let largest = regular_part
        .coeffs
        .iter()
        .map(|c| c[0].hypot(c[1]))
        .fold(0.0, f64::max);
    let truncation_ratio = match regular_part.coeffs.last() {
        Some(c) if largest > 0.0 => c[0].hypot(c[1]) / largest,
        _ => 0.0,
    };
    let mut green = GreensFunction {
        regular_part,
        source: g.center(),
        kappa,
        truncation_ratio,
        residual: 0.0,
    };
    green.residual = outer_robin_residual(
        g,
        kappa,
        4 * order.max(8),
        |x| green.eval_with_gradient(x),
        |_| 0.0,
    )?;
    if !(green.residual < GREEN_RESIDUAL_TOLERANCE) {
        return Err(Error::Residual {
            what: "Green's function regular part",
            residual: green.residual,
            tolerance: GREEN_RESIDUAL_TOLERANCE,
        });
    }
    Ok(green)
}

/// Angles of an `m`-point grid shifted by half a step, disjoint from the
/// equispaced grids used to build the solutions.
pub fn offset_angles(m: usize) -> impl Iterator<Item = f64> + Clone {
    let h = PI / m as f64;
    equispaced_angles(m).map(move |t| t + h)
}

/// `max |u + κ ∂u/∂r - data(θ)|` over an offset grid of `m` points on `∂Ω`.
pub fn outer_robin_residual(
    g: &Geometry,
    kappa: f64,
    m: usize,
    field: impl Fn(&Point) -> Result<(f64, Point)>,
    data: impl Fn(f64) -> f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for t in offset_angles(m) {
        let n = Point::new(t.cos(), t.sin());
        let (v, grad) = field(&(n * g.radius()))?;
        worst = worst.max((v + kappa * grad.dot(&n) - data(t)).abs());
    }
    Ok(worst)
}
