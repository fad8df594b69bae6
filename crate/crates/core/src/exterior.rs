//! The point-source strength `c₀` and the exterior corrector `w₀`.
//!
//! `w₀` is a bounded harmonic function outside the unit disk of the
//! stretched variable `ξ = (x - c)/ε`, decaying at infinity, whose Robin
//! trace `w₀ - λ ∂w₀/∂ρ` on `ρ = 1` equals the zero-mean part of `f_D` plus
//! a drift term in mode 1. Mode `n` solves by one division by `1 + λn`.
//!
//! In the stretched variable the physical Robin condition `u - κ ∂u/∂r`
//! on `|x - c| = ε` becomes `u - (κ/ε) ∂u/∂ρ`, and gradients scale by `ε`.
//! [`ExteriorScaling::Rescaled`] uses `λ = κ/ε` with the stretched drift
//! `ε (∇V₀(c) + c₀ ∇𝒢(c))`; [`ExteriorScaling::Unscaled`] uses `λ = κ`
//! with the unstretched drift.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::boundary_data::{project_fn, FourierData};
use crate::error::{Error, Result};
use crate::geometry::{Geometry, Point};
use crate::interior::{check_kappa, offset_angles};
use crate::series::HarmonicSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExteriorScaling {
    /// Robin length `κ/ε` in the stretched variable.
    #[default]
    Rescaled,
    /// Robin length `κ` in the stretched variable.
    Unscaled,
}

/// `c₀ = (mean f_D - V₀(c)) / (𝒢(c) + κ/(2πε) - (1/2π) log ε)`.
pub fn compute_c0(
    g: &Geometry,
    kappa: f64,
    f_d_mean: f64,
    v0_at_c: f64,
    g_reg_at_c: f64,
) -> Result<f64> {
    check_kappa(kappa)?;
    let eps = g.eps();
    let denominator = g_reg_at_c + kappa / (2.0 * PI * eps) - eps.ln() / (2.0 * PI);
    if !(denominator > 0.0) || !denominator.is_finite() {
        return Err(Error::Denominator(denominator));
    }
    Ok((f_d_mean - v0_at_c) / denominator)
}

/// Bounded exterior solution on `ρ ≥ 1` with `a - λ ∂a/∂ρ = b` on `ρ = 1`.
///
/// The constant mode is free: `a → mean b` as `ρ → ∞`.
pub fn solve_exterior_bounded(b: &FourierData, robin_length: f64) -> Result<HarmonicSeries> {
    check_kappa(robin_length)?;
    let coeffs = b
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, [c, s])| {
            let d = 1.0 + robin_length * (k + 1) as f64;
            [c / d, s / d]
        })
        .collect();
    Ok(HarmonicSeries::exterior(
        Point::zeros(),
        1.0,
        b.mean,
        0.0,
        coeffs,
    ))
}

/// Boundary data of `w₀` on `ρ = 1`: the modes `n ≥ 1` of `f_D`, with
/// `λ · drift` added to mode 1 only.
pub fn corrector_data(f_d: &FourierData, robin_length: f64, drift: Point) -> FourierData {
    let mut coeffs = f_d.coeffs.clone();
    if coeffs.is_empty() {
        coeffs.push([0.0; 2]);
    }
    coeffs[0][0] += robin_length * drift.x;
    coeffs[0][1] += robin_length * drift.y;
    FourierData { mean: 0.0, coeffs }
}

/// `w₀` in the stretched plane (about the origin, unit scale). Mode `n`
/// coefficient is `(fⁿ + λ δ_{n,1} drift) / (1 + λn)`.
pub fn solve_w0(f_d: &FourierData, robin_length: f64, drift: Point) -> Result<HarmonicSeries> {
    let data = corrector_data(f_d, robin_length, drift);
    let w0 = solve_exterior_bounded(&data, robin_length)?;
    debug_assert_eq!(w0.mean, 0.0);
    Ok(w0)
}

/// `max |a - λ ∂a/∂ρ - b|` on an offset grid of the unit circle.
pub fn exterior_robin_residual(
    a: &HarmonicSeries,
    robin_length: f64,
    b: &FourierData,
    m: usize,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for t in offset_angles(m) {
        let e = Point::new(t.cos(), t.sin());
        let x = a.center + e * a.scale;
        let (v, grad) = a.eval_with_gradient(&x)?;
        // ∂/∂ρ in units of the series scale
        let d_rho = grad.dot(&e) * a.scale;
        worst = worst.max((v - robin_length * d_rho - b.eval(t)).abs());
    }
    Ok(worst)
}

/// The exterior part of the compound approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorCorrector {
    pub c0: f64,
    /// `w₀` placed at `c` with scale `ε`; its coefficients are those of the
    /// stretched-plane solution.
    pub w0: HarmonicSeries,
    pub kappa: f64,
    pub eps: f64,
    pub scaling: ExteriorScaling,
    /// Robin length `λ` used in the stretched problem.
    pub robin_length: f64,
    /// `∇V₀(c) + c₀ ∇𝒢^{κ,c}(c)` in physical units.
    pub drift: Point,
}

impl ExteriorCorrector {
    /// Builds `w₀` from the interior data at `c`.
    pub fn new(
        g: &Geometry,
        kappa: f64,
        f_d: &FourierData,
        c0: f64,
        grad_v0: Point,
        grad_g_reg: Point,
        scaling: ExteriorScaling,
    ) -> Result<Self> {
        check_kappa(kappa)?;
        let eps = g.eps();
        let drift = grad_v0 + grad_g_reg * c0;
        let (robin_length, stretched_drift) = match scaling {
            ExteriorScaling::Rescaled => (kappa / eps, drift * eps),
            ExteriorScaling::Unscaled => (kappa, drift),
        };
        let mut w0 = solve_w0(f_d, robin_length, stretched_drift)?;
        w0.center = g.center();
        w0.scale = eps;
        Ok(ExteriorCorrector {
            c0,
            w0,
            kappa,
            eps,
            scaling,
            robin_length,
            drift,
        })
    }

    /// The stretched-plane drift that enters mode 1.
    pub fn stretched_drift(&self) -> Point {
        match self.scaling {
            ExteriorScaling::Rescaled => self.drift * self.eps,
            ExteriorScaling::Unscaled => self.drift,
        }
    }

    /// Boundary data `w₀` was solved against.
    pub fn boundary_data(&self, f_d: &FourierData) -> FourierData {
        corrector_data(f_d, self.robin_length, self.stretched_drift())
    }
}

/// `H(ξ) = -(1/2π) log|ξ|` outside the unit disk (`H₀ ≡ 0` there).
pub fn exterior_green() -> HarmonicSeries {
    HarmonicSeries::exterior(Point::zeros(), 1.0, 0.0, -1.0 / (2.0 * PI), Vec::new())
}

/// `H^κ`: bounded exterior harmonic with `H^κ - κ ∂H^κ/∂ρ = -∂H/∂ρ` on
/// `ρ = 1`, built through the generic exterior mode solver.
pub fn h_kappa(kappa: f64, order: usize) -> Result<HarmonicSeries> {
    let h = exterior_green();
    let data = project_fn(
        |t| {
            let e = Point::new(t.cos(), t.sin());
            -h.gradient(&e).expect("off center").dot(&e)
        },
        order,
        4 * order + 2,
    )?;
    solve_exterior_bounded(&data, kappa)
}
