//! The leading-order compound approximation
//! `u₀ᵉ = V₀ + c₀ G^κ(·, c) + w₀((· - c)/ε)`.

use crate::boundary_data::{FourierData, RobinData, DEFAULT_ORDER};
use crate::error::{Error, Result};
use crate::exterior::{compute_c0, ExteriorCorrector, ExteriorScaling};
use crate::geometry::{Boundary, BoundaryPoint, Geometry, Point};
use crate::interior::{solve_green_regular, solve_v0, GreensFunction, DEFAULT_GREEN_ORDER};
use crate::series::HarmonicSeries;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildOptions {
    /// Truncation order applied to the boundary data.
    pub order: usize,
    /// Truncation order of the Green's function regular part.
    pub green_order: usize,
    pub scaling: ExteriorScaling,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            order: DEFAULT_ORDER,
            green_order: DEFAULT_GREEN_ORDER,
            scaling: ExteriorScaling::Rescaled,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompoundApproximation {
    pub geometry: Geometry,
    pub kappa: f64,
    pub v0: HarmonicSeries,
    pub green: GreensFunction,
    pub corrector: ExteriorCorrector,
    /// Boundary data truncated to the build order.
    pub data: RobinData,
}

fn truncate(f: &FourierData, order: usize) -> FourierData {
    FourierData {
        mean: f.mean,
        coeffs: f.coeffs.iter().take(order).copied().collect(),
    }
}

impl CompoundApproximation {
    pub fn build(g: &Geometry, kappa: f64, data: &RobinData, opts: &BuildOptions) -> Result<Self> {
        let data = RobinData {
            f_outer: truncate(&data.f_outer, opts.order),
            g_outer: truncate(&data.g_outer, opts.order),
            f_inclusion: truncate(&data.f_inclusion, opts.order),
            g_inclusion: truncate(&data.g_inclusion, opts.order),
        };
        let v0 = solve_v0(g, kappa, &data.f_outer)?;
        let green = solve_green_regular(g, kappa, opts.green_order)?;
        let c = g.center();
        let (v0_c, grad_v0) = v0.eval_with_gradient(&c)?;
        let c0 = compute_c0(
            g,
            kappa,
            data.f_inclusion.mean,
            v0_c,
            green.regular_at_source(),
        )?;
        let corrector = ExteriorCorrector::new(
            g,
            kappa,
            &data.f_inclusion,
            c0,
            grad_v0,
            green.regular_gradient_at_source(),
            opts.scaling,
        )?;
        Ok(CompoundApproximation {
            geometry: *g,
            kappa,
            v0,
            green,
            corrector,
            data,
        })
    }

    pub fn c0(&self) -> f64 {
        self.corrector.c0
    }

    /// `∇V₀(c) + c₀ ∇𝒢^{κ,c}(c)`.
    pub fn drift(&self) -> Point {
        self.corrector.drift
    }

    /// Same interior solutions with `c₀` multiplied by `factor` and `w₀`
    /// rebuilt from the perturbed drift.
    pub fn with_c0_scaled(&self, factor: f64) -> Result<Self> {
        let mut out = self.clone();
        let c = self.geometry.center();
        out.corrector = ExteriorCorrector::new(
            &self.geometry,
            self.kappa,
            &self.data.f_inclusion,
            self.c0() * factor,
            self.v0.gradient(&c)?,
            self.green.regular_gradient_at_source(),
            self.corrector.scaling,
        )?;
        Ok(out)
    }

    pub fn eval(&self, x: &Point) -> Result<f64> {
        self.eval_with_gradient(x).map(|(v, _)| v)
    }

    pub fn eval_with_gradient(&self, x: &Point) -> Result<(f64, Point)> {
        if !self.geometry.classify(x).in_closure() {
            return Err(Error::OutOfDomain { x: x.x, y: x.y });
        }
        let (v, gv) = self.v0.eval_with_gradient(x)?;
        let (gk, gg) = self.green.eval_with_gradient(x)?;
        let (w, gw) = self.corrector.w0.eval_with_gradient(x)?;
        let c0 = self.c0();
        Ok((v + c0 * gk + w, gv + gg * c0 + gw))
    }

    /// `u₀ᵉ + κ ∂u₀ᵉ/∂n` with the outward normal of `Ω_ε`.
    pub fn robin_trace(&self, p: &BoundaryPoint) -> Result<f64> {
        let x = self.geometry.position(p);
        let (v, grad) = self.eval_with_gradient(&x)?;
        Ok(v + self.kappa * grad.dot(&self.geometry.normal(p)))
    }

    /// Robin data of the exact problem at `p`: `f + ε g`.
    pub fn target_trace(&self, p: &BoundaryPoint) -> f64 {
        let eps = self.geometry.eps();
        match p.which {
            Boundary::Outer => {
                self.data.f_outer.eval(p.angle) + eps * self.data.g_outer.eval(p.angle)
            }
            Boundary::Inclusion => {
                self.data.f_inclusion.eval(p.angle) + eps * self.data.g_inclusion.eval(p.angle)
            }
        }
    }

    /// `(f + εg) - 𝒯^κ u₀ᵉ` at `p`.
    pub fn discrepancy(&self, p: &BoundaryPoint) -> Result<f64> {
        Ok(self.target_trace(p) - self.robin_trace(p)?)
    }

    /// Largest `|discrepancy|` over `m` equispaced points of one boundary.
    pub fn max_discrepancy(&self, which: Boundary, m: usize) -> Result<f64> {
        self.geometry
            .sample_boundary(which, m)
            .iter()
            .try_fold(0.0f64, |acc, p| Ok(acc.max(self.discrepancy(p)?.abs())))
    }

    /// Inclusion-boundary discrepancy written as differences of the smooth
    /// interior parts between `x` and `c`:
    ///
    /// `(V₀(c) - V₀(x)) - c₀(𝒢(x) - 𝒢(c)) + κ(∂ᵣV₀(x) - ∂ᵣV₀(c))
    ///  + c₀κ(∂ᵣ𝒢(x) - ∂ᵣ𝒢(c)) + ε g_D`
    ///
    /// with `∂ᵣ` the derivative along `(x - c)/ε`. Equals
    /// [`discrepancy`](Self::discrepancy) exactly when `w₀` satisfies the
    /// physical Robin condition, i.e. with [`ExteriorScaling::Rescaled`].
    pub fn inclusion_discrepancy_terms(&self, angle: f64) -> Result<f64> {
        let g = &self.geometry;
        let c = g.center();
        let e = Point::new(angle.cos(), angle.sin());
        let x = c + e * g.eps();
        let (v_x, gv_x) = self.v0.eval_with_gradient(&x)?;
        let (v_c, gv_c) = self.v0.eval_with_gradient(&c)?;
        let (r_x, gr_x) = self.green.regular_part.eval_with_gradient(&x)?;
        let (r_c, gr_c) = self.green.regular_part.eval_with_gradient(&c)?;
        let (k, c0) = (self.kappa, self.c0());
        Ok((v_c - v_x) - c0 * (r_x - r_c)
            + k * (gv_x - gv_c).dot(&e)
            + c0 * k * (gr_x - gr_c).dot(&e)
            + g.eps() * self.data.g_inclusion.eval(angle))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary_data::project_fn;
    use std::f64::consts::PI;

    fn centered(eps: f64) -> Geometry {
        Geometry::new(1.0, Point::zeros(), eps).unwrap()
    }

    #[test]
    fn constant_data_is_reproduced() {
        for scaling in [ExteriorScaling::Rescaled, ExteriorScaling::Unscaled] {
            let g = Geometry::new(1.0, Point::new(0.3, -0.2), 0.07).unwrap();
            let opts = BuildOptions {
                scaling,
                ..Default::default()
            };
            let ca =
                CompoundApproximation::build(&g, 2.5, &RobinData::constant(1.75), &opts).unwrap();
            assert!(ca.c0().abs() < 1e-15);
            for x in [
                Point::new(0.0, 0.5),
                Point::new(-0.7, 0.1),
                Point::new(0.37, -0.2),
            ] {
                assert!((ca.eval(&x).unwrap() - 1.75).abs() < 1e-13);
            }
            for which in [Boundary::Outer, Boundary::Inclusion] {
                for p in g.sample_boundary(which, 16) {
                    assert!((ca.robin_trace(&p).unwrap() - 1.75).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn point_source_only() {
        // f_Ω ≡ 0, f_D ≡ 1, centered: u₀ᵉ = c₀ G^κ(·, 0)
        let (eps, kappa) = (0.1, 1.0);
        let g = centered(eps);
        let data = RobinData::leading(FourierData::constant(0.0), FourierData::constant(1.0));
        let ca = CompoundApproximation::build(&g, kappa, &data, &BuildOptions::default()).unwrap();
        let c0 = 2.0 * PI / (11.0 + 10f64.ln());
        assert!((ca.c0() - c0).abs() < 1e-13);
        for x in [
            Point::new(0.5, 0.0),
            Point::new(0.0, 0.2),
            Point::new(-0.6, 0.6),
        ] {
            let g_k = -x.norm().ln() / (2.0 * PI) + 1.0 / (2.0 * PI);
            assert!((ca.eval(&x).unwrap() - c0 * g_k).abs() < 1e-13);
        }
        // mean of the inclusion data is matched exactly
        let p = BoundaryPoint {
            which: Boundary::Inclusion,
            angle: 0.3,
        };
        assert!(ca.discrepancy(&p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn cosine_outer_data_hand_assembled() {
        let (eps, kappa) = (0.05, 1.0);
        let g = centered(eps);
        let data = RobinData::leading(FourierData::mode(1, 1.0, 0.0), FourierData::constant(0.0));
        let ca = CompoundApproximation::build(&g, kappa, &data, &BuildOptions::default()).unwrap();
        // V₀ = r cos θ / (1 + κ), ∇V₀(0) = (1/(1+κ), 0), c₀ = 0
        let a = 1.0 / (1.0 + kappa);
        assert!(ca.c0().abs() < 1e-15);
        assert!((ca.drift() - Point::new(a, 0.0)).norm() < 1e-14);
        // mode-1 corrector (κ drift)/(1 + κ/ε) in ρ = r/ε
        let b = kappa * a / (1.0 + kappa / eps);
        for x in [Point::new(0.5, 0.0), Point::new(0.1, 0.3)] {
            let r = x.norm();
            let expected = a * x.x + b * (eps / r) * (x.x / r);
            assert!((ca.eval(&x).unwrap() - expected).abs() < 1e-14);
        }
        let outer = ca.max_discrepancy(Boundary::Outer, 64).unwrap();
        let inner = ca.max_discrepancy(Boundary::Inclusion, 64).unwrap();
        // the inclusion residue is the value term ε·V₀(c + εe) = aε cos ϑ
        assert!(
            outer < 1e-12 && (inner - a * eps).abs() < 1e-12,
            "{outer} {inner}"
        );
    }

    #[test]
    fn inclusion_discrepancy_bookkeeping() {
        let g = Geometry::new(1.0, Point::new(0.25, -0.15), 0.04).unwrap();
        let data = RobinData::new(
            FourierData {
                mean: 0.2,
                coeffs: vec![[1.0, 0.0], [0.3, -0.4], [0.0, 0.2]],
            },
            FourierData::constant(0.0),
            FourierData {
                mean: 1.0,
                coeffs: vec![[0.0, 0.0], [0.5, 0.1]],
            },
            FourierData::mode(1, 0.0, 0.7),
        )
        .unwrap();
        let ca = CompoundApproximation::build(&g, 1.3, &data, &BuildOptions::default()).unwrap();
        for p in g.sample_boundary(Boundary::Inclusion, 24) {
            let direct = ca.discrepancy(&p).unwrap();
            let terms = ca.inclusion_discrepancy_terms(p.angle).unwrap();
            assert!((direct - terms).abs() < 1e-10, "{direct} vs {terms}");
        }
    }

    #[test]
    fn outer_discrepancy_is_corrector_trace() {
        let g = Geometry::new(1.0, Point::new(-0.3, 0.2), 0.05).unwrap();
        let data = RobinData::leading(
            FourierData {
                mean: 0.1,
                coeffs: vec![[0.4, 0.2], [0.0, -0.3]],
            },
            FourierData {
                mean: -0.5,
                coeffs: vec![[1.0, 0.0], [0.2, 0.2]],
            },
        );
        for scaling in [ExteriorScaling::Rescaled, ExteriorScaling::Unscaled] {
            let opts = BuildOptions {
                scaling,
                ..Default::default()
            };
            let ca = CompoundApproximation::build(&g, 0.8, &data, &opts).unwrap();
            for p in g.sample_boundary(Boundary::Outer, 32) {
                let x = g.position(&p);
                let (w, gw) = ca.corrector.w0.eval_with_gradient(&x).unwrap();
                let w_trace = w + ca.kappa * gw.dot(&g.normal(&p));
                assert!((ca.discrepancy(&p).unwrap() + w_trace).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn inclusion_discrepancy_is_first_order() {
        let kappa = 1.0;
        let data = RobinData::leading(
            FourierData::mode(2, 1.0, 0.0),
            FourierData::mode(1, 1.0, 0.0),
        );
        let disc = |eps: f64| {
            let ca = CompoundApproximation::build(
                &centered(eps),
                kappa,
                &data,
                &BuildOptions::default(),
            )
            .unwrap();
            ca.max_discrepancy(Boundary::Inclusion, 128).unwrap()
        };
        for eps in [0.08, 0.04, 0.02] {
            let ratio = disc(eps) / disc(eps / 2.0);
            assert!((1.7..=2.3).contains(&ratio), "eps {eps}: ratio {ratio}");
        }
    }

    #[test]
    fn approximation_is_harmonic() {
        let g = Geometry::new(1.0, Point::new(0.2, 0.1), 0.05).unwrap();
        let data = RobinData::leading(
            project_fn(|t| (t.sin() * 2.0).exp() * 0.2, 16, 64).unwrap(),
            FourierData {
                mean: 0.5,
                coeffs: vec![[0.3, 0.1], [0.1, 0.0]],
            },
        );
        let ca = CompoundApproximation::build(&g, 1.0, &data, &BuildOptions::default()).unwrap();
        let h = 1e-4;
        for x in [
            Point::new(0.5, 0.3),
            Point::new(-0.4, -0.2),
            Point::new(0.3, 0.1),
        ] {
            let f = |p: Point| ca.eval(&p).unwrap();
            let lap = (f(x + Point::new(h, 0.0))
                + f(x - Point::new(h, 0.0))
                + f(x + Point::new(0.0, h))
                + f(x - Point::new(0.0, h))
                - 4.0 * f(x))
                / (h * h);
            assert!(lap.abs() < 1e-3, "{lap}");
        }
    }

    #[test]
    fn rejects_points_outside() {
        let g = centered(0.1);
        let ca = CompoundApproximation::build(
            &g,
            1.0,
            &RobinData::constant(1.0),
            &BuildOptions::default(),
        )
        .unwrap();
        assert!(matches!(
            ca.eval(&Point::new(0.05, 0.0)),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            ca.eval(&Point::new(1.2, 0.0)),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(ca.eval(&Point::new(0.1, 0.0)).is_ok());
    }

    #[test]
    fn unscaled_corrector_matches_literal_formula() {
        // mode-n coefficient (fⁿ + κ δ drift)/(1 + κn) in ρ = |x - c|/ε
        let (eps, kappa) = (0.05, 2.0);
        let g = centered(eps);
        let data = RobinData::leading(
            FourierData::mode(1, 0.5, 0.0),
            FourierData::mode(2, 0.0, 1.0),
        );
        let opts = BuildOptions {
            scaling: ExteriorScaling::Unscaled,
            ..Default::default()
        };
        let ca = CompoundApproximation::build(&g, kappa, &data, &opts).unwrap();
        let drift = 0.5 / (1.0 + kappa);
        let x = Point::new(0.3, 0.2);
        let (r, t) = (x.norm(), x.y.atan2(x.x));
        let expected = drift * x.x
            + (eps / r) * kappa / (1.0 + kappa) * drift * t.cos()
            + (eps / r).powi(2) / (1.0 + 2.0 * kappa) * (2.0 * t).sin();
        assert!((ca.eval(&x).unwrap() - expected).abs() < 1e-14);
    }
}
