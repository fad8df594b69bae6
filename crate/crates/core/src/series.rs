//! Truncated harmonic mode expansions about a center, with exact gradients.
//!
//! Modes are stored relative to a length `scale`:
//!
//! - interior: `mean + Σ (r/s)ⁿ (aⁿ₁ cos nθ + aⁿ₂ sin nθ)`
//! - exterior: `mean + b log r + Σ (s/r)ⁿ (aⁿ₁ cos nθ + aⁿ₂ sin nθ)`
//!
//! with `r, θ` polar coordinates about `center`. Each sum is the real part of
//! a polynomial in `z/s` (or `s/z`), which gives value and gradient through a
//! single Horner pass.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    InteriorRegular,
    ExteriorDecaying,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSeries {
    pub center: Point,
    pub kind: SeriesKind,
    pub scale: f64,
    pub mean: f64,
    /// `coeffs[n - 1] = (aⁿ₁, aⁿ₂)` relative to `scale`.
    pub coeffs: Vec<[f64; 2]>,
    /// Coefficient of `log r`; always zero for interior series.
    pub log_coeff: f64,
}

impl HarmonicSeries {
    pub fn interior(center: Point, scale: f64, mean: f64, coeffs: Vec<[f64; 2]>) -> Self {
        HarmonicSeries {
            center,
            kind: SeriesKind::InteriorRegular,
            scale,
            mean,
            coeffs,
            log_coeff: 0.0,
        }
    }

    pub fn exterior(
        center: Point,
        scale: f64,
        mean: f64,
        log_coeff: f64,
        coeffs: Vec<[f64; 2]>,
    ) -> Self {
        HarmonicSeries {
            center,
            kind: SeriesKind::ExteriorDecaying,
            scale,
            mean,
            coeffs,
            log_coeff,
        }
    }

    pub fn constant(center: Point, value: f64) -> Self {
        HarmonicSeries::interior(center, 1.0, value, Vec::new())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficient(&self, n: usize) -> [f64; 2] {
        assert!(n >= 1, "mode index starts at 1");
        self.coeffs.get(n - 1).copied().unwrap_or([0.0; 2])
    }

    /// Mode-`n` coefficient against unscaled `rⁿ` (interior) or `r⁻ⁿ`
    /// (exterior).
    pub fn raw_coefficient(&self, n: usize) -> [f64; 2] {
        let f = match self.kind {
            SeriesKind::InteriorRegular => self.scale.powi(-(n as i32)),
            SeriesKind::ExteriorDecaying => self.scale.powi(n as i32),
        };
        let [a, b] = self.coefficient(n);
        [a * f, b * f]
    }

    pub fn eval(&self, x: &Point) -> Result<f64> {
        self.eval_with_gradient(x).map(|(v, _)| v)
    }

    pub fn gradient(&self, x: &Point) -> Result<Point> {
        self.eval_with_gradient(x).map(|(_, g)| g)
    }

    pub fn eval_with_gradient(&self, x: &Point) -> Result<(f64, Point)> {
        let d = x - self.center;
        let z = Complex64::new(d.x, d.y);
        match self.kind {
            SeriesKind::InteriorRegular => {
                let w = z / self.scale;
                let (p, dp) = horner(&self.coeffs, w);
                // d/dz P(z/s) = P'(w) / s
                let df = dp / self.scale;
                Ok((self.mean + p.re, Point::new(df.re, -df.im)))
            }
            SeriesKind::ExteriorDecaying => {
                if z.norm() == 0.0 {
                    return Err(Error::AtCenter);
                }
                // uⁿ carries e^{-inθ}, so the sine coefficients flip sign
                let u = self.scale / z;
                let (p, dp) = horner_conj(&self.coeffs, u);
                // d/dz P(s/z) = -P'(u) u² / s
                let mut df = -dp * u * u / self.scale;
                let mut value = self.mean + p.re;
                if self.log_coeff != 0.0 {
                    value += self.log_coeff * z.norm().ln();
                    df += self.log_coeff / z;
                }
                Ok((value, Point::new(df.re, -df.im)))
            }
        }
    }
}

/// `P(w) = Σ_{n≥1} (aₙ - i bₙ) wⁿ` and `P'(w)`.
fn horner(coeffs: &[[f64; 2]], w: Complex64) -> (Complex64, Complex64) {
    horner_signed(coeffs, w, -1.0)
}

/// `Σ_{n≥1} (aₙ + i bₙ) wⁿ` and its derivative.
fn horner_conj(coeffs: &[[f64; 2]], w: Complex64) -> (Complex64, Complex64) {
    horner_signed(coeffs, w, 1.0)
}

fn horner_signed(coeffs: &[[f64; 2]], w: Complex64, sign: f64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for [a, b] in coeffs.iter().rev() {
        dp = dp * w + p;
        p = p * w + Complex64::new(*a, sign * *b);
    }
    // p now holds Σ aₙ w^{n-1}; shift by one power
    dp = dp * w + p;
    (p * w, dp)
}

impl fmt::Display for HarmonicSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            SeriesKind::InteriorRegular => "interior (r/s)^n",
            SeriesKind::ExteriorDecaying => "exterior (s/r)^n",
        };
        writeln!(
            f,
            "# {kind} about ({}, {}), s = {}",
            self.center.x, self.center.y, self.scale
        )?;
        writeln!(f, "# mean = {:.17e}", self.mean)?;
        if self.kind == SeriesKind::ExteriorDecaying {
            writeln!(f, "# log  = {:.17e}", self.log_coeff)?;
        }
        writeln!(f, "{:>4} {:>25} {:>25}", "n", "cos", "sin")?;
        for (k, [a, b]) in self.coeffs.iter().enumerate() {
            writeln!(f, "{:>4} {:>25.17e} {:>25.17e}", k + 1, a, b)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn direct(h: &HarmonicSeries, x: &Point) -> f64 {
        let d = x - h.center;
        let (r, t) = (d.norm(), d.y.atan2(d.x));
        let mut v = h.mean + h.log_coeff * if h.log_coeff != 0.0 { r.ln() } else { 0.0 };
        for (k, [a, b]) in h.coeffs.iter().enumerate() {
            let n = (k + 1) as f64;
            let radial = match h.kind {
                SeriesKind::InteriorRegular => (r / h.scale).powf(n),
                SeriesKind::ExteriorDecaying => (h.scale / r).powf(n),
            };
            v += radial * (a * (n * t).cos() + b * (n * t).sin());
        }
        v
    }

    #[test]
    fn horner_matches_polar_formula() {
        let c = Point::new(0.2, -0.1);
        let coeffs = vec![[1.0, -0.5], [0.3, 0.2], [-0.7, 0.1]];
        let int = HarmonicSeries::interior(c, 2.0, 0.4, coeffs.clone());
        let ext = HarmonicSeries::exterior(c, 0.1, 0.4, 0.25, coeffs);
        for x in [
            Point::new(0.5, 0.3),
            Point::new(-1.0, 0.9),
            Point::new(0.2, 0.4),
        ] {
            assert!((int.eval(&x).unwrap() - direct(&int, &x)).abs() < 1e-13);
            assert!((ext.eval(&x).unwrap() - direct(&ext, &x)).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_has_zero_gradient() {
        let h = HarmonicSeries::constant(Point::zeros(), 5.0);
        let (v, g) = h.eval_with_gradient(&Point::new(0.3, 0.4)).unwrap();
        assert_eq!(v, 5.0);
        assert_eq!(g, Point::zeros());
    }

    #[test]
    fn exterior_rejects_center() {
        let h = HarmonicSeries::exterior(Point::new(0.1, 0.0), 1.0, 0.0, 0.0, vec![[1.0, 0.0]]);
        assert_eq!(h.eval(&Point::new(0.1, 0.0)), Err(Error::AtCenter));
    }

    #[test]
    fn raw_coefficients() {
        let h = HarmonicSeries::interior(Point::zeros(), 2.0, 0.0, vec![[0.0, 0.0], [0.0, 0.5]]);
        assert_eq!(h.raw_coefficient(2), [0.0, 0.125]);
        let e = HarmonicSeries::exterior(Point::zeros(), 0.5, 0.0, 0.0, vec![[2.0, 0.0]]);
        assert_eq!(e.raw_coefficient(1), [1.0, 0.0]);
    }

    #[test]
    fn display_lists_modes() {
        let h = HarmonicSeries::interior(Point::zeros(), 1.0, 1.0, vec![[0.5, 0.0]]);
        let s = h.to_string();
        assert!(s.contains("mean") && s.lines().count() == 4);
    }

    fn arb_series(kind: SeriesKind) -> impl Strategy<Value = HarmonicSeries> {
        (
            -1.0..1.0f64,
            -1.0..1.0f64,
            prop::collection::vec(prop::array::uniform2(-1.0..1.0f64), 1..10),
        )
            .prop_map(move |(mean, log, coeffs)| match kind {
                SeriesKind::InteriorRegular => {
                    HarmonicSeries::interior(Point::new(0.1, -0.2), 1.0, mean, coeffs)
                }
                SeriesKind::ExteriorDecaying => {
                    HarmonicSeries::exterior(Point::new(0.1, -0.2), 0.2, mean, log, coeffs)
                }
            })
    }

    fn polar(center: Point, r: f64, t: f64) -> Point {
        center + Point::new(t.cos(), t.sin()) * r
    }

    fn fd_gradient(h: &HarmonicSeries, x: &Point, step: f64) -> Point {
        let ex = Point::new(step, 0.0);
        let ey = Point::new(0.0, step);
        Point::new(
            (h.eval(&(x + ex)).unwrap() - h.eval(&(x - ex)).unwrap()) / (2.0 * step),
            (h.eval(&(x + ey)).unwrap() - h.eval(&(x - ey)).unwrap()) / (2.0 * step),
        )
    }

    fn fd_laplacian(h: &HarmonicSeries, x: &Point, step: f64) -> f64 {
        let ex = Point::new(step, 0.0);
        let ey = Point::new(0.0, step);
        let c = h.eval(x).unwrap();
        (h.eval(&(x + ex)).unwrap()
            + h.eval(&(x - ex)).unwrap()
            + h.eval(&(x + ey)).unwrap()
            + h.eval(&(x - ey)).unwrap()
            - 4.0 * c)
            / (step * step)
    }

    proptest! {
        #[test]
        fn interior_gradient_matches_differences(
            h in arb_series(SeriesKind::InteriorRegular), r in 0.0..0.9f64, t in -PI..PI
        ) {
            let x = polar(h.center, r, t);
            let g = h.gradient(&x).unwrap();
            let fd = fd_gradient(&h, &x, 1e-6);
            prop_assert!((g - fd).norm() <= 1e-6 * (1.0 + g.norm()));
        }

        #[test]
        fn exterior_gradient_matches_differences(
            h in arb_series(SeriesKind::ExteriorDecaying), r in 0.2..2.0f64, t in -PI..PI
        ) {
            let x = polar(h.center, r, t);
            let g = h.gradient(&x).unwrap();
            let fd = fd_gradient(&h, &x, 1e-6);
            prop_assert!((g - fd).norm() <= 1e-6 * (1.0 + g.norm()));
        }

        #[test]
        fn mean_value_property(
            h in arb_series(SeriesKind::InteriorRegular),
            r0 in 0.0..0.4f64, t0 in -PI..PI, rad in 0.01..0.5f64
        ) {
            let x0 = polar(h.center, r0, t0);
            let m = 512;
            let avg = (0..m)
                .map(|j| h.eval(&polar(x0, rad, 2.0 * PI * j as f64 / m as f64)).unwrap())
                .sum::<f64>() / m as f64;
            prop_assert!((avg - h.eval(&x0).unwrap()).abs() < 1e-10);
        }

        #[test]
        fn series_are_harmonic(
            h in arb_series(SeriesKind::ExteriorDecaying), r in 0.5..1.5f64, t in -PI..PI
        ) {
            let x = polar(h.center, r, t);
            let lap = fd_laplacian(&h, &x, 2e-4);
            let scale = 1.0 + h.eval(&x).unwrap().abs() + h.gradient(&x).unwrap().norm();
            prop_assert!(lap.abs() < 1e-4 * scale / (r * r));
        }
    }
}
