//! Robin boundary data as truncated Fourier series in the angular coordinate.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::equispaced_angles;

/// Default truncation order for boundary data.
pub const DEFAULT_ORDER: usize = 32;

/// Largest truncation order accepted by [`RobinData`].
pub const MAX_ORDER: usize = 512;

/// `mean + Σ_{n=1..N} (cₙ cos nθ + sₙ sin nθ)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FourierData {
    pub mean: f64,
    /// `coeffs[n - 1] = (cₙ, sₙ)`.
    pub coeffs: Vec<[f64; 2]>,
}

impl FourierData {
    pub fn constant(value: f64) -> Self {
        FourierData {
            mean: value,
            coeffs: Vec::new(),
        }
    }

    /// A single mode `c cos nθ + s sin nθ`.
    pub fn mode(n: usize, c: f64, s: f64) -> Self {
        let mut coeffs = vec![[0.0; 2]; n];
        if n > 0 {
            coeffs[n - 1] = [c, s];
        }
        FourierData {
            mean: if n == 0 { c } else { 0.0 },
            coeffs,
        }
    }

    /// Parses the flat layout `[mean, c1, s1, c2, s2, ...]`.
    pub fn from_flat(values: &[f64]) -> Result<Self> {
        let Some((&mean, rest)) = values.split_first() else {
            return Err(Error::Config("coefficient array is empty".into()));
        };
        if rest.len() % 2 != 0 {
            return Err(Error::Config(format!(
                "coefficient array needs an odd length [mean, c1, s1, ...], got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("non-finite Fourier coefficient".into()));
        }
        let coeffs = rest.chunks_exact(2).map(|p| [p[0], p[1]]).collect();
        Ok(FourierData { mean, coeffs })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = vec![self.mean];
        for c in &self.coeffs {
            out.extend_from_slice(c);
        }
        out
    }

    /// Random data with coefficients uniform in `[-amplitude, amplitude]`,
    /// damped by `decay^n`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, order: usize, amplitude: f64, decay: f64) -> Self {
        let mean = rng.gen_range(-amplitude..=amplitude);
        let coeffs = (1..=order)
            .map(|n| {
                let d = decay.powi(n as i32);
                [
                    d * rng.gen_range(-amplitude..=amplitude),
                    d * rng.gen_range(-amplitude..=amplitude),
                ]
            })
            .collect();
        FourierData { mean, coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `(cₙ, sₙ)` for `n ≥ 1`, zero beyond the truncation order.
    pub fn coefficient(&self, n: usize) -> [f64; 2] {
        assert!(n >= 1, "mode index starts at 1");
        self.coeffs.get(n - 1).copied().unwrap_or([0.0; 2])
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .fold(self.mean, |acc, (k, [c, s])| {
                let n = (k + 1) as f64;
                acc + c * (n * theta).cos() + s * (n * theta).sin()
            })
    }

    /// Derivative with respect to the angle.
    pub fn eval_derivative(&self, theta: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, [c, s])| {
                let n = (k + 1) as f64;
                n * (s * (n * theta).cos() - c * (n * theta).sin())
            })
            .sum()
    }

    /// `self + scale * other`, padded to the longer order.
    pub fn add_scaled(&self, other: &FourierData, scale: f64) -> FourierData {
        let n = self.order().max(other.order());
        let coeffs = (1..=n)
            .map(|k| {
                let a = self.coefficient(k);
                let b = other.coefficient(k);
                [a[0] + scale * b[0], a[1] + scale * b[1]]
            })
            .collect();
        FourierData {
            mean: self.mean + scale * other.mean,
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mean == 0.0 && self.coeffs.iter().all(|c| c[0] == 0.0 && c[1] == 0.0)
    }

    /// `|fⁿ|` of the highest retained mode, zero for constant data.
    pub fn tail_magnitude(&self) -> f64 {
        self.coeffs.last().map_or(0.0, |c| c[0].hypot(c[1]))
    }

    /// Minimum and maximum over `m` equispaced angles.
    pub fn range_on_grid(&self, m: usize) -> (f64, f64) {
        equispaced_angles(m)
            .map(|t| self.eval(t))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// Rectangle-rule Fourier projection of equispaced samples.
pub fn fourier_project(samples: &[(f64, f64)], order: usize) -> Result<FourierData> {
    let m = samples.len();
    let needed = 2 * order + 1;
    if m < needed {
        return Err(Error::Aliasing {
            samples: m,
            order,
            needed,
        });
    }
    let w = 1.0 / m as f64;
    let mean = samples.iter().map(|(_, v)| v).sum::<f64>() * w;
    let coeffs = (1..=order)
        .map(|n| {
            let n = n as f64;
            samples.iter().fold([0.0, 0.0], |[c, s], (t, v)| {
                [
                    c + 2.0 * w * v * (n * t).cos(),
                    s + 2.0 * w * v * (n * t).sin(),
                ]
            })
        })
        .collect();
    Ok(FourierData { mean, coeffs })
}

/// Samples `f` at `m` equispaced angles on `[-π, π)` and projects to `order`.
pub fn project_fn(f: impl Fn(f64) -> f64, order: usize, m: usize) -> Result<FourierData> {
    let samples: Vec<(f64, f64)> = equispaced_angles(m).map(|t| (t, f(t))).collect();
    fourier_project(&samples, order)
}

/// Boundary data `f_Ω, g_Ω` on `∂Ω` (angle about the origin) and `f_D, g_D`
/// on `∂D_ε` (angle about `c`). The exact problem sees `f + ε g`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RobinData {
    pub f_outer: FourierData,
    pub g_outer: FourierData,
    pub f_inclusion: FourierData,
    pub g_inclusion: FourierData,
}

impl RobinData {
    pub fn new(
        f_outer: FourierData,
        g_outer: FourierData,
        f_inclusion: FourierData,
        g_inclusion: FourierData,
    ) -> Result<Self> {
        let data = RobinData {
            f_outer,
            g_outer,
            f_inclusion,
            g_inclusion,
        };
        if data.order() > MAX_ORDER {
            return Err(Error::Parameter(format!(
                "boundary data order {} exceeds the maximum {MAX_ORDER}",
                data.order()
            )));
        }
        Ok(data)
    }

    /// Leading-order data only (`g ≡ 0`).
    pub fn leading(f_outer: FourierData, f_inclusion: FourierData) -> Self {
        RobinData {
            f_outer,
            f_inclusion,
            ..Default::default()
        }
    }

    pub fn constant(k: f64) -> Self {
        RobinData::leading(FourierData::constant(k), FourierData::constant(k))
    }

    pub fn order(&self) -> usize {
        [
            &self.f_outer,
            &self.g_outer,
            &self.f_inclusion,
            &self.g_inclusion,
        ]
        .iter()
        .map(|d| d.order())
        .max()
        .unwrap_or(0)
    }

    /// `f_Ω + ε g_Ω`.
    pub fn total_outer(&self, eps: f64) -> FourierData {
        self.f_outer.add_scaled(&self.g_outer, eps)
    }

    /// `f_D + ε g_D`.
    pub fn total_inclusion(&self, eps: f64) -> FourierData {
        self.f_inclusion.add_scaled(&self.g_inclusion, eps)
    }

    /// Largest `|fⁿ|` at the truncation order among the four series.
    pub fn tail_magnitude(&self) -> f64 {
        [
            &self.f_outer,
            &self.g_outer,
            &self.f_inclusion,
            &self.g_inclusion,
        ]
        .iter()
        .map(|d| d.tail_magnitude())
        .fold(0.0, f64::max)
    }
}

/// Fine composite-trapezoid quadrature of `(1/2π)∫_{-π}^{π} f dθ`.
pub(crate) fn circle_average(f: impl Fn(f64) -> f64, m: usize) -> f64 {
    equispaced_angles(m).map(f).sum::<f64>() / m as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_projects_to_mean() {
        let fd = project_fn(|_| 3.0, 2, 8).unwrap();
        assert!((fd.mean - 3.0).abs() < 1e-15);
        assert!(fd.coeffs.iter().flatten().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn cosine_projects_to_first_mode() {
        let fd = project_fn(f64::cos, 2, 8).unwrap();
        assert!(fd.mean.abs() < 1e-15);
        assert!((fd.coeffs[0][0] - 1.0).abs() < 1e-15 && fd.coeffs[0][1].abs() < 1e-15);
        assert!(fd.coeffs[1].iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn cos3_matches_fine_quadrature() {
        let fd = project_fn(|t| (3.0 * t).cos(), 5, 16).unwrap();
        // independent oracle: the Fourier integrals on a 20000-point composite rule
        let m = 20_000;
        let oracle = |n: f64, trig: fn(f64) -> f64| {
            2.0 * circle_average(|t| (3.0 * t).cos() * trig(n * t), m)
        };
        for n in 1..=5 {
            let [c, s] = fd.coefficient(n);
            assert!((c - oracle(n as f64, f64::cos)).abs() < 1e-13);
            assert!((s - oracle(n as f64, f64::sin)).abs() < 1e-13);
        }
        assert!((fd.coefficient(3)[0] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_aliasing() {
        let err = project_fn(f64::cos, 4, 8).unwrap_err();
        assert!(matches!(err, Error::Aliasing { needed: 9, .. }));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(FourierData::constant(1.0).eval(0.7), 1.0);
        assert_eq!(FourierData::mode(1, 1.0, 0.0).eval(0.0), 1.0);
        let fd = FourierData {
            mean: 0.0,
            coeffs: vec![[0.0, 1.0], [2.0, 0.0]],
        };
        assert!((fd.eval(PI / 2.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn flat_layout() {
        let fd = FourierData::from_flat(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(fd.mean, 1.0);
        assert_eq!(fd.coeffs, vec![[2.0, 3.0]]);
        assert_eq!(fd.to_flat(), vec![1.0, 2.0, 3.0]);
        assert!(FourierData::from_flat(&[1.0, 2.0]).is_err());
        assert!(FourierData::from_flat(&[]).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let fd = FourierData {
            mean: 0.3,
            coeffs: vec![[0.5, -1.0], [0.2, 0.7]],
        };
        let h = 1e-6;
        for t in [-2.0, 0.1, 1.3] {
            let fdiff = (fd.eval(t + h) - fd.eval(t - h)) / (2.0 * h);
            assert!((fdiff - fd.eval_derivative(t)).abs() < 1e-8);
        }
    }

    fn arb_fourier() -> impl Strategy<Value = FourierData> {
        (
            -5.0..5.0f64,
            prop::collection::vec(prop::array::uniform2(-5.0..5.0f64), 0..12),
        )
            .prop_map(|(mean, coeffs)| FourierData { mean, coeffs })
    }

    proptest! {
        #[test]
        fn projection_round_trip(fd in arb_fourier()) {
            let n = fd.order();
            let back = project_fn(|t| fd.eval(t), n, 2 * n + 2).unwrap();
            prop_assert!((back.mean - fd.mean).abs() < 1e-12);
            for k in 1..=n {
                let (a, b) = (back.coefficient(k), fd.coefficient(k));
                prop_assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
            }
        }

        #[test]
        fn parseval(fd in arb_fourier()) {
            let lhs = circle_average(|t| fd.eval(t).powi(2), 4096);
            let rhs = fd.mean * fd.mean
                + 0.5 * fd.coeffs.iter().map(|c| c[0] * c[0] + c[1] * c[1]).sum::<f64>();
            prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs));
        }

        #[test]
        fn coefficients_bounded_by_twice_sup(fd in arb_fourier()) {
            let (lo, hi) = fd.range_on_grid(4096);
            let sup = lo.abs().max(hi.abs());
            for c in &fd.coeffs {
                prop_assert!(c[0].hypot(c[1]) <= 2.0 * sup + 1e-9);
            }
        }
    }
}
