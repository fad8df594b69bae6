//! High-accuracy solutions of the exact problem on `Ω_ε`:
//!
//! `Δu = 0` in `Ω_ε`, `u + κ ∂u/∂n = f + εg` on `∂Ω_ε`.
//!
//! The solution is represented as an interior series about the origin plus
//! an exterior series (with a `log` term) about `c`, both harmonic on `Ω_ε`.
//! For `c = 0` each angular mode is an exact 2×2 solve; otherwise the
//! coefficients are fitted by least squares on boundary collocation points.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use num_complex::Complex64;

use crate::boundary_data::{FourierData, RobinData};
use crate::compound::CompoundApproximation;
use crate::error::{Error, Result};
use crate::geometry::{equispaced_angles, Boundary, BoundaryPoint, Geometry, Point};
use crate::grid::polar_grid;
use crate::interior::{check_kappa, offset_angles};
use crate::series::HarmonicSeries;

/// Largest 2-norm condition number accepted for a concentric mode system.
pub const MAX_CONDITION: f64 = 1e12;

/// Default relative Robin residual tolerance of the collocation solver.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResidualReport {
    /// Max Robin residual on the outer validation grid.
    pub outer: f64,
    /// Max Robin residual on the inclusion validation grid.
    pub inclusion: f64,
    /// Worst condition number (concentric: per mode 2×2; eccentric: of the
    /// column-scaled collocation matrix).
    pub condition: f64,
    /// Worst mode for the concentric solver.
    pub worst_mode: usize,
    /// Most negative margin of the maximum-principle check (`≥ -tol`).
    pub max_principle_margin: f64,
}

impl ResidualReport {
    pub fn max_residual(&self) -> f64 {
        self.outer.max(self.inclusion)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub geometry: Geometry,
    pub kappa: f64,
    /// Regular part about the origin, modes `(r/R)ⁿ`.
    pub outer_series: HarmonicSeries,
    /// Singular part about `c`: `log r` plus modes `(ε/r)ⁿ`.
    pub inner_series: HarmonicSeries,
    pub residual_report: ResidualReport,
}

impl ReferenceSolution {
    pub fn eval(&self, x: &Point) -> Result<f64> {
        self.eval_with_gradient(x).map(|(v, _)| v)
    }

    pub fn eval_with_gradient(&self, x: &Point) -> Result<(f64, Point)> {
        if !self.geometry.classify(x).in_closure() {
            return Err(Error::OutOfDomain { x: x.x, y: x.y });
        }
        let (a, ga) = self.outer_series.eval_with_gradient(x)?;
        let (b, gb) = self.inner_series.eval_with_gradient(x)?;
        Ok((a + b, ga + gb))
    }

    pub fn robin_trace(&self, p: &BoundaryPoint) -> Result<f64> {
        let x = self.geometry.position(p);
        let (v, g) = self.eval_with_gradient(&x)?;
        Ok(v + self.kappa * g.dot(&self.geometry.normal(p)))
    }

    /// Max Robin residual against `data` on offset grids of `m` points.
    fn residuals(
        &self,
        outer: &FourierData,
        inclusion: &FourierData,
        m: usize,
    ) -> Result<(f64, f64)> {
        let worst = |which: Boundary, data: &FourierData| -> Result<f64> {
            offset_angles(m).try_fold(0.0f64, |acc, angle| {
                let p = BoundaryPoint { which, angle };
                Ok(acc.max((self.robin_trace(&p)? - data.eval(angle)).abs()))
            })
        };
        Ok((
            worst(Boundary::Outer, outer)?,
            worst(Boundary::Inclusion, inclusion)?,
        ))
    }

    /// Smallest margin of `inf b - tol ≤ u ≤ sup b + tol` over `points`;
    /// negative values are violations.
    pub fn max_principle_margin(
        &self,
        points: &[Point],
        lower: f64,
        upper: f64,
        tol: f64,
    ) -> Result<(f64, Point)> {
        max_principle_margin(|x| self.eval(x), points, lower, upper, tol)
    }
}

/// Smallest margin of `lower - tol ≤ u(x) ≤ upper + tol` over `points` and
/// where it occurs.
pub fn max_principle_margin(
    u: impl Fn(&Point) -> Result<f64>,
    points: &[Point],
    lower: f64,
    upper: f64,
    tol: f64,
) -> Result<(f64, Point)> {
    let mut worst = (f64::INFINITY, Point::zeros());
    for x in points {
        let v = u(x)?;
        let margin = (v - (lower - tol)).min((upper + tol) - v);
        if margin < worst.0 {
            worst = (margin, *x);
        }
    }
    Ok(worst)
}

/// Sampling set for the maximum-principle check run on every solve.
fn principle_points(g: &Geometry, order: usize) -> Vec<Point> {
    let m = 4 * order.max(16);
    let mut pts = polar_grid(g, 16, m);
    for which in [Boundary::Outer, Boundary::Inclusion] {
        pts.extend(offset_angles(m).map(|angle| g.position(&BoundaryPoint { which, angle })));
    }
    pts
}

/// Bounds of the Robin data over both boundaries and the check tolerance
/// `1e-8·span` plus a roundoff allowance.
pub fn data_bounds(outer: &FourierData, inclusion: &FourierData, order: usize) -> (f64, f64, f64) {
    let m = 16 * (order + 1);
    let (a, b) = outer.range_on_grid(m);
    let (c, d) = inclusion.range_on_grid(m);
    let (lo, hi) = (a.min(c), b.max(d));
    let tol = 1e-8 * (hi - lo) + 1e-12 * lo.abs().max(hi.abs()).max(1.0);
    (lo, hi, tol)
}

fn finish(
    mut sol: ReferenceSolution,
    outer: &FourierData,
    inclusion: &FourierData,
    order: usize,
    validation: usize,
    tolerance: f64,
) -> Result<ReferenceSolution> {
    let (ro, ri) = sol.residuals(outer, inclusion, validation)?;
    sol.residual_report.outer = ro;
    sol.residual_report.inclusion = ri;
    let scale = outer
        .range_on_grid(64)
        .1
        .abs()
        .max(outer.range_on_grid(64).0.abs())
        .max(inclusion.range_on_grid(64).1.abs())
        .max(inclusion.range_on_grid(64).0.abs())
        .max(1.0);
    let tol = tolerance * scale;
    if !(ro.max(ri) <= tol) {
        return Err(Error::Residual {
            what: "reference solution",
            residual: ro.max(ri),
            tolerance: tol,
        });
    }
    let (lo, hi, mp_tol) = data_bounds(outer, inclusion, order);
    let pts = principle_points(&sol.geometry, order);
    // the computed field is exact for data perturbed by its residual
    let mp_tol = mp_tol + 4.0 * ro.max(ri);
    let (margin, at) = sol.max_principle_margin(&pts, lo, hi, mp_tol)?;
    sol.residual_report.max_principle_margin = margin;
    if margin < 0.0 {
        return Err(Error::MaximumPrinciple {
            excess: -margin,
            x: at.x,
            y: at.y,
        });
    }
    Ok(sol)
}

fn truncate(f: &FourierData, order: usize) -> FourierData {
    FourierData {
        mean: f.mean,
        coeffs: f.coeffs.iter().take(order).copied().collect(),
    }
}

fn condition(m: &Matrix2<f64>) -> f64 {
    let sv = m.singular_values();
    let (hi, lo) = (sv.max(), sv.min());
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Exact mode-matching solve for an inclusion centered at the origin.
pub fn solve_exact_concentric(
    g: &Geometry,
    kappa: f64,
    data: &RobinData,
    order: usize,
) -> Result<ReferenceSolution> {
    check_kappa(kappa)?;
    if !g.is_centered() {
        return Err(Error::Parameter("concentric solver needs c = 0".into()));
    }
    let (r, eps) = (g.radius(), g.eps());
    let outer = truncate(&data.total_outer(eps), order);
    let inclusion = truncate(&data.total_inclusion(eps), order);

    let mut report = ResidualReport::default();
    let mut solve =
        |mode: usize, m: Matrix2<f64>, rhs: [Vector2<f64>; 2]| -> Result<[Vector2<f64>; 2]> {
            let cond = condition(&m);
            if !(cond <= MAX_CONDITION) {
                return Err(Error::IllConditioned {
                    mode,
                    condition: cond,
                });
            }
            if cond > report.condition {
                report.condition = cond;
                report.worst_mode = mode;
            }
            let lu = m.lu();
            let a = lu.solve(&rhs[0]).ok_or(Error::IllConditioned {
                mode,
                condition: cond,
            })?;
            let b = lu.solve(&rhs[1]).ok_or(Error::IllConditioned {
                mode,
                condition: cond,
            })?;
            Ok([a, b])
        };

    // mode 0: u = a + b log r
    let m0 = Matrix2::new(1.0, r.ln() + kappa / r, 1.0, eps.ln() - kappa / eps);
    let rhs0 = Vector2::new(outer.mean, inclusion.mean);
    let [s0, _] = solve(0, m0, [rhs0, rhs0])?;

    // mode n: u = a (r/R)ⁿ + b (ε/r)ⁿ
    let mut outer_coeffs = Vec::with_capacity(order);
    let mut inner_coeffs = Vec::with_capacity(order);
    for n in 1..=order {
        let nf = n as f64;
        let q = (eps / r).powi(n as i32);
        let m = Matrix2::new(
            1.0 + kappa * nf / r,
            q * (1.0 - kappa * nf / r),
            q * (1.0 - kappa * nf / eps),
            1.0 + kappa * nf / eps,
        );
        let [fo, fi] = [outer.coefficient(n), inclusion.coefficient(n)];
        let [cos, sin] = solve(
            n,
            m,
            [Vector2::new(fo[0], fi[0]), Vector2::new(fo[1], fi[1])],
        )?;
        outer_coeffs.push([cos[0], sin[0]]);
        inner_coeffs.push([cos[1], sin[1]]);
    }

    let sol = ReferenceSolution {
        geometry: *g,
        kappa,
        outer_series: HarmonicSeries::interior(Point::zeros(), r, s0[0], outer_coeffs),
        inner_series: HarmonicSeries::exterior(Point::zeros(), eps, 0.0, s0[1], inner_coeffs),
        residual_report: report,
    };
    finish(
        sol,
        &outer,
        &inclusion,
        order,
        2 * (4 * order).max(64),
        DEFAULT_TOLERANCE,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollocationOptions {
    pub order: usize,
    /// Collocation points per boundary; at least `2(2N + 2)`.
    pub points: usize,
    /// Relative Robin residual tolerance on the validation grid.
    pub tolerance: f64,
}

impl CollocationOptions {
    pub fn new(order: usize) -> Self {
        CollocationOptions {
            order,
            points: 2 * (2 * order + 2),
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// Value and gradient of every basis function at `x`, in column order
/// `[1, Re wⁿ, Im wⁿ (n=1..N), log|x-c|, Re uⁿ, -Im uⁿ (n=1..N)]` with
/// `w = x/R`, `u = ε/(x - c)`.
fn basis_row(g: &Geometry, order: usize, x: &Point, out: &mut Vec<(f64, Point)>) {
    out.clear();
    out.push((1.0, Point::zeros()));
    let r = g.radius();
    let w = Complex64::new(x.x, x.y) / r;
    let mut wn = Complex64::new(1.0, 0.0); // w^{n-1}
    for n in 1..=order {
        let d = wn * n as f64 / r; // d/dz wⁿ
        wn *= w;
        // Re f has gradient (Re f', -Im f'); Im f = Re(-i f)
        out.push((wn.re, Point::new(d.re, -d.im)));
        out.push((wn.im, Point::new(d.im, d.re)));
    }
    let dz = Complex64::new(x.x - g.center().x, x.y - g.center().y);
    let inv = 1.0 / dz;
    out.push((dz.norm().ln(), Point::new(inv.re, -inv.im)));
    let u = g.eps() * inv;
    let mut un = Complex64::new(1.0, 0.0);
    for n in 1..=order {
        un *= u;
        let d = -(n as f64) * un * inv; // d/dz uⁿ
                                        // uⁿ = (ε/ρ)ⁿ e^{-inϑ}: sin nϑ column is -Im uⁿ
        out.push((un.re, Point::new(d.re, -d.im)));
        out.push((-un.im, Point::new(-d.im, -d.re)));
    }
}

/// Least-squares collocation for an arbitrary admissible inclusion center.
pub fn solve_exact_eccentric(
    g: &Geometry,
    kappa: f64,
    data: &RobinData,
    opts: &CollocationOptions,
) -> Result<ReferenceSolution> {
    check_kappa(kappa)?;
    let order = opts.order;
    let m = opts.points;
    let needed = 2 * (2 * order + 2);
    if m < needed {
        return Err(Error::Aliasing {
            samples: m,
            order,
            needed,
        });
    }
    let eps = g.eps();
    let outer = truncate(&data.total_outer(eps), order);
    let inclusion = truncate(&data.total_inclusion(eps), order);

    let cols = 4 * order + 2;
    let mut a = DMatrix::<f64>::zeros(2 * m, cols);
    let mut rhs = DVector::<f64>::zeros(2 * m);
    let mut row = Vec::with_capacity(cols);
    for (block, which, fd) in [
        (0, Boundary::Outer, &outer),
        (1, Boundary::Inclusion, &inclusion),
    ] {
        for (j, angle) in equispaced_angles(m).enumerate() {
            let p = BoundaryPoint { which, angle };
            let x = g.position(&p);
            let n = g.normal(&p);
            basis_row(g, order, &x, &mut row);
            let i = block * m + j;
            for (k, (v, grad)) in row.iter().enumerate() {
                a[(i, k)] = v + kappa * grad.dot(&n);
            }
            rhs[i] = fd.eval(angle);
        }
    }
    let scales: Vec<f64> = (0..cols)
        .map(|k| {
            let s = a.column(k).norm();
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    for (k, s) in scales.iter().enumerate() {
        a.column_mut(k).unscale_mut(*s);
    }
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    let lstsq = |b: &DVector<f64>| {
        svd.solve(b, smax * 1e-15)
            .map_err(|e| Error::Parameter(format!("least-squares solve failed: {e}")))
    };
    let mut x = lstsq(&rhs)?;
    // one step of iterative refinement
    x += lstsq(&(&rhs - &a * &x))?;
    let w: Vec<f64> = x.iter().zip(&scales).map(|(v, s)| v / s).collect();

    let pairs = |offset: usize| -> Vec<[f64; 2]> {
        (0..order)
            .map(|k| [w[offset + 2 * k], w[offset + 2 * k + 1]])
            .collect()
    };
    let sol = ReferenceSolution {
        geometry: *g,
        kappa,
        outer_series: HarmonicSeries::interior(Point::zeros(), g.radius(), w[0], pairs(1)),
        inner_series: HarmonicSeries::exterior(
            g.center(),
            eps,
            0.0,
            w[2 * order + 1],
            pairs(2 * order + 2),
        ),
        residual_report: ResidualReport {
            condition: if smin > 0.0 {
                smax / smin
            } else {
                f64::INFINITY
            },
            ..Default::default()
        },
    };
    finish(sol, &outer, &inclusion, order, 2 * m, opts.tolerance)
}

/// Chooses the concentric solver when `c = 0`, collocation otherwise.
pub fn solve_exact(
    g: &Geometry,
    kappa: f64,
    data: &RobinData,
    opts: &CollocationOptions,
) -> Result<ReferenceSolution> {
    if g.is_centered() {
        solve_exact_concentric(g, kappa, data, opts.order)
    } else {
        solve_exact_eccentric(g, kappa, data, opts)
    }
}

/// [`solve_exact`], doubling the series order (and the collocation count
/// with it) while the validation residual is too large.
pub fn solve_exact_adaptive(
    g: &Geometry,
    kappa: f64,
    data: &RobinData,
    opts: &CollocationOptions,
    max_order: usize,
) -> Result<ReferenceSolution> {
    let mut opts = *opts;
    loop {
        match solve_exact(g, kappa, data, &opts) {
            Err(Error::Residual { .. }) if 2 * opts.order <= max_order => {
                let factor = opts.points as f64 / opts.order as f64;
                opts.order *= 2;
                opts.points = (factor * opts.order as f64).ceil() as usize;
            }
            other => return other,
        }
    }
}

/// Points at which `|uᵉ - u₀ᵉ|` is sampled: `boundary` equispaced points on
/// each circle plus a `radial × angular` polar grid about `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub boundary: usize,
    pub radial: usize,
    pub angular: usize,
}

impl Sampling {
    /// `4N` points per boundary and a 32 × 64 polar grid.
    pub fn for_order(order: usize) -> Self {
        Sampling {
            boundary: 4 * order.max(1),
            radial: 32,
            angular: 64,
        }
    }

    pub fn points(&self, g: &Geometry) -> Vec<Point> {
        let mut pts = Vec::new();
        for which in [Boundary::Outer, Boundary::Inclusion] {
            pts.extend(
                g.sample_boundary(which, self.boundary)
                    .iter()
                    .map(|p| g.position(p)),
            );
        }
        pts.extend(polar_grid(g, self.radial, self.angular));
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupDifference {
    pub value: f64,
    pub argmax: Point,
}

/// `max |uᵉ - u₀ᵉ|` over the sampling set.
pub fn sup_difference(
    reference: &ReferenceSolution,
    approx: &CompoundApproximation,
    sampling: &Sampling,
) -> Result<SupDifference> {
    if reference.geometry != approx.geometry || reference.kappa != approx.kappa {
        return Err(Error::Parameter(
            "reference and approximation use different geometry or kappa".into(),
        ));
    }
    let mut best = SupDifference {
        value: 0.0,
        argmax: approx.geometry.center(),
    };
    for x in sampling.points(&reference.geometry) {
        let d = (reference.eval(&x)? - approx.eval(&x)?).abs();
        if d > best.value || d.is_nan() {
            best = SupDifference {
                value: d,
                argmax: x,
            };
        }
    }
    Ok(best)
}
