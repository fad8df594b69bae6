//! Sweeps over `(ε, κ)`, the uniform bound `B(ε, κ)`, convergence orders and
//! randomized checks of the supporting estimates.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boundary_data::{circle_average, FourierData, RobinData};
use crate::compound::{BuildOptions, CompoundApproximation};
use crate::error::{Error, Result};
use crate::exterior::{exterior_green, h_kappa, solve_exterior_bounded};
use crate::geometry::{equispaced_angles, Geometry, Point};
use crate::grid::fmt17;
use crate::interior::check_kappa;
use crate::reference::{
    data_bounds, max_principle_margin, solve_exact, solve_exact_adaptive, CollocationOptions,
    ReferenceSolution, Sampling, DEFAULT_TOLERANCE,
};
use crate::series::HarmonicSeries;

/// Header of sweep CSV files.
pub const CSV_HEADER: &str =
    "eps,kappa,sup_error,bound,ratio,argmax_x,argmax_y,solver_residual,status";

/// `B(ε, κ) = ε(1 + κ)(1 + (κ + 1)/(κ/ε - log ε))`.
pub fn bound_b(eps: f64, kappa: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Parameter(format!(
            "bound needs 0 < eps < 1, got {eps}"
        )));
    }
    check_kappa(kappa)?;
    Ok(eps * (1.0 + kappa) * (1.0 + (kappa + 1.0) / (kappa / eps - eps.ln())))
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    Failed(String),
}

impl RowStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, RowStatus::Ok)
    }

    /// CSV cell; commas in messages become semicolons.
    pub fn cell(&self) -> String {
        match self {
            RowStatus::Ok => "ok".into(),
            RowStatus::Failed(msg) => format!("failed: {}", msg.replace([',', '\n'], ";")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub eps: f64,
    pub kappa: f64,
    pub sup_error: f64,
    pub bound: f64,
    pub ratio: f64,
    pub argmax: Point,
    /// Largest Robin residual of the reference solve.
    pub solver_residual: f64,
    pub status: RowStatus,
}

impl SweepRecord {
    fn failed(eps: f64, kappa: f64, err: &Error) -> Self {
        SweepRecord {
            eps,
            kappa,
            sup_error: f64::NAN,
            bound: bound_b(eps, kappa).unwrap_or(f64::NAN),
            ratio: f64::NAN,
            argmax: Point::new(f64::NAN, f64::NAN),
            solver_residual: f64::NAN,
            status: RowStatus::Failed(err.to_string()),
        }
    }

    pub fn csv_row(&self) -> String {
        [
            fmt17(self.eps),
            fmt17(self.kappa),
            fmt17(self.sup_error),
            fmt17(self.bound),
            fmt17(self.ratio),
            fmt17(self.argmax.x),
            fmt17(self.argmax.y),
            fmt17(self.solver_residual),
            self.status.cell(),
        ]
        .join(",")
    }
}

/// Everything needed to turn `(ε, κ)` into a [`SweepRecord`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub build: BuildOptions,
    /// Series order of the reference solution.
    pub reference_order: usize,
    /// Collocation points per boundary for `c ≠ 0`; `None` uses `2(2N + 2)`.
    pub collocation: Option<usize>,
    pub tolerance: f64,
    /// `None` uses [`Sampling::for_order`] with the reference order.
    pub sampling: Option<Sampling>,
    /// Multiplies `c₀` before `w₀` is built; `1` except in negative controls.
    pub c0_factor: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            build: BuildOptions::default(),
            reference_order: 32,
            collocation: None,
            tolerance: DEFAULT_TOLERANCE,
            sampling: None,
            c0_factor: 1.0,
        }
    }
}

impl SolverOptions {
    pub fn collocation(&self) -> CollocationOptions {
        let mut c = CollocationOptions::new(self.reference_order);
        if let Some(m) = self.collocation {
            c.points = m;
        }
        c.tolerance = self.tolerance;
        c
    }

    pub fn sampling(&self) -> Sampling {
        self.sampling
            .unwrap_or_else(|| Sampling::for_order(self.reference_order))
    }

    pub fn approximate(
        &self,
        g: &Geometry,
        kappa: f64,
        data: &RobinData,
    ) -> Result<CompoundApproximation> {
        let ca = CompoundApproximation::build(g, kappa, data, &self.build)?;
        if self.c0_factor == 1.0 {
            Ok(ca)
        } else {
            ca.with_c0_scaled(self.c0_factor)
        }
    }

    pub fn reference(
        &self,
        g: &Geometry,
        kappa: f64,
        data: &RobinData,
    ) -> Result<ReferenceSolution> {
        solve_exact(g, kappa, data, &self.collocation())
    }
}

/// Builds both solutions at one `(ε, κ)` and measures their sup difference.
pub fn compare(
    base: &Geometry,
    eps: f64,
    kappa: f64,
    data: &RobinData,
    opts: &SolverOptions,
) -> SweepRecord {
    let run = || -> Result<SweepRecord> {
        let g = base.with_eps(eps)?;
        let bound = bound_b(eps, kappa)?;
        let reference = opts.reference(&g, kappa, data)?;
        let approx = opts.approximate(&g, kappa, data)?;
        let d = crate::reference::sup_difference(&reference, &approx, &opts.sampling())?;
        Ok(SweepRecord {
            eps,
            kappa,
            sup_error: d.value,
            bound,
            ratio: d.value / bound,
            argmax: d.argmax,
            solver_residual: reference.residual_report.max_residual(),
            status: RowStatus::Ok,
        })
    };
    run().unwrap_or_else(|e| SweepRecord::failed(eps, kappa, &e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// `ε` of this geometry is replaced by each entry of `eps`.
    pub geometry: Geometry,
    pub data: RobinData,
    pub eps: Vec<f64>,
    pub kappa: Vec<f64>,
    pub solver: SolverOptions,
    /// Worker threads; `0` lets the pool decide.
    pub workers: usize,
}

/// One record per `(κ, ε)` pair, κ-major in configuration order.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    let pairs: Vec<(f64, f64)> = config
        .kappa
        .iter()
        .flat_map(|&k| config.eps.iter().map(move |&e| (e, k)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    Ok(pool.install(|| {
        pairs
            .par_iter()
            .map(|&(e, k)| compare(&config.geometry, e, k, &config.data, &config.solver))
            .collect()
    }))
}

pub fn write_sweep_csv<W: Write>(mut w: W, records: &[SweepRecord]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{}", r.csv_row())?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderEstimate {
    pub kappa: f64,
    pub eps_pairs: Vec<(f64, f64)>,
    /// `log₂(e(ε)/e(ε/2))` for each pair.
    pub orders: Vec<f64>,
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Groups successful records by `κ` and fits an order to every `ε`-halving
/// pair. Fails if some `κ` has no such pair.
pub fn estimate_orders(records: &[SweepRecord]) -> Result<Vec<OrderEstimate>> {
    let mut groups: Vec<(f64, Vec<&SweepRecord>)> = Vec::new();
    for r in records.iter().filter(|r| r.status.is_ok()) {
        match groups.iter_mut().find(|(k, _)| same(*k, r.kappa)) {
            Some((_, rows)) => rows.push(r),
            None => groups.push((r.kappa, vec![r])),
        }
    }
    if groups.is_empty() {
        return Err(Error::MissingPairs(f64::NAN));
    }
    groups
        .into_iter()
        .map(|(kappa, mut rows)| {
            rows.sort_by(|a, b| b.eps.total_cmp(&a.eps));
            let mut est = OrderEstimate {
                kappa,
                eps_pairs: Vec::new(),
                orders: Vec::new(),
            };
            for a in &rows {
                if let Some(b) = rows.iter().find(|b| same(b.eps, a.eps / 2.0)) {
                    est.eps_pairs.push((a.eps, b.eps));
                    est.orders.push((a.sup_error / b.sup_error).log2());
                }
            }
            if est.orders.is_empty() {
                Err(Error::MissingPairs(kappa))
            } else {
                Ok(est)
            }
        })
        .collect()
}

/// Outcome of a randomized validator.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub name: &'static str,
    pub seed: u64,
    pub trials: usize,
    /// `(trial, description)` of each failed check.
    pub violations: Vec<(usize, String)>,
    /// Smallest slack seen across all checks (negative means violated).
    pub worst_margin: f64,
    /// Result of the built-in negative control, where there is one.
    pub control_detected: Option<bool>,
}

impl ValidationReport {
    fn new(name: &'static str, seed: u64, trials: usize) -> Self {
        ValidationReport {
            name,
            seed,
            trials,
            violations: Vec::new(),
            worst_margin: f64::INFINITY,
            control_detected: None,
        }
    }

    fn check(&mut self, trial: usize, margin: f64, what: impl FnOnce() -> String) {
        self.worst_margin = self.worst_margin.min(margin);
        if !(margin >= 0.0) {
            self.violations.push((trial, what()));
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.control_detected != Some(false)
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "# {} seed={} trials={}",
            self.name, self.seed, self.trials
        )?;
        writeln!(f, "violations: {}", self.violations.len())?;
        writeln!(f, "worst margin: {:e}", self.worst_margin)?;
        if let Some(d) = self.control_detected {
            writeln!(f, "negative control detected: {d}")?;
        }
        for (t, msg) in self.violations.iter().take(20) {
            writeln!(f, "  trial {t}: {msg}")?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

fn random_geometry(rng: &mut ChaCha8Rng) -> Geometry {
    let radius = rng.gen_range(0.5..2.0);
    let (r, t) = (rng.gen_range(0.0..0.6) * radius, rng.gen_range(-PI..PI));
    let center = Point::new(r * t.cos(), r * t.sin());
    let eps = rng.gen_range(0.05..0.8) * (radius - r) / 2.0;
    Geometry::new(radius, center, eps).expect("sampled inside the admissible range")
}

fn random_data(rng: &mut ChaCha8Rng, order: usize) -> RobinData {
    RobinData::leading(
        FourierData::random(rng, order, 1.0, 0.7),
        FourierData::random(rng, order, 1.0, 0.7),
    )
}

/// Random Robin data on random geometries: the exact solution must stay
/// between the extreme data values. The last trial is repeated with the
/// solution shifted by `span + 1` as a negative control.
pub fn validate_max_principle(trials: usize, seed: u64) -> ValidationReport {
    let mut report = ValidationReport::new("robin maximum principle", seed, trials);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = 6;
    let opts = CollocationOptions::new(24);
    let mut last = None;
    for trial in 0..trials {
        let g = random_geometry(&mut rng);
        let kappa = 10f64.powf(rng.gen_range(-1.0..1.0));
        let data = random_data(&mut rng, order);
        let sol = match solve_exact_adaptive(&g, kappa, &data, &opts, 96) {
            Ok(s) => s,
            Err(e) => {
                report.check(trial, -1.0, || format!("solve rejected: {e}"));
                continue;
            }
        };
        let (lo, hi, tol) = data_bounds(&data.f_outer, &data.f_inclusion, order);
        let tol = tol + 4.0 * sol.residual_report.max_residual();
        let pts = Sampling {
            boundary: 128,
            radial: 24,
            angular: 48,
        }
        .points(&g);
        match max_principle_margin(|x| sol.eval(x), &pts, lo, hi, tol) {
            Ok((m, at)) => report.check(trial, m, || {
                format!("bound exceeded by {:e} at ({}, {})", -m, at.x, at.y)
            }),
            Err(e) => report.check(trial, -1.0, || e.to_string()),
        }
        last = Some((sol, pts, lo, hi, tol));
    }
    if let Some((sol, pts, lo, hi, tol)) = last {
        let shift = hi - lo + 1.0;
        let detected = max_principle_margin(|x| Ok(sol.eval(x)? + shift), &pts, lo, hi, tol)
            .map(|(m, _)| m < 0.0)
            .unwrap_or(false);
        report.control_detected = Some(detected);
    }
    report
}

/// The three local estimates for a harmonic `a` on the closed disk
/// `B_R(x₀)`:
///
/// - `|a(x) - a(x₀)| ≤ 2t/(R - t) · (a(x₀) - inf a)`
/// - `|∇a(x₀)| ≤ (2/R) ‖a‖_∞`
/// - `|∇a(x) - ∇a(x₀)| ≤ (2‖a‖_∞/R) · t(2R - t)/(R - t)²`
///
/// with `t = |x - x₀|`. Extremes of `a` come from a fine boundary grid,
/// widened by a Lipschitz bound on the grid spacing.
pub fn validate_harnack_bounds(trials: usize, seed: u64) -> ValidationReport {
    let mut report = ValidationReport::new("harnack-type local bounds", seed, trials);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = 4096;
    for trial in 0..trials {
        let radius = rng.gen_range(0.2..3.0);
        let x0 = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let order = rng.gen_range(1..=10);
        let decay = rng.gen_range(0.3..1.0);
        let f = FourierData::random(&mut rng, order, 1.0, decay);
        let a = HarmonicSeries::interior(x0, radius, f.mean, f.coeffs.clone());
        let (lo, hi) = f.range_on_grid(grid);
        // |∂θ a| ≤ Σ n|aⁿ| on the circle; grid extremes are within half a step
        let lip: f64 = f
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, [c, s])| (k + 1) as f64 * c.hypot(*s))
            .sum();
        let slack = lip * PI / grid as f64 + 1e-12;
        let inf = lo - slack;
        let sup_abs = lo.abs().max(hi.abs()) + slack;
        let (a0, grad0) = a.eval_with_gradient(&x0).expect("interior series");
        let tol = 1e-12 * (1.0 + sup_abs);
        report.check(trial, 2.0 * sup_abs / radius - grad0.norm() + tol, || {
            format!("|grad a(x0)| = {} > 2 sup|a|/R", grad0.norm())
        });
        for _ in 0..16 {
            let t = radius * rng.gen_range(0.0..0.98f64).sqrt();
            let th = rng.gen_range(-PI..PI);
            let x = x0 + Point::new(t * th.cos(), t * th.sin());
            let (ax, gx) = a.eval_with_gradient(&x).expect("interior series");
            let t = (x - x0).norm();
            let rhs1 = 2.0 * t / (radius - t) * (a0 - inf);
            report.check(trial, rhs1 - (ax - a0).abs() + tol, || {
                format!("value bound: {} > {} at t = {t}", (ax - a0).abs(), rhs1)
            });
            let rhs3 = 2.0 * sup_abs / radius * t * (2.0 * radius - t) / (radius - t).powi(2);
            report.check(trial, rhs3 - (gx - grad0).norm() + tol, || {
                format!(
                    "gradient bound: {} > {} at t = {t}",
                    (gx - grad0).norm(),
                    rhs3
                )
            });
        }
    }
    report
}

/// Bounded exterior Robin solutions with random data and Robin length tend
/// to the data mean at `ρ = 10⁶`; the disk's `H^κ` is the constant `1/2π`.
pub fn validate_exterior_limit(trials: usize, seed: u64) -> ValidationReport {
    let mut report = ValidationReport::new("exterior limit", seed, trials);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let order = rng.gen_range(1..=12);
        let b = FourierData::random(&mut rng, order, 1.0, 0.8);
        let length = 10f64.powf(rng.gen_range(-2.0..2.0));
        let a = solve_exterior_bounded(&b, length).expect("positive Robin length");
        // quadrature mean of the boundary data as the oracle
        let m = 4 * order + 4;
        let mean = circle_average(|t| b.eval(t), m);
        let th = rng.gen_range(-PI..PI);
        let far = a
            .eval(&Point::new(1e6 * th.cos(), 1e6 * th.sin()))
            .expect("far point");
        report.check(trial, 1e-6 - (far - mean).abs(), || {
            format!("limit {far} vs mean {mean}")
        });

        let h = h_kappa(length, 16).expect("positive Robin length");
        for t in equispaced_angles(8) {
            for rho in [1.0, 3.0, 1e3] {
                let v = h
                    .eval(&Point::new(rho * t.cos(), rho * t.sin()))
                    .expect("off center");
                report.check(trial, 1e-12 - (v - 1.0 / (2.0 * PI)).abs(), || {
                    format!("H^kappa = {v} at rho = {rho}")
                });
            }
        }
    }
    // H itself is -(1/2π) log ρ, the reference the constancy is relative to
    debug_assert_eq!(exterior_green().log_coeff, -1.0 / (2.0 * PI));
    report
}

/// Orders grouped by `κ` for printing.
pub fn summarize_orders(est: &[OrderEstimate]) -> BTreeMap<String, Vec<f64>> {
    est.iter()
        .map(|e| (fmt17(e.kappa), e.orders.clone()))
        .collect()
}
