//! Point-source strength and the stretched-plane corrector, in both
//! scalings, plus the exterior limit function of the unit disk.

use compound_robin::exterior::{compute_c0, exterior_robin_residual, h_kappa, ExteriorCorrector};
use compound_robin::{ExteriorScaling, FourierData, Geometry, Point};
use std::f64::consts::PI;

fn main() -> compound_robin::Result<()> {
    let g = Geometry::new(1.0, Point::zeros(), 0.1)?;
    let c0 = compute_c0(&g, 1.0, 1.0, 0.0, 1.0 / (2.0 * PI))?;
    println!(
        "c0 = {c0:.12} (2 pi / (11 + ln 10) = {:.12})",
        2.0 * PI / (11.0 + 10f64.ln())
    );

    let f_d = FourierData {
        mean: 0.0,
        coeffs: vec![[1.0, 0.0], [0.0, 1.0]],
    };
    let drift = Point::new(0.4, -0.2);
    for scaling in [ExteriorScaling::Rescaled, ExteriorScaling::Unscaled] {
        let w = ExteriorCorrector::new(&g, 1.0, &f_d, c0, drift, Point::zeros(), scaling)?;
        let res = exterior_robin_residual(&w.w0, w.robin_length, &w.boundary_data(&f_d), 128)?;
        println!(
            "{scaling:?}: Robin length {}, modes {:?}, residual {res:.1e}",
            w.robin_length, w.w0.coeffs
        );
    }

    let h = h_kappa(2.0, 16)?;
    for rho in [1.0, 10.0, 1e6] {
        println!(
            "H^kappa(rho = {rho:e}) = {:.15}",
            h.eval(&Point::new(rho, 0.0))?
        );
    }
    Ok(())
}
