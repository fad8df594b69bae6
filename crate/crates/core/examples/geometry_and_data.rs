//! Validated geometry, point classification and Fourier boundary data.

use compound_robin::boundary_data::project_fn;
use compound_robin::{Boundary, FourierData, Geometry, Point};

fn main() -> compound_robin::Result<()> {
    let g = Geometry::new(2.0, Point::new(0.5, 0.0), 0.3)?;
    println!("R_min = {}, R_max = {}", g.r_min(), g.r_max());

    match Geometry::new(1.0, Point::zeros(), 0.6) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }

    for x in [
        Point::new(0.0, 1.0),
        Point::new(0.6, 0.1),
        Point::new(0.8, 0.0),
        Point::new(2.5, 0.0),
    ] {
        println!("{:>6.2} {:>6.2} -> {:?}", x.x, x.y, g.classify(&x));
    }
    let angles: Vec<f64> = g
        .sample_boundary(Boundary::Outer, 4)
        .iter()
        .map(|p| p.angle)
        .collect();
    println!("4 outer samples at {angles:?}");

    // a smooth function on the circle, projected and re-evaluated
    let f = |t: f64| (t.cos()).exp();
    let fd = project_fn(f, 12, 64)?;
    println!("mean {:.15}, first modes {:?}", fd.mean, &fd.coeffs[..3]);
    println!("max truncated coefficient {:.2e}", fd.tail_magnitude());
    println!("error at 0.7: {:.2e}", (fd.eval(0.7) - f(0.7)).abs());

    // config arrays are [mean, c1, s1, c2, s2, ...]
    let flat = FourierData::from_flat(&[0.5, 1.0, 0.0, 0.0, -2.0])?;
    println!(
        "from [0.5, 1, 0, 0, -2]: f(pi/4) = {:.6}",
        flat.eval(std::f64::consts::FRAC_PI_4)
    );
    Ok(())
}
