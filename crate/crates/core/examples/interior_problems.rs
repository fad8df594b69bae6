//! The two disk problems: the bounded interior solution and the regular part
//! of the Robin Green's function.

use compound_robin::interior::{outer_robin_residual, solve_green_regular, solve_v0};
use compound_robin::{FourierData, Geometry, Point};

fn main() -> compound_robin::Result<()> {
    let g = Geometry::new(1.0, Point::new(0.3, 0.0), 0.05)?;
    let kappa = 0.5;

    let f = FourierData::mode(1, 1.0, 0.0);
    let v0 = solve_v0(&g, kappa, &f)?;
    println!(
        "V0(0.5, 0) = {} (1/3 expected)",
        v0.eval(&Point::new(0.5, 0.0))?
    );
    let res = outer_robin_residual(&g, kappa, 128, |x| v0.eval_with_gradient(x), |t| f.eval(t))?;
    println!("V0 Robin residual {res:.1e}");

    let green = solve_green_regular(&g, kappa, 64)?;
    println!(
        "regular part at the pole {:.12}, gradient {:?}",
        green.regular_at_source(),
        green.regular_gradient_at_source().as_slice()
    );
    println!(
        "residual {:.1e}, truncation ratio {:.1e}",
        green.residual, green.truncation_ratio
    );
    for x in [Point::new(0.0, 0.0), Point::new(-0.5, 0.5)] {
        println!("G({:?}, c) = {:.10}", x.as_slice(), green.eval(&x)?);
    }

    // the centered case is a constant
    let centered = solve_green_regular(&Geometry::new(2.0, Point::zeros(), 0.1)?, 0.5, 16)?;
    println!(
        "centered regular part on R = 2: {:.15}",
        centered.regular_at_source()
    );
    println!("{}", v0);
    Ok(())
}
