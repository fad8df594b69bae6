//! High-accuracy solutions of the exact problem and their difference from
//! the approximation.

use compound_robin::reference::{
    solve_exact_concentric, solve_exact_eccentric, sup_difference, CollocationOptions, Sampling,
};
use compound_robin::{
    BuildOptions, CompoundApproximation, FourierData, Geometry, Point, RobinData,
};

fn main() -> compound_robin::Result<()> {
    let data = RobinData::leading(
        FourierData::mode(1, 0.0, 1.0),
        FourierData::mode(1, 1.0, 0.0),
    );

    let g = Geometry::new(1.0, Point::zeros(), 0.05)?;
    let a = solve_exact_concentric(&g, 1.0, &data, 32)?;
    let b = solve_exact_eccentric(&g, 1.0, &data, &CollocationOptions::new(32))?;
    let x = Point::new(0.3, 0.4);
    println!(
        "concentric {:.15}, collocation {:.15}",
        a.eval(&x)?,
        b.eval(&x)?
    );
    println!("concentric report {:?}", a.residual_report);

    let g = Geometry::new(1.0, Point::new(0.3, 0.0), 0.05)?;
    let exact = solve_exact_eccentric(&g, 1.0, &data, &CollocationOptions::new(32))?;
    println!("eccentric report {:?}", exact.residual_report);

    let ca = CompoundApproximation::build(&g, 1.0, &data, &BuildOptions::default())?;
    let d = sup_difference(&exact, &ca, &Sampling::for_order(32))?;
    println!(
        "sup |u - u0| = {:.3e} at {:?}",
        d.value,
        d.argmax.as_slice()
    );
    Ok(())
}
