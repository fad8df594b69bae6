//! Build the leading-order approximation, inspect its parts and boundary
//! discrepancies, and dump it on a grid.

use compound_robin::grid::{cartesian_grid, write_field_csv};
use compound_robin::{
    Boundary, BuildOptions, CompoundApproximation, FourierData, Geometry, Point, RobinData,
};

fn main() -> compound_robin::Result<()> {
    let g = Geometry::new(1.0, Point::new(0.25, -0.1), 0.05)?;
    let data = RobinData::leading(
        FourierData {
            mean: 0.3,
            coeffs: vec![[0.0, 1.0], [0.5, 0.0]],
        },
        FourierData {
            mean: 1.0,
            coeffs: vec![[1.0, 0.0], [0.0, 0.25]],
        },
    );
    let ca = CompoundApproximation::build(&g, 1.0, &data, &BuildOptions::default())?;
    println!("c0 = {:.6e}, drift = {:?}", ca.c0(), ca.drift().as_slice());
    println!(
        "outer discrepancy     {:.3e}",
        ca.max_discrepancy(Boundary::Outer, 256)?
    );
    println!(
        "inclusion discrepancy {:.3e}",
        ca.max_discrepancy(Boundary::Inclusion, 256)?
    );

    for x in [
        Point::new(0.31, -0.1),
        Point::new(-0.5, 0.5),
        Point::new(0.0, 0.99),
    ] {
        let (u, grad) = ca.eval_with_gradient(&x)?;
        println!("u0{:?} = {u:.8}, grad {:?}", x.as_slice(), grad.as_slice());
    }
    if let Err(e) = ca.eval(&g.center()) {
        println!("at the inclusion center: {e}");
    }

    let path = std::env::temp_dir().join("u0.csv");
    let rows = cartesian_grid(&g, 41)
        .into_iter()
        .map(|x| Ok((x, ca.eval(&x)?)))
        .collect::<compound_robin::Result<Vec<_>>>()?;
    let file = std::fs::File::create(&path).expect("temp file");
    write_field_csv(file, "u0", rows).expect("write");
    println!("field written to {}", path.display());
    Ok(())
}
