//! Sampling sets on `Ω̄_ε` and plain CSV field dumps.

use std::io::{self, Write};

use crate::geometry::{equispaced_angles, Geometry, Point};

/// Polar grid about `c`: `nr` radii from `ε` to the outer circle along each
/// of `nt` rays. Covers `Ω̄_ε` for any admissible center.
pub fn polar_grid(g: &Geometry, nr: usize, nt: usize) -> Vec<Point> {
    let mut out = Vec::with_capacity(nr * nt);
    for t in equispaced_angles(nt) {
        let e = Point::new(t.cos(), t.sin());
        let reach = g.ray_to_outer(t);
        for i in 0..nr {
            let s = if nr == 1 {
                0.0
            } else {
                i as f64 / (nr - 1) as f64
            };
            out.push(g.center() + e * (g.eps() + s * (reach - g.eps())));
        }
    }
    out
}

/// Points of an `n × n` grid over `[-R, R]²` that lie in `Ω̄_ε`.
pub fn cartesian_grid(g: &Geometry, n: usize) -> Vec<Point> {
    let r = g.radius();
    let step = if n > 1 { 2.0 * r / (n - 1) as f64 } else { 0.0 };
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let x = Point::new(-r + i as f64 * step, -r + j as f64 * step);
            if g.classify(&x).in_closure() {
                out.push(x);
            }
        }
    }
    out
}

/// Writes `x,y,<name>` rows, 17 significant digits.
pub fn write_field_csv<W: Write>(
    mut w: W,
    name: &str,
    rows: impl IntoIterator<Item = (Point, f64)>,
) -> io::Result<()> {
    writeln!(w, "x,y,{name}")?;
    for (p, v) in rows {
        writeln!(w, "{},{},{}", fmt17(p.x), fmt17(p.y), fmt17(v))?;
    }
    Ok(())
}

/// Fixed 17-significant-digit float formatting.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polar_grid_stays_in_domain() {
        let g = Geometry::new(1.0, Point::new(0.3, -0.1), 0.05).unwrap();
        let pts = polar_grid(&g, 8, 16);
        assert_eq!(pts.len(), 128);
        assert!(pts.iter().all(|p| g.classify(p).in_closure()));
    }

    #[test]
    fn cartesian_grid_skips_holes() {
        let g = Geometry::new(1.0, Point::zeros(), 0.3).unwrap();
        let pts = cartesian_grid(&g, 21);
        assert!(pts.iter().all(|p| g.classify(p).in_closure()));
        assert!(!pts.contains(&Point::zeros()));
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_field_csv(&mut buf, "u0", [(Point::new(0.5, 0.0), 1.0 / 3.0)]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(
            s,
            "x,y,u0\n5.0000000000000000e-1,0.0000000000000000e0,3.3333333333333331e-1\n"
        );
    }
}
