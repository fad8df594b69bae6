//! Randomized checks of the maximum principle, the local harmonic estimates
//! and the exterior limit.

use compound_robin::analysis::{
    validate_exterior_limit, validate_harnack_bounds, validate_max_principle,
};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    println!("{}\n", validate_max_principle(20, seed));
    println!("{}\n", validate_harnack_bounds(100, seed));
    println!("{}", validate_exterior_limit(20, seed));
}
