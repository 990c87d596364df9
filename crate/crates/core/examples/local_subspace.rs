//! Grow a 2-local subspace on which a quadratic is constant.

use f2lab::f2poly::{format_point, random_poly};
use f2lab::subspace::{exhaustive_best_dimension, grow_local_subspace, SearchLimits};
use f2lab::Caps;

fn main() -> f2lab::Result<()> {
    let caps = Caps::default();
    let f = random_poly(16, 2, 7);
    let g = grow_local_subspace(&f, 2, 2, &caps)?;
    println!("f = {f}");
    println!("constant value {} on a dimension {} subspace", g.constant_value as u8, g.dimension());
    for step in &g.trace {
        println!(
            "  step {}: {} weight {}, {} allowed coordinates",
            step.iteration,
            format_point(step.vector, 16),
            step.weight,
            step.allowed
        );
    }

    let small = random_poly(6, 2, 7);
    let best = exhaustive_best_dimension(&small, 1, &SearchLimits::default())?;
    println!("best 1-local dimension for a random quadratic on 6 variables: {}", best.dimension);
    Ok(())
}
