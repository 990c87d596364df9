//! Solution counts and lightest nonzero solutions of random systems.

use f2lab::cw::{clp_rank_check, cw_count_check, low_weight_cw_check, parse_system, random_system};
use f2lab::f2poly::{format_point, random_poly};
use f2lab::Caps;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> f2lab::Result<()> {
    let caps = Caps::default();
    let sys = parse_system("x1*x2 + x3\nx2 + x4 + x5\n", Some(6))?;
    let c = cw_count_check(&sys, &caps)?;
    println!("{} solutions, bound {}", c.count, c.bound);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let sys = random_system(&mut rng, 12, 3, 4);
        if sys.linear_degree() + sys.nonlinear_degree() >= sys.n() {
            continue;
        }
        let w = low_weight_cw_check(&sys, &caps)?;
        println!(
            "D = {}, Δ = {}: lightest {} weight {} (bound {:.2})",
            w.linear_degree,
            w.nonlinear_degree,
            format_point(w.witness, sys.n()),
            w.min_weight,
            w.bound
        );
    }

    let f = random_poly(8, 4, 9);
    let r = clp_rank_check(&f, 4, &caps)?;
    println!("rank of f(x + y) for a random quartic on 8 variables: {} <= {}", r.rank, r.bound);
    Ok(())
}
