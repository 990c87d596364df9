//! Write a 2-local source as an exact mixture of unbiased NOBF sources.

use f2lab::exact::fmt_rational;
use f2lab::reduction::{local_to_nobf, verify_decomposition};
use f2lab::sources::random_local_source;
use f2lab::Caps;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> f2lab::Result<()> {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let src = random_local_source(&mut rng, 7, 6, 2);
    println!("source: m = {}, n = {}, locality {}", src.m(), src.n(), src.locality());

    let full = local_to_nobf(&src, 1, false, &caps)?;
    println!("{} leaves, {} distinct components", full.leaf_count, full.components.len());
    println!("fewest good bits: {}", full.min_good_bits());
    let dist = verify_decomposition(&src, &full.combo(), &caps)?;
    println!("distance of the full mixture: {}", fmt_rational(&dist));

    let cut = local_to_nobf(&src, 1, true, &caps)?;
    let dist = verify_decomposition(&src, &cut.combo(), &caps)?;
    println!("truncated at k' = {}: distance {} (eps {:.4})", fmt_rational(&cut.k_prime), fmt_rational(&dist), cut.epsilon);
    Ok(())
}
