//! The clique set: Sidon property, subspace evasion and distance from affine mixtures.

use f2lab::barrier::{affine_mixture_distance_bound, clique_set, evasiveness_scan, random_subspace, sidon_check};
use f2lab::exact::fmt_rational;
use f2lab::lab::ScanMode;
use f2lab::Caps;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> f2lab::Result<()> {
    let caps = Caps::default();
    for k in 2..=6 {
        let q = clique_set(k)?;
        let s = sidon_check(&q.points);
        println!("k = {k}: {} points in F2^{}, sidon {}", q.points.len(), q.n, s.is_sidon);
    }

    let r = evasiveness_scan(5, 8, ScanMode::Random { trials: 300, seed: 11 }, true, &caps)?;
    println!("k = 5, t = 8: max fraction {} against bound {:.4}", r.max_fraction, r.bound);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let comps = (0..20)
        .map(|_| random_subspace(&mut rng, 10, 5, true))
        .collect::<f2lab::Result<Vec<_>>>()?;
    let m = affine_mixture_distance_bound(4, &comps, None, &caps)?;
    println!("distance from 20 affine components >= {}", fmt_rational(&m.bound));
    if let Some(d) = m.true_distance {
        println!("exact distance {}", fmt_rational(&d));
    }
    Ok(())
}
