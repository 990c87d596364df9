//! Reed-Muller codes: parameters and list sizes around random centers.

use f2lab::lab::{rm_code, rm_list_scan};
use f2lab::Caps;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> f2lab::Result<()> {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for r in 1..=2 {
        let code = rm_code(4, r, &caps)?;
        println!("RM(4,{r}): {} codewords, min distance {:?}", code.len(), code.min_distance());
        for radius in [3, 5, 7] {
            let scan = rm_list_scan(&code, radius, 50, &mut rng)?;
            println!("  radius {radius}: max list {}, counting bound {:?}", scan.max_count, scan.hamming_bound_holds);
        }
    }
    Ok(())
}
