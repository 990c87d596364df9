//! Exact output distributions of local, NOBF and affine sources.

use f2lab::exact::{fmt_rational, ratio};
use f2lab::f2poly::format_point;
use f2lab::sources::{clique_source, statistical_distance, AffineSubspace, BadBit, Bias, NobfSource};
use f2lab::{Caps, TruthTable};

fn main() -> f2lab::Result<()> {
    let caps = Caps::default();

    let clique = clique_source(3)?;
    let d = clique.exact_distribution(&caps)?;
    println!("clique source, k = 3: n = {}, locality {}, support {}", clique.n(), clique.locality(), d.support_size());
    for (x, p) in d.mass() {
        println!("  {} {}", format_point(*x, clique.n()), fmt_rational(p));
    }

    // one good bit with Pr[favored] = 3/4, and a bad bit copying its negation
    let bad = BadBit { position: 1, support: vec![0], table: TruthTable::parse_bitstring("10")? };
    let nobf = NobfSource::new(2, vec![0], vec![Bias::new(ratio(3, 4), true)?], vec![bad])?;
    let nd = nobf.exact_distribution(&caps)?;
    println!("biased NOBF:");
    for (x, p) in nd.mass() {
        println!("  {} {}", format_point(*x, 2), fmt_rational(p));
    }
    let ud = nobf.unbiased().exact_distribution(&caps)?;
    println!("distance to its unbiased version: {}", fmt_rational(&statistical_distance(&nd, &ud)?));

    let s = AffineSubspace::new(4, 0b1000, vec![0b0011, 0b0110])?;
    println!("affine subspace: dimension {}, locality {}", s.dim(), s.locality());
    println!("min-entropy {}", s.exact_distribution(&caps)?.min_entropy());
    Ok(())
}
