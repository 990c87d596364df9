//! Census a polynomial over every NOBF descriptor, then search random quadratics.

use f2lab::exact::{fmt_rational, ratio};
use f2lab::lab::{extractor_census, extractor_search, FamilySpec};
use f2lab::{parse_poly, Caps};

fn main() -> f2lab::Result<()> {
    let caps = Caps::default();
    let spec = FamilySpec::new(6, 4, 1);
    println!("family n = 6, k = 4, d = 1: {} descriptors", spec.descriptor_count());

    let maj = parse_poly("x1*x2 + x3*x4 + x5*x6", 6)?;
    let c = extractor_census(&maj, spec, &caps)?;
    println!("{maj}: max bias {} at descriptor {}, disperser {}", fmt_rational(&c.max_bias), c.worst_index, c.disperser);

    let s = extractor_search(spec, 2, 50, 12, &ratio(1, 4), &caps)?;
    println!(
        "50 random quadratics: best {} ({}), {} within bias 1/2",
        fmt_rational(&s.best_bias),
        s.best_poly,
        s.successes
    );
    Ok(())
}
