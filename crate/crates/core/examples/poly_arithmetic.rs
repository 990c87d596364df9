//! Parse, evaluate, differentiate and compose polynomials over F2.

use f2lab::exact::fmt_rational;
use f2lab::{parse_poly, Caps};

fn main() -> f2lab::Result<()> {
    let f = parse_poly("x1*x2 + x3", 3)?;
    let g = parse_poly("x1 + x2*x3", 3)?;
    println!("f = {f}");
    println!("f + g = {}", f.add(&g)?);
    println!("f * g = {}", f.multiply(&g)?);
    println!("bias(f) = {}", fmt_rational(&f.bias()?));
    println!("corr(f, g) = {}", fmt_rational(&f.correlation(&g)?));
    // derivative along e1 + e3
    println!("D_101 f = {}", f.derivative(0b101)?);

    let args = [parse_poly("x1", 2)?, parse_poly("x1 + x2", 2)?, parse_poly("x2", 2)?];
    let h = f.substitute(&args)?;
    assert_eq!(h, f.substitute_via_tables(&args, &Caps::default())?);
    println!("f(x1, x1 + x2, x2) = {h}");
    println!("truth table of f: {}", f.truth_table()?.to_bitstring());
    Ok(())
}
