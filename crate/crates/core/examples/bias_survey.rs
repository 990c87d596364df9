//! Bias quantiles of random quadratics, written as CSV to stdout.

use f2lab::exact::fmt_rational;
use f2lab::lab::random_bias_survey;
use f2lab::Caps;

fn main() -> f2lab::Result<()> {
    let s = random_bias_survey(10, 2, 200, 13, &Caps::default())?;
    for (q, v) in s.quantiles() {
        eprintln!("q{:<4} {}", q, fmt_rational(&v));
    }
    s.write_csv(std::io::stdout().lock())
}
