pub mod barrier;
pub mod combinatorics;
pub mod cli;
pub mod config;
pub mod cw;
pub mod error;
pub mod exact;
pub mod f2poly;
pub mod lab;
pub mod reduction;
pub mod sources;
pub mod subspace;

pub use config::Caps;
pub use error::{Error, Result};
pub use f2poly::{parse_poly, MultilinearPoly, TruthTable};
