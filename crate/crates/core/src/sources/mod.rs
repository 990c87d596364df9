//! Source models with exact distributions.

mod affine;
mod distribution;
pub mod io;
mod local;
mod nobf;

use num_rational::BigRational;
use rand::Rng;

use crate::config::Caps;
use crate::error::Result;

pub use affine::{affine_canonical_form, column_weights, AffineSubspace, CanonicalForm};
pub use distribution::{mix_distributions, statistical_distance, ExactDistribution};
pub use local::{clique_source, random_local_source, LocalOutput, LocalSource};
pub use nobf::{nobf_as_local, random_nobf_source, BadBit, Bias, NobfSource};

/// Any of the source models.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SourceDescriptor {
    Local(LocalSource),
    Nobf(NobfSource),
    Affine(AffineSubspace),
}

impl SourceDescriptor {
    pub fn n(&self) -> usize {
        match self {
            SourceDescriptor::Local(s) => s.n(),
            SourceDescriptor::Nobf(s) => s.n(),
            SourceDescriptor::Affine(s) => s.n(),
        }
    }

    pub fn exact_distribution(&self, caps: &Caps) -> Result<ExactDistribution> {
        match self {
            SourceDescriptor::Local(s) => s.exact_distribution(caps),
            SourceDescriptor::Nobf(s) => s.exact_distribution(caps),
            SourceDescriptor::Affine(s) => s.exact_distribution(caps),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            SourceDescriptor::Local(s) => s.sample(rng),
            SourceDescriptor::Nobf(s) => s.sample(rng),
            SourceDescriptor::Affine(s) => s.sample(rng),
        }
    }
}

impl From<LocalSource> for SourceDescriptor {
    fn from(s: LocalSource) -> Self {
        SourceDescriptor::Local(s)
    }
}

impl From<NobfSource> for SourceDescriptor {
    fn from(s: NobfSource) -> Self {
        SourceDescriptor::Nobf(s)
    }
}

impl From<AffineSubspace> for SourceDescriptor {
    fn from(s: AffineSubspace) -> Self {
        SourceDescriptor::Affine(s)
    }
}

/// Weighted list of sources; weights are positive and sum to 1 when mixed.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ConvexCombination {
    pub components: Vec<(BigRational, SourceDescriptor)>,
}

impl ConvexCombination {
    pub fn single(source: impl Into<SourceDescriptor>) -> Self {
        ConvexCombination {
            components: vec![(num_traits::One::one(), source.into())],
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Distribution of the mixture `Σ w_i Y_i`.
pub fn mixture(combo: &ConvexCombination, caps: &Caps) -> Result<ExactDistribution> {
    let parts = combo
        .components
        .iter()
        .map(|(w, s)| Ok((w.clone(), s.exact_distribution(caps)?)))
        .collect::<Result<Vec<_>>>()?;
    mix_distributions(&parts)
}

/// Draw one point using a seeded generator.
pub fn sample(source: &SourceDescriptor, seed: u64) -> u64 {
    use rand::SeedableRng;
    source.sample(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
}
