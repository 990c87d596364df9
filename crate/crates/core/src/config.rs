//! Enumeration limits shared by every module.
//!
//! Every exhaustive routine checks its work size against one of these caps
//! before starting and fails with [`Error::CapExceeded`](crate::Error::CapExceeded)
//! instead of approximating.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TABLE_VARS: usize = 24;
pub const DEFAULT_DIST_SEED_BITS: usize = 22;
pub const DEFAULT_FAMILY: u64 = 1 << 22;
pub const DEFAULT_WEIGHT_COMBINATIONS: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Largest variable count for which a packed truth table is materialized.
    pub table_vars: usize,
    /// Largest number of seed (or good, or basis) bits enumerated for an exact distribution.
    pub dist_seed_bits: usize,
    /// Largest family / scan size for censuses.
    pub family: u64,
    /// Largest number of candidate vectors tried by a weight-ordered search.
    pub weight_combinations: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            table_vars: DEFAULT_TABLE_VARS,
            dist_seed_bits: DEFAULT_DIST_SEED_BITS,
            family: DEFAULT_FAMILY,
            weight_combinations: DEFAULT_WEIGHT_COMBINATIONS,
        }
    }
}

impl Caps {
    pub fn validate(&self) -> Result<()> {
        if self.table_vars == 0 || self.table_vars > 30 {
            return Err(Error::invalid(format!(
                "table cap must be in 1..=30, got {}",
                self.table_vars
            )));
        }
        if self.dist_seed_bits == 0 || self.dist_seed_bits > 30 {
            return Err(Error::invalid(format!(
                "distribution cap must be in 1..=30, got {}",
                self.dist_seed_bits
            )));
        }
        if self.family == 0 || self.weight_combinations == 0 {
            return Err(Error::invalid("caps must be positive"));
        }
        Ok(())
    }

    pub(crate) fn check_table(&self, n_vars: usize) -> Result<()> {
        if n_vars > self.table_vars {
            return Err(Error::cap("truth table variables", n_vars as u128, self.table_vars as u128));
        }
        Ok(())
    }

    pub(crate) fn check_dist(&self, bits: usize) -> Result<()> {
        if bits > self.dist_seed_bits {
            return Err(Error::cap("distribution enumeration bits", bits as u128, self.dist_seed_bits as u128));
        }
        Ok(())
    }

    pub(crate) fn check_family(&self, size: u128) -> Result<()> {
        if size > self.family as u128 {
            return Err(Error::cap("family size", size, self.family as u128));
        }
        Ok(())
    }
}
