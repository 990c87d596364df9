//! Desk-scale experiments: NOBF family censuses, random polynomial surveys,
//! Reed-Muller codes and the hitting lemma.

mod affine;
mod census;
mod family;
mod hitting;
mod rm;
mod survey;

use serde::Serialize;

pub use affine::{affine_extractor_census, random_local_basis, AffineCensus};
pub use census::{
    disperser_census_via_hitting, extractor_census, extractor_search, generating_polys, search_polys, CensusOutcome,
    DisperserOutcome, HittingFailure, SearchOutcome,
};
pub use family::{all_polys_up_to_degree, enumerate_nobf_family, Family, FamilySpec};
pub use hitting::{hitting_lemma_check, random_hitting_instance, HittingVerdict};
pub use rm::{hamming_bound_holds, random_table, rm_code, rm_codeword_poly, rm_list_scan, rm_list_size, ListScan, RmCode};
pub use survey::{correlation_survey, random_bias_survey, SurveyParams, SurveyReport, QUANTILE_LEVELS};

/// How a scan visits its objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ScanMode {
    Exhaustive,
    Random { trials: usize, seed: u64 },
}

#[cfg(test)]
mod tests;
