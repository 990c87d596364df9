//! Seeded bias and correlation surveys of random low-degree polynomials.

use std::io::Write;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::combinatorics::trial_seed;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, to_f64};
use crate::f2poly::{random_poly, MultilinearPoly};

/// Quantile levels reported in every summary.
pub const QUANTILE_LEVELS: [f64; 8] = [0.0, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99, 1.0];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyParams {
    pub kind: String,
    pub n: usize,
    pub r: usize,
    pub trials: usize,
    /// The fixed second function, for correlation surveys.
    pub against: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurveyReport {
    pub params: SurveyParams,
    pub seed: u64,
    /// One exact value per trial, in trial order.
    pub values: Vec<BigRational>,
}

impl SurveyReport {
    /// Nearest-rank quantile: the `ceil(q·N)`-th smallest value (the minimum at `q = 0`).
    pub fn quantile(&self, q: f64) -> Option<BigRational> {
        if self.values.is_empty() || !(0.0..=1.0).contains(&q) {
            return None;
        }
        let mut sorted = self.values.clone();
        sorted.sort();
        let rank = (q * sorted.len() as f64).ceil() as usize;
        Some(sorted[rank.max(1) - 1].clone())
    }

    pub fn quantiles(&self) -> Vec<(f64, BigRational)> {
        QUANTILE_LEVELS
            .iter()
            .filter_map(|&q| self.quantile(q).map(|v| (q, v)))
            .collect()
    }

    /// Fraction of trials with value `<= bound`.
    pub fn fraction_at_most(&self, bound: &BigRational) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.iter().filter(|v| *v <= bound).count() as f64 / self.values.len() as f64
    }

    pub fn to_json(&self) -> Value {
        let quantiles: Vec<Value> = self
            .quantiles()
            .into_iter()
            .map(|(q, v)| json!({ "q": q, "value": fmt_rational(&v), "approx": to_f64(&v) }))
            .collect();
        json!({
            "params": self.params,
            "seed": self.seed,
            "values": self.values.iter().map(fmt_rational).collect::<Vec<_>>(),
            "quantiles": quantiles,
        })
    }

    /// One row per trial: index, exact value, approximate float.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::invalid(format!("csv output failed: {e}"));
        w.write_record(["trial", "value", "value_approx"]).map_err(io)?;
        for (t, v) in self.values.iter().enumerate() {
            w.write_record([t.to_string(), fmt_rational(v), to_f64(v).to_string()])
                .map_err(io)?;
        }
        w.flush().map_err(|e| Error::invalid(format!("csv output failed: {e}")))?;
        Ok(())
    }
}

fn run(
    params: SurveyParams,
    seed: u64,
    caps: &Caps,
    value: impl Fn(&MultilinearPoly) -> Result<BigRational> + Sync,
) -> Result<SurveyReport> {
    caps.check_table(params.n)?;
    let (n, r) = (params.n, params.r);
    let values = (0..params.trials)
        .into_par_iter()
        .map(|t| value(&random_poly(n, r, trial_seed(seed, t as u64))))
        .collect::<Result<Vec<_>>>()?;
    Ok(SurveyReport { params, seed, values })
}

/// Exact bias of `trials` random degree-`<= r` polynomials on `n` variables.
pub fn random_bias_survey(n: usize, r: usize, trials: usize, seed: u64, caps: &Caps) -> Result<SurveyReport> {
    let params = SurveyParams {
        kind: "bias".into(),
        n,
        r,
        trials,
        against: None,
    };
    run(params, seed, caps, |f| f.bias_capped(caps))
}

/// Exact correlation with a fixed `g`; the random polynomials are the same as in
/// [`random_bias_survey`] for equal `(n, r, seed)`.
pub fn correlation_survey(
    g: &MultilinearPoly,
    r: usize,
    trials: usize,
    seed: u64,
    caps: &Caps,
) -> Result<SurveyReport> {
    let params = SurveyParams {
        kind: "correlation".into(),
        n: g.n_vars(),
        r,
        trials,
        against: Some(g.to_string()),
    };
    let gt = g.truth_table_capped(caps)?;
    run(params, seed, caps, |f| {
        let d = f.truth_table_capped(caps)?.distance(&gt)?;
        let total = 1u64 << g.n_vars();
        Ok(BigRational::new(total.abs_diff(2 * d).into(), total.into()))
    })
}
