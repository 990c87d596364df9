//! JSON form of sources.
//!
//! ```json
//! {"type": "local", "m": 2, "outputs": [{"support": [0, 1], "table": "0001"}]}
//! {"type": "nobf", "n": 2, "good": [0], "biases": [["3/4", 1]],
//!  "outputs": [{"position": 1, "support": [0], "table": "10"}]}
//! {"type": "affine", "n": 3, "shift": "100", "basis": ["010"]}
//! {"type": "clique", "k": 3}
//! ```
//!
//! Indices are 0-based. Tables and points are bitstrings whose character `i`
//! is entry `i` (little-endian over the support or coordinates).

use serde::{Deserialize, Serialize};

use super::{clique_source, AffineSubspace, BadBit, Bias, LocalOutput, LocalSource, NobfSource, SourceDescriptor};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational};
use crate::f2poly::{format_point, parse_point, TruthTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SourceFile {
    Local {
        m: usize,
        outputs: Vec<OutputEntry>,
    },
    Nobf {
        n: usize,
        good: Vec<usize>,
        biases: Vec<(String, u8)>,
        outputs: Vec<OutputEntry>,
    },
    Affine {
        n: usize,
        shift: String,
        basis: Vec<String>,
    },
    Clique {
        k: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    pub support: Vec<usize>,
    pub table: String,
}

impl SourceFile {
    pub fn into_source(self) -> Result<SourceDescriptor> {
        match self {
            SourceFile::Local { m, outputs } => {
                let outs = outputs
                    .into_iter()
                    .map(|o| LocalOutput::new(o.support, TruthTable::parse_bitstring(&o.table)?))
                    .collect::<Result<Vec<_>>>()?;
                Ok(LocalSource::new(m, outs)?.into())
            }
            SourceFile::Nobf {
                n,
                good,
                biases,
                outputs,
            } => {
                let biases = biases
                    .into_iter()
                    .map(|(p, g)| match g {
                        0 | 1 => Bias::new(parse_rational(&p)?, g == 1),
                        _ => Err(Error::invalid(format!("favored value must be 0 or 1, got {g}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let bad = outputs
                    .into_iter()
                    .map(|o| {
                        let position = o
                            .position
                            .ok_or_else(|| Error::invalid("nobf outputs need a position"))?;
                        Ok(BadBit {
                            position,
                            support: o.support,
                            table: TruthTable::parse_bitstring(&o.table)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(NobfSource::new(n, good, biases, bad)?.into())
            }
            SourceFile::Affine { n, shift, basis } => {
                let shift = parse_point(&shift, n)?;
                let basis = basis.iter().map(|b| parse_point(b, n)).collect::<Result<Vec<_>>>()?;
                Ok(AffineSubspace::new(n, shift, basis)?.into())
            }
            SourceFile::Clique { k } => Ok(clique_source(k)?.into()),
        }
    }

    pub fn from_source(source: &SourceDescriptor) -> Self {
        match source {
            SourceDescriptor::Local(s) => SourceFile::Local {
                m: s.m(),
                outputs: s
                    .outputs()
                    .iter()
                    .map(|o| OutputEntry {
                        position: None,
                        support: o.support.clone(),
                        table: o.table.to_bitstring(),
                    })
                    .collect(),
            },
            SourceDescriptor::Nobf(s) => SourceFile::Nobf {
                n: s.n(),
                good: s.good().to_vec(),
                biases: s
                    .biases()
                    .iter()
                    .map(|b| (fmt_rational(&b.p), b.favored as u8))
                    .collect(),
                outputs: s
                    .bad()
                    .iter()
                    .map(|b| OutputEntry {
                        position: Some(b.position),
                        support: b.support.clone(),
                        table: b.table.to_bitstring(),
                    })
                    .collect(),
            },
            SourceDescriptor::Affine(s) => SourceFile::Affine {
                n: s.n(),
                shift: format_point(s.shift(), s.n()),
                basis: s.basis().iter().map(|&v| format_point(v, s.n())).collect(),
            },
        }
    }
}

pub fn parse_source_json(text: &str) -> Result<SourceDescriptor> {
    let file: SourceFile =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("source JSON: {e}")))?;
    file.into_source()
}

pub fn source_to_json(source: &SourceDescriptor) -> String {
    serde_json::to_string_pretty(&SourceFile::from_source(source)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let texts = [
            r#"{"type":"local","m":2,"outputs":[{"support":[0,1],"table":"0001"},{"support":[],"table":"1"}]}"#,
            r#"{"type":"nobf","n":2,"good":[0],"biases":[["3/4",0]],"outputs":[{"position":1,"support":[0],"table":"10"}]}"#,
            r#"{"type":"affine","n":3,"shift":"100","basis":["010"]}"#,
        ];
        for t in texts {
            let s = parse_source_json(t).unwrap();
            let again = parse_source_json(&source_to_json(&s)).unwrap();
            assert_eq!(s, again);
        }
        let c = parse_source_json(r#"{"type":"clique","k":2}"#).unwrap();
        assert_eq!(c, SourceDescriptor::Local(clique_source(2).unwrap()));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_source_json(r#"{"type":"local","m":1,"outputs":[{"support":[1],"table":"01"}]}"#).is_err());
        assert!(parse_source_json(r#"{"type":"wat"}"#).is_err());
        assert!(parse_source_json(r#"{"type":"nobf","n":1,"good":[0],"biases":[["1/3",1]],"outputs":[]}"#).is_err());
    }
}
