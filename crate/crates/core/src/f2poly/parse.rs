//! Text form of polynomials.
//!
//! ```text
//! expr   := term ("+" term)*
//! term   := "0" | "1" | factor ("*" factor)*
//! factor := "x" integer
//! ```
//!
//! Whitespace is insignificant and variables are 1-based (`x1` is bit 0).

use super::MultilinearPoly;
use crate::error::{Error, Result};

pub fn parse_poly(text: &str, n_vars: usize) -> Result<MultilinearPoly> {
    if n_vars > super::MAX_VARS {
        return Err(Error::invalid(format!(
            "at most {} variables are supported, got {n_vars}",
            super::MAX_VARS
        )));
    }
    let mut p = Parser {
        chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
        at: 0,
        end: text.len(),
        n_vars,
    };
    let mut monomials = Vec::new();
    loop {
        if let Some(m) = p.term()? {
            monomials.push(m);
        }
        match p.peek() {
            None => break,
            Some((_, '+')) => p.at += 1,
            Some((pos, c)) => {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("expected '+' or end of input, found {c:?}"),
                })
            }
        }
    }
    MultilinearPoly::from_monomials(n_vars, monomials)
}

struct Parser {
    chars: Vec<(usize, char)>,
    at: usize,
    end: usize,
    n_vars: usize,
}

impl Parser {
    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.at).copied()
    }

    fn pos(&self) -> usize {
        self.peek().map_or(self.end, |(p, _)| p)
    }

    /// `None` for the constant 0.
    fn term(&mut self) -> Result<Option<u64>> {
        match self.peek() {
            Some((_, '0')) => {
                self.at += 1;
                Ok(None)
            }
            Some((_, '1')) => {
                self.at += 1;
                Ok(Some(0))
            }
            Some((_, 'x')) => {
                let mut mask = self.factor()?;
                while let Some((_, '*')) = self.peek() {
                    self.at += 1;
                    mask |= self.factor()?;
                }
                Ok(Some(mask))
            }
            Some((pos, c)) => Err(Error::Syntax {
                pos,
                msg: format!("expected a term, found {c:?}"),
            }),
            None => Err(Error::Syntax {
                pos: self.end,
                msg: "unexpected end of input".into(),
            }),
        }
    }

    fn factor(&mut self) -> Result<u64> {
        match self.peek() {
            Some((_, 'x')) => self.at += 1,
            _ => {
                return Err(Error::Syntax {
                    pos: self.pos(),
                    msg: "expected a variable 'x<index>'".into(),
                })
            }
        }
        let start = self.pos();
        let mut digits = String::new();
        while let Some((_, c)) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.at += 1;
            } else {
                break;
            }
        }
        if digits.is_empty() {
            return Err(Error::Syntax {
                pos: start,
                msg: "expected a variable index".into(),
            });
        }
        let index: usize = digits.parse().map_err(|_| Error::Syntax {
            pos: start,
            msg: "variable index too large".into(),
        })?;
        if index == 0 || index > self.n_vars {
            return Err(Error::VarOutOfRange {
                index,
                n_vars: self.n_vars,
            });
        }
        Ok(1 << (index - 1))
    }
}

/// Smallest variable count that makes `text` parse (the largest index used).
pub fn infer_n_vars(text: &str) -> usize {
    let mut best = 0;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let mut j = i + 1;
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            let start = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(v) = text[start..j].parse::<usize>() {
                best = best.max(v);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best
}
