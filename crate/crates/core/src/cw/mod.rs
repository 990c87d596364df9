//! Polynomial systems over F2: common solutions, Chevalley-Warning counts,
//! low-weight solutions, sumset solutions and the rank bound for `f(x+y)`.

mod bounds;
mod search;

use rand::Rng;

use crate::combinatorics::support_lex_less;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::f2poly::{infer_n_vars, parse_poly, random_poly_with, rank_u64, MultilinearPoly, TruthTable};

pub use bounds::{
    clp_rank_check, cw_count_check, low_weight_bound, low_weight_cw_check, projection_cw_check,
    sumset_solution_search, weight_inequality_holds, ClpCheck, CountCheck, LowWeightCheck, ProjectionCheck,
    SumsetOutcome, SumsetWitness, CLP_MAX_VARS,
};
pub use search::{min_weight_nontrivial_solution, Solution};

/// A set of polynomials over a shared number of variables.
///
/// The zero polynomial is dropped on insertion; the constant 1 is rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    n: usize,
    polys: Vec<MultilinearPoly>,
}

impl PolySystem {
    pub fn new(n: usize, polys: impl IntoIterator<Item = MultilinearPoly>) -> Result<Self> {
        let mut sys = PolySystem { n, polys: Vec::new() };
        for p in polys {
            sys.push(p)?;
        }
        Ok(sys)
    }

    pub fn empty(n: usize) -> Self {
        PolySystem { n, polys: Vec::new() }
    }

    pub fn push(&mut self, p: MultilinearPoly) -> Result<()> {
        if p.n_vars() != self.n {
            return Err(Error::MismatchedVars {
                left: self.n,
                right: p.n_vars(),
            });
        }
        if p.is_one() {
            return Err(Error::UnsatisfiableSystem { index: self.polys.len() });
        }
        if !p.is_zero() {
            self.polys.push(p);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn polys(&self) -> &[MultilinearPoly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Sum of degrees of the degree-1 members (`D`).
    pub fn linear_degree(&self) -> usize {
        self.polys.iter().filter_map(|p| p.degree()).filter(|&d| d == 1).sum()
    }

    /// Sum of degrees of the members of degree at least 2 (`Δ`).
    pub fn nonlinear_degree(&self) -> usize {
        self.polys.iter().filter_map(|p| p.degree()).filter(|&d| d >= 2).sum()
    }

    pub fn total_degree(&self) -> usize {
        self.polys.iter().filter_map(|p| p.degree()).sum()
    }

    pub fn is_linear(&self) -> bool {
        self.polys.iter().all(|p| p.degree() == Some(1))
    }

    pub fn is_solution(&self, x: u64) -> bool {
        self.polys.iter().all(|p| !p.eval(x))
    }

    /// Drop every constant term, so that 0 is a common solution.
    pub fn strip_constants(&self) -> Self {
        let polys = self
            .polys
            .iter()
            .map(|p| {
                MultilinearPoly::from_monomials(self.n, p.monomials().iter().copied().filter(|&m| m != 0))
                    .expect("submonomials of a valid polynomial")
            })
            .filter(|p| !p.is_zero())
            .collect();
        PolySystem { n: self.n, polys }
    }
}

/// Exact set of common solutions, stored as an indicator table over `{0,1}^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    table: TruthTable,
}

impl SolutionSet {
    pub fn n(&self) -> usize {
        self.table.n_vars()
    }

    pub fn count(&self) -> u64 {
        self.table.count_ones()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.table.get(x)
    }

    pub fn points(&self) -> Vec<u64> {
        (0..self.table.len() as u64).filter(|&x| self.table.get(x)).collect()
    }

    /// The lightest nonzero solution; ties go to the lexicographically smallest support.
    pub fn min_weight_nontrivial(&self) -> Option<Solution> {
        let mut best: Option<u64> = None;
        for x in 1..self.table.len() as u64 {
            if !self.table.get(x) {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => x.count_ones() < b.count_ones() || (x.count_ones() == b.count_ones() && support_lex_less(x, b)),
            };
            if better {
                best = Some(x);
            }
        }
        best.map(|v| Solution {
            vector: v,
            weight: v.count_ones() as usize,
        })
    }

    /// Whether the set is a linear subspace: it holds 0 and has `2^rank` elements.
    pub fn is_subgroup(&self) -> bool {
        let pts = self.points();
        self.contains(0) && pts.len() as u64 == 1u64 << rank_u64(&pts)
    }
}

/// All common solutions by exhaustive evaluation.
pub fn common_solutions(sys: &PolySystem, caps: &Caps) -> Result<SolutionSet> {
    caps.check_table(sys.n)?;
    let mut any = TruthTable::zeros(sys.n);
    for p in &sys.polys {
        any.or_assign(&p.truth_table_capped(caps)?)?;
    }
    let table = any.xor(&TruthTable::ones(sys.n))?;
    Ok(SolutionSet { table })
}

/// Parse a system: one polynomial per line, blank lines and `#` comments skipped.
/// Without `n`, the largest variable index used decides it.
pub fn parse_system(text: &str, n: Option<usize>) -> Result<PolySystem> {
    let content = |line: &str| line.split('#').next().unwrap_or("").to_string();
    let n = n.unwrap_or_else(|| text.lines().map(|l| infer_n_vars(&content(l))).max().unwrap_or(0));
    let mut sys = PolySystem::empty(n);
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = content(line);
        if !body.trim().is_empty() {
            let p = parse_poly(&body, n).map_err(|e| match e {
                Error::Syntax { pos, msg } => Error::Syntax { pos: pos + offset, msg },
                other => other,
            })?;
            sys.push(p)?;
        }
        offset += line.len();
    }
    Ok(sys)
}

/// Random system with constant terms removed and total degree `< n`.
///
/// Members are random polynomials of degree at most 1..=`max_degree`; members are
/// added until the next one would push the total degree to `n`.
pub fn random_system<R: Rng + ?Sized>(rng: &mut R, n: usize, max_degree: usize, max_members: usize) -> PolySystem {
    let mut sys = PolySystem::empty(n);
    let mut total = 0;
    for _ in 0..max_members {
        let r = rng.gen_range(1..=max_degree.max(1));
        let p = random_poly_with(rng, n, r);
        let p = MultilinearPoly::from_monomials(n, p.monomials().iter().copied().filter(|&m| m != 0))
            .expect("submonomials of a valid polynomial");
        let Some(deg) = p.degree() else { continue };
        if total + deg >= n {
            break;
        }
        total += deg;
        sys.push(p).expect("nonconstant member");
    }
    sys
}
