//! Local sources as exact convex combinations of biased NOBF sources.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::combinatorics::{bits_of, deposit, extract};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::exact::fmt_rational;
use crate::f2poly::{format_point, TruthTable};
use crate::sources::{BadBit, Bias, LocalOutput, LocalSource, NobfSource};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// Few disjoint non-constant outputs: fix their seeds, locality drops.
    FixSupports,
    /// Many disjoint non-constant outputs: they become the good bits.
    GoodBits,
    /// Locality at most 1.
    Base,
}

impl Case {
    pub fn tag(self) -> &'static str {
        match self {
            Case::FixSupports => "case-i",
            Case::GoodBits => "case-ii",
            Case::Base => "base",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixingNode {
    Split {
        case: Case,
        /// Seed coordinates fixed on the way to the children.
        fixed: Vec<usize>,
        /// For the good-bit case, the outputs that became good bits.
        good: Vec<usize>,
        branches: Vec<Branch>,
    },
    Leaf {
        case: Case,
        source: NobfSource,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub label: String,
    /// Conditional probability of this branch given its parent.
    pub weight: BigRational,
    pub node: FixingNode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixingTree {
    pub root: FixingNode,
    pub t: usize,
    pub locality: usize,
}

/// A leaf with its absolute weight and the labels on the path to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub weight: BigRational,
    pub path: Vec<String>,
    pub case: Case,
    pub source: NobfSource,
}

impl FixingTree {
    pub fn leaves(&self) -> Vec<Leaf> {
        let mut out = Vec::new();
        collect(&self.root, BigRational::one(), &mut Vec::new(), &mut out);
        out
    }

    pub fn leaf_count(&self) -> usize {
        fn count(n: &FixingNode) -> usize {
            match n {
                FixingNode::Leaf { .. } => 1,
                FixingNode::Split { branches, .. } => branches.iter().map(|b| count(&b.node)).sum(),
            }
        }
        count(&self.root)
    }

    pub fn to_json(&self) -> Value {
        json!({ "t": self.t, "locality": self.locality, "root": node_json(&self.root) })
    }
}

fn collect(node: &FixingNode, w: BigRational, path: &mut Vec<String>, out: &mut Vec<Leaf>) {
    match node {
        FixingNode::Leaf { case, source } => out.push(Leaf {
            weight: w,
            path: path.clone(),
            case: *case,
            source: source.clone(),
        }),
        FixingNode::Split { branches, .. } => {
            for b in branches {
                path.push(b.label.clone());
                collect(&b.node, &w * &b.weight, path, out);
                path.pop();
            }
        }
    }
}

fn node_json(node: &FixingNode) -> Value {
    match node {
        FixingNode::Leaf { case, source } => json!({
            "case": case.tag(),
            "leaf": serde_json::to_value(crate::sources::io::SourceFile::from_source(&source.clone().into()))
                .expect("serializable"),
        }),
        FixingNode::Split {
            case,
            fixed,
            good,
            branches,
        } => json!({
            "case": case.tag(),
            "fixed": fixed,
            "good": good,
            "branches": branches.iter().map(|b| json!({
                "label": b.label,
                "weight": fmt_rational(&b.weight),
                "node": node_json(&b.node),
            })).collect::<Vec<_>>(),
        }),
    }
}

/// Greedy maximal set of non-constant outputs with pairwise disjoint supports,
/// scanning outputs in ascending order. Supports are the outputs' effective ones.
pub fn find_maximal_disjoint_set(source: &LocalSource) -> Vec<usize> {
    let mut used = 0u64;
    let mut t = Vec::new();
    for (i, o) in source.outputs().iter().enumerate() {
        let o = o.effective();
        if o.is_constant() {
            continue;
        }
        let mask = o.support_mask();
        if mask & used == 0 {
            used |= mask;
            t.push(i);
        }
    }
    t
}

/// Decompose `source` into biased NOBF leaves whose mixture is exactly its distribution.
pub fn local_to_biased_nobf(source: &LocalSource, t: usize, caps: &Caps) -> Result<FixingTree> {
    if t < 1 {
        return Err(Error::invalid("target good-bit count t must be at least 1"));
    }
    caps.check_dist(source.m())?;
    let effective = LocalSource::new(
        source.m(),
        source.outputs().iter().map(LocalOutput::effective).collect(),
    )?;
    let root = reduce(&effective, t, caps)?;
    Ok(FixingTree {
        root,
        t,
        locality: source.locality(),
    })
}

fn reduce(src: &LocalSource, t: usize, caps: &Caps) -> Result<FixingNode> {
    let d = src.locality();
    if d <= 1 {
        return Ok(FixingNode::Leaf {
            case: Case::Base,
            source: base_case(src)?,
        });
    }
    let tset = find_maximal_disjoint_set(src);
    if tset.len() < t {
        let fixed_mask = tset.iter().fold(0u64, |m, &i| m | src.outputs()[i].support_mask());
        let fixed: Vec<usize> = bits_of(fixed_mask).collect();
        let count = 1u64 << fixed.len();
        let weight = BigRational::new(BigInt::one(), BigInt::from(count));
        let branches = (0..count)
            .into_par_iter()
            .map(|v| {
                let child = src.fix_seeds(fixed_mask, deposit(v, fixed_mask));
                assert!(
                    child.locality() < d,
                    "fixing the supports of a maximal disjoint set must lower locality"
                );
                Ok(Branch {
                    label: format_point(v, fixed.len()),
                    weight: weight.clone(),
                    node: reduce(&child, t, caps)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut branches = branches;
        branches.sort_by(|a, b| a.label.cmp(&b.label));
        return Ok(FixingNode::Split {
            case: Case::FixSupports,
            fixed,
            good: Vec::new(),
            branches,
        });
    }
    good_bit_case(src, &tset, caps)
}

/// Locality ≤ 1: each output is constant or a literal of one seed bit.
fn base_case(src: &LocalSource) -> Result<NobfSource> {
    let n = src.n();
    // seed bit -> (good ordinal, whether that good output is negated)
    let mut owner: BTreeMap<usize, (usize, bool)> = BTreeMap::new();
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for (j, o) in src.outputs().iter().enumerate() {
        if o.support.is_empty() {
            bad.push(BadBit::constant(j, o.table.get(0)));
            continue;
        }
        let s = o.support[0];
        let negated = o.table.get(0);
        match owner.get(&s) {
            None => {
                owner.insert(s, (good.len(), negated));
                good.push(j);
            }
            Some(&(ordinal, good_negated)) => {
                let flip = negated != good_negated;
                bad.push(BadBit {
                    position: j,
                    support: vec![ordinal],
                    table: TruthTable::from_fn(1, |a| (a == 1) != flip),
                });
            }
        }
    }
    let k = good.len();
    NobfSource::new(n, good, vec![Bias::unbiased(); k], bad)
}

/// The outputs in `tset` become good bits `A_i = f_i(Z_i)`. Each seed block
/// `Z_i` is rebuilt as `B_{i, A_i}`, where `B_{i,0}` and `B_{i,1}` are
/// independent and uniform over the fibers `f_i^{-1}(0)` and `f_i^{-1}(1)`.
/// Fixing the `B_{i,a}` that bad outputs look at, together with the free seed
/// bits they read, leaves a biased NOBF source.
fn good_bit_case(src: &LocalSource, tset: &[usize], caps: &Caps) -> Result<FixingNode> {
    let outs = src.outputs();
    let blocks: Vec<u64> = tset.iter().map(|&i| outs[i].support_mask()).collect();
    let covered = blocks.iter().fold(0u64, |a, b| a | b);
    let in_t: BTreeMap<usize, usize> = tset.iter().enumerate().map(|(o, &i)| (i, o)).collect();

    // fibers[o][a] = local assignments of block o with f = a, lexicographic
    let fibers: Vec<[Vec<u64>; 2]> = tset
        .iter()
        .map(|&i| {
            let tb = &outs[i].table;
            let mut f: [Vec<u64>; 2] = [Vec::new(), Vec::new()];
            for z in 0..tb.len() as u64 {
                f[tb.get(z) as usize].push(z);
            }
            f
        })
        .collect();

    // bad outputs: the good ordinals they touch and the free seed bits they read
    let mut touched = 0u64;
    let mut zbar = 0u64;
    for (j, o) in outs.iter().enumerate() {
        if in_t.contains_key(&j) {
            continue;
        }
        let mask = o.support_mask();
        zbar |= mask & !covered;
        for (ord, &b) in blocks.iter().enumerate() {
            if b & mask != 0 {
                touched |= 1 << ord;
            }
        }
    }
    let touched_list: Vec<usize> = bits_of(touched).collect();
    let zbar_bits = zbar.count_ones() as usize;

    // mixed radix over (touched ordinal, a) fiber indices, then the free bits
    let radices: Vec<usize> = touched_list
        .iter()
        .flat_map(|&o| [fibers[o][0].len(), fibers[o][1].len()])
        .collect();
    let combos: u128 = radices.iter().map(|&r| r as u128).product::<u128>() << zbar_bits;
    caps.check_family(combos)?;

    let biases: Vec<Bias> = tset
        .iter()
        .map(|&i| {
            let tb = &outs[i].table;
            Bias::from_prob_one(BigRational::new(
                BigInt::from(tb.count_ones()),
                BigInt::from(tb.len() as u64),
            ))
        })
        .collect::<Result<_>>()?;
    let leaf_weight = BigRational::new(BigInt::one(), BigInt::from(combos));

    let mut branches = Vec::with_capacity(combos as usize);
    let mut digits = vec![0usize; radices.len()];
    loop {
        for zv in 0..1u64 << zbar_bits {
            let zbar_seed = deposit(zv, zbar);
            // choice[o][a] = local seed block for A_o = a
            let mut choice: Vec<[u64; 2]> = vec![[0, 0]; tset.len()];
            for (idx, &o) in touched_list.iter().enumerate() {
                choice[o] = [fibers[o][0][digits[2 * idx]], fibers[o][1][digits[2 * idx + 1]]];
            }
            let mut bad = Vec::new();
            for (j, o) in outs.iter().enumerate() {
                if in_t.contains_key(&j) {
                    continue;
                }
                bad.push(bad_bit(j, o, &blocks, &choice, zbar_seed));
            }
            let source = NobfSource::new(src.n(), tset.to_vec(), biases.clone(), bad)?;
            let mut label = String::new();
            for &o in &touched_list {
                label.push_str(&format!(
                    "B{}=({},{});",
                    tset[o],
                    format_point(choice[o][0], blocks[o].count_ones() as usize),
                    format_point(choice[o][1], blocks[o].count_ones() as usize)
                ));
            }
            label.push_str(&format!("Z={}", format_point(zv, zbar_bits)));
            branches.push(Branch {
                label,
                weight: leaf_weight.clone(),
                node: FixingNode::Leaf {
                    case: Case::GoodBits,
                    source,
                },
            });
        }
        if !advance(&mut digits, &radices) {
            break;
        }
    }
    branches.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(FixingNode::Split {
        case: Case::GoodBits,
        fixed: bits_of(zbar).collect(),
        good: tset.to_vec(),
        branches,
    })
}

/// Bad output `j` as a function of the good ordinals whose blocks it reads.
fn bad_bit(j: usize, o: &LocalOutput, blocks: &[u64], choice: &[[u64; 2]], zbar_seed: u64) -> BadBit {
    let mask = o.support_mask();
    let q: Vec<usize> = (0..blocks.len()).filter(|&ord| blocks[ord] & mask != 0).collect();
    let table = TruthTable::from_fn(q.len(), |a| {
        let mut seed = zbar_seed;
        for (bit, &ord) in q.iter().enumerate() {
            let block = choice[ord][(a >> bit & 1) as usize];
            seed |= deposit(block, blocks[ord]);
        }
        o.table.get(extract(seed, mask))
    });
    // drop good bits the function ignores
    let eff = LocalOutput {
        support: q.clone(),
        table,
    }
    .effective();
    BadBit {
        position: j,
        support: eff.support,
        table: eff.table,
    }
}

fn advance(digits: &mut [usize], radices: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radices) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

/// Total weight of leaves, for sanity checks.
pub fn total_weight(leaves: &[Leaf]) -> BigRational {
    leaves.iter().fold(BigRational::zero(), |a, l| a + &l.weight)
}
