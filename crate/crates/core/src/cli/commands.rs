use std::path::PathBuf;

use clap::{Args, Subcommand};
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{Outcome, RunConfig};
use crate::barrier;
use crate::cw;
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational, to_f64};
use crate::f2poly::{format_point, infer_n_vars, parse_point, parse_poly, MultilinearPoly};
use crate::lab::{self, FamilySpec, ScanMode};
use crate::reduction;
use crate::sources::io::{parse_source_json, SourceFile};
use crate::sources::{statistical_distance, mixture, AffineSubspace, LocalSource, NobfSource, SourceDescriptor};
use crate::subspace;

#[derive(Args, Debug, Clone)]
pub struct PolyArg {
    /// Polynomial text, e.g. "x1*x2 + x3 + 1"
    #[arg(long, conflicts_with = "file")]
    expr: Option<String>,
    /// File holding the polynomial
    #[arg(long)]
    file: Option<PathBuf>,
    /// Variable count; inferred from the text when omitted
    #[arg(long)]
    n: Option<usize>,
}

impl PolyArg {
    fn load(&self) -> Result<MultilinearPoly> {
        let text = match (&self.expr, &self.file) {
            (Some(e), _) => e.clone(),
            (None, Some(p)) => read(p)?,
            (None, None) => return Err(Error::invalid("give --expr or --file")),
        };
        parse_poly(&text, self.n.unwrap_or_else(|| infer_n_vars(&text)))
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn q(x: &BigRational) -> Value {
    json!({ "exact": fmt_rational(x), "approx": to_f64(x) })
}

fn source_json(s: &NobfSource) -> Value {
    serde_json::to_value(SourceFile::from_source(&SourceDescriptor::Nobf(s.clone()))).expect("json")
}

fn points(xs: &[u64], n: usize) -> Vec<String> {
    xs.iter().map(|&v| format_point(v, n)).collect()
}

#[derive(Subcommand, Debug)]
pub enum PolyCmd {
    /// Normal form, degree and variable count
    Parse(PolyArg),
    /// Value at a point (bitstring, coordinate 1 first)
    Eval {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        point: String,
    },
    /// |Pr[f=0] - Pr[f=1]|
    Bias(PolyArg),
    /// |Pr[f=g] - Pr[f!=g]|
    Corr {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        with: String,
    },
    /// Directional derivative along the given directions
    Derive {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long = "dir")]
        dirs: Vec<String>,
    },
    /// f(a_1, ..., a_n) for polynomials a_i over --k variables
    Compose {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long = "arg")]
        args: Vec<String>,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum CwCmd {
    /// Common solution count against 2^{n - total degree}
    Solve {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Lightest nonzero common solution
    Minweight {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        /// Allowed support as a bitstring
        #[arg(long)]
        allowed: Option<String>,
        #[arg(long)]
        max_weight: Option<usize>,
    },
    /// Rank of the matrix f(x+y) against its bound
    Clprank {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        r: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SubspaceCmd {
    /// Grow a d-local subspace on which f is constant
    Grow {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Check monochromaticity and locality of shift + span(basis)
    Verify {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        shift: Option<String>,
        #[arg(long = "basis")]
        basis: Vec<String>,
    },
    /// Exhaustive best dimension for tiny n
    Oracle {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        /// Only subspaces through 0
        #[arg(long)]
        linear: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SourceArg {
    /// Source JSON file
    #[arg(long)]
    source: PathBuf,
}

impl SourceArg {
    fn load(&self) -> Result<SourceDescriptor> {
        parse_source_json(&read(&self.source)?)
    }

    fn local(&self) -> Result<LocalSource> {
        match self.load()? {
            SourceDescriptor::Local(s) => Ok(s),
            SourceDescriptor::Nobf(s) => s.as_local(),
            SourceDescriptor::Affine(_) => Err(Error::invalid("expected a local source")),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum ReduceCmd {
    /// Local source to a mixture of unbiased NOBF sources
    ToNobf {
        #[command(flatten)]
        source: SourceArg,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        truncate: bool,
    },
    /// Biased NOBF source to unbiased components
    Debias {
        #[command(flatten)]
        source: SourceArg,
    },
    /// Decompose, then check every component and the exact distance
    Verify {
        #[command(flatten)]
        source: SourceArg,
        #[arg(long)]
        t: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArg {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
}

impl FamilyArg {
    fn spec(&self, r: Option<usize>) -> FamilySpec {
        FamilySpec {
            n: self.n,
            k: self.k,
            d: self.d,
            r,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum LabCmd {
    /// Largest bias over every descriptor of a NOBF family
    Census {
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        family: FamilyArg,
        /// Restrict bad bits to degree <= r
        #[arg(long)]
        r: Option<usize>,
        /// Flag a violation when the bias exceeds 2 eps
        #[arg(long)]
        eps: Option<String>,
    },
    /// Census of random degree-r polynomials
    Search {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value = "1/4")]
        eps: String,
    },
    /// Whether f composed with every generating tuple hits a degree in 1..=r
    Disperse {
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        r: usize,
    },
    /// Bias (or correlation with --against) of random polynomials
    Survey {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        against: Option<String>,
    },
    /// Reed-Muller code size, distance and list sizes
    Rm {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long, default_value_t = 50)]
        centers: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum BarrierCmd {
    /// Sidon check of the clique set
    Sidon {
        #[arg(long)]
        k: usize,
    },
    /// Largest fraction of clique points in a dimension-t subspace
    Evade {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Walk every subspace instead of sampling
        #[arg(long)]
        exhaustive: bool,
        /// Only subspaces through 0
        #[arg(long)]
        linear: bool,
    },
    /// Distance lower bound from mixtures of random affine components
    Mixture {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        components: usize,
        #[arg(long)]
        dim: usize,
    },
}

pub(super) fn run(group: &super::Group, cfg: &RunConfig) -> Result<Outcome> {
    use super::Group::*;
    match group {
        Poly(c) => poly(c, cfg),
        Cw(c) => cw_cmd(c, cfg),
        Subspace(c) => subspace_cmd(c, cfg),
        Reduce(c) => reduce(c, cfg),
        Lab(c) => lab_cmd(c, cfg),
        Barrier(c) => barrier_cmd(c, cfg),
    }
}

fn poly(cmd: &PolyCmd, cfg: &RunConfig) -> Result<Outcome> {
    let caps = &cfg.caps;
    Ok(match cmd {
        PolyCmd::Parse(p) => {
            let f = p.load()?;
            Outcome::new(
                "poly parse",
                f.to_string(),
                json!({ "poly": f.to_string(), "n": f.n_vars(), "degree": f.degree(), "monomials": f.monomials().len() }),
            )
        }
        PolyCmd::Eval { poly, point } => {
            let f = poly.load()?;
            let v = f.eval(parse_point(point, f.n_vars())?) as u8;
            Outcome::new("poly eval", v.to_string(), json!({ "poly": f.to_string(), "point": point, "value": v }))
        }
        PolyCmd::Bias(p) => {
            let f = p.load()?;
            let b = f.bias_capped(caps)?;
            Outcome::new("poly bias", fmt_rational(&b), json!({ "poly": f.to_string(), "bias": q(&b) }))
        }
        PolyCmd::Corr { poly, with } => {
            let f = poly.load()?;
            let g = parse_poly(with, f.n_vars())?;
            let c = f.correlation_capped(&g, caps)?;
            Outcome::new(
                "poly corr",
                fmt_rational(&c),
                json!({ "poly": f.to_string(), "with": g.to_string(), "correlation": q(&c) }),
            )
        }
        PolyCmd::Derive { poly, dirs } => {
            let f = poly.load()?;
            let vs: Vec<u64> = dirs.iter().map(|d| parse_point(d, f.n_vars())).collect::<Result<_>>()?;
            let g = f.directional_derivative_capped(&vs, caps)?;
            Outcome::new(
                "poly derive",
                g.to_string(),
                json!({ "poly": f.to_string(), "directions": dirs, "derivative": g.to_string() }),
            )
        }
        PolyCmd::Compose { poly, args, k } => {
            let f = poly.load()?;
            let a: Vec<MultilinearPoly> = args.iter().map(|s| parse_poly(s, *k)).collect::<Result<_>>()?;
            let g = f.substitute(&a)?;
            Outcome::new(
                "poly compose",
                g.to_string(),
                json!({ "poly": f.to_string(), "args": args, "k": k, "composed": g.to_string() }),
            )
        }
    })
}

fn cw_cmd(cmd: &CwCmd, cfg: &RunConfig) -> Result<Outcome> {
    let caps = &cfg.caps;
    Ok(match cmd {
        CwCmd::Solve { file, n } => {
            let sys = cw::parse_system(&read(file)?, *n)?;
            let check = cw::cw_count_check(&sys, caps)?;
            Outcome::new(
                "cw solve",
                format!("count {} bound {} holds {}", check.count, check.bound, check.holds),
                json!({ "n": sys.n(), "members": sys.len(), "check": check }),
            )
            .violated_if(!check.holds)
        }
        CwCmd::Minweight {
            file,
            n,
            allowed,
            max_weight,
        } => {
            let sys = cw::parse_system(&read(file)?, *n)?;
            let allowed_mask = allowed.as_deref().map(|a| parse_point(a, sys.n())).transpose()?;
            let sol = cw::min_weight_nontrivial_solution(&sys, allowed_mask, *max_weight, caps)?;
            let s = allowed_mask.map_or(sys.n(), |m| m.count_ones() as usize);
            let (d, delta) = (sys.linear_degree(), sys.nonlinear_degree());
            let bound = if d + delta < s && sys.is_solution(0) {
                Some(cw::low_weight_bound(d, delta, s)?)
            } else {
                None
            };
            let violated = match (bound, sol) {
                (Some(b), Some(x)) => x.weight as f64 > b,
                (Some(_), None) => max_weight.is_none(),
                _ => false,
            };
            let text = match sol {
                Some(x) => format!("{} {}", format_point(x.vector, sys.n()), x.weight),
                None => "none".to_string(),
            };
            Outcome::new(
                "cw minweight",
                text,
                json!({
                    "n": sys.n(),
                    "linear_degree": d,
                    "nonlinear_degree": delta,
                    "solution": sol.map(|x| json!({ "vector": format_point(x.vector, sys.n()), "weight": x.weight })),
                    "bound": bound,
                }),
            )
            .violated_if(violated)
        }
        CwCmd::Clprank { poly, r } => {
            let f = poly.load()?;
            let r = r.unwrap_or_else(|| f.degree().unwrap_or(0));
            let check = cw::clp_rank_check(&f, r, caps)?;
            Outcome::new(
                "cw clprank",
                format!("rank {} bound {}", check.rank, check.bound),
                json!({ "poly": f.to_string(), "r": r, "check": check }),
            )
            .violated_if(!check.holds)
        }
    })
}

fn subspace_cmd(cmd: &SubspaceCmd, cfg: &RunConfig) -> Result<Outcome> {
    let caps = &cfg.caps;
    Ok(match cmd {
        SubspaceCmd::Grow { poly, d, r } => {
            let f = poly.load()?;
            let r = r.unwrap_or_else(|| f.degree().unwrap_or(0).max(1));
            let out = subspace::grow_local_subspace(&f, *d, r, caps)?;
            let n = f.n_vars();
            Outcome::new(
                "subspace grow",
                format!("dimension {} basis {}", out.dimension(), points(&out.basis, n).join(" ")),
                json!({
                    "poly": f.to_string(),
                    "d": d,
                    "r": r,
                    "dimension": out.dimension(),
                    "constant_value": out.constant_value,
                    "basis": points(&out.basis, n),
                    "truncated": out.truncated,
                    "trace": out.trace,
                }),
            )
        }
        SubspaceCmd::Verify { poly, d, shift, basis } => {
            let f = poly.load()?;
            let n = f.n_vars();
            let shift = shift.as_deref().map(|s| parse_point(s, n)).transpose()?.unwrap_or(0);
            let vs: Vec<u64> = basis.iter().map(|b| parse_point(b, n)).collect::<Result<_>>()?;
            let mono = subspace::verify_monochromatic(&f, shift, &vs, caps)?;
            let local = subspace::verify_d_local(&vs, *d);
            let independent = crate::f2poly::rank_u64(&vs) == vs.len();
            Outcome::new(
                "subspace verify",
                format!("monochromatic: {mono}, {d}-local: {local}, independent: {independent}"),
                json!({ "monochromatic": mono, "local": local, "independent": independent }),
            )
            .violated_if(!(mono && local && independent))
        }
        SubspaceCmd::Oracle {
            poly,
            d,
            max_dim,
            linear,
        } => {
            let f = poly.load()?;
            let limits = subspace::SearchLimits {
                max_dim: *max_dim,
                affine: !linear,
                ..Default::default()
            };
            let best = subspace::exhaustive_best_dimension(&f, *d, &limits)?;
            let n = f.n_vars();
            Outcome::new(
                "subspace oracle",
                format!("dimension {}", best.dimension),
                json!({
                    "dimension": best.dimension,
                    "shift": format_point(best.shift, n),
                    "basis": points(&best.basis, n),
                    "at_limit": best.at_limit,
                    "nodes": best.nodes,
                }),
            )
        }
    })
}

fn decomposition_json(dec: &reduction::NobfDecomposition) -> Value {
    json!({
        "epsilon": dec.epsilon,
        "k_prime": fmt_rational(&dec.k_prime),
        "dropped_weight": fmt_rational(&dec.dropped_weight),
        "truncated": dec.truncated,
        "leaves": dec.leaf_count,
        "components": dec.components.iter().map(|(w, s)| json!({ "weight": fmt_rational(w), "source": source_json(s) })).collect::<Vec<_>>(),
    })
}

fn reduce(cmd: &ReduceCmd, cfg: &RunConfig) -> Result<Outcome> {
    let caps = &cfg.caps;
    Ok(match cmd {
        ReduceCmd::ToNobf { source, t, truncate } => {
            let src = source.local()?;
            let dec = reduction::local_to_nobf(&src, *t, *truncate, caps)?;
            let dist = reduction::verify_decomposition(&src, &dec.combo(), caps)?;
            let mut result = decomposition_json(&dec);
            result["distance"] = q(&dist);
            Outcome::new(
                "reduce to-nobf",
                format!(
                    "components {} epsilon {:.3e} distance {}",
                    dec.components.len(),
                    dec.epsilon,
                    fmt_rational(&dist)
                ),
                result,
            )
        }
        ReduceCmd::Debias { source } => {
            let SourceDescriptor::Nobf(src) = source.load()? else {
                return Err(Error::invalid("expected a NOBF source"));
            };
            let deb = reduction::debias_nobf(&src, caps)?;
            let dist = statistical_distance(&src.exact_distribution(caps)?, &mixture(&deb.combo(), caps)?)?;
            let below = deb.weight_below(&deb.k_prime);
            Outcome::new(
                "reduce debias",
                format!(
                    "components {} mu {} weight below k' {} distance {}",
                    deb.components.len(),
                    fmt_rational(&deb.mu),
                    fmt_rational(&below),
                    fmt_rational(&dist)
                ),
                json!({
                    "mu": fmt_rational(&deb.mu),
                    "k_prime": fmt_rational(&deb.k_prime),
                    "weight_below_k_prime": fmt_rational(&below),
                    "guarantee_holds": deb.guarantee_holds(),
                    "distance": q(&dist),
                    "components": deb.components.iter().map(|(w, s)| json!({ "weight": fmt_rational(w), "source": source_json(s) })).collect::<Vec<_>>(),
                }),
            )
            .violated_if(!dist.is_zero() || !deb.guarantee_holds())
        }
        ReduceCmd::Verify { source, t } => {
            let src = source.local()?;
            let dec = reduction::local_to_nobf(&src, *t, false, caps)?;
            let dist = reduction::verify_decomposition(&src, &dec.combo(), caps)?;
            let d = src.locality();
            let mut failures = Vec::new();
            for (i, (_, s)) in dec.components.iter().enumerate() {
                if let Err(why) = reduction::check_nobf_form(&s.exact_distribution(caps)?, s, d) {
                    failures.push(json!({ "component": i, "reason": why }));
                }
            }
            let ok = dist.is_zero() && failures.is_empty();
            Outcome::new(
                "reduce verify",
                format!(
                    "distance {} components {} checker failures {}",
                    fmt_rational(&dist),
                    dec.components.len(),
                    failures.len()
                ),
                json!({ "distance": q(&dist), "components": dec.components.len(), "failures": failures }),
            )
            .violated_if(!ok)
        }
    })
}

fn lab_cmd(cmd: &LabCmd, cfg: &RunConfig) -> Result<Outcome> {
    let caps = &cfg.caps;
    Ok(match cmd {
        LabCmd::Census { expr, family, r, eps } => {
            let f = parse_poly(expr, family.n)?;
            let out = lab::extractor_census(&f, family.spec(*r), caps)?;
            let eps = eps.as_deref().map(parse_rational).transpose()?;
            let violated = eps
                .as_ref()
                .is_some_and(|e| out.max_bias > e * BigRational::from_integer(2.into()));
            Outcome::new(
                "lab census",
                format!("max bias {} over {} descriptors", fmt_rational(&out.max_bias), out.descriptors),
                json!({
                    "poly": f.to_string(),
                    "family": family.spec(*r),
                    "descriptors": out.descriptors,
                    "max_bias": q(&out.max_bias),
                    "worst_index": out.worst_index,
                    "worst_source": source_json(&out.worst_source),
                    "disperser": out.disperser,
                }),
            )
            .violated_if(violated)
        }
        LabCmd::Search { family, r, trials, eps } => {
            let eps = parse_rational(eps)?;
            let out = lab::extractor_search(family.spec(None), *r, *trials, cfg.seed, &eps, caps)?;
            Outcome::new(
                "lab search",
                format!(
                    "success fraction {} best bias {} at trial {}",
                    fmt_rational(&out.success_fraction),
                    fmt_rational(&out.best_bias),
                    out.best_trial
                ),
                json!({
                    "family": family.spec(None),
                    "r": r,
                    "eps": fmt_rational(&eps),
                    "trials": out.trials,
                    "successes": out.successes,
                    "success_fraction": q(&out.success_fraction),
                    "best_trial": out.best_trial,
                    "best_poly": out.best_poly.to_string(),
                    "best_bias": q(&out.best_bias),
                    "biases": out.biases.iter().map(fmt_rational).collect::<Vec<_>>(),
                }),
            )
        }
        LabCmd::Disperse { expr, family, r } => {
            let f = parse_poly(expr, family.n)?;
            let out = lab::disperser_census_via_hitting(&f, family.spec(Some(*r)), caps)?;
            let failure = out.first_failure.as_ref().map(|x| {
                json!({ "index": x.index, "source": source_json(&x.source), "composed": x.composed.to_string() })
            });
            Outcome::new(
                "lab disperse",
                format!("all hit: {}", out.all_hit),
                json!({ "poly": f.to_string(), "family": family.spec(Some(*r)), "descriptors": out.descriptors, "all_hit": out.all_hit, "first_failure": failure }),
            )
            .violated_if(!out.all_hit)
        }
        LabCmd::Survey { n, r, trials, against } => {
            let report = match against {
                Some(g) => lab::correlation_survey(&parse_poly(g, *n)?, *r, *trials, cfg.seed, caps)?,
                None => lab::random_bias_survey(*n, *r, *trials, cfg.seed, caps)?,
            };
            let mut csv = Vec::new();
            report.write_csv(&mut csv)?;
            let median = report.quantile(0.5).unwrap_or_else(BigRational::zero);
            let p95 = report.quantile(0.95).unwrap_or_else(BigRational::zero);
            let mut out = Outcome::new(
                "lab survey",
                format!(
                    "{} trials median {} p95 {}",
                    report.values.len(),
                    fmt_rational(&median),
                    fmt_rational(&p95)
                ),
                report.to_json(),
            );
            out.csv = Some(String::from_utf8(csv).expect("utf8"));
            out
        }
        LabCmd::Rm { m, r, radius, centers } => {
            let code = lab::rm_code(*m, *r, caps)?;
            let dist = code.min_distance();
            let expected = 1u64 << m.saturating_sub(*r);
            let radius = radius.unwrap_or_else(|| (expected as usize).saturating_sub(1) / 2);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let scan = lab::rm_list_scan(&code, radius, *centers, &mut rng)?;
            let size_ok = code.dimension() as u128 == crate::combinatorics::binomial_le_u128(*m as u64, *r as u64);
            let dist_ok = *r >= *m || dist == Some(expected);
            Outcome::new(
                "lab rm",
                format!(
                    "size {} length {} min distance {} max list {} at radius {}",
                    code.len(),
                    code.block_length(),
                    dist.map_or("-".into(), |d| d.to_string()),
                    scan.max_count,
                    radius
                ),
                json!({
                    "m": m,
                    "r": r,
                    "size": code.len(),
                    "block_length": code.block_length(),
                    "min_distance": dist,
                    "list_scan": scan,
                }),
            )
            .violated_if(!size_ok || !dist_ok || scan.hamming_bound_holds == Some(false))
        }
    })
}

fn barrier_cmd(cmd: &BarrierCmd, cfg: &RunConfig) -> Result<Outcome> {
    let caps = &cfg.caps;
    Ok(match cmd {
        BarrierCmd::Sidon { k } => {
            let qs = barrier::clique_set(*k)?;
            let r = barrier::sidon_check(&qs.points);
            Outcome::new(
                "barrier sidon",
                format!("sidon: {}", r.is_sidon),
                json!({ "k": k, "n": qs.n, "points": qs.points.len(), "report": r }),
            )
            .violated_if(!r.is_sidon)
        }
        BarrierCmd::Evade {
            k,
            t,
            trials,
            exhaustive,
            linear,
        } => {
            let mode = if *exhaustive {
                ScanMode::Exhaustive
            } else {
                ScanMode::Random {
                    trials: *trials,
                    seed: cfg.seed,
                }
            };
            let r = barrier::evasiveness_scan(*k, *t, mode, !linear, caps)?;
            let ok = r.holds && r.sidon_everywhere && r.pair_inequality_everywhere;
            Outcome::new(
                "barrier evade",
                format!("max fraction {} bound {:.4} holds: {}", r.max_fraction, r.bound, r.holds),
                json!({ "mode": mode, "report": r }),
            )
            .violated_if(!ok)
        }
        BarrierCmd::Mixture { k, components, dim } => {
            let n = barrier::clique_n(*k);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let comps: Vec<AffineSubspace> = (0..*components)
                .map(|_| barrier::random_subspace(&mut rng, n, *dim, true))
                .collect::<Result<_>>()?;
            let m = barrier::affine_mixture_distance_bound(*k, &comps, None, caps)?;
            let text = match &m.true_distance {
                Some(d) => format!("bound {} distance {}", fmt_rational(&m.bound), fmt_rational(d)),
                None => format!("bound {}", fmt_rational(&m.bound)),
            };
            Outcome::new(
                "barrier mixture",
                text,
                json!({
                    "k": k,
                    "dim": dim,
                    "components": comps.iter().map(|c| json!({ "shift": format_point(c.shift(), n), "basis": points(c.basis(), n) })).collect::<Vec<_>>(),
                    "fractions": m.fractions.iter().map(fmt_rational).collect::<Vec<_>>(),
                    "bound": q(&m.bound),
                    "true_distance": m.true_distance.as_ref().map(q),
                    "consistent": m.consistent,
                }),
            )
            .violated_if(m.consistent == Some(false))
        }
    })
}
