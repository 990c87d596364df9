use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::config::Caps;
use crate::exact::ratio;
use crate::f2poly::{parse_poly, random_poly_with, MultilinearPoly, TruthTable};
use crate::sources::{random_nobf_source, AffineSubspace, ExactDistribution};

fn caps() -> Caps {
    Caps::default()
}

#[test]
fn family_counts() {
    let c = caps();
    for (spec, expected) in [
        (FamilySpec::new(2, 2, 1), 1u64),
        (FamilySpec::new(3, 2, 1), 24),
        (FamilySpec::new(6, 4, 1), 3840),
    ] {
        assert_eq!(spec.descriptor_count(), expected.into());
        assert_eq!(enumerate_nobf_family(spec, &c).unwrap().count() as u64, expected);
    }
    // 15 good sets, then (binom(4,2) supports · 2^{1+2} degree-1 tables)^2
    assert_eq!(FamilySpec::with_degree(6, 4, 2, 1).descriptor_count(), (15u64 * 48 * 48).into());
    assert_eq!(FamilySpec::new(6, 4, 1).family_bound(), 3840u64.into());
    let tiny = Caps { family: 100, ..c };
    assert!(Family::new(FamilySpec::new(6, 4, 1), &tiny).unwrap_err().is_cap());
}

#[test]
fn family_descriptors_are_distinct_and_local() {
    let spec = FamilySpec::new(4, 2, 2);
    let all: Vec<_> = enumerate_nobf_family(spec, &caps()).unwrap().collect();
    let set: BTreeSet<String> = all.iter().map(|s| format!("{s:?}")).collect();
    assert_eq!(set.len(), all.len());
    assert!(all.iter().all(|s| s.k() == 2 && s.locality() == 2 && s.is_unbiased()));
}

#[test]
fn family_covers_every_local_source() {
    let c = caps();
    let spec = FamilySpec::new(4, 2, 1);
    let dists: BTreeSet<String> = enumerate_nobf_family(spec, &c)
        .unwrap()
        .map(|s| format!("{:?}", s.exact_distribution(&c).unwrap()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for _ in 0..100 {
        let src = random_nobf_source(&mut rng, 4, 2, 1, 2).unbiased();
        assert!(dists.contains(&format!("{:?}", src.exact_distribution(&c).unwrap())));
    }
}

#[test]
fn census_examples() {
    let c = caps();
    let f = parse_poly("x1 + x2", 2).unwrap();
    let out = extractor_census(&f, FamilySpec::new(2, 1, 1), &c).unwrap();
    assert_eq!(out.descriptors, 8);
    assert_eq!(out.max_bias, BigRational::one());
    assert!(!out.disperser);
    let out = extractor_census(&MultilinearPoly::var(2, 1), FamilySpec::new(2, 2, 1), &c).unwrap();
    assert_eq!(out.max_bias, BigRational::zero());
    assert!(out.disperser);
}

#[test]
fn census_matches_direct_recomputation() {
    let c = caps();
    let spec = FamilySpec::new(6, 4, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..3 {
        let f = random_poly_with(&mut rng, 6, 2);
        let out = extractor_census(&f, spec, &c).unwrap();
        let mut best = (BigRational::zero(), 0u64);
        let mut all_nonconstant = true;
        for (i, src) in enumerate_nobf_family(spec, &c).unwrap().enumerate() {
            let b = src.exact_distribution(&c).unwrap().bias_under(&f).unwrap();
            all_nonconstant &= !b.is_one();
            if i == 0 || b > best.0 {
                best = (b, i as u64);
            }
        }
        assert_eq!(out.max_bias, best.0);
        assert_eq!(out.worst_index, best.1);
        assert_eq!(out.disperser, all_nonconstant);
        assert_eq!(Family::new(spec, &c).unwrap().source(best.1), out.worst_source);
    }
}

#[test]
fn search_examples() {
    let c = caps();
    let spec = FamilySpec::new(2, 2, 1);
    let polys = all_polys_up_to_degree(2, 1, &c).unwrap();
    assert_eq!(polys.len(), 8);
    let out = search_polys(&polys, spec, &BigRational::zero(), &c).unwrap();
    assert_eq!(out.success_fraction, ratio(6, 8));
    let out = extractor_search(FamilySpec::new(4, 2, 1), 2, 10, 5, &BigRational::one(), &c).unwrap();
    assert_eq!(out.success_fraction, BigRational::one());
    let again = extractor_search(FamilySpec::new(4, 2, 1), 2, 10, 5, &BigRational::one(), &c).unwrap();
    assert_eq!(out, again);
    assert!(out.biases.iter().all(|b| *b >= out.best_bias));
}

#[test]
fn hitting_census_examples() {
    let c = caps();
    let spec = FamilySpec::with_degree(2, 2, 1, 1);
    assert!(disperser_census_via_hitting(&MultilinearPoly::var(2, 0), spec, &c).unwrap().all_hit);
    let out = disperser_census_via_hitting(&MultilinearPoly::one(3), FamilySpec::with_degree(3, 2, 1, 2), &c).unwrap();
    assert!(!out.all_hit);
    assert_eq!(out.first_failure.unwrap().index, 0);
    assert!(disperser_census_via_hitting(&MultilinearPoly::var(2, 0), FamilySpec::new(2, 2, 1), &c).is_err());
}

#[test]
fn generating_polys_reproduce_sources() {
    let c = caps();
    let family = Family::new(FamilySpec::new(4, 2, 2), &c).unwrap();
    for i in (0..family.len()).step_by(7) {
        let src = family.source(i);
        let a = generating_polys(&src).unwrap();
        for y in 0..4u64 {
            let x = a.iter().enumerate().fold(0u64, |x, (j, p)| x | (p.eval(y) as u64) << j);
            assert_eq!(x, src.eval(y));
        }
    }
}

#[test]
fn hitting_census_implies_disperser() {
    let c = caps();
    let spec = FamilySpec::with_degree(3, 2, 1, 1);
    let mut seen = [0usize; 2];
    for f in all_polys_up_to_degree(3, 2, &c).unwrap() {
        let hit = disperser_census_via_hitting(&f, spec, &c).unwrap();
        let census = extractor_census(&f, spec, &c).unwrap();
        if hit.all_hit {
            assert!(census.disperser);
        }
        if census.max_bias < crate::exact::half() {
            assert!(census.disperser);
        }
        seen[hit.all_hit as usize] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn hitting_lemma_examples() {
    let f = parse_poly("x1*x2 + x3", 3).unwrap();
    let a = vec![
        MultilinearPoly::var(3, 0),
        MultilinearPoly::var(3, 1),
        MultilinearPoly::var(3, 2),
    ];
    let zero = vec![MultilinearPoly::zero(3); 3];
    let v = hitting_lemma_check(&f, &a, &zero, 2).unwrap();
    assert!(v.holds());
    let f = MultilinearPoly::var(1, 0);
    let a = vec![MultilinearPoly::var(3, 0)];
    let b = vec![parse_poly("x1*x2*x3", 3).unwrap()];
    assert!(matches!(hitting_lemma_check(&f, &a, &b, 2), Err(crate::Error::Precondition(_))));
    assert!(hitting_lemma_check(&f, &a, &b, 1).unwrap().holds());
    let low_b = vec![parse_poly("x2", 3).unwrap()];
    assert!(matches!(hitting_lemma_check(&f, &a, &low_b, 1), Err(crate::Error::Precondition(_))));
}

#[test]
fn hitting_lemma_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut accepted = 0;
    while accepted < 200 {
        if let Some((f, a, b, r)) = random_hitting_instance(&mut rng, 6, 6, 3) {
            assert!(hitting_lemma_check(&f, &a, &b, r).unwrap().holds());
            accepted += 1;
        }
    }
}

#[test]
fn survey_examples() {
    let c = caps();
    let s = random_bias_survey(6, 0, 20, 1, &c).unwrap();
    assert!(s.values.iter().all(|v| v.is_one()));
    let s = random_bias_survey(12, 1, 50, 2, &c).unwrap();
    for (t, v) in s.values.iter().enumerate() {
        let f = crate::f2poly::random_poly(12, 1, crate::combinatorics::trial_seed(2, t as u64));
        assert_eq!(v.is_zero(), f.degree() == Some(1));
    }
    let bias = random_bias_survey(8, 2, 30, 3, &c).unwrap();
    let corr = correlation_survey(&MultilinearPoly::zero(8), 2, 30, 3, &c).unwrap();
    assert_eq!(bias.values, corr.values);
    assert_eq!(bias, random_bias_survey(8, 2, 30, 3, &c).unwrap());
}

#[test]
fn correlation_matches_definition() {
    let c = caps();
    let maj = MultilinearPoly::from_truth_table(&TruthTable::from_fn(5, |x| x.count_ones() >= 3));
    let s = correlation_survey(&maj, 2, 10, 4, &c).unwrap();
    for (t, v) in s.values.iter().enumerate() {
        let f = crate::f2poly::random_poly(5, 2, crate::combinatorics::trial_seed(4, t as u64));
        assert_eq!(*v, f.add(&maj).unwrap().bias().unwrap());
    }
}

#[test]
fn quantiles_are_nearest_rank() {
    let report = SurveyReport {
        params: SurveyParams {
            kind: "bias".into(),
            n: 1,
            r: 1,
            trials: 4,
            against: None,
        },
        seed: 0,
        values: vec![ratio(3, 4), ratio(1, 4), ratio(1, 2), ratio(0, 1)],
    };
    assert_eq!(report.quantile(0.0), Some(ratio(0, 1)));
    assert_eq!(report.quantile(0.5), Some(ratio(1, 4)));
    assert_eq!(report.quantile(0.75), Some(ratio(1, 2)));
    assert_eq!(report.quantile(0.95), Some(ratio(3, 4)));
    assert_eq!(report.fraction_at_most(&ratio(1, 2)), 0.75);
    let mut buf = Vec::new();
    report.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("trial,value,value_approx\n0,3/4,0.75\n"));
    let json = report.to_json();
    assert_eq!(json["values"][1], "1/4");
    assert_eq!(json["quantiles"].as_array().unwrap().len(), QUANTILE_LEVELS.len());
}

#[test]
fn reed_muller_parameters() {
    let c = caps();
    let rm41 = rm_code(4, 1, &c).unwrap();
    assert_eq!((rm41.len(), rm41.block_length(), rm41.min_distance()), (32, 16, Some(8)));
    let rm22 = rm_code(2, 2, &c).unwrap();
    assert_eq!(rm22.len(), 16);
    let all: BTreeSet<String> = rm22.codewords.iter().map(TruthTable::to_bitstring).collect();
    assert_eq!(all.len(), 16);
    for (m, r) in [(3, 0), (3, 1), (3, 2), (4, 3), (5, 2)] {
        let code = rm_code(m, r, &c).unwrap();
        assert_eq!(code.len(), 1 << crate::combinatorics::binomial_le_u128(m as u64, r as u64));
        assert_eq!(code.min_distance(), Some(1 << (m - r)));
    }
    let code = rm_code(3, 1, &c).unwrap();
    for (i, w) in code.codewords.iter().enumerate() {
        assert_eq!(*w, rm_codeword_poly(3, 1, i as u64).unwrap().truth_table().unwrap());
    }
}

#[test]
fn reed_muller_pairwise_distance() {
    let code = rm_code(4, 2, &caps()).unwrap();
    assert_eq!(code.len(), 2048);
    let mut min = u64::MAX;
    for i in 0..code.len() {
        for j in i + 1..code.len() {
            min = min.min(code.codewords[i].distance(&code.codewords[j]).unwrap());
        }
    }
    assert_eq!(min, 4);
    assert_eq!(code.min_distance(), Some(4));
}

#[test]
fn list_sizes() {
    let code = rm_code(4, 1, &caps()).unwrap();
    let w = code.codewords[5].clone();
    assert_eq!(rm_list_size(&code, &w, 0).unwrap(), 1);
    assert_eq!(rm_list_size(&code, &w, 16).unwrap(), 32);
    assert!(rm_list_size(&code, &w, 17).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let scan = rm_list_scan(&code, 3, 50, &mut rng).unwrap();
    assert!(scan.max_count <= 1);
    assert_eq!(scan.hamming_bound_holds, Some(true));
    // radius 8 balls around random centers
    let scan = rm_list_scan(&code, 8, 50, &mut rng).unwrap();
    assert_eq!(scan.hamming_bound_holds, Some(true));
    assert!(!hamming_bound_holds(32, 16, 8, 1));
}

// every d-local independent k-subset and every shift, biases via the restriction
fn affine_oracle(f: &MultilinearPoly, d: usize, k: usize) -> BigRational {
    let n = f.n_vars();
    let mut best = BigRational::zero();
    for set in crate::combinatorics::Combinations::of_range((1 << n) - 1, k) {
        let basis: Vec<u64> = crate::combinatorics::bits_of(set).map(|i| i as u64 + 1).collect();
        if !crate::subspace::verify_d_local(&basis, d) || crate::f2poly::rank_u64(&basis) != k {
            continue;
        }
        for shift in 0..1u64 << n {
            let sub = AffineSubspace::new(n, shift, basis.clone()).unwrap();
            let b = sub.canonical_form().restrict(f).unwrap().bias().unwrap();
            best = best.max(b);
        }
    }
    best
}

#[test]
fn affine_census_matches_oracle() {
    let c = caps();
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for (d, k) in [(1, 2), (2, 2), (1, 3)] {
        let f = random_poly_with(&mut rng, 5, 2);
        let out = affine_extractor_census(&f, d, k, ScanMode::Exhaustive, &c).unwrap();
        assert_eq!(out.max_bias, affine_oracle(&f, d, k));
        let worst = ExactDistribution::uniform_over(5, out.worst.points(&c).unwrap()).unwrap();
        assert_eq!(worst.bias_under(&f).unwrap(), out.max_bias);
        assert!(out.worst.locality() <= d);
    }
}

#[test]
fn affine_census_examples() {
    let c = caps();
    let out = affine_extractor_census(&MultilinearPoly::one(6), 1, 3, ScanMode::Exhaustive, &c).unwrap();
    assert!(out.max_bias.is_one());
    // 10 ways to pick 3 disjoint nonempty blocks of 4 coordinates, 2 cosets each
    let f = MultilinearPoly::zero(4);
    let out = affine_extractor_census(&f, 1, 3, ScanMode::Exhaustive, &c).unwrap();
    assert_eq!(out.scanned, 10 * 2);
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for _ in 0..50 {
        let basis = random_local_basis(&mut rng, 8, 2, 3).unwrap();
        let sub = AffineSubspace::new(8, rng.gen::<u64>() & 0xff, basis).unwrap();
        assert!(sub.locality() <= 2);
        let form = sub.canonical_form();
        for &p in &form.pivots {
            assert!(form.restrict(&MultilinearPoly::var(8, p)).unwrap().bias().unwrap().is_zero());
        }
    }
    let sampled = affine_extractor_census(
        &random_poly_with(&mut rng, 8, 2),
        1,
        3,
        ScanMode::Random { trials: 100, seed: 9 },
        &c,
    )
    .unwrap();
    assert_eq!(sampled.scanned, 100);
}
