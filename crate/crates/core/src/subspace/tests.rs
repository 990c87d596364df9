use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::f2poly::{parse_poly, random_poly_with};

fn caps() -> Caps {
    Caps::default()
}

fn parity(n: usize) -> MultilinearPoly {
    MultilinearPoly::linear(n, full_mask(n), false)
}

// f_S(x) by its defining sum over subsets of S
fn derivative_by_definition(f: &MultilinearPoly, dirs: &[u64], x: u64) -> bool {
    (0..1u64 << dirs.len()).fold(false, |acc, t| {
        let p = dirs.iter().enumerate().filter(|(i, _)| t >> i & 1 == 1).fold(x, |p, (_, v)| p ^ v);
        acc ^ f.eval(p)
    })
}

#[test]
fn closure_examples() {
    let c = caps();
    let f = parse_poly("x1*x2 + x3", 3).unwrap();
    assert_eq!(derivative_list(&f, &[], 2, &c).unwrap(), vec![f.clone()]);
    assert_eq!(derivative_list(&f, &[0b001, 0b010], 2, &c).unwrap().len(), 4);
    let g = parse_poly("x1*x2", 2).unwrap();
    let sys = derivative_closure(&g, &[0b01], 2, &c).unwrap();
    assert_eq!(sys.polys(), &[g.clone(), parse_poly("x2", 2).unwrap()]);
}

#[test]
fn derivatives_match_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..50 {
        let n = rng.gen_range(1..=6);
        let f = random_poly_with(&mut rng, n, 3);
        let k = rng.gen_range(0..=3);
        let dirs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..1u64 << n)).collect();
        let g = f.directional_derivative(&dirs).unwrap();
        for x in 0..1u64 << n {
            assert_eq!(g.eval(x), derivative_by_definition(&f, &dirs, x));
        }
    }
}

#[test]
fn criterion_examples() {
    let c = caps();
    let r = derivative_criterion_check(&MultilinearPoly::zero(3), 0b101, &[0b001], 0, &c).unwrap();
    assert_eq!((r.lhs, r.rhs, r.agree), (true, true, true));
    let x1 = MultilinearPoly::var(2, 0);
    let r = derivative_criterion_check(&x1, 0, &[0b01], 1, &c).unwrap();
    assert_eq!((r.lhs, r.rhs, r.agree), (false, false, true));
    assert!(derivative_criterion_check(&parse_poly("x1*x2", 2).unwrap(), 0, &[], 1, &c).is_err());
}

#[test]
fn criterion_agrees_on_random_instances() {
    let c = caps();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut both_true = 0;
    for _ in 0..300 {
        let n = rng.gen_range(1..=8);
        let r = rng.gen_range(0..=3);
        // sparse polynomials vanish on small spans often enough to exercise both outcomes
        let f = random_poly_with(&mut rng, n, r);
        let f = if rng.gen_bool(0.5) { f.multiply(&MultilinearPoly::var(n, 0)).unwrap() } else { f };
        let r = f.degree().unwrap_or(0).max(r);
        let k = rng.gen_range(0..=3);
        let basis: Vec<u64> = (0..k).map(|_| rng.gen_range(0..1u64 << n)).collect();
        let x = rng.gen_range(0..1u64 << n);
        let out = derivative_criterion_check(&f, x, &basis, r, &c).unwrap();
        assert!(out.agree, "{f:?} {x} {basis:?}");
        both_true += out.lhs as usize;
    }
    assert!(both_true > 0);
}

#[test]
fn verifier_examples() {
    let c = caps();
    assert!(verify_monochromatic(&MultilinearPoly::one(3), 0b010, &[0b001, 0b100], &c).unwrap());
    assert!(!verify_monochromatic(&MultilinearPoly::var(3, 0), 0, &[0b001], &c).unwrap());
    assert!(verify_d_local(&[0b001, 0b010, 0b100], 1));
    assert!(verify_d_local(&[0b011, 0b110], 2));
    assert!(!verify_d_local(&[0b011, 0b110], 1));
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..20 {
        let basis: Vec<u64> = (0..4).map(|_| rng.gen_range(0..256u64)).collect();
        let max = (0..8).map(|j| basis.iter().filter(|v| *v >> j & 1 == 1).count()).max().unwrap();
        assert!(verify_d_local(&basis, max));
        assert!(max == 0 || !verify_d_local(&basis, max - 1));
    }
}

#[test]
fn grow_zero_polynomial() {
    let out = grow_local_subspace(&MultilinearPoly::zero(4), 1, 1, &caps()).unwrap();
    assert_eq!(out.basis, vec![0b0001, 0b0010, 0b0100, 0b1000]);
    assert!(!out.constant_value && !out.truncated);
}

#[test]
fn grow_parity_chains_pairs() {
    for n in [4, 6, 8] {
        let out = grow_local_subspace(&parity(n), 2, 1, &caps()).unwrap();
        assert_eq!(out.dimension(), n - 1);
        let expected: Vec<u64> = (0..n - 1).map(|i| 0b11 << i).collect();
        assert_eq!(out.basis, expected);
    }
}

#[test]
fn grow_flips_when_constant_term_is_one() {
    let f = parse_poly("x1*x2 + 1", 4).unwrap();
    let out = grow_local_subspace(&f, 1, 2, &caps()).unwrap();
    assert!(out.constant_value);
    assert!(out.dimension() >= 3);
    let g = parse_poly("x1*x2", 4).unwrap();
    let out2 = grow_local_subspace(&g, 1, 2, &caps()).unwrap();
    assert_eq!(out.basis, out2.basis);
    assert!(!out2.constant_value);
}

#[test]
fn grow_trace_invariants() {
    let c = caps();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let n = rng.gen_range(6..=12);
        let d = rng.gen_range(1..=2);
        let f = random_poly_with(&mut rng, n, 2);
        let out = grow_local_subspace(&f, d, 2, &c).unwrap();
        assert!(verify_monochromatic(&f, 0, &out.basis, &c).unwrap());
        assert!(verify_d_local(&out.basis, d));
        assert_eq!(crate::f2poly::rank_u64(&out.basis), out.dimension());
        for (t, step) in out.trace.iter().enumerate() {
            assert_eq!(step.unique, t + 1);
            for later in &out.trace[t + 1..] {
                assert_eq!(later.vector >> step.alpha & 1, 0);
            }
            assert!(step.column_weights.iter().all(|&w| w <= d));
        }
    }
}

#[test]
fn grow_rejects_bad_arguments() {
    let f = parse_poly("x1*x2", 3).unwrap();
    assert!(grow_local_subspace(&f, 0, 2, &caps()).is_err());
    assert!(grow_local_subspace(&f, 1, 1, &caps()).is_err());
}

#[test]
fn oracle_examples() {
    let lim = SearchLimits::default();
    assert_eq!(exhaustive_best_dimension(&MultilinearPoly::zero(3), 1, &lim).unwrap().dimension, 3);
    let best = exhaustive_best_dimension(&parity(4), 2, &lim).unwrap();
    assert_eq!(best.dimension, 3);
    let linear_only = SearchLimits { affine: false, ..lim };
    assert_eq!(exhaustive_best_dimension(&parity(4), 2, &linear_only).unwrap().dimension, 3);
    let best = exhaustive_best_dimension(&MultilinearPoly::var(5, 0), 1, &lim).unwrap();
    assert_eq!(best.dimension, 4);
    assert!(verify_monochromatic(&MultilinearPoly::var(5, 0), best.shift, &best.basis, &caps()).unwrap());
    // parity cannot be constant on the whole space
    assert_eq!(exhaustive_best_dimension(&parity(3), 3, &lim).unwrap().dimension, 2);
    assert!(exhaustive_best_dimension(&MultilinearPoly::zero(9), 1, &lim).unwrap_err().is_cap());
}

#[test]
fn oracle_dominates_grow_on_small_instances() {
    let c = caps();
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let lim = SearchLimits {
        max_dim: 8,
        affine: false,
        ..SearchLimits::default()
    };
    for _ in 0..10 {
        let n = rng.gen_range(3..=6);
        let f = random_poly_with(&mut rng, n, 2);
        let f = if f.eval(0) { f.add(&MultilinearPoly::one(n)).unwrap() } else { f };
        let grown = grow_local_subspace(&f, 2, 2, &c).unwrap();
        let best = exhaustive_best_dimension(&f, 2, &lim).unwrap();
        assert!(best.dimension >= grown.dimension());
        assert!(verify_monochromatic(&f, best.shift, &best.basis, &c).unwrap());
        assert!(verify_d_local(&best.basis, 2));
    }
}
