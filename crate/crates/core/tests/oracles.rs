mod common;

use common::*;
use monic_rank::decompose::{
    matrix_monic_decompose, property_p, symmetric_monic_decompose, tensor222_monic_decompose,
    tensor222_sigma2_membership, waring_monic_binary, BinaryForm, Summand, Tensor222,
};
use monic_rank::polysys::{
    expand_monic_powersum, macaulay_membership_oracle, normal_form, reduced_groebner, MonomialOrder, MultiPoly,
    VarSpace, MAX_ORACLE_BOUND,
};
use monic_rank::secant::{generic_monic_rank, staircase, VarietySpec};
use monic_rank::shapiro::{certify_base_case, verify_step, Verdict};
use monic_rank::{Error, Fp, MatC, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn groebner_membership_agrees_with_macaulay_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (i, case) in oracle_corpus(24, 101, &mut rng).into_iter().enumerate() {
        let gb = reduced_groebner(&case.gens, MonomialOrder::WeightedGrevlex).unwrap();
        let member = normal_form(&case.f, &gb).unwrap().is_zero();
        let oracle = macaulay_membership_oracle(&case.f, &case.gens, MAX_ORACLE_BOUND).unwrap();
        assert_eq!(member, oracle, "case {i}: f = {}, gens = {:?}", case.f, case.gens);
    }
}

#[test]
fn unit_ideal_is_detected_by_both_engines() {
    let space = VarSpace::new(2, 1).unwrap();
    let parse = |s: &str| MultiPoly::parse(s, space, 101).unwrap();
    // x + y = 0, x^2 + y^2 = 0, x = 1 has no solution in characteristic != 2
    let gens = [parse("c[1][1] + c[2][1]"), parse("c[1][1]^2 + c[2][1]^2"), parse("c[1][1] - 1")];
    assert!(reduced_groebner(&gens, MonomialOrder::WeightedGrevlex).unwrap().is_unit());
    assert!(macaulay_membership_oracle(&parse("1"), &gens, 4).unwrap());
}

/// Coefficients of `sum_i f_i^d` evaluated at a point, computed by direct
/// univariate expansion over `F_p`.
fn powersum_at_point(k: usize, d: usize, e: usize, point: &[u64]) -> Vec<Fp<101>> {
    type F = Fp<101>;
    let mut total = vec![F::new(0); d * e + 1];
    for i in 0..k {
        let f: Vec<F> = (0..=e).map(|j| if j == 0 { F::new(1) } else { F::from_u64(point[i * e + j - 1]) }).collect();
        let mut power = vec![F::new(1)];
        for _ in 0..d {
            let mut next = vec![F::new(0); power.len() + e];
            for (a, &x) in power.iter().enumerate() {
                for (b, &y) in f.iter().enumerate() {
                    next[a + b] += x * y;
                }
            }
            power = next;
        }
        for (t, p) in total.iter_mut().zip(power) {
            *t += p;
        }
    }
    total
}

#[test]
fn powersum_expansion_matches_pointwise_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (k, d, e) in [(2, 2, 2), (3, 3, 2), (2, 4, 3), (4, 2, 2)] {
        let rs = expand_monic_powersum(k, d, e, 101).unwrap();
        for _ in 0..5 {
            let point: Vec<u64> = (0..k * e).map(|_| rng.gen_range(0..101)).collect();
            let direct = powersum_at_point(k, d, e, &point);
            for (l, r) in rs.iter().enumerate() {
                assert_eq!(r.eval(&point), direct[l + 1].value(), "(k,d,e)=({k},{d},{e}) l={}", l + 1);
            }
        }
    }
}

#[test]
fn small_shapiro_steps_are_proved() {
    for (k, d, e) in [(2, 2, 2), (3, 3, 2)] {
        let report = verify_step(k, d, e, 101).unwrap();
        assert_eq!(report.verdict, Verdict::Proved, "({k},{d},{e})");
        assert_eq!(report.basis, vec!["1".to_string()]);
    }
    assert!(certify_base_case(3, 3).unwrap());
}

#[test]
fn waring_matches_sampled_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let roots: Vec<C64> = (0..6).map(|_| sample(&mut rng)).collect();
    let cert = waring_monic_binary(&BinaryForm::power_sum(&roots, 6), 1e-9).unwrap();
    let mut found: Vec<C64> =
        cert.summands.iter().map(|s| if let Summand::Linear { a } = s { *a } else { unreachable!() }).collect();
    for r in &roots {
        let (i, dist) = found.iter().enumerate().map(|(i, z)| (i, (z - r).norm())).fold((0, f64::MAX), |a, b| {
            if b.1 < a.1 {
                b
            } else {
                a
            }
        });
        assert!(dist < 1e-7);
        found.remove(i);
    }
}

#[test]
fn two_x_squared_plus_y_squared() {
    // power sums 0 and 1, so the roots are +-1/sqrt(2)
    let q = BinaryForm::new(vec![c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let cert = waring_monic_binary(&q, 1e-9).unwrap();
    assert!(cert.residual < 1e-12);
    for s in &cert.summands {
        let Summand::Linear { a } = s else { unreachable!() };
        assert!((a * a - c(0.5, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn diag21_lambda_identity() {
    let a = real(&[&[2.0, 0.0], &[0.0, 1.0]]);
    for cert in [matrix_monic_decompose(&a, 2, 1e-9).unwrap(), symmetric_monic_decompose(&a, 2, 1e-9).unwrap()] {
        for s in &cert.summands {
            let Summand::Outer { v, alpha } = s else { unreachable!() };
            let lambda_sq = v[1] * alpha[1];
            assert!((lambda_sq - c(0.5, 0.0)).norm() < 1e-12);
        }
    }
}

#[test]
fn property_p_counterexample() {
    let a = real(&[&[2.0, 0.0], &[1.0, -2.0]]);
    let e1 = MatC::unit(2, 0);
    assert!(!property_p(&a, &e1, &e1, 1e-9).unwrap());
}

#[test]
fn tensor_second_secant_classification() {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let two = c(2.0, 0.0);
    // (mu_1, mu_2, mu_3) = (d23, d13, d12); e = 0 keeps the sigma2 equation
    let generic = Tensor222::canonical(two, one, one, one, zero);
    assert!(tensor222_sigma2_membership(&generic, 1e-9).unwrap().in_osec2);
    for mu in [[zero, one, one], [one, zero, one], [one, one, zero]] {
        let t = Tensor222::canonical(two, mu[2], mu[1], mu[0], zero);
        let m = tensor222_sigma2_membership(&t, 1e-9).unwrap();
        assert!(m.in_sigma2 && !m.in_osec2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(tensor222_monic_decompose(&t, 2, 1e-9, &mut rng, 32), Err(Error::ExactlyOneZero));
    }
    // two zeros are still sums of two points
    let t = Tensor222::canonical(two, zero, zero, one, zero);
    assert!(tensor222_sigma2_membership(&t, 1e-9).unwrap().in_osec2);
    // the equation fails off sigma2
    let off = Tensor222::canonical(two, one, one, one, one);
    assert!(!tensor222_sigma2_membership(&off, 1e-9).unwrap().in_sigma2);
}

#[test]
fn reference_staircases() {
    let cases: [(VarietySpec, &[usize]); 4] = [
        (VarietySpec::PowersBinaryForms { d: 3, e: 2 }, &[2, 4, 6]),
        (VarietySpec::RankOneMatrix { m: 3, n: 3 }, &[4, 7, 8]),
        (VarietySpec::Tensor222, &[3, 6, 7]),
        (VarietySpec::SlnMinOrbit { n: 3 }, &[3, 6, 7]),
    ];
    for (spec, expected) in cases {
        let dims: Vec<usize> =
            staircase(&spec, expected.len(), 11, 1).unwrap().iter().map(|r| r.estimated_dim).collect();
        assert_eq!(dims, expected, "{spec}");
    }
}

#[test]
fn reference_generic_ranks() {
    assert_eq!(generic_monic_rank(&VarietySpec::PowersBinaryForms { d: 3, e: 2 }, 8, 11, 1).unwrap(), 3);
    assert_eq!(generic_monic_rank(&VarietySpec::RankOneMatrix { m: 2, n: 2 }, 8, 11, 1).unwrap(), 2);
    assert_eq!(generic_monic_rank(&VarietySpec::Tensor222, 8, 11, 1).unwrap(), 3);
}

#[test]
fn secant_dimension_matches_expected_count_for_matrices() {
    for (m, n) in [(2, 3), (3, 4), (4, 4)] {
        let spec = VarietySpec::RankOneMatrix { m, n };
        let dims: Vec<usize> = staircase(&spec, m.min(n), 11, 3).unwrap().iter().map(|r| r.estimated_dim).collect();
        for (i, dim) in dims.iter().enumerate() {
            let k = i + 1;
            // rank-k matrices form a variety of dimension k(m+n-k); fixing h removes one
            let expected = (k * (m + n - k)).min(m * n) - 1;
            assert_eq!(*dim, expected, "{m}x{n} k={k}");
        }
    }
}
