mod common;

use itertools::Itertools;
use num_rational::Ratio;
use proptest::prelude::*;

use rts_core::audit::{
    audit_enrollment, audit_enrollment_secrecy, audit_rts_secrecy, comparison_table,
    default_corpus, repair_reveals_nothing_new, CoalitionShape, EnrollmentAudit, Verdict,
    DEFAULT_AUDIT_GUARD,
};
use rts_core::designs::{
    compute_profile, dual_complete_graph, is_basic_repairing_set, is_repairable, kirkman_sts9, pg2,
    union_extremes, DEFAULT_GUARD,
};
use rts_core::enrollment::{column_sums, repair_share, split_row};
use rts_core::field::{smallest_prime_at_least, sum};
use rts_core::ramp::{deal, reconstruct, Polynomial};
use rts_core::rts::{
    execute_repair, plan_repair, reconstruct_secret, scheme_metrics, setup, DonorStrategy,
};
use rts_core::{PrimeField, RampParams, Secret, SeededRng, Share};

use common::*;

#[test]
fn field_axioms_small_primes() {
    field_axioms(11).unwrap();
}

#[test]
fn primality_matches_trial_division() {
    is_prime_oracle_agrees(2000).unwrap();
}

#[test]
fn ramp_round_trip_exhaustive() {
    ramp_round_trip().unwrap();
}

#[test]
fn enrollment_is_exact_with_k_squared_elements() {
    enrollment_exactness().unwrap();
}

#[test]
fn generators_verify() {
    generator_verifications().unwrap();
}

#[test]
fn basic_sets_cover_every_point_twice() {
    basic_set_verifications().unwrap();
}

#[test]
fn lagrange_consistency_across_subsets() {
    let f = PrimeField::new(13).unwrap();
    let params = RampParams::new(1, 3, 6, f).unwrap();
    for seed in 0..10 {
        let mut rng = SeededRng::new(seed);
        let secret = Secret::random(&params, &mut rng);
        let (shares, _) = deal(&params, &secret, &mut rng).unwrap();
        let results: Vec<Secret> = shares
            .iter()
            .copied()
            .combinations(3)
            .map(|s| reconstruct(&params, &s).unwrap())
            .collect();
        assert!(results.iter().all_equal());
    }
}

#[test]
fn shamir_secrecy_by_counting_polynomials() {
    // Q = 5, (k, n) = (2, 4): fix one share, count the degree-1 polynomials
    // through it for each secret value.
    let q = 5u64;
    for x in 1..=4u64 {
        for y in 0..q {
            let counts: Vec<usize> = (0..q)
                .map(|s| (0..q).filter(|a1| (s + a1 * x) % q == y).count())
                .collect();
            assert!(counts.iter().all_equal(), "x={x} y={y}: {counts:?}");
        }
    }
}

#[test]
fn pg2_union_bounds() {
    for q in [2usize, 3, 5] {
        let d = pg2(q as u64).unwrap();
        for j in 1..=4 {
            let (lo, hi) = union_extremes_oracle(&d, j);
            assert_eq!(union_extremes(&d, j, DEFAULT_GUARD).unwrap(), (lo, hi));
            assert!(hi <= q * j + 1, "q={q} j={j}: max {hi}");
            // j(q + 1 - (j - 1)/2), doubled to stay in integers
            assert!(2 * lo >= j * (2 * q + 2 - (j - 1)), "q={q} j={j}: min {lo}");
        }
    }
}

#[test]
fn dual_complete_graph_unions() {
    for n in 3..=10 {
        let d = dual_complete_graph(n).unwrap();
        for j in 1..=n {
            let formula = j * (n - 1) - j * (j - 1) / 2;
            assert_eq!(
                union_extremes_oracle(&d, j),
                (formula, formula),
                "n={n} j={j}"
            );
        }
    }
}

#[test]
fn sts9_supersets_of_the_basic_set_are_repairable() {
    let (sts9, classes) = kirkman_sts9();
    let basic: Vec<usize> = classes[0].iter().chain(&classes[1]).copied().collect();
    assert!(covers_twice(&sts9, &basic));
    let rest: Vec<usize> = (0..12).filter(|b| !basic.contains(b)).collect();
    let mut count = 0;
    for extra in rest.iter().copied().powerset() {
        let chosen: Vec<usize> = basic.iter().copied().chain(extra).collect();
        let sub = sts9.subdesign(&chosen).unwrap();
        assert!(is_repairable(&sub), "blocks {chosen:?}");
        count += 1;
    }
    assert_eq!(count, 64);
}

fn corpus() -> Vec<(String, rts_core::designs::Design, usize)> {
    let mut out: Vec<_> = (6..=12)
        .map(|n| {
            (
                format!("sts9-n:{n}"),
                rts_core::designs::sts9_scheme_design(n).unwrap(),
                2,
            )
        })
        .collect();
    out.extend(
        default_corpus()
            .into_iter()
            .map(|e| (e.name, e.design, e.k)),
    );
    out
}

#[test]
fn expanded_scheme_repair_and_threshold() {
    for (name, design, k) in corpus() {
        let q = smallest_prime_at_least((design.m() as u64 + 1).max(17));
        let field = PrimeField::new(q).unwrap();
        let mut rng = SeededRng::new(7);
        let (_, base) = rts_core::rts::base_params(&design, k, field).unwrap();
        let secret = Secret::random(&base, &mut rng);
        let scheme = setup(&design, k, field, &secret, &mut rng).unwrap();
        for target in 0..design.n() {
            for strategy in [DonorStrategy::LowestIndex, DonorStrategy::Spread] {
                let plan = plan_repair(&scheme, target, strategy).unwrap();
                let outcome = execute_repair(&scheme, &plan).unwrap();
                assert_eq!(
                    outcome.restored,
                    scheme.share(target),
                    "{name} target {target}"
                );
                assert!(
                    repair_reveals_nothing_new(&scheme, &plan, &outcome),
                    "{name} target {target}"
                );
            }
        }
        let players: Vec<usize> = (0..design.n()).collect();
        for s in players.iter().copied().combinations(k).take(500) {
            assert_eq!(
                reconstruct_secret(&scheme, &s).unwrap(),
                secret,
                "{name} players {s:?}"
            );
        }
        for s in players.iter().copied().combinations(k - 1).take(500) {
            assert!(
                reconstruct_secret(&scheme, &s).is_err(),
                "{name} players {s:?}"
            );
        }
        let m = scheme_metrics(&scheme);
        assert_eq!(m.rho * m.cc, Ratio::from_integer(1));
        assert_eq!(m.rho, Ratio::new((m.ell2 - m.ell1) as u64, m.d as u64));
    }
}

#[test]
fn expanded_scheme_coalitions_below_threshold_learn_nothing() {
    for (n, k) in [(3usize, 2usize), (4, 2), (4, 3)] {
        let d = dual_complete_graph(n).unwrap();
        let f = PrimeField::at_least(d.m() as u64 + 1).unwrap();
        for c in (0..n).combinations(k - 1) {
            let r = audit_rts_secrecy(&d, k, f, &c, DEFAULT_AUDIT_GUARD).unwrap();
            assert_eq!(
                r.verdict,
                Verdict::Uniform,
                "dual K_{n} k={k} coalition {c:?}"
            );
            assert_eq!(r.accounted, r.runs);
        }
        let full: Vec<usize> = (0..k).collect();
        let r = audit_rts_secrecy(&d, k, f, &full, DEFAULT_AUDIT_GUARD).unwrap();
        assert_eq!(r.verdict, Verdict::Leaky);
        assert_eq!(r.max_consistent_secrets, 1);
    }
}

#[test]
fn enrollment_audit_uniform_below_threshold() {
    for (q, k1, k2, n) in [(5u64, 1usize, 2usize, 3usize), (7, 1, 2, 4), (5, 1, 2, 4)] {
        let params = RampParams::new(k1, k2, n, PrimeField::new(q).unwrap()).unwrap();
        for shape in [CoalitionShape::CaseI, CoalitionShape::CaseII] {
            for r in audit_enrollment_secrecy(&params, shape, DEFAULT_AUDIT_GUARD).unwrap() {
                assert_eq!(
                    r.verdict,
                    Verdict::Uniform,
                    "{params:?} {shape:?} {:?}",
                    r.coalition
                );
                assert_eq!(r.accounted, r.runs);
                assert_eq!(r.per_secret_runs.iter().sum::<u64>(), r.runs);
            }
        }
    }
}

#[test]
fn enrollment_audit_three_helpers() {
    // 5^9 runs per coalition, so one coalition of each shape
    let params = RampParams::new(2, 3, 4, PrimeField::new(5).unwrap()).unwrap();
    for coalition in [vec![1, 2], vec![4, 3]] {
        let r = audit_enrollment(
            &EnrollmentAudit::canonical(params, coalition.clone()).unwrap(),
            DEFAULT_AUDIT_GUARD,
        )
        .unwrap();
        assert_eq!(r.runs, 5u64.pow(9));
        assert_eq!(r.verdict, Verdict::Uniform, "coalition {coalition:?}");
    }
}

#[test]
fn enrollment_audit_counts_every_run_once() {
    let params = RampParams::new(1, 2, 3, PrimeField::new(5).unwrap()).unwrap();
    let audit = EnrollmentAudit::canonical(params, vec![1]).unwrap();
    let r = audit_enrollment(&audit, DEFAULT_AUDIT_GUARD).unwrap();
    // secret, one dealer coefficient, k2(k2-1) = 2 free exchange values
    assert_eq!(r.runs, 5u64.pow(4));
    assert_eq!(audit.enumeration_size(), 625);
    assert_eq!(r.per_secret_runs, vec![125; 5]);
}

#[test]
fn comparison_rows_beat_or_match_the_bound() {
    for row in comparison_table(&default_corpus()).unwrap() {
        assert!(
            row.cc_ours <= Ratio::from_integer(row.d as u64),
            "{}",
            row.scheme
        );
        if let Some(b) = row.rho_glf_bound {
            assert!(row.rho_ours >= b, "{} k={}", row.scheme, row.k);
        }
    }
}

fn prime_field() -> impl Strategy<Value = PrimeField> {
    (2u64..(1 << 31)).prop_map(|n| {
        let mut p = n;
        while !rts_core::field::is_prime(p) {
            p -= 1;
        }
        PrimeField::new(p).unwrap()
    })
}

proptest! {
    #[test]
    fn ring_laws_in_large_fields(f in prime_field(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let q = f.modulus();
        let (a, b, c) = (f.element(a % q), f.element(b % q), f.element(c % q));
        prop_assert_eq!((a * b).value() as u128, a.value() as u128 * b.value() as u128 % q as u128);
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!((a - b) + b, a);
        if !b.is_zero() {
            prop_assert_eq!(a.try_div(&b).unwrap() * b, a);
            prop_assert_eq!(b.pow(q - 1), f.one());
        }
    }

    #[test]
    fn ramp_round_trip_random(
        k2 in 1usize..6, extra in 0usize..4, k1_frac in 0usize..6, seed in any::<u64>(), q_idx in 0usize..4,
    ) {
        let n = k2 + extra;
        let k1 = k1_frac % k2;
        let q = [101u64, 251, 65_521, 2_147_483_647][q_idx];
        let params = RampParams::new(k1, k2, n, PrimeField::new(q).unwrap()).unwrap();
        let mut rng = SeededRng::new(seed);
        let secret = Secret::random(&params, &mut rng);
        let (shares, _) = deal(&params, &secret, &mut rng).unwrap();
        prop_assert_eq!(reconstruct(&params, &shares).unwrap(), secret.clone());
        let last: Vec<Share> = shares[n - k2..].to_vec();
        prop_assert_eq!(reconstruct(&params, &last).unwrap(), secret);
        if k2 > 1 {
            prop_assert!(reconstruct(&params, &shares[..k2 - 1]).is_err());
        }
    }

    #[test]
    fn split_row_sums_to_its_value(v in 0u64..1009, d in 1usize..8, seed in any::<u64>()) {
        let f = PrimeField::new(1009).unwrap();
        let parts = split_row(f.element(v), d, &mut SeededRng::new(seed)).unwrap();
        prop_assert_eq!(parts.len(), d);
        prop_assert_eq!(sum(f, parts), f.element(v));
    }

    #[test]
    fn enrollment_in_large_fields(k in 2usize..6, extra in 1usize..4, seed in any::<u64>()) {
        let n = k + extra;
        let f = PrimeField::new(65_521).unwrap();
        let params = RampParams::threshold(k, n, f).unwrap();
        let mut rng = SeededRng::new(seed);
        let secret = Secret::random(&params, &mut rng);
        let (shares, poly) = deal(&params, &secret, &mut rng).unwrap();
        let target = (seed % n as u64) as usize + 1;
        let helpers: Vec<Share> = shares.iter().filter(|s| s.x.value() != target as u64).take(k).copied().collect();
        let run = repair_share(&params, &helpers, params.point(target), &mut rng).unwrap();
        prop_assert_eq!(run.repaired.y, poly.evaluate(params.point(target)));
        prop_assert_eq!(run.transcript.field_elements(), k * k);
        prop_assert_eq!(column_sums(&run.matrix), run.sigmas.clone());
    }

    #[test]
    fn horner_matches_power_sum(coeffs in prop::collection::vec(0u64..251, 0..8), x in 0u64..251) {
        let f = PrimeField::new(251).unwrap();
        let poly = Polynomial::new(coeffs.iter().map(|&c| f.element(c)).collect());
        let expected = coeffs.iter().enumerate().fold(0u64, |acc, (i, &c)| {
            let mut p = 1u64;
            for _ in 0..i {
                p = p * x % 251;
            }
            (acc + c * p) % 251
        });
        prop_assert_eq!(poly.evaluate(f.element(x)).value(), expected);
    }

    #[test]
    fn found_basic_sets_verify_on_random_subdesigns(mask_bits in 0u32..(1 << 12)) {
        let (sts9, _) = kirkman_sts9();
        let chosen: Vec<usize> = (0..12).filter(|i| mask_bits & (1 << i) != 0).collect();
        prop_assume!(!chosen.is_empty());
        let sub = sts9.subdesign(&chosen).unwrap();
        match rts_core::designs::find_basic_repairing_set(&sub) {
            Some(set) => {
                prop_assert!(covers_twice(&sub, &set));
                prop_assert!(is_basic_repairing_set(&sub, &set));
            }
            None => prop_assert!(!covers_twice(&sub, &(0..sub.n()).collect::<Vec<_>>())),
        }
    }
}

#[test]
fn profile_is_monotone_on_pg2() {
    for q in [2u64, 3] {
        let d = pg2(q).unwrap();
        let profiles: Vec<_> = (2..=4).map(|k| compute_profile(&d, k).unwrap()).collect();
        assert!(profiles
            .windows(2)
            .all(|w| w[0].ell2 <= w[1].ell2 && w[0].ell1 <= w[1].ell1));
    }
}
