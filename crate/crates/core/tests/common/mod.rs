//! Exhaustive checks shared by the property tests and the acceptance harness.
//! Each returns `Err` with a description of the first violation found.

#![allow(dead_code)]

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rts_core::designs::{
    dual_complete_graph, find_basic_repairing_set, kirkman_sts9, noncollinear_triple, pg2,
    pg2_blocking_repairing_set, sts_bose, Design,
};
use rts_core::enrollment::{column_sums, repair_share};
use rts_core::field::{is_prime, sum};
use rts_core::ramp::{deal, reconstruct};
use rts_core::{Phase, PrimeField, RampParams, Secret, SeededRng};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}
#[allow(unused_imports)]
pub(crate) use ensure;

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| (2..p).all(|d| p % d != 0)).collect()
}

/// Field axioms over every triple of elements, for every prime `Q <= max_q`.
pub fn field_axioms(max_q: u64) -> Check {
    for q in primes_up_to(max_q) {
        let f = PrimeField::new(q).map_err(|e| e.to_string())?;
        let els: Vec<_> = f.elements().collect();
        for &a in &els {
            ensure!(
                a + f.zero() == a && a * f.one() == a,
                "identities fail at {a} in F_{q}"
            );
            ensure!(a + a.neg() == f.zero(), "additive inverse of {a} in F_{q}");
            if !a.is_zero() {
                let inv = a.inv().map_err(|e| e.to_string())?;
                ensure!(a * inv == f.one(), "inverse of {a} in F_{q}");
                // plain integer oracle
                ensure!(
                    a.value() * inv.value() % q == 1,
                    "inverse of {a} in F_{q} (integer check)"
                );
            }
            for &b in &els {
                ensure!(
                    a + b == b + a && a * b == b * a,
                    "commutativity at ({a},{b}) in F_{q}"
                );
                ensure!(
                    (a * b).value() == a.value() * b.value() % q,
                    "product ({a},{b}) in F_{q}"
                );
                ensure!((a - b) + b == a, "subtraction at ({a},{b}) in F_{q}");
                for &c in &els {
                    ensure!(
                        (a + b) + c == a + (b + c),
                        "additive associativity in F_{q}"
                    );
                    ensure!(
                        (a * b) * c == a * (b * c),
                        "multiplicative associativity in F_{q}"
                    );
                    ensure!(
                        a * (b + c) == a * b + a * c,
                        "distributivity at ({a},{b},{c}) in F_{q}"
                    );
                }
            }
        }
    }
    Ok(())
}

fn all_secrets(params: &RampParams) -> Vec<Vec<u64>> {
    let q = params.field.modulus();
    (0..params.secret_len())
        .map(|_| 0..q)
        .multi_cartesian_product()
        .collect()
}

/// Every ramp parameter set with `n <= 6`, `k2 <= 4`, prime `Q <= 13`
/// (with `Q > n`), every secret, ten seeds, every `k2`-subset of shares.
pub fn ramp_round_trip() -> Check {
    let mut cases = Vec::new();
    for q in primes_up_to(13) {
        for n in 1..=6usize {
            if q as usize <= n {
                continue;
            }
            for k2 in 1..=n.min(4) {
                for k1 in 0..k2 {
                    cases.push((q, n, k1, k2));
                }
            }
        }
    }
    cases.par_iter().try_for_each(|&(q, n, k1, k2)| -> Check {
        let params = RampParams::new(k1, k2, n, PrimeField::new(q).unwrap()).map_err(|e| e.to_string())?;
        let subsets: Vec<Vec<usize>> = (0..n).combinations(k2).collect();
        for values in all_secrets(&params) {
            let secret = Secret::from_values(&params, &values).unwrap();
            for seed in 0..10 {
                let (shares, _) = deal(&params, &secret, &mut SeededRng::new(seed)).map_err(|e| e.to_string())?;
                for s in &subsets {
                    let picked: Vec<_> = s.iter().map(|&i| shares[i]).collect();
                    let got = reconstruct(&params, &picked).map_err(|e| e.to_string())?;
                    ensure!(
                        got == secret,
                        "(k1,k2,n,Q)=({k1},{k2},{n},{q}) seed {seed} subset {s:?}: {:?} != {values:?}",
                        got.values()
                    );
                }
            }
        }
        Ok(())
    })
}

/// Enrollment over `Q = 11` for every `2 <= k <= n <= 6`, twenty seeds:
/// exact repair, message counts and the three matrix identities.
pub fn enrollment_exactness() -> Check {
    let f = PrimeField::new(11).unwrap();
    for n in 2..=6usize {
        for k in 2..=n {
            let params = RampParams::threshold(k, n, f).map_err(|e| e.to_string())?;
            for seed in 0..20u64 {
                let mut pick = ChaCha8Rng::seed_from_u64(seed);
                let mut rng = SeededRng::new(seed);
                let secret = Secret::random(&params, &mut rng);
                let (shares, poly) = deal(&params, &secret, &mut rng).map_err(|e| e.to_string())?;
                let mut ids: Vec<usize> = (1..=n).collect();
                ids.shuffle(&mut pick);
                // with k = n every player helps and a newcomer at x = n + 1 enrolls
                let (target, helper_ids) = if k == n {
                    (n + 1, &ids[..])
                } else {
                    (ids[0], &ids[1..=k])
                };
                let helpers: Vec<_> = helper_ids.iter().map(|&i| shares[i - 1]).collect();
                let run = repair_share(&params, &helpers, f.element(target as u64), &mut rng)
                    .map_err(|e| e.to_string())?;
                let ctx = format!("k={k} n={n} seed={seed} target={target}");
                let expected = poly.evaluate(f.element(target as u64));
                ensure!(run.repaired.y == expected, "{ctx}: repaired share differs");
                let t = &run.transcript;
                ensure!(
                    t.field_elements() == k * k,
                    "{ctx}: {} field elements, expected {}",
                    t.field_elements(),
                    k * k
                );
                ensure!(
                    t.count_in(Phase::Exchange) == k * (k - 1),
                    "{ctx}: exchange count"
                );
                ensure!(t.count_in(Phase::Repair) == k, "{ctx}: repair count");

                let mut sorted = helpers.clone();
                sorted.sort_by_key(|s| s.x);
                let rows = run.matrix.row_sums();
                for (i, h) in sorted.iter().enumerate() {
                    ensure!(rows[i] == run.gammas[i] * h.y, "{ctx}: row {i} sum");
                }
                ensure!(column_sums(&run.matrix) == run.sigmas, "{ctx}: column sums");
                ensure!(run.matrix.total() == run.repaired.y, "{ctx}: grand total");
                ensure!(
                    sum(f, run.sigmas.iter().copied()) == run.repaired.y,
                    "{ctx}: sigma sum"
                );
            }
        }
    }
    Ok(())
}

/// Bitmask of a block; every design checked here has at most 64 points.
pub fn mask(block: &[usize]) -> u64 {
    block.iter().fold(0u64, |m, &p| m | (1 << p))
}

/// Smallest and largest union over all `j`-subsets of blocks, computed
/// with bitmasks independently of the library's scan.
pub fn union_extremes_oracle(design: &Design, j: usize) -> (usize, usize) {
    let masks: Vec<u64> = design.blocks().iter().map(|b| mask(b)).collect();
    masks
        .iter()
        .combinations(j)
        .map(|c| c.into_iter().fold(0u64, |m, b| m | b).count_ones() as usize)
        .fold((usize::MAX, 0), |(lo, hi), u| (lo.min(u), hi.max(u)))
}

pub fn pair_coverage(design: &Design) -> Vec<usize> {
    let m = design.m();
    let mut counts = vec![0; m * m];
    for b in design.blocks() {
        for (&x, &y) in b.iter().tuple_combinations() {
            counts[x * m + y] += 1;
        }
    }
    (0..m)
        .tuple_combinations()
        .map(|(x, y)| counts[x * m + y])
        .collect()
}

fn meets(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|p| b.contains(p)).count()
}

/// Post-verification of every built-in generator.
pub fn generator_verifications() -> Check {
    for m in [9, 15, 21] {
        let d = sts_bose(m).map_err(|e| e.to_string())?;
        ensure!(d.n() == m * (m - 1) / 6, "STS({m}) block count");
        ensure!(
            d.blocks().iter().all(|b| b.len() == 3),
            "STS({m}) block size"
        );
        ensure!(
            pair_coverage(&d).iter().all(|&c| c == 1),
            "STS({m}) pair coverage"
        );
    }
    let (sts9, classes) = kirkman_sts9();
    ensure!(
        pair_coverage(&sts9).iter().all(|&c| c == 1),
        "STS(9) pair coverage"
    );
    for class in &classes {
        let covered = class.iter().fold(0u64, |m, &b| m | mask(sts9.block(b)));
        let disjoint = class
            .iter()
            .tuple_combinations()
            .all(|(&a, &b)| meets(sts9.block(a), sts9.block(b)) == 0);
        ensure!(
            covered == (1 << 9) - 1 && disjoint,
            "class {class:?} is not a parallel class"
        );
    }
    for q in [2u64, 3, 5] {
        let d = pg2(q).map_err(|e| e.to_string())?;
        let size = (q * q + q + 1) as usize;
        ensure!(d.m() == size && d.n() == size, "PG(2,{q}) size");
        ensure!(
            d.blocks().iter().all(|b| b.len() == q as usize + 1),
            "PG(2,{q}) line size"
        );
        ensure!(
            pair_coverage(&d).iter().all(|&c| c == 1),
            "PG(2,{q}) pair coverage"
        );
        let all_meet_once = d
            .blocks()
            .iter()
            .tuple_combinations()
            .all(|(a, b)| meets(a, b) == 1);
        ensure!(
            all_meet_once,
            "PG(2,{q}) lines must meet in exactly one point"
        );
    }
    for n in 3..=10 {
        let d = dual_complete_graph(n).map_err(|e| e.to_string())?;
        ensure!(d.m() == n * (n - 1) / 2, "dual K_{n} point count");
        ensure!(
            d.blocks().iter().all(|b| b.len() == n - 1),
            "dual K_{n} block size"
        );
        let all_meet_once = d
            .blocks()
            .iter()
            .tuple_combinations()
            .all(|(a, b)| meets(a, b) == 1);
        ensure!(
            all_meet_once,
            "dual K_{n} blocks must meet in exactly one point"
        );
        ensure!(
            pair_coverage(&d).iter().all(|&c| c <= 1),
            "dual K_{n} pairs"
        );
    }
    Ok(())
}

/// Every point on at least two of the chosen blocks, counted directly.
pub fn covers_twice(design: &Design, chosen: &[usize]) -> bool {
    let mut count = vec![0usize; design.m()];
    for &b in chosen {
        for &p in design.block(b) {
            count[p] += 1;
        }
    }
    count.iter().all(|&c| c >= 2)
}

pub fn basic_set_verifications() -> Check {
    let mut designs = vec![("sts9".to_string(), kirkman_sts9().0)];
    for q in [2u64, 3, 5] {
        let d = pg2(q).unwrap();
        let tri = noncollinear_triple(&d).ok_or("no noncollinear triple")?;
        let set = pg2_blocking_repairing_set(&d, tri).map_err(|e| e.to_string())?;
        ensure!(
            set.len() == 3 * q as usize,
            "PG(2,{q}) blocking set size {}",
            set.len()
        );
        ensure!(
            covers_twice(&d, &set),
            "PG(2,{q}) blocking set misses a point"
        );
        designs.push((format!("pg2:{q}"), d));
    }
    for n in 3..=8 {
        designs.push((format!("dualk:{n}"), dual_complete_graph(n).unwrap()));
    }
    for (name, d) in &designs {
        let set =
            find_basic_repairing_set(d).ok_or(format!("{name}: no basic repairing set found"))?;
        ensure!(
            covers_twice(d, &set),
            "{name}: found set {set:?} misses a point"
        );
        ensure!(set.iter().all_unique(), "{name}: repeated block in {set:?}");
    }
    Ok(())
}

pub fn is_prime_oracle_agrees(limit: u64) -> Check {
    let naive = primes_up_to(limit);
    let lib: Vec<u64> = (0..=limit).filter(|&n| is_prime(n)).collect();
    ensure!(naive == lib, "primality disagrees below {limit}");
    Ok(())
}
