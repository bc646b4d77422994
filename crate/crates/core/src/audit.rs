//! Exhaustive secrecy audits and communication accounting.
//!
//! An audit enumerates every secret together with every value of the
//! dealer's and the protocol's randomness, runs the scheme
//! deterministically, and records what a coalition sees. The coalition
//! learns nothing exactly when each observed view arises equally often
//! under every secret. All counts are exact integers.

use std::collections::HashMap;
use std::fmt::Write;

use itertools::Itertools;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::designs::{complement_design, dual_complete_graph, kirkman_sts9, pg2, Design};
use crate::enrollment::repair_share;
use crate::error::{param, Error, Result};
use crate::field::PrimeField;
use crate::ramp::{deal, RampParams, Secret};
use crate::rng::FixedSource;
use crate::rts::{base_params, metrics_for, ser_ratio, ExpandedScheme, RepairOutcome, RepairPlan};
use crate::transcript::Transcript;

/// Default bound on `secrets × dealer randomness × protocol randomness`.
pub const DEFAULT_AUDIT_GUARD: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Uniform,
    Leaky,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecrecyReport {
    pub coalition: Vec<usize>,
    /// Number of possible secrets, `Q^λ`.
    pub secret_space: u64,
    /// Number of enumerated (secret, randomness) runs.
    pub runs: u64,
    /// Sum of all per-view, per-secret counts; equals `runs` when no run
    /// was lost or double counted.
    pub accounted: u64,
    pub distinct_views: u64,
    /// Runs per secret, indexed by the secret's base-`Q` encoding.
    pub per_secret_runs: Vec<u64>,
    /// Smallest and largest count of a single (view, secret) pair.
    pub min_count: u64,
    pub max_count: u64,
    /// Fewest and most secrets compatible with one observed view.
    pub min_consistent_secrets: u64,
    pub max_consistent_secrets: u64,
    pub verdict: Verdict,
}

type Tally = HashMap<Vec<u64>, Vec<u64>>;

fn digits(mut index: u64, base: u64, len: usize, out: &mut Vec<u64>) {
    out.clear();
    for _ in 0..len {
        out.push(index % base);
        index /= base;
    }
}

fn pow_checked(base: u64, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

/// Enumerates `secret_space × rand_space` runs in parallel and tallies the
/// views returned by `view(secret_index, rand_index)`.
fn tally<F>(secret_space: u64, rand_space: u64, view: F) -> Tally
where
    F: Fn(u64, u64) -> Vec<u64> + Sync,
{
    let total = secret_space * rand_space;
    (0..total)
        .into_par_iter()
        .fold(Tally::new, |mut acc, idx| {
            let (s, r) = (idx / rand_space, idx % rand_space);
            let counts = acc
                .entry(view(s, r))
                .or_insert_with(|| vec![0; secret_space as usize]);
            counts[s as usize] += 1;
            acc
        })
        .reduce(Tally::new, |mut a, b| {
            for (v, counts) in b {
                match a.get_mut(&v) {
                    Some(existing) => existing.iter_mut().zip(counts).for_each(|(x, y)| *x += y),
                    None => {
                        a.insert(v, counts);
                    }
                }
            }
            a
        })
}

fn summarize(coalition: Vec<usize>, secret_space: u64, runs: u64, tally: &Tally) -> SecrecyReport {
    let mut per_secret_runs = vec![0; secret_space as usize];
    let mut min_count = u64::MAX;
    let mut max_count = 0;
    let mut min_consistent = u64::MAX;
    let mut max_consistent = 0;
    let mut uniform = true;
    for counts in tally.values() {
        for (total, c) in per_secret_runs.iter_mut().zip(counts) {
            *total += c;
        }
        let (lo, hi) = counts
            .iter()
            .copied()
            .minmax()
            .into_option()
            .unwrap_or((0, 0));
        min_count = min_count.min(lo);
        max_count = max_count.max(hi);
        uniform &= lo == hi;
        let consistent = counts.iter().filter(|&&c| c > 0).count() as u64;
        min_consistent = min_consistent.min(consistent);
        max_consistent = max_consistent.max(consistent);
    }
    if tally.is_empty() {
        min_count = 0;
        min_consistent = 0;
    }
    SecrecyReport {
        coalition,
        secret_space,
        runs,
        accounted: per_secret_runs.iter().sum(),
        distinct_views: tally.len() as u64,
        per_secret_runs,
        min_count,
        max_count,
        min_consistent_secrets: min_consistent,
        max_consistent_secrets: max_consistent,
        verdict: if uniform {
            Verdict::Uniform
        } else {
            Verdict::Leaky
        },
    }
}

fn check_guard(size: u128, guard: u128) -> Result<u64> {
    if size > guard || size > u64::MAX as u128 {
        return Err(Error::TooLarge { size, guard });
    }
    Ok(size as u64)
}

/// The two coalition shapes of the enrollment security argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoalitionShape {
    /// `k1` of the helpers.
    CaseI,
    /// The repaired player together with `k1 - 1` helpers.
    CaseII,
}

/// One enrollment run to audit: who repairs whom, and who colludes.
/// Player ids are 1-based (`x_i = i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnrollmentAudit {
    pub params: RampParams,
    pub target: usize,
    pub helpers: Vec<usize>,
    pub coalition: Vec<usize>,
}

impl EnrollmentAudit {
    /// Canonical layout: helpers `1..=k2`, target `n`.
    pub fn canonical(params: RampParams, coalition: Vec<usize>) -> Result<Self> {
        if params.n <= params.k2 {
            return param("need n > k2 so the target is not a helper");
        }
        let audit = EnrollmentAudit {
            params,
            target: params.n,
            helpers: (1..=params.k2).collect(),
            coalition,
        };
        audit.validate()?;
        Ok(audit)
    }

    fn validate(&self) -> Result<()> {
        let n = self.params.n;
        if self.helpers.len() != self.params.k2 {
            return param(format!("need exactly {} helpers", self.params.k2));
        }
        let all = self.helpers.iter().chain([&self.target]);
        if all.clone().any(|&i| i == 0 || i > n) || !all.clone().all_unique() {
            return param("helpers and target must be distinct players in 1..=n");
        }
        if self.coalition.is_empty() || !self.coalition.iter().all_unique() {
            return param("coalition must list distinct players");
        }
        if self
            .coalition
            .iter()
            .any(|c| *c != self.target && !self.helpers.contains(c))
        {
            return param("coalition members must take part in the repair");
        }
        Ok(())
    }

    pub fn enumeration_size(&self) -> u128 {
        let q = self.params.field.modulus();
        let k2 = self.params.k2;
        pow_checked(q, self.params.secret_len() + self.params.k1 + k2 * (k2 - 1))
    }
}

/// All coalitions of `shape` for a canonical enrollment run.
pub fn enrollment_coalitions(
    params: &RampParams,
    shape: CoalitionShape,
) -> Result<Vec<Vec<usize>>> {
    if params.n <= params.k2 {
        return param("need n > k2 so the target is not a helper");
    }
    let helpers = 1..=params.k2;
    Ok(match shape {
        CoalitionShape::CaseI => {
            if params.k1 == 0 {
                return param("case (i) needs k1 >= 1");
            }
            helpers.combinations(params.k1).collect()
        }
        CoalitionShape::CaseII => {
            if params.k1 == 0 {
                return param("case (ii) needs k1 >= 1");
            }
            helpers
                .combinations(params.k1 - 1)
                .map(|mut c| {
                    c.push(params.n);
                    c
                })
                .collect()
        }
    })
}

/// Everything the coalition sees in one run: members' shares, the
/// summands members keep for themselves, and the payloads of all messages
/// they send or receive, in transcript order.
fn enrollment_view(
    audit: &EnrollmentAudit,
    shares: &[crate::ramp::Share],
    run: &crate::enrollment::EnrollmentRun,
) -> Vec<u64> {
    let mut view = Vec::new();
    for &member in &audit.coalition {
        if member == audit.target {
            view.push(run.repaired.y.value());
        } else {
            view.push(shares[member - 1].y.value());
            let i = run
                .matrix
                .helpers
                .iter()
                .position(|&h| h == member)
                .unwrap();
            view.push(run.matrix.entries[i][i].value());
        }
    }
    for m in run.transcript.messages() {
        if audit.coalition.contains(&m.from) || audit.coalition.contains(&m.to) {
            view.extend(m.payload.iter().map(|e| e.value()));
        }
    }
    view
}

pub fn audit_enrollment(audit: &EnrollmentAudit, guard: u128) -> Result<SecrecyReport> {
    audit.validate()?;
    let p = audit.params;
    let q = p.field.modulus();
    let runs = check_guard(audit.enumeration_size(), guard)?;
    let lambda = p.secret_len();
    let dealer_len = p.k1;
    let protocol_len = p.k2 * (p.k2 - 1);
    let secret_space = q.pow(lambda as u32);
    let rand_space = runs / secret_space;

    let target_x = p.point(audit.target);
    let t = tally(secret_space, rand_space, |s, r| {
        let mut buf = Vec::with_capacity(lambda.max(dealer_len + protocol_len));
        digits(s, q, lambda, &mut buf);
        let secret = Secret::from_values(&p, &buf).expect("secret length matches");
        digits(r, q, dealer_len + protocol_len, &mut buf);
        let (shares, _) = deal(&p, &secret, &mut FixedSource::new(&buf[..dealer_len]))
            .expect("validated parameters");
        let helper_shares: Vec<_> = audit.helpers.iter().map(|&h| shares[h - 1]).collect();
        let run = repair_share(
            &p,
            &helper_shares,
            target_x,
            &mut FixedSource::new(&buf[dealer_len..]),
        )
        .expect("validated layout");
        enrollment_view(audit, &shares, &run)
    });
    Ok(summarize(audit.coalition.clone(), secret_space, runs, &t))
}

/// Audits every coalition of `shape` in the canonical layout.
pub fn audit_enrollment_secrecy(
    params: &RampParams,
    shape: CoalitionShape,
    guard: u128,
) -> Result<Vec<SecrecyReport>> {
    enrollment_coalitions(params, shape)?
        .into_iter()
        .map(|c| audit_enrollment(&EnrollmentAudit::canonical(*params, c)?, guard))
        .collect()
}

/// Audits what `coalition` (0-based player ids) learns about the secret of
/// the expanded scheme on `design`: the subshares on the union of their
/// blocks, over every secret and every dealer polynomial.
pub fn audit_rts_secrecy(
    design: &Design,
    k: usize,
    field: PrimeField,
    coalition: &[usize],
    guard: u128,
) -> Result<SecrecyReport> {
    let (_, base) = base_params(design, k, field)?;
    if coalition.is_empty()
        || coalition.iter().any(|&c| c >= design.n())
        || !coalition.iter().all_unique()
    {
        return param("coalition must list distinct players of the design");
    }
    let q = field.modulus();
    let lambda = base.secret_len();
    let runs = check_guard(pow_checked(q, lambda + base.k1), guard)?;
    let secret_space = q.pow(lambda as u32);
    let rand_space = runs / secret_space;
    let points: Vec<usize> = coalition
        .iter()
        .flat_map(|&c| design.block(c).iter().copied())
        .sorted()
        .dedup()
        .collect();

    let t = tally(secret_space, rand_space, |s, r| {
        let mut buf = Vec::with_capacity(lambda.max(base.k1));
        digits(s, q, lambda, &mut buf);
        let secret = Secret::from_values(&base, &buf).expect("secret length matches");
        digits(r, q, base.k1, &mut buf);
        let (_, poly) =
            deal(&base, &secret, &mut FixedSource::new(&buf)).expect("validated parameters");
        points
            .iter()
            .map(|&pt| poly.evaluate(base.point(pt + 1)).value())
            .collect()
    });
    let mut members = coalition.to_vec();
    members.sort_unstable();
    Ok(summarize(members, secret_space, runs, &t))
}

/// True when a combinatorial repair only ever sends the target subshares
/// of its own block, each equal to the target's original value, so no
/// coalition gains anything from observing it.
pub fn repair_reveals_nothing_new(
    scheme: &ExpandedScheme,
    plan: &RepairPlan,
    outcome: &RepairOutcome,
) -> bool {
    let own = scheme.share(plan.target);
    let mut sent = 0;
    for m in outcome.transcript.messages() {
        if m.to != plan.target {
            return false;
        }
        let assigned: Vec<usize> = plan
            .assignments
            .iter()
            .filter(|&&(_, d)| d == m.from)
            .map(|&(p, _)| p)
            .collect();
        if assigned.len() != m.payload.len() {
            return false;
        }
        for (p, v) in assigned.iter().zip(&m.payload) {
            if !own.iter().any(|(q, w)| q == p && w == v) {
                return false;
            }
        }
        sent += m.payload.len();
    }
    sent == own.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CommunicationCount {
    pub messages: usize,
    pub field_elements: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub cc: Ratio<u64>,
}

/// Communication complexity: field elements sent per field element of secret.
pub fn count_communication(
    transcript: &Transcript,
    secret_len: usize,
) -> Result<CommunicationCount> {
    if secret_len == 0 {
        return param("secret length must be positive");
    }
    let field_elements = transcript.field_elements();
    Ok(CommunicationCount {
        messages: transcript.len(),
        field_elements,
        cc: Ratio::new(field_elements as u64, secret_len as u64),
    })
}

/// `t = Σ_{i<k} min(α, (d - i) β)`.
pub fn glf_t(k: usize, d: usize, alpha: usize, beta: usize) -> Result<u64> {
    if k == 0 || k > d || alpha == 0 || beta == 0 {
        return param(format!(
            "bound needs 1 <= k <= d and alpha, beta >= 1 (k={k}, d={d}, alpha={alpha}, beta={beta})"
        ));
    }
    Ok((0..k).map(|i| alpha.min((d - i) * beta) as u64).sum())
}

/// Upper bound `k(2d - k + 1) / (2 d t)` on the information rate of
/// regenerating-code repairable schemes with optimal repairing rate.
pub fn glf_bound(k: usize, d: usize, alpha: usize, beta: usize) -> Result<Ratio<u64>> {
    let t = glf_t(k, d, alpha, beta)?;
    let (k, d) = (k as u64, d as u64);
    Ok(Ratio::new(k * (2 * d - k + 1), 2 * d * t))
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub design: Design,
    pub k: usize,
}

/// Built-in schemes used for comparisons and acceptance checks.
pub fn default_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    let mut add = |name: String, design: Design, ks: &[usize]| {
        for &k in ks {
            out.push(CorpusEntry {
                name: name.clone(),
                design: design.clone(),
                k,
            });
        }
    };
    add("sts9".into(), kirkman_sts9().0, &[2]);
    add("pg2:2".into(), pg2(2).unwrap(), &[2]);
    add("pg2:3".into(), pg2(3).unwrap(), &[2, 3]);
    add("pg2:5".into(), pg2(5).unwrap(), &[2, 3, 4]);
    for n in 4..=6 {
        add(
            format!("dualk:{n}"),
            dual_complete_graph(n).unwrap(),
            &(2..n).collect::<Vec<_>>(),
        );
    }
    add(
        "fano-complement".into(),
        complement_design(&pg2(2).unwrap()).unwrap(),
        &[2],
    );
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub scheme: String,
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub ell1: usize,
    pub ell2: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub rho_ours: Ratio<u64>,
    /// Bound with `α = d, β = 1`; absent when `k > d`.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub rho_glf_bound: Option<Ratio<u64>>,
    #[serde(serialize_with = "ser_ratio")]
    pub cc_ours: Ratio<u64>,
}

fn ser_opt_ratio<S: serde::Serializer>(
    r: &Option<Ratio<u64>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

pub fn comparison_table(corpus: &[CorpusEntry]) -> Result<Vec<ComparisonRow>> {
    corpus
        .iter()
        .map(|e| {
            let m = metrics_for(&e.design, e.k)?;
            Ok(ComparisonRow {
                scheme: e.name.clone(),
                k: m.k,
                d: m.d,
                n: m.n,
                ell1: m.ell1,
                ell2: m.ell2,
                rho_ours: m.rho,
                rho_glf_bound: glf_bound(m.k, m.d, m.d, 1).ok(),
                cc_ours: m.cc,
            })
        })
        .collect()
}

/// Aligned plain-text rendering of a comparison table.
pub fn render_table(rows: &[ComparisonRow]) -> String {
    let header = [
        "scheme", "k", "d", "n", "ell1", "ell2", "rho", "rho_glf", "cc",
    ];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.scheme.clone(),
                r.k.to_string(),
                r.d.to_string(),
                r.n.to_string(),
                r.ell1.to_string(),
                r.ell2.to_string(),
                r.rho_ours.to_string(),
                r.rho_glf_bound.map_or("-".into(), |b| b.to_string()),
                r.cc_ours.to_string(),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            cells
                .iter()
                .map(|row| row[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap()
        })
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, row: Vec<&str>| {
        let padded: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        writeln!(out, "{}", padded.join("  ").trim_end()).unwrap();
    };
    line(&mut out, header.to_vec());
    for row in &cells {
        line(&mut out, row.iter().map(String::as_str).collect());
    }
    out
}
