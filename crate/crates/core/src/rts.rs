//! Expanded repairable threshold schemes built from a distribution design.
//!
//! A `(k, ℓ1, ℓ2)` distribution design on `m` points fixes an
//! `(ℓ1, ℓ2, m)` ramp base scheme. Point `p` of the design carries the
//! base subshare at `x = p + 1`, and player `i` (0-based, one per block)
//! holds the subshares of the points in block `i`. A lost share is rebuilt
//! by having, for each of its points, some other player holding that point
//! send the subshare.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::designs::{compute_profile, first_unrepairable_point, Design, DistributionProfile};
use crate::error::{param, Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::ramp::{deal, reconstruct, RampParams, Secret, Share};
use crate::rng::ElementSource;
use crate::transcript::{Phase, Transcript};

pub(crate) fn ser_ratio<S: Serializer>(
    r: &Ratio<u64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpandedScheme {
    design: Design,
    profile: DistributionProfile,
    base: RampParams,
    player_shares: Vec<Vec<(usize, FieldElement)>>,
}

fn usable_profile(design: &Design, k: usize) -> Result<DistributionProfile> {
    if design.block_size().is_none() {
        return param("expanded schemes need blocks of equal size");
    }
    if let Some(point) = first_unrepairable_point(design) {
        return Err(Error::NotRepairable { point });
    }
    let profile = compute_profile(design, k)?;
    if !profile.is_usable() {
        return Err(Error::Profile {
            ell1: profile.ell1,
            ell2: profile.ell2,
        });
    }
    Ok(profile)
}

/// Profile and base ramp parameters a design induces for threshold `k`.
pub fn base_params(
    design: &Design,
    k: usize,
    field: PrimeField,
) -> Result<(DistributionProfile, RampParams)> {
    let profile = usable_profile(design, k)?;
    let base = RampParams::new(profile.ell1, profile.ell2, design.m(), field)?;
    Ok((profile, base))
}

/// Deals `secret` with the base ramp scheme and hands out subshares by block.
pub fn setup(
    design: &Design,
    k: usize,
    field: PrimeField,
    secret: &Secret,
    rng: &mut impl ElementSource,
) -> Result<ExpandedScheme> {
    let (profile, base) = base_params(design, k, field)?;
    let (subshares, _) = deal(&base, secret, rng)?;
    let player_shares = design
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&p| (p, subshares[p].y)).collect())
        .collect();
    Ok(ExpandedScheme {
        design: design.clone(),
        profile,
        base,
        player_shares,
    })
}

impl ExpandedScheme {
    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn profile(&self) -> DistributionProfile {
        self.profile
    }

    pub fn base(&self) -> &RampParams {
        &self.base
    }

    /// Number of players.
    pub fn n(&self) -> usize {
        self.design.n()
    }

    /// `(point, subshare)` pairs held by `player`.
    pub fn share(&self, player: usize) -> &[(usize, FieldElement)] {
        &self.player_shares[player]
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DonorStrategy {
    /// Each point comes from the lowest-indexed other holder.
    #[default]
    LowestIndex,
    /// Use as many distinct donors as possible.
    Spread,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairPlan {
    pub target: usize,
    /// `(point, donor)` for every point of the target's block, in block order.
    pub assignments: Vec<(usize, usize)>,
}

impl RepairPlan {
    pub fn distinct_donors(&self) -> usize {
        let mut d: Vec<usize> = self.assignments.iter().map(|&(_, d)| d).collect();
        d.sort_unstable();
        d.dedup();
        d.len()
    }
}

fn donors_for(design: &Design, target: usize, point: usize) -> Vec<usize> {
    (0..design.n())
        .filter(|&i| i != target && design.block(i).binary_search(&point).is_ok())
        .collect()
}

// Kuhn's augmenting path step for the spread strategy.
fn augment(
    point: usize,
    candidates: &[Vec<usize>],
    owner: &mut BTreeMap<usize, usize>,
    visited: &mut Vec<usize>,
) -> bool {
    for &donor in &candidates[point] {
        if visited.contains(&donor) {
            continue;
        }
        visited.push(donor);
        let free = match owner.get(&donor) {
            None => true,
            Some(&other) => augment(other, candidates, owner, visited),
        };
        if free {
            owner.insert(donor, point);
            return true;
        }
    }
    false
}

pub fn plan_repair(
    scheme: &ExpandedScheme,
    target: usize,
    strategy: DonorStrategy,
) -> Result<RepairPlan> {
    if target >= scheme.n() {
        return param(format!("player {target} out of range 0..{}", scheme.n()));
    }
    let block = scheme.design.block(target);
    let candidates: Vec<Vec<usize>> = block
        .iter()
        .map(|&p| donors_for(&scheme.design, target, p))
        .collect();
    if let Some(i) = candidates.iter().position(|c| c.is_empty()) {
        return Err(Error::NotRepairable { point: block[i] });
    }
    let chosen: Vec<usize> = match strategy {
        DonorStrategy::LowestIndex => candidates.iter().map(|c| c[0]).collect(),
        DonorStrategy::Spread => {
            // maximum matching of points to distinct donors; leftover points
            // fall back to their lowest-indexed holder
            let mut owner = BTreeMap::new();
            for i in 0..block.len() {
                augment(i, &candidates, &mut owner, &mut Vec::new());
            }
            let mut by_point: Vec<Option<usize>> = vec![None; block.len()];
            for (donor, i) in owner {
                by_point[i] = Some(donor);
            }
            by_point
                .iter()
                .zip(&candidates)
                .map(|(d, c)| d.unwrap_or(c[0]))
                .collect()
        }
    };
    Ok(RepairPlan {
        target,
        assignments: block.iter().copied().zip(chosen).collect(),
    })
}

fn validate_plan(scheme: &ExpandedScheme, plan: &RepairPlan) -> Result<()> {
    if plan.target >= scheme.n() {
        return param(format!("plan targets unknown player {}", plan.target));
    }
    let block = scheme.design.block(plan.target);
    let points: Vec<usize> = plan.assignments.iter().map(|&(p, _)| p).collect();
    if points != block {
        return param("plan does not cover the target's points exactly once in block order");
    }
    for &(p, donor) in &plan.assignments {
        if donor == plan.target || donor >= scheme.n() {
            return param(format!("invalid donor {donor} for point {p}"));
        }
        if scheme.design.block(donor).binary_search(&p).is_err() {
            return param(format!("donor {donor} does not hold point {p}"));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct RepairOutcome {
    pub restored: Vec<(usize, FieldElement)>,
    pub transcript: Transcript,
    pub distinct_donors: usize,
}

/// Runs a repair plan. Each donor sends one message carrying the
/// subshares it was assigned.
pub fn execute_repair(scheme: &ExpandedScheme, plan: &RepairPlan) -> Result<RepairOutcome> {
    validate_plan(scheme, plan)?;
    let mut per_donor: BTreeMap<usize, Vec<(usize, FieldElement)>> = BTreeMap::new();
    for &(p, donor) in &plan.assignments {
        let value = scheme.player_shares[donor]
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|&(_, v)| v)
            .expect("validated donor holds the point");
        per_donor.entry(donor).or_default().push((p, value));
    }
    let mut transcript = Transcript::new();
    let mut received = BTreeMap::new();
    for (&donor, items) in &per_donor {
        transcript.push(
            Phase::Repair,
            donor,
            plan.target,
            items.iter().map(|&(_, v)| v).collect(),
        )?;
        received.extend(items.iter().copied());
    }
    let restored = plan
        .assignments
        .iter()
        .map(|&(p, _)| (p, received[&p]))
        .collect();
    Ok(RepairOutcome {
        restored,
        transcript,
        distinct_donors: per_donor.len(),
    })
}

/// Pools the listed players' subshares and reconstructs the secret.
pub fn reconstruct_secret(scheme: &ExpandedScheme, players: &[usize]) -> Result<Secret> {
    let mut ids = players.to_vec();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() != players.len() {
        return param("players listed more than once");
    }
    if let Some(&p) = ids.iter().find(|&&p| p >= scheme.n()) {
        return param(format!("player {p} out of range"));
    }
    if ids.len() < scheme.profile.k {
        return Err(Error::InsufficientShares {
            needed: scheme.profile.k,
            got: ids.len(),
        });
    }
    let mut pooled: BTreeMap<usize, FieldElement> = BTreeMap::new();
    for &i in &ids {
        for &(p, v) in &scheme.player_shares[i] {
            if let Some(prev) = pooled.insert(p, v) {
                if prev != v {
                    return Err(Error::Corruption { point: p });
                }
            }
        }
    }
    let shares: Vec<Share> = pooled
        .into_iter()
        .map(|(p, y)| Share {
            x: scheme.base.point(p + 1),
            y,
        })
        .collect();
    reconstruct(&scheme.base, &shares)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeMetrics {
    #[serde(serialize_with = "ser_ratio")]
    pub rho: Ratio<u64>,
    #[serde(serialize_with = "ser_ratio")]
    pub cc: Ratio<u64>,
    pub d: usize,
    pub k: usize,
    pub n: usize,
    pub ell1: usize,
    pub ell2: usize,
}

fn metrics_from(design: &Design, profile: DistributionProfile) -> SchemeMetrics {
    let d = design.block_size().expect("schemes have uniform blocks");
    let lambda = (profile.ell2 - profile.ell1) as u64;
    SchemeMetrics {
        rho: Ratio::new(lambda, d as u64),
        cc: Ratio::new(d as u64, lambda),
        d,
        k: profile.k,
        n: design.n(),
        ell1: profile.ell1,
        ell2: profile.ell2,
    }
}

/// Information rate `(ℓ2 - ℓ1)/d` and communication complexity `d/(ℓ2 - ℓ1)`.
pub fn scheme_metrics(scheme: &ExpandedScheme) -> SchemeMetrics {
    metrics_from(&scheme.design, scheme.profile)
}

/// Metrics of the scheme a design would yield, without dealing one.
pub fn metrics_for(design: &Design, k: usize) -> Result<SchemeMetrics> {
    Ok(metrics_from(design, usable_profile(design, k)?))
}
