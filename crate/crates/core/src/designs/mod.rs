//! Distribution designs: set systems that hand base-scheme subshares to
//! players, one block per player.
//!
//! Everything here is brute force over block subsets. Closed-form bounds
//! for particular families are checked against these scans in the tests
//! rather than used as shortcuts.

mod construct;
mod format;
mod pointset;

pub use construct::{
    complement_design, dual_complete_graph, kirkman_sts9, noncollinear_triple, pg2,
    pg2_blocking_repairing_set, sts9_scheme_design, sts_bose,
};
pub use format::{load_design, save_design};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{param, Error, Result};
use pointset::PointSet;

/// Default bound on the number of block subsets an exhaustive scan visits.
pub const DEFAULT_GUARD: u128 = 1_000_000;

/// `m` points labelled `0..m` and a list of blocks, one per player.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Design {
    m: usize,
    blocks: Vec<Vec<usize>>,
}

impl Design {
    /// Validates and canonicalizes (sorts) each block.
    pub fn new(m: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut canon = Vec::with_capacity(blocks.len());
        for (i, mut block) in blocks.into_iter().enumerate() {
            if block.is_empty() {
                return param(format!("block {i} is empty"));
            }
            block.sort_unstable();
            if let Some(&p) = block.iter().find(|&&p| p >= m) {
                return param(format!("block {i} contains point {p} outside 0..{m}"));
            }
            if block.windows(2).any(|w| w[0] == w[1]) {
                return param(format!("block {i} repeats a point"));
            }
            canon.push(block);
        }
        Ok(Design { m, blocks: canon })
    }

    /// Number of points.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of blocks (players).
    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    /// The common block size, if all blocks have the same size.
    pub fn block_size(&self) -> Option<usize> {
        let d = self.blocks.first()?.len();
        self.blocks.iter().all(|b| b.len() == d).then_some(d)
    }

    /// How many blocks contain each point.
    pub fn replication(&self) -> Vec<usize> {
        let mut r = vec![0; self.m];
        for &p in self.blocks.iter().flatten() {
            r[p] += 1;
        }
        r
    }

    /// The design on the same points keeping only the listed blocks, in the
    /// order given.
    pub fn subdesign(&self, indices: &[usize]) -> Result<Design> {
        if let Some(&i) = indices.iter().find(|&&i| i >= self.n()) {
            return param(format!("block index {i} out of range"));
        }
        Design::new(
            self.m,
            indices.iter().map(|&i| self.blocks[i].clone()).collect(),
        )
    }

    fn masks(&self) -> Vec<PointSet> {
        self.blocks
            .iter()
            .map(|b| PointSet::from_points(self.m, b))
            .collect()
    }

    /// Number of blocks containing each pair `{p, q}`, indexed `[p][q]`.
    pub fn pair_counts(&self) -> Vec<Vec<usize>> {
        let mut c = vec![vec![0; self.m]; self.m];
        for b in &self.blocks {
            for (&p, &q) in b.iter().tuple_combinations() {
                c[p][q] += 1;
                c[q][p] += 1;
            }
        }
        c
    }

    /// True iff every pair of distinct points lies in exactly `lambda` blocks.
    pub fn is_pairwise_balanced(&self, lambda: usize) -> bool {
        let c = self.pair_counts();
        (0..self.m)
            .tuple_combinations()
            .all(|(p, q)| c[p][q] == lambda)
    }

    /// True iff every two distinct blocks share exactly `size` points.
    pub fn blocks_meet_in(&self, size: usize) -> bool {
        self.blocks
            .iter()
            .tuple_combinations()
            .all(|(a, b)| a.iter().filter(|p| b.binary_search(p).is_ok()).count() == size)
    }

    /// True iff the listed blocks partition the point set.
    pub fn is_parallel_class(&self, class: &[usize]) -> bool {
        let mut seen = vec![false; self.m];
        for &i in class {
            for &p in &self.blocks[i] {
                if std::mem::replace(&mut seen[p], true) {
                    return false;
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn check_guard(size: u128, guard: u128) -> Result<()> {
    if size > guard {
        return Err(Error::TooLarge { size, guard });
    }
    Ok(())
}

/// Smallest and largest union of `j` blocks, over every `j`-subset.
pub fn union_extremes(design: &Design, j: usize, guard: u128) -> Result<(usize, usize)> {
    if j == 0 {
        return Ok((0, 0));
    }
    if j > design.n() {
        return param(format!("cannot choose {j} of {} blocks", design.n()));
    }
    check_guard(binomial(design.n(), j), guard)?;
    let masks = design.masks();
    let mut lo = usize::MAX;
    let mut hi = 0;
    for subset in (0..design.n()).combinations(j) {
        let mut u = PointSet::empty(design.m);
        for &i in &subset {
            u.union_with(&masks[i]);
        }
        let c = u.count();
        lo = lo.min(c);
        hi = hi.max(c);
    }
    Ok((lo, hi))
}

/// `(k, ℓ1, ℓ2)`: any `k - 1` blocks cover at most `ℓ1` points and any `k`
/// blocks cover at least `ℓ2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DistributionProfile {
    pub k: usize,
    pub ell1: usize,
    pub ell2: usize,
}

impl DistributionProfile {
    /// Whether the profile supports a ramp base scheme.
    pub fn is_usable(&self) -> bool {
        self.ell1 < self.ell2
    }
}

pub fn compute_profile(design: &Design, k: usize) -> Result<DistributionProfile> {
    compute_profile_with_guard(design, k, DEFAULT_GUARD)
}

pub fn compute_profile_with_guard(
    design: &Design,
    k: usize,
    guard: u128,
) -> Result<DistributionProfile> {
    if k < 2 || k > design.n() {
        return param(format!(
            "threshold {k} must satisfy 2 <= k <= {}",
            design.n()
        ));
    }
    check_guard(
        binomial(design.n(), k).max(binomial(design.n(), k - 1)),
        guard,
    )?;
    let (_, ell1) = union_extremes(design, k - 1, guard)?;
    let (ell2, _) = union_extremes(design, k, guard)?;
    Ok(DistributionProfile { k, ell1, ell2 })
}

/// Every point lies in at least two blocks.
pub fn is_repairable(design: &Design) -> bool {
    design.replication().iter().all(|&r| r >= 2)
}

/// The first point with replication below two, if any.
pub(crate) fn first_unrepairable_point(design: &Design) -> Option<usize> {
    design.replication().iter().position(|&r| r < 2)
}

/// Whether every point of the design lies in at least two of `blocks`.
pub fn is_basic_repairing_set(design: &Design, blocks: &[usize]) -> bool {
    let mut cover = vec![0usize; design.m()];
    for &i in blocks.iter().unique() {
        if i >= design.n() {
            return false;
        }
        for &p in design.block(i) {
            cover[p] += 1;
        }
    }
    cover.iter().all(|&c| c >= 2)
}

/// Greedy search for a basic repairing set; see
/// [`find_basic_repairing_set_from`].
pub fn find_basic_repairing_set(design: &Design) -> Option<Vec<usize>> {
    find_basic_repairing_set_from(design, &[])
}

/// Starting from `seed`, repeatedly adds the block that covers the most
/// points still short of two blocks, then drops any block whose removal
/// keeps the set valid. Returns sorted block indices, or `None` when the
/// design is not repairable. The result is not necessarily minimum.
pub fn find_basic_repairing_set_from(design: &Design, seed: &[usize]) -> Option<Vec<usize>> {
    if !is_repairable(design) || seed.iter().any(|&i| i >= design.n()) {
        return None;
    }
    let mut chosen: Vec<usize> = seed.iter().copied().unique().collect();
    let mut in_set = vec![false; design.n()];
    let mut cover = vec![0usize; design.m()];
    for &i in &chosen {
        in_set[i] = true;
        for &p in design.block(i) {
            cover[p] += 1;
        }
    }
    loop {
        let gain = |i: usize| design.block(i).iter().filter(|&&p| cover[p] < 2).count();
        let best = (0..design.n())
            .filter(|&i| !in_set[i])
            .map(|i| (gain(i), i))
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        match best {
            Some((g, i)) if g > 0 => {
                in_set[i] = true;
                chosen.push(i);
                for &p in design.block(i) {
                    cover[p] += 1;
                }
            }
            _ => break,
        }
    }
    // prune, newest first
    for pos in (0..chosen.len()).rev() {
        let i = chosen[pos];
        if design.block(i).iter().all(|&p| cover[p] > 2) {
            for &p in design.block(i) {
                cover[p] -= 1;
            }
            chosen.remove(pos);
        }
    }
    chosen.sort_unstable();
    is_basic_repairing_set(design, &chosen).then_some(chosen)
}

/// Parameters `(v, b, r, d)` of a 1-design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OneDesignParams {
    pub v: usize,
    pub b: usize,
    pub r: usize,
    pub d: usize,
}

impl OneDesignParams {
    pub fn new(v: usize, b: usize, r: usize, d: usize) -> Result<Self> {
        if v * r != b * d {
            return param(format!("counting identity fails: {v}*{r} != {b}*{d}"));
        }
        Ok(OneDesignParams { v, b, r, d })
    }
}

/// 1-design parameters when replication and block size are both constant.
pub fn as_1_design(design: &Design) -> Option<OneDesignParams> {
    let d = design.block_size()?;
    let rep = design.replication();
    let r = *rep.first()?;
    if rep.iter().any(|&x| x != r) {
        return None;
    }
    Some(OneDesignParams {
        v: design.m(),
        b: design.n(),
        r,
        d,
    })
}

/// Any `d` other blocks cover a given block iff `b < r + d`.
pub fn universal_repairability_1design(params: &OneDesignParams) -> bool {
    params.b < params.r + params.d
}

pub fn universal_repairability_exhaustive(design: &Design, d: usize) -> Result<bool> {
    universal_repairability_exhaustive_with_guard(design, d, DEFAULT_GUARD)
}

/// Brute-force check that for every block and every choice of `d` other
/// blocks, the chosen blocks cover it.
pub fn universal_repairability_exhaustive_with_guard(
    design: &Design,
    d: usize,
    guard: u128,
) -> Result<bool> {
    let n = design.n();
    if d == 0 || d >= n {
        return param(format!("repair degree {d} needs 1 <= d < {n}"));
    }
    check_guard(binomial(n - 1, d) * n as u128, guard)?;
    let masks = design.masks();
    for (target, tmask) in masks.iter().enumerate() {
        let others: Vec<usize> = (0..n).filter(|&i| i != target).collect();
        for subset in others.into_iter().combinations(d) {
            let mut u = PointSet::empty(design.m());
            for &i in &subset {
                u.union_with(&masks[i]);
            }
            if !tmask.is_subset(&u) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Four triples of the form `xyz, xuv, uyw, vzw`, if the design has one.
pub fn find_pasch(design: &Design) -> Result<Option<[usize; 4]>> {
    if design.block_size() != Some(3) {
        return param("Pasch detection needs a design of triples");
    }
    check_guard(binomial(design.n(), 4), DEFAULT_GUARD * 100)?;
    let masks = design.masks();
    let meet = |a: usize, b: usize| {
        let mut x = masks[a].clone();
        x.intersect_with(&masks[b]);
        x.count()
    };
    for q in (0..design.n()).combinations(4) {
        let mut u = PointSet::empty(design.m());
        for &i in &q {
            u.union_with(&masks[i]);
        }
        // six points, each on exactly two of the triples, any two triples
        // meeting once
        if u.count() == 6
            && q.iter()
                .tuple_combinations()
                .all(|(&a, &b)| meet(a, b) == 1)
        {
            return Ok(Some([q[0], q[1], q[2], q[3]]));
        }
    }
    Ok(None)
}

pub fn contains_pasch(design: &Design) -> Result<bool> {
    Ok(find_pasch(design)?.is_some())
}
