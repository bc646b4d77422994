//! Built-in design families.

use itertools::Itertools;

use super::{is_basic_repairing_set, Design};
use crate::error::{param, Error, Result};
use crate::field::{is_prime, PrimeField};

/// Bose construction of an STS(m) for `m ≡ 3 (mod 6)`.
///
/// Points are pairs `(x, i)` with `x` in `Z_{2t+1}` and `i` in `Z_3`,
/// numbered `x + (2t+1) i`. The quasigroup is `x ∘ y = (x + y)(t + 1)`,
/// the idempotent commutative one on `Z_{2t+1}`.
pub fn sts_bose(m: usize) -> Result<Design> {
    if m < 9 || m % 6 != 3 {
        return param(format!(
            "Bose construction needs m ≡ 3 (mod 6) and m >= 9, got {m}"
        ));
    }
    let order = m / 3;
    let t = (order - 1) / 2;
    let idx = |x: usize, i: usize| x + order * (i % 3);
    let op = |x: usize, y: usize| (x + y) * (t + 1) % order;
    let mut blocks = Vec::with_capacity(m * (m - 1) / 6);
    for x in 0..order {
        blocks.push(vec![idx(x, 0), idx(x, 1), idx(x, 2)]);
    }
    for (x, y) in (0..order).tuple_combinations() {
        for i in 0..3 {
            blocks.push(vec![idx(x, i), idx(y, i), idx(op(x, y), i + 1)]);
        }
    }
    let design = Design::new(m, blocks)?;
    debug_assert!(design.is_pairwise_balanced(1));
    Ok(design)
}

/// The resolvable STS(9) (the affine plane of order 3) with its four
/// parallel classes. Point `3a + b` stands for `(a, b)` in `F_3^2`.
pub fn kirkman_sts9() -> (Design, Vec<Vec<usize>>) {
    let blocks = vec![
        // rows
        vec![0, 1, 2],
        vec![3, 4, 5],
        vec![6, 7, 8],
        // columns
        vec![0, 3, 6],
        vec![1, 4, 7],
        vec![2, 5, 8],
        // diagonals
        vec![0, 4, 8],
        vec![1, 5, 6],
        vec![2, 3, 7],
        // anti-diagonals
        vec![0, 5, 7],
        vec![1, 3, 8],
        vec![2, 4, 6],
    ];
    let classes = vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8], vec![9, 10, 11]];
    (
        Design::new(9, blocks).expect("hard-coded STS(9) is valid"),
        classes,
    )
}

/// The STS(9) scheme design for `n` players: the first two parallel
/// classes (a basic repairing set of size 6) plus the first `n - 6` of
/// the remaining blocks.
pub fn sts9_scheme_design(n: usize) -> Result<Design> {
    if !(6..=12).contains(&n) {
        return param(format!("STS(9) supports 6 <= n <= 12 players, got {n}"));
    }
    let (design, classes) = kirkman_sts9();
    let mut chosen: Vec<usize> = classes[0].iter().chain(&classes[1]).copied().collect();
    let rest: Vec<usize> = (0..design.n())
        .filter(|i| !chosen.contains(i))
        .take(n - 6)
        .collect();
    chosen.extend(rest);
    design.subdesign(&chosen)
}

/// PG(2, q) for prime `q`: points and lines are the 1- and 2-dimensional
/// subspaces of `F_q^3`.
///
/// Points are numbered in the order `(1, a, b)`, `(0, 1, b)`, `(0, 0, 1)`
/// with `a, b` ascending; line `i` is the set of points orthogonal to
/// normal vector `i` in the same enumeration.
pub fn pg2(q: u64) -> Result<Design> {
    if !is_prime(q) {
        return param(format!("PG(2, q) is only built for prime q, got {q}"));
    }
    let f = PrimeField::new(q)?;
    let mut vecs: Vec<[u64; 3]> = Vec::new();
    for a in 0..q {
        for b in 0..q {
            vecs.push([1, a, b]);
        }
    }
    for b in 0..q {
        vecs.push([0, 1, b]);
    }
    vecs.push([0, 0, 1]);
    let dot = |u: &[u64; 3], v: &[u64; 3]| {
        u.iter()
            .zip(v)
            .fold(f.zero(), |acc, (&x, &y)| acc + f.element(x) * f.element(y))
    };
    let blocks = vecs
        .iter()
        .map(|normal| {
            vecs.iter()
                .enumerate()
                .filter(|(_, p)| dot(normal, p).is_zero())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let design = Design::new(vecs.len(), blocks)?;
    debug_assert!(design.blocks_meet_in(1));
    Ok(design)
}

/// Three points that do not all lie on one block, smallest first.
pub fn noncollinear_triple(design: &Design) -> Option<[usize; 3]> {
    (0..design.m()).tuple_combinations().find_map(|(a, b, c)| {
        let collinear = design
            .blocks()
            .iter()
            .any(|blk| [a, b, c].iter().all(|p| blk.binary_search(p).is_ok()));
        (!collinear).then_some([a, b, c])
    })
}

/// All blocks through at least one of three noncollinear points. In a
/// projective plane of order `q` this is a basic repairing set of size `3q`.
pub fn pg2_blocking_repairing_set(design: &Design, points: [usize; 3]) -> Result<Vec<usize>> {
    if points.iter().any(|&p| p >= design.m()) {
        return param("point out of range");
    }
    if points.iter().tuple_combinations().any(|(a, b)| a == b) {
        return param("the three points must be distinct");
    }
    if design
        .blocks()
        .iter()
        .any(|blk| points.iter().all(|p| blk.binary_search(p).is_ok()))
    {
        return param(format!("points {points:?} are collinear"));
    }
    let chosen: Vec<usize> = (0..design.n())
        .filter(|&i| {
            points
                .iter()
                .any(|p| design.block(i).binary_search(p).is_ok())
        })
        .collect();
    if !is_basic_repairing_set(design, &chosen) {
        let point = (0..design.m())
            .find(|p| {
                chosen
                    .iter()
                    .filter(|&&i| design.block(i).binary_search(p).is_ok())
                    .count()
                    < 2
            })
            .unwrap_or(0);
        return Err(Error::NotRepairable { point });
    }
    Ok(chosen)
}

/// Dual hypergraph of `K_n`: points are the edges `{a, b}` (lexicographic
/// order), block `x` holds the `n - 1` edges at vertex `x`.
pub fn dual_complete_graph(n: usize) -> Result<Design> {
    if n < 3 {
        return param(format!("dual of K_n needs n >= 3, got {n}"));
    }
    let edges: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let blocks = (0..n)
        .map(|x| {
            edges
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == x || b == x)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    Design::new(edges.len(), blocks)
}

/// Replaces every block by its complement in the point set.
pub fn complement_design(design: &Design) -> Result<Design> {
    if design.block_size().is_none() {
        return param("complement requires a uniform design");
    }
    let blocks = design
        .blocks()
        .iter()
        .map(|b| {
            (0..design.m())
                .filter(|p| b.binary_search(p).is_err())
                .collect()
        })
        .collect();
    Design::new(design.m(), blocks)
}
