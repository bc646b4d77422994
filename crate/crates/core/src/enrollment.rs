//! Share repair by the enrollment protocol.
//!
//! A set of `k2` helpers restores the share of player `ℓ` without the
//! dealer. With `γ_i` the Lagrange coefficients taking the helpers'
//! points to `x_ℓ`:
//!
//! 1. helper `i` splits `γ_i φ_i` into `k2` random summands `δ_{j,i}`;
//! 2. helper `i` sends `δ_{j,i}` to helper `j` (exchange phase);
//! 3. helper `j` adds what it received, `σ_j = Σ_i δ_{j,i}`;
//! 4. helper `j` sends `σ_j` to `ℓ` (repair phase);
//! 5. `ℓ` sets `φ_ℓ = Σ_j σ_j`.
//!
//! The share-exchange matrix stores row `i` as the summands helper `i`
//! produced, so row sums are `γ_i φ_i`, column sums are `σ_j` and the grand
//! total is `φ_ℓ`.

use serde::Serialize;

use crate::error::{param, Result};
use crate::field::{self, FieldElement, PrimeField};
use crate::ramp::{lagrange_coeffs, RampParams, Share};
use crate::rng::ElementSource;
use crate::transcript::{Phase, Transcript};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeMatrix {
    /// Player ids of the helpers, in row/column order.
    pub helpers: Vec<usize>,
    /// `entries[i][j]` is `δ_{j,i}`, the value helper `i` sends to helper `j`.
    pub entries: Vec<Vec<FieldElement>>,
}

impl ExchangeMatrix {
    pub fn new(helpers: Vec<usize>, entries: Vec<Vec<FieldElement>>) -> Result<Self> {
        let d = helpers.len();
        if d == 0 || entries.len() != d || entries.iter().any(|r| r.len() != d) {
            return param(format!("exchange matrix must be {d}x{d}"));
        }
        Ok(ExchangeMatrix { helpers, entries })
    }

    pub fn dim(&self) -> usize {
        self.helpers.len()
    }

    fn field(&self) -> PrimeField {
        self.entries[0][0].field()
    }

    pub fn row_sums(&self) -> Vec<FieldElement> {
        let f = self.field();
        self.entries
            .iter()
            .map(|row| field::sum(f, row.iter().copied()))
            .collect()
    }

    pub fn total(&self) -> FieldElement {
        field::sum(self.field(), self.entries.iter().flatten().copied())
    }
}

/// `σ_j` for every column `j`.
pub fn column_sums(matrix: &ExchangeMatrix) -> Vec<FieldElement> {
    let f = matrix.field();
    (0..matrix.dim())
        .map(|j| field::sum(f, matrix.entries.iter().map(|row| row[j])))
        .collect()
}

/// Splits `value` into `d` summands: the first `d - 1` drawn from `rng`,
/// the last fixed by the sum.
pub fn split_row(
    value: FieldElement,
    d: usize,
    rng: &mut impl ElementSource,
) -> Result<Vec<FieldElement>> {
    if d == 0 {
        return param("cannot split into zero parts");
    }
    let f = value.field();
    let mut parts: Vec<_> = (0..d - 1).map(|_| rng.sample(f)).collect();
    let last = value - field::sum(f, parts.iter().copied());
    parts.push(last);
    Ok(parts)
}

#[derive(Clone, Debug, Serialize)]
pub struct EnrollmentRun {
    pub target: usize,
    pub repaired: Share,
    pub gammas: Vec<FieldElement>,
    pub matrix: ExchangeMatrix,
    pub sigmas: Vec<FieldElement>,
    pub transcript: Transcript,
}

/// Restores the share of the player at `target_x` from exactly `k2`
/// helper shares.
pub fn repair_share(
    params: &RampParams,
    helper_shares: &[Share],
    target_x: FieldElement,
    rng: &mut impl ElementSource,
) -> Result<EnrollmentRun> {
    let f = params.field;
    if helper_shares.len() != params.k2 {
        return param(format!(
            "enrollment needs exactly {} helpers, got {}",
            params.k2,
            helper_shares.len()
        ));
    }
    if target_x.field() != f
        || helper_shares
            .iter()
            .any(|s| s.x.field() != f || s.y.field() != f)
    {
        return param("shares and target must live in the scheme's field");
    }
    if target_x.is_zero() {
        return param("target evaluation point must be nonzero");
    }
    let mut helpers = helper_shares.to_vec();
    helpers.sort_by_key(|s| s.x);
    if helpers.windows(2).any(|w| w[0].x == w[1].x) {
        return param("helper evaluation points must be distinct");
    }
    if helpers.iter().any(|s| s.x == target_x) {
        return param(format!("target {target_x} is among the helpers"));
    }
    if helpers.iter().any(|s| s.x.is_zero()) {
        return param("helper evaluation points must be nonzero");
    }

    let xs: Vec<_> = helpers.iter().map(|s| s.x).collect();
    let gammas = lagrange_coeffs(&xs, target_x)?;
    let ids: Vec<usize> = xs.iter().map(|x| x.value() as usize).collect();
    let target = target_x.value() as usize;
    let d = helpers.len();

    let entries = helpers
        .iter()
        .zip(&gammas)
        .map(|(s, &g)| split_row(g * s.y, d, rng))
        .collect::<Result<Vec<_>>>()?;
    let matrix = ExchangeMatrix::new(ids.clone(), entries)?;

    let mut transcript = Transcript::new();
    for (i, &from) in ids.iter().enumerate() {
        for (j, &to) in ids.iter().enumerate() {
            if i != j {
                transcript.push(Phase::Exchange, from, to, vec![matrix.entries[i][j]])?;
            }
        }
    }
    let sigmas = column_sums(&matrix);
    for (&from, &sigma) in ids.iter().zip(&sigmas) {
        transcript.push(Phase::Repair, from, target, vec![sigma])?;
    }
    let repaired = Share {
        x: target_x,
        y: field::sum(f, sigmas.iter().copied()),
    };
    Ok(EnrollmentRun {
        target,
        repaired,
        gammas,
        matrix,
        sigmas,
        transcript,
    })
}
