//! The `(k1, k2, n)` ramp scheme over a prime field, with Shamir's
//! `(k, n)` threshold scheme as the special case `k1 = k - 1, k2 = k`.
//!
//! The dealer picks a polynomial `a(x)` of degree below `k2` whose
//! `k2 - k1` low-order coefficients are the secret and whose remaining
//! coefficients are uniformly random. Player `i` receives `a(i)`.

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::rng::ElementSource;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RampParams {
    pub k1: usize,
    pub k2: usize,
    pub n: usize,
    #[serde(serialize_with = "ser_modulus", rename = "q")]
    pub field: PrimeField,
}

fn ser_modulus<S: serde::Serializer>(f: &PrimeField, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(f.modulus())
}

impl RampParams {
    pub fn new(k1: usize, k2: usize, n: usize, field: PrimeField) -> Result<Self> {
        if k1 >= k2 {
            return param(format!(
                "lower threshold {k1} must be below upper threshold {k2}"
            ));
        }
        if k2 > n {
            return param(format!(
                "upper threshold {k2} exceeds the number of players {n}"
            ));
        }
        if field.modulus() < n as u64 + 1 {
            return param(format!(
                "modulus {} too small for {n} players (need at least {})",
                field.modulus(),
                n + 1
            ));
        }
        Ok(RampParams { k1, k2, n, field })
    }

    /// Shamir `(k, n)` threshold parameters.
    pub fn threshold(k: usize, n: usize, field: PrimeField) -> Result<Self> {
        if k == 0 {
            return param("threshold must be at least 1");
        }
        RampParams::new(k - 1, k, n, field)
    }

    /// Number of field elements in a secret, `k2 - k1`.
    pub fn secret_len(&self) -> usize {
        self.k2 - self.k1
    }

    /// The public evaluation point of player `id` (1-based).
    pub fn point(&self, id: usize) -> FieldElement {
        self.field.element(id as u64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Share {
    pub x: FieldElement,
    pub y: FieldElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Secret(Vec<FieldElement>);

impl Secret {
    pub fn new(params: &RampParams, coeffs: Vec<FieldElement>) -> Result<Self> {
        if coeffs.len() != params.secret_len() {
            return param(format!(
                "secret has {} elements, expected {}",
                coeffs.len(),
                params.secret_len()
            ));
        }
        if coeffs.iter().any(|c| c.field() != params.field) {
            return param("secret elements are not in the scheme's field");
        }
        Ok(Secret(coeffs))
    }

    pub fn from_values(params: &RampParams, values: &[u64]) -> Result<Self> {
        Secret::new(
            params,
            values.iter().map(|&v| params.field.element(v)).collect(),
        )
    }

    /// Draws a uniformly random secret.
    pub fn random(params: &RampParams, rng: &mut impl ElementSource) -> Self {
        Secret(
            (0..params.secret_len())
                .map(|_| rng.sample(params.field))
                .collect(),
        )
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> Vec<u64> {
        self.0.iter().map(|e| e.value()).collect()
    }
}

/// Coefficients `a_0, ..., a_{len-1}` in increasing degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Polynomial(Vec<FieldElement>);

impl Polynomial {
    pub fn new(coeffs: Vec<FieldElement>) -> Self {
        Polynomial(coeffs)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.0
    }

    /// Horner evaluation.
    pub fn evaluate(&self, x: FieldElement) -> FieldElement {
        let zero = x.field().zero();
        self.0.iter().rev().fold(zero, |acc, &c| acc * x + c)
    }
}

pub fn evaluate_share(poly: &Polynomial, x: FieldElement) -> Share {
    Share {
        x,
        y: poly.evaluate(x),
    }
}

/// Deals `n` shares of `secret`, evaluated at `x_i = i`.
pub fn deal(
    params: &RampParams,
    secret: &Secret,
    rng: &mut impl ElementSource,
) -> Result<(Vec<Share>, Polynomial)> {
    let params = RampParams::new(params.k1, params.k2, params.n, params.field)?;
    if secret.len() != params.secret_len() {
        return param(format!(
            "secret has {} elements, expected {}",
            secret.len(),
            params.secret_len()
        ));
    }
    let mut coeffs = secret.elements().to_vec();
    coeffs.extend((params.secret_len()..params.k2).map(|_| rng.sample(params.field)));
    let poly = Polynomial(coeffs);
    let shares = (1..=params.n)
        .map(|i| evaluate_share(&poly, params.point(i)))
        .collect();
    Ok((shares, poly))
}

fn check_distinct(xs: &[FieldElement]) -> Result<()> {
    for (i, a) in xs.iter().enumerate() {
        if xs[..i].contains(a) {
            return param(format!("duplicate evaluation point {a}"));
        }
    }
    Ok(())
}

/// Coefficients `γ_i` with `Σ γ_i f(x_i) = f(target)` for every `f` of
/// degree below `xs.len()`.
pub fn lagrange_coeffs(xs: &[FieldElement], target: FieldElement) -> Result<Vec<FieldElement>> {
    if xs.is_empty() {
        return param("need at least one evaluation point");
    }
    check_distinct(xs)?;
    let field = target.field();
    xs.iter()
        .enumerate()
        .map(|(i, &xi)| {
            let mut num = field.one();
            let mut den = field.one();
            for (j, &xj) in xs.iter().enumerate() {
                if i != j {
                    num = num.try_mul(&target.try_sub(&xj)?)?;
                    den = den * (xi - xj);
                }
            }
            num.try_div(&den)
        })
        .collect()
}

/// The unique polynomial of degree below `shares.len()` through `shares`.
pub fn interpolate(shares: &[Share]) -> Result<Polynomial> {
    let Some(first) = shares.first() else {
        return param("need at least one share to interpolate");
    };
    let field = first.x.field();
    let xs: Vec<_> = shares.iter().map(|s| s.x).collect();
    check_distinct(&xs)?;
    let len = shares.len();
    let mut coeffs = vec![field.zero(); len];
    for (i, share) in shares.iter().enumerate() {
        // basis numerator Π_{j≠i} (x - x_j), built in increasing degree
        let mut basis = vec![field.one()];
        let mut den = field.one();
        for (j, other) in shares.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![field.zero(); basis.len() + 1];
            for (d, &c) in basis.iter().enumerate() {
                next[d + 1] = next[d + 1] + c;
                next[d] = next[d] - c * other.x;
            }
            basis = next;
            den = den.try_mul(&share.x.try_sub(&other.x)?)?;
        }
        let scale = share.y.try_div(&den)?;
        for (acc, b) in coeffs.iter_mut().zip(basis) {
            *acc = *acc + scale * b;
        }
    }
    Ok(Polynomial(coeffs))
}

/// Recovers the secret from at least `k2` shares. Extra shares must lie on
/// the same polynomial.
pub fn reconstruct(params: &RampParams, shares: &[Share]) -> Result<Secret> {
    if shares.len() < params.k2 {
        return Err(Error::InsufficientShares {
            needed: params.k2,
            got: shares.len(),
        });
    }
    if shares
        .iter()
        .any(|s| s.x.field() != params.field || s.y.field() != params.field)
    {
        return param("share is not in the scheme's field");
    }
    let xs: Vec<_> = shares.iter().map(|s| s.x).collect();
    check_distinct(&xs)?;
    let poly = interpolate(&shares[..params.k2])?;
    if shares[params.k2..]
        .iter()
        .any(|s| poly.evaluate(s.x) != s.y)
    {
        return Err(Error::InconsistentShares {
            degree_bound: params.k2,
        });
    }
    Ok(Secret(poly.0[..params.secret_len()].to_vec()))
}
