//! Exact arithmetic in a prime field `F_Q`.
//!
//! Moduli are kept below `2^31` so that every product of two reduced
//! values fits in a `u64` without overflow.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`PrimeField::new`].
pub const MAX_MODULUS: u64 = 1 << 31;

/// The prime field `F_Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    /// Builds `F_Q`, rejecting composite or oversized moduli.
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus >= MAX_MODULUS {
            return Err(Error::Parameter(format!(
                "modulus {modulus} exceeds the supported bound 2^31"
            )));
        }
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(PrimeField { modulus })
    }

    /// The smallest prime field with at least `n` elements.
    pub fn at_least(n: u64) -> Result<Self> {
        PrimeField::new(smallest_prime_at_least(n.max(2)))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Reduces an arbitrary integer into the field.
    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.modulus,
            modulus: self.modulus,
        }
    }

    /// Maps a signed integer into the field, so `-1` becomes `Q - 1`.
    pub fn from_i64(&self, value: i64) -> FieldElement {
        let q = self.modulus as i64;
        self.element(value.rem_euclid(q) as u64)
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// All `Q` elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.modulus).map(move |v| self.element(v))
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.modulus)
    }
}

/// An element of some [`PrimeField`]. Always reduced: `0 <= value < Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        PrimeField {
            modulus: self.modulus,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::FieldMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }

    fn with(&self, value: u64) -> FieldElement {
        FieldElement {
            value,
            modulus: self.modulus,
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        let s = self.value + other.value;
        Ok(self.with(if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }))
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.with((self.value + self.modulus - other.value) % self.modulus))
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.with(self.value * other.value % self.modulus))
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn neg(&self) -> FieldElement {
        self.with((self.modulus - self.value) % self.modulus)
    }

    /// Square-and-multiply exponentiation; `pow(0) == 1` including `0^0`.
    pub fn pow(&self, mut exp: u64) -> FieldElement {
        let mut base = self.value;
        let mut acc = 1 % self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.modulus;
            }
            base = base * base % self.modulus;
            exp >>= 1;
        }
        self.with(acc)
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.modulus - 2))
    }
}

// The operator impls assume both operands come from the same field and
// panic otherwise; use the `try_*` methods for untrusted inputs.
impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.try_add(&rhs).expect("field mismatch in addition")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.try_sub(&rhs).expect("field mismatch in subtraction")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.try_mul(&rhs)
            .expect("field mismatch in multiplication")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.value)
    }
}

/// Sums a sequence of elements of `field`.
pub fn sum<I: IntoIterator<Item = FieldElement>>(field: PrimeField, items: I) -> FieldElement {
    items.into_iter().fold(field.zero(), |acc, x| acc + x)
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The least prime `>= n`.
pub fn smallest_prime_at_least(n: u64) -> u64 {
    let mut c = n.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}
