//! Randomness sources for dealing and protocol runs.
//!
//! Every random field element the library consumes is drawn through
//! [`ElementSource`], so a run can be driven either by a seeded PRNG or by
//! an explicit list of values when an auditor enumerates the whole sample
//! space.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldElement, PrimeField};

pub trait ElementSource {
    /// Returns the next uniformly distributed element of `field`.
    fn sample(&mut self, field: PrimeField) -> FieldElement;
}

/// Deterministic PRNG with an explicit 64-bit seed. Not for production keys.
#[derive(Clone, Debug)]
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.gen()
    }
}

impl ElementSource for SeededRng {
    fn sample(&mut self, field: PrimeField) -> FieldElement {
        field.element(self.inner.gen_range(0..field.modulus()))
    }
}

/// Replays a fixed sequence of values. Panics once the sequence runs out,
/// since that means the caller sized the enumeration wrongly.
#[derive(Clone, Debug)]
pub struct FixedSource<'a> {
    values: &'a [u64],
    pos: usize,
}

impl<'a> FixedSource<'a> {
    pub fn new(values: &'a [u64]) -> Self {
        FixedSource { values, pos: 0 }
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }
}

impl ElementSource for FixedSource<'_> {
    fn sample(&mut self, field: PrimeField) -> FieldElement {
        let v = *self
            .values
            .get(self.pos)
            .expect("fixed randomness source exhausted");
        self.pos += 1;
        field.element(v)
    }
}
