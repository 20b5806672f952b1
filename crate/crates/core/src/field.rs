//! The [`Field`] abstraction shared by every level of the tower, and the
//! prime field `F_q` itself.
//!
//! Field contexts carry the parameters (modulus, degree) while elements are
//! plain values, so the same element type can be shared freely between
//! threads and stored in keys without back-references.

use std::fmt::Debug;

use rand::Rng;

/// Arithmetic context for a finite field of characteristic `q`.
pub trait Field {
    type Elem: Clone + PartialEq + Eq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` only for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// Characteristic `q`.
    fn characteristic(&self) -> u32;
    /// Degree over the prime subfield, so the field has `q^degree` elements.
    fn prime_degree(&self) -> usize;

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }

    /// `a^e` by square-and-multiply, with `0^0 = 1`.
    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// The Frobenius map `a -> a^q`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, u128::from(self.characteristic()))
    }

    /// `a^(q^i)`.
    fn frobenius_pow(&self, a: &Self::Elem, i: usize) -> Self::Elem {
        let mut out = a.clone();
        for _ in 0..(i % self.prime_degree().max(1)) {
            out = self.frobenius(&out);
        }
        out
    }
}

/// The prime field `F_q`, `q < 256`, elements stored as their residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    q: u8,
}

impl PrimeField {
    /// Caller guarantees `q` is a prime below 256.
    pub(crate) fn new(q: u8) -> Self {
        debug_assert!(is_prime(u32::from(q)));
        PrimeField { q }
    }

    pub fn order(&self) -> u8 {
        self.q
    }
}

impl Field for PrimeField {
    type Elem = u8;

    fn zero(&self) -> u8 {
        0
    }

    fn one(&self) -> u8 {
        1 % self.q
    }

    fn is_zero(&self, a: &u8) -> bool {
        *a == 0
    }

    fn add(&self, a: &u8, b: &u8) -> u8 {
        ((u16::from(*a) + u16::from(*b)) % u16::from(self.q)) as u8
    }

    fn sub(&self, a: &u8, b: &u8) -> u8 {
        ((u16::from(*a) + u16::from(self.q) - u16::from(*b)) % u16::from(self.q)) as u8
    }

    fn mul(&self, a: &u8, b: &u8) -> u8 {
        ((u16::from(*a) * u16::from(*b)) % u16::from(self.q)) as u8
    }

    fn inv(&self, a: &u8) -> Option<u8> {
        if *a == 0 {
            return None;
        }
        Some(self.pow(a, u128::from(self.q) - 2))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u8 {
        rng.random_range(0..self.q)
    }

    fn characteristic(&self) -> u32 {
        u32::from(self.q)
    }

    fn prime_degree(&self) -> usize {
        1
    }

    fn frobenius(&self, a: &u8) -> u8 {
        *a
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
