//! Linearized polynomials `f(x) = Σ f_i x^(q^i)` over `F_{q^m}`.

use crate::field::Field;
use crate::tower::{MidElem, MidField};

/// A linearized polynomial; coefficient `i` multiplies `x^(q^i)`.
///
/// Trailing zero coefficients are always stripped, so the zero polynomial
/// has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinPoly {
    coeffs: Vec<MidElem>,
}

impl LinPoly {
    pub fn new(mut coeffs: Vec<MidElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.0 == 0) {
            coeffs.pop();
        }
        LinPoly { coeffs }
    }

    pub fn zero() -> Self {
        LinPoly { coeffs: Vec::new() }
    }

    /// The identity map `x`.
    pub fn identity(f: &MidField) -> Self {
        LinPoly { coeffs: vec![f.one()] }
    }

    /// `x^(q^i)`.
    pub fn monomial(f: &MidField, i: usize) -> Self {
        let mut coeffs = vec![f.zero(); i + 1];
        coeffs[i] = f.one();
        LinPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[MidElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest index with a nonzero coefficient; `None` for zero.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn evaluate(&self, f: &MidField, x: MidElem) -> MidElem {
        let mut acc = f.zero();
        let mut power = x;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = f.frobenius(&power);
            }
            if c.0 != 0 {
                acc = f.add(&acc, &f.mul(c, &power));
            }
        }
        acc
    }

    /// The composition `self(other(x))`.
    pub fn compose(&self, f: &MidField, other: &LinPoly) -> LinPoly {
        if self.is_zero() || other.is_zero() {
            return LinPoly::zero();
        }
        // (Σ a_i x^[i]) ∘ (Σ b_j x^[j]) = Σ a_i b_j^[i] x^[i+j]
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.0 == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let b_i = f.frobenius_pow(b, i);
                out[i + j] = f.add(&out[i + j], &f.mul(a, &b_i));
            }
        }
        LinPoly::new(out)
    }

    pub fn add(&self, f: &MidField, other: &LinPoly) -> LinPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &LinPoly, i: usize| p.coeffs.get(i).copied().unwrap_or_default();
        LinPoly::new((0..len).map(|i| f.add(&get(self, i), &get(other, i))).collect())
    }

    /// Multiplies every coefficient by `lambda`.
    pub fn scale(&self, f: &MidField, lambda: MidElem) -> LinPoly {
        LinPoly::new(self.coeffs.iter().map(|c| f.mul(c, &lambda)).collect())
    }
}
