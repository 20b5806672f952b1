//! Vertically interleaved Gabidulin codes and their joint decoder.

use crate::error::{CodeError, FailureDetected};
use crate::gabidulin::{lo_decode, GabidulinCode};
use crate::linalg::Matrix;
use crate::rank;
use crate::tower::{MidElem, MidField};

/// `IGab[u; n, k]`: `u` codewords of one Gabidulin code stacked as rows.
#[derive(Debug, Clone)]
pub struct InterleavedCode {
    base: GabidulinCode,
    u: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleavedDecodeResult {
    pub messages: Vec<Vec<MidElem>>,
    pub error_rows: Vec<Vec<MidElem>>,
    /// `F_q`-rank of the stacked error.
    pub error_rank: usize,
}

impl InterleavedCode {
    pub fn new(base: GabidulinCode, u: usize) -> Self {
        assert!(u >= 1, "interleaving order must be positive");
        InterleavedCode { base, u }
    }

    pub fn base(&self) -> &GabidulinCode {
        &self.base
    }

    pub fn u(&self) -> usize {
        self.u
    }

    /// `⌊u(n - k)/(u + 1)⌋`.
    pub fn radius(&self) -> usize {
        self.u * (self.base.n() - self.base.k()) / (self.u + 1)
    }

    pub fn encode(&self, msgs: &[Vec<MidElem>]) -> Result<Vec<Vec<MidElem>>, CodeError> {
        if msgs.len() != self.u {
            return Err(CodeError::LengthMismatch { expected: self.u, got: msgs.len() });
        }
        msgs.iter().map(|m| self.base.encode(m)).collect()
    }

    /// `[Moore_{n-t-1}(g); Moore_{n-k-t}(Y_1); …; Moore_{n-k-t}(Y_u)]`.
    pub fn failure_matrix(&self, ys: &[Vec<MidElem>], t: usize) -> Matrix<MidElem> {
        let (n, k) = (self.base.n(), self.base.k());
        assert!(t < n - k, "trial rank must be below n - k");
        let f = self.base.field();
        let top = rank::moore_matrix(f, self.base.points(), n - t - 1);
        top.vstack(&rank::stacked_moore(f, ys, n - k - t, n))
    }

    /// Joint decoding up to [`InterleavedCode::radius`].
    pub fn decode(&self, ys: &[Vec<MidElem>]) -> Result<InterleavedDecodeResult, FailureDetected> {
        if ys.len() != self.u {
            return Err(FailureDetected);
        }
        let sol = lo_decode(&self.base, ys, self.radius()).ok_or(FailureDetected)?;
        Ok(InterleavedDecodeResult { messages: sol.messages, error_rows: sol.errors, error_rank: sol.error_rank })
    }
}

/// `φ = rank_{q^m}[Moore_s(z_1); …; Moore_s(z_u)]`.
pub fn error_rank_condition(f: &MidField, z_rows: &[Vec<MidElem>], s: usize) -> usize {
    let Some(n) = z_rows.first().map(Vec::len) else {
        return 0;
    };
    crate::linalg::rank(f, &rank::stacked_moore(f, z_rows, s, n))
}
