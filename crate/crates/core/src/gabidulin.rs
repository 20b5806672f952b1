//! Gabidulin codes with generator `Moore_k(g)` and a kernel-based decoder
//! shared with the interleaved variant.

use std::sync::OnceLock;

use crate::error::{CodeError, DecodingFailure};
use crate::field::Field;
use crate::linalg::{self, EchelonBasis, Matrix};
use crate::rank;
use crate::tower::{MidElem, MidField};

/// `Gab[n, k]` with evaluation points `g`.
#[derive(Debug, Clone)]
pub struct GabidulinCode {
    field: MidField,
    g: Vec<MidElem>,
    k: usize,
    generator: Matrix<MidElem>,
    /// Echelon forms of `Moore_s(g)` for `s = k..n`, index `s - k`.
    g_echelons: OnceLock<Vec<EchelonBasis<MidElem>>>,
}

/// A decoded interleaved word: messages, error rows, and the error rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LoSolution {
    pub messages: Vec<Vec<MidElem>>,
    pub errors: Vec<Vec<MidElem>>,
    pub error_rank: usize,
}

impl GabidulinCode {
    pub fn new(field: &MidField, g: Vec<MidElem>, k: usize) -> Result<Self, CodeError> {
        let n = g.len();
        if k == 0 || k > n {
            return Err(CodeError::InvalidDimension { k, n });
        }
        let r = rank::rank_weight(field, &g);
        if r != n {
            return Err(CodeError::DependentPoints { rank: r, len: n });
        }
        let generator = rank::moore_matrix(field, &g, k);
        Ok(GabidulinCode { field: field.clone(), g, k, generator, g_echelons: OnceLock::new() })
    }

    pub fn field(&self) -> &MidField {
        &self.field
    }

    pub fn points(&self) -> &[MidElem] {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `Moore_k(g)`.
    pub fn generator(&self) -> &Matrix<MidElem> {
        &self.generator
    }

    /// Minimum rank distance `n - k + 1`.
    pub fn min_distance(&self) -> usize {
        self.n() - self.k + 1
    }

    /// Unique decoding radius `⌊(n - k)/2⌋`.
    pub fn radius(&self) -> usize {
        (self.n() - self.k) / 2
    }

    pub fn encode(&self, msg: &[MidElem]) -> Result<Vec<MidElem>, CodeError> {
        if msg.len() != self.k {
            return Err(CodeError::LengthMismatch { expected: self.k, got: msg.len() });
        }
        Ok(linalg::vec_mul(&self.field, msg, &self.generator))
    }

    /// An `(n - k) × n` matrix `H` of full rank with `G Hᵀ = 0`.
    pub fn parity_check(&self) -> Matrix<MidElem> {
        let kernel = linalg::rank_and_kernel(&self.field, &self.generator).1;
        Matrix::from_rows(kernel, self.n())
    }

    /// Returns `(msg, y - msg·G)` when some codeword lies within rank
    /// distance `⌊(n - k)/2⌋` of `y`.
    pub fn decode(&self, y: &[MidElem]) -> Result<(Vec<MidElem>, Vec<MidElem>), DecodingFailure> {
        if y.len() != self.n() {
            return Err(DecodingFailure);
        }
        let mut sol = lo_decode(self, std::slice::from_ref(&y.to_vec()), self.radius()).ok_or(DecodingFailure)?;
        Ok((sol.messages.pop().expect("one row"), sol.errors.pop().expect("one row")))
    }

    fn g_echelon(&self, s: usize) -> &EchelonBasis<MidElem> {
        let all = self.g_echelons.get_or_init(|| {
            let f = &self.field;
            let n = self.n();
            let mut ech = EchelonBasis::new(n);
            let mut snaps = Vec::with_capacity(n - self.k);
            let mut row = self.g.clone();
            for i in 0..n {
                if i > 0 {
                    row = row.iter().map(|x| f.frobenius(x)).collect();
                }
                ech.insert(f, row.clone());
                if i + 1 >= self.k {
                    snaps.push(ech.clone());
                }
            }
            snaps
        });
        &all[s - self.k]
    }
}

/// Loidreau–Overbeck style joint decoding of the rows `ys` of an
/// interleaved word, trying every error rank from `radius` down to zero.
pub(crate) fn lo_decode(code: &GabidulinCode, ys: &[Vec<MidElem>], radius: usize) -> Option<LoSolution> {
    let f = &code.field;
    let n = code.n();
    let k = code.k;
    if ys.iter().any(|y| y.len() != n) {
        return None;
    }
    let radius = radius.min(n - k - 1);
    for t in (0..=radius).rev() {
        let mut ech = code.g_echelon(n - t - 1).clone();
        if !insert_moore_rows(f, &mut ech, ys, n - k - t) || ech.rank() != n - 1 {
            continue;
        }
        let h = ech.kernel(f).pop().expect("kernel of dimension one");
        if let Some(sol) = recover(code, ys, &h, t) {
            return Some(sol);
        }
    }
    None
}

/// Inserts `Moore_s(y)` for every row; returns false once the rank hits `n`.
fn insert_moore_rows(f: &MidField, ech: &mut EchelonBasis<MidElem>, ys: &[Vec<MidElem>], s: usize) -> bool {
    let n = ech.cols();
    for y in ys {
        let mut row = y.clone();
        for j in 0..s {
            if j > 0 {
                row = row.iter().map(|x| f.frobenius(x)).collect();
            }
            ech.insert(f, row.clone());
            if ech.rank() == n {
                return false;
            }
        }
    }
    true
}

fn recover(code: &GabidulinCode, ys: &[Vec<MidElem>], h: &[MidElem], t: usize) -> Option<LoSolution> {
    let f = &code.field;
    let n = code.n();
    let k = code.k;
    let base = crate::field::PrimeField::new(f.q());
    // The error support is the F_q right kernel of h's expansion.
    let support = linalg::rank_and_kernel(&base, &rank::expand_mid_to_base(f, h)).1;
    if support.len() != t {
        return None;
    }
    let b = Matrix::from_rows(support, n);
    let system = code.generator.vstack(&rank::embed_base_matrix(f, &b));
    let sols = linalg::solve_left(f, &system, ys)?;
    let mut messages = Vec::with_capacity(ys.len());
    let mut errors = Vec::with_capacity(ys.len());
    for (sol, y) in sols.iter().zip(ys) {
        let msg = sol[..k].to_vec();
        let cw = linalg::vec_mul(f, &msg, &code.generator);
        errors.push(y.iter().zip(&cw).map(|(a, c)| f.sub(a, c)).collect::<Vec<_>>());
        messages.push(msg);
    }
    let error_rank = rank::rank_weight_stacked(f, &errors);
    if error_rank > t {
        return None;
    }
    Some(LoSolution { messages, errors, error_rank })
}
