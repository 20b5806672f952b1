//! Rank-metric primitives: Moore matrices, subfield expansions, rank
//! weight, and full-rank sampling.

use rand::Rng;

use crate::error::InfeasibleRank;
use crate::field::{Field, PrimeField};
use crate::linalg::{self, Matrix};
use crate::tower::{FieldTower, MidElem, MidField, TopElem};

/// The `s × n` Moore matrix whose row `i` is `a^(q^i)` entrywise.
pub fn moore_matrix<F: Field>(f: &F, a: &[F::Elem], s: usize) -> Matrix<F::Elem> {
    Matrix::from_rows(moore_rows(f, a, s), a.len())
}

pub(crate) fn moore_rows<F: Field>(f: &F, a: &[F::Elem], s: usize) -> Vec<Vec<F::Elem>> {
    let mut rows = Vec::with_capacity(s);
    if s == 0 {
        return rows;
    }
    rows.push(a.to_vec());
    for i in 1..s {
        let next = rows[i - 1].iter().map(|x| f.frobenius(x)).collect();
        rows.push(next);
    }
    rows
}

/// Stacked `[Moore_s(r_1); …; Moore_s(r_u)]`.
pub fn stacked_moore(f: &MidField, rows: &[Vec<MidElem>], s: usize, cols: usize) -> Matrix<MidElem> {
    let all: Vec<Vec<MidElem>> = rows.iter().flat_map(|r| moore_rows(f, r, s)).collect();
    Matrix::from_rows(all, cols)
}

/// `m × n` matrix over `F_q`; column `j` holds the coordinates of `v_j`.
pub fn expand_mid_to_base(f: &MidField, v: &[MidElem]) -> Matrix<u8> {
    let cols: Vec<Vec<u8>> = v.iter().map(|x| f.digits(*x)).collect();
    Matrix::from_fn(f.degree(), v.len(), |i, j| cols[j][i])
}

/// `u × n` matrix over `F_{q^m}` with row `i` equal to `Tr(γ_i v)`, so that
/// `v = Σ_i row_i γ*_i`.
pub fn expand_top_to_mid(t: &FieldTower, v: &[TopElem]) -> Matrix<MidElem> {
    let cols: Vec<Vec<MidElem>> = v.iter().map(|x| t.dual_coordinates(x)).collect();
    Matrix::from_fn(t.u(), v.len(), |i, j| cols[j][i])
}

/// `mu × n` matrix over `F_q`; row `i·m + j` is digit `j` of row `i` of
/// [`expand_top_to_mid`].
pub fn expand_top_to_base(t: &FieldTower, v: &[TopElem]) -> Matrix<u8> {
    let mid_rows = expand_top_to_mid(t, v);
    stack_base_expansions(t.mid(), &mid_rows.row_vecs(), v.len())
}

pub(crate) fn stack_base_expansions(f: &MidField, rows: &[Vec<MidElem>], cols: usize) -> Matrix<u8> {
    rows.iter()
        .map(|r| expand_mid_to_base(f, r))
        .fold(Matrix::filled(0, cols, 0u8), |acc, m| acc.vstack(&m))
}

/// Inverse of [`expand_mid_to_base`].
pub fn recombine_base_to_mid(f: &MidField, a: &Matrix<u8>) -> Vec<MidElem> {
    (0..a.cols())
        .map(|j| {
            let digits: Vec<u8> = (0..a.rows()).map(|i| *a.get(i, j)).collect();
            f.from_digits(&digits).expect("valid digits")
        })
        .collect()
}

/// Inverse of [`expand_top_to_mid`].
pub fn recombine_mid_to_top(t: &FieldTower, rows: &Matrix<MidElem>) -> Vec<TopElem> {
    (0..rows.cols())
        .map(|j| {
            let coords: Vec<MidElem> = (0..rows.rows()).map(|i| *rows.get(i, j)).collect();
            t.from_dual_coordinates(&coords)
        })
        .collect()
}

/// `rank_q(v)` for a vector over `F_{q^m}`.
pub fn rank_weight(f: &MidField, v: &[MidElem]) -> usize {
    if f.q() == 2 {
        return xor_rank(v.iter().map(|x| x.0));
    }
    linalg::rank(&PrimeField::new(f.q()), &expand_mid_to_base(f, v))
}

/// `rank_q(v)` for a vector over `F_{q^{mu}}`.
pub fn rank_weight_top(t: &FieldTower, v: &[TopElem]) -> usize {
    // The F_q-rank does not depend on the chosen F_q-basis, so the plain
    // γ-coordinates work as well as the dual coordinates.
    let rows: Vec<Vec<MidElem>> = (0..t.u()).map(|i| v.iter().map(|x| x.0[i]).collect()).collect();
    rank_weight_stacked(t.mid(), &rows)
}

/// `F_q`-rank of the stacked expansion of several `F_{q^m}` rows; this is
/// the rank of the column space shared by an interleaved error.
pub fn rank_weight_stacked(f: &MidField, rows: &[Vec<MidElem>]) -> usize {
    let Some(n) = rows.first().map(Vec::len) else {
        return 0;
    };
    if f.q() == 2 && rows.len() * f.degree() <= 128 {
        // Pack each column's um bits into one word and take the XOR rank.
        let m = f.degree();
        let words = (0..n).map(|j| {
            rows.iter()
                .enumerate()
                .fold(0u128, |acc, (i, r)| acc | (r[j].0 << (i * m)))
        });
        return xor_rank(words);
    }
    linalg::rank(&PrimeField::new(f.q()), &stack_base_expansions(f, rows, n))
}

fn xor_rank(words: impl Iterator<Item = u128>) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for mut w in words {
        for &b in &basis {
            w = w.min(w ^ b);
        }
        if w != 0 {
            basis.push(w);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// A vector over `F_{q^m}` with `rank_q = n`, by rejection sampling.
pub fn sample_full_rank_vector<R: Rng + ?Sized>(
    f: &MidField,
    n: usize,
    rng: &mut R,
) -> Result<Vec<MidElem>, InfeasibleRank> {
    if n > f.degree() {
        return Err(InfeasibleRank { rank: n, rows: f.degree(), cols: n });
    }
    loop {
        let v: Vec<MidElem> = (0..n).map(|_| f.random(rng)).collect();
        if rank_weight(f, &v) == n {
            return Ok(v);
        }
    }
}

/// A vector over `F_{q^{mu}}` with `rank_q = n`.
pub fn sample_full_rank_top<R: Rng + ?Sized>(
    t: &FieldTower,
    n: usize,
    rng: &mut R,
) -> Result<Vec<TopElem>, InfeasibleRank> {
    let dim = t.m() * t.u();
    if n > dim {
        return Err(InfeasibleRank { rank: n, rows: dim, cols: n });
    }
    loop {
        let v: Vec<TopElem> = (0..n).map(|_| t.top().random(rng)).collect();
        if rank_weight_top(t, &v) == n {
            return Ok(v);
        }
    }
}

/// A `rows × cols` matrix over `F_q` of rank `rows`.
pub fn sample_full_rank_matrix<R: Rng + ?Sized>(
    f: &PrimeField,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Result<Matrix<u8>, InfeasibleRank> {
    if rows > cols {
        return Err(InfeasibleRank { rank: rows, rows, cols });
    }
    loop {
        let a = Matrix::from_fn(rows, cols, |_, _| f.random(rng));
        if linalg::rank(f, &a) == rows {
            return Ok(a);
        }
    }
}

/// A uniformly random invertible `n × n` matrix over `F_q`.
pub fn sample_invertible<R: Rng + ?Sized>(f: &PrimeField, n: usize, rng: &mut R) -> Matrix<u8> {
    sample_full_rank_matrix(f, n, n, rng).expect("square shape is always feasible")
}

/// `v · P` for `v` over `F_{q^m}` and `P` over `F_q`.
pub fn mid_times_base(f: &MidField, v: &[MidElem], p: &Matrix<u8>) -> Vec<MidElem> {
    assert_eq!(v.len(), p.rows(), "length mismatch");
    (0..p.cols())
        .map(|j| {
            v.iter()
                .enumerate()
                .fold(f.zero(), |acc, (i, x)| f.add(&acc, &f.scale(*x, *p.get(i, j))))
        })
        .collect()
}

/// `v · P` for `v` over `F_{q^{mu}}` and `P` over `F_q`.
pub fn top_times_base(t: &FieldTower, v: &[TopElem], p: &Matrix<u8>) -> Vec<TopElem> {
    assert_eq!(v.len(), p.rows(), "length mismatch");
    let top = t.top();
    let mid = t.mid();
    (0..p.cols())
        .map(|j| {
            v.iter().enumerate().fold(top.zero(), |acc, (i, x)| {
                let c = *p.get(i, j);
                if c == 0 {
                    acc
                } else {
                    top.add(&acc, &TopElem(x.0.iter().map(|y| mid.scale(*y, c)).collect()))
                }
            })
        })
        .collect()
}

/// Lifts an `F_q` matrix into `F_{q^m}`.
pub fn embed_base_matrix(f: &MidField, a: &Matrix<u8>) -> Matrix<MidElem> {
    a.map(|&c| f.embed(c))
}
