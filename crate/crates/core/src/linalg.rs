//! Dense matrices over any [`Field`] and exact Gaussian elimination.

use crate::field::Field;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    /// Builds a matrix from rows of equal length (`cols` is used when empty).
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn map<T: Clone>(&self, f: impl Fn(&E) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
}

pub fn mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "inner dimension mismatch");
    Matrix::from_fn(a.rows, b.cols, |i, j| {
        (0..a.cols).fold(f.zero(), |acc, l| f.add(&acc, &f.mul(a.get(i, l), b.get(l, j))))
    })
}

/// Row vector times matrix.
pub fn vec_mul<F: Field>(f: &F, v: &[F::Elem], a: &Matrix<F::Elem>) -> Vec<F::Elem> {
    assert_eq!(v.len(), a.rows, "length mismatch");
    (0..a.cols)
        .map(|j| {
            v.iter()
                .enumerate()
                .fold(f.zero(), |acc, (i, x)| f.add(&acc, &f.mul(x, a.get(i, j))))
        })
        .collect()
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref<F: Field>(f: &F, a: &mut Matrix<F::Elem>) -> Vec<usize> {
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(a.get(i, c))) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a.get(r, c)).expect("pivot is nonzero");
        for j in c..cols {
            let v = f.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || f.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in c..cols {
                let v = f.sub(a.get(i, j), &f.mul(&factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, a: &Matrix<F::Elem>) -> usize {
    let mut m = a.clone();
    rref(f, &mut m).len()
}

/// Rank and a basis of the right kernel `{v : A v = 0}`.
///
/// Basis vector `i` has a one in the `i`-th free column and zeros in every
/// other free column, so the basis is itself in reduced echelon form.
pub fn rank_and_kernel<F: Field>(f: &F, a: &Matrix<F::Elem>) -> (usize, Vec<Vec<F::Elem>>) {
    let mut m = a.clone();
    let pivots = rref(f, &mut m);
    let kernel = kernel_from_rref(f, &m, &pivots);
    (pivots.len(), kernel)
}

fn kernel_from_rref<F: Field>(
    f: &F,
    m: &Matrix<F::Elem>,
    pivots: &[usize],
) -> Vec<Vec<F::Elem>> {
    let mut is_pivot = vec![false; m.cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![f.zero(); m.cols];
            v[free] = f.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(m.get(r, free));
            }
            v
        })
        .collect()
}

/// Basis of the left kernel `{v : v A = 0}`.
pub fn left_kernel<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    rank_and_kernel(f, &a.transpose()).1
}

pub fn inverse<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = a.rows;
    if n != a.cols {
        return None;
    }
    let id = identity(f, n);
    let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            a.get(i, j).clone()
        } else {
            id.get(i, j - n).clone()
        }
    });
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
}

/// Solves `x · A = b` for every right-hand side `b`. Free variables are set
/// to zero; returns `None` if any system is inconsistent.
pub fn solve_left<F: Field>(
    f: &F,
    a: &Matrix<F::Elem>,
    rhs: &[Vec<F::Elem>],
) -> Option<Vec<Vec<F::Elem>>> {
    let (k, n) = (a.rows, a.cols);
    let nb = rhs.len();
    // Columns of A^T | B^T.
    let mut aug = Matrix::from_fn(n, k + nb, |i, j| {
        if j < k {
            a.get(j, i).clone()
        } else {
            rhs[j - k][i].clone()
        }
    });
    let pivots = rref(f, &mut aug);
    if pivots.iter().any(|&p| p >= k) {
        return None;
    }
    Some(
        (0..nb)
            .map(|b| {
                let mut x = vec![f.zero(); k];
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = aug.get(r, k + b).clone();
                }
                x
            })
            .collect(),
    )
}

/// Incrementally maintained reduced row echelon basis of a row space.
#[derive(Debug, Clone)]
pub struct EchelonBasis<E> {
    cols: usize,
    rows: Vec<Vec<E>>,
    pivots: Vec<usize>,
}

impl<E: Clone + PartialEq + Eq + std::fmt::Debug> EchelonBasis<E> {
    pub fn new(cols: usize) -> Self {
        EchelonBasis { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds a row; returns whether it enlarged the row space.
    pub fn insert<F: Field<Elem = E>>(&mut self, f: &F, mut row: Vec<E>) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&row[p]) {
                continue;
            }
            let factor = row[p].clone();
            for (x, y) in row.iter_mut().zip(r) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        let Some(c) = row.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&row[c]).expect("nonzero");
        for x in row.iter_mut().skip(c) {
            *x = f.mul(x, &inv);
        }
        for r in self.rows.iter_mut() {
            if f.is_zero(&r[c]) {
                continue;
            }
            let factor = r[c].clone();
            for (x, y) in r.iter_mut().zip(&row).skip(c) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        self.rows.push(row);
        self.pivots.push(c);
        true
    }

    /// Right kernel of the spanned row space, same shape as [`rank_and_kernel`].
    pub fn kernel<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (r, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = f.neg(&r[free]);
                }
                v
            })
            .collect()
    }
}
