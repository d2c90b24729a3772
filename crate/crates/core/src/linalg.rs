//! Exact dense and sparse elimination, generic over the scalar.

use std::ops::{Index, IndexMut};

use crate::scalar::{ExactRing, Field};

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: ExactRing> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U: ExactRing>(&self, f: impl Fn(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &DenseMatrix<T>) -> DenseMatrix<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let v = out[(i, j)].clone() + a.clone() * b.clone();
                        out[(i, j)] = v;
                    }
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Fraction-free Gauss-Jordan elimination on `[M | I]`.
///
/// Returns `(N, d)` with `d != 0` and `M^{-1} = N / d`, or `None` when `M`
/// is singular. Every intermediate division is exact, and at the end all
/// pivots equal `d = +-det(M)`.
pub fn fraction_free_inverse<T: ExactRing>(m: &DenseMatrix<T>) -> Option<(DenseMatrix<T>, T)> {
    assert_eq!(m.rows, m.cols, "square matrix required");
    let n = m.rows;
    let mut aug = DenseMatrix::<T>::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = T::one();
    }
    let mut prev = T::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !aug[(i, k)].is_zero())?;
        aug.swap_rows(p, k);
        let pivot = aug[(k, k)].clone();
        let pivot_row: Vec<T> = aug.row(k).to_vec();
        for i in 0..n {
            if i == k {
                continue;
            }
            let factor = aug[(i, k)].clone();
            let row = &mut aug.data[i * 2 * n..(i + 1) * 2 * n];
            for (j, x) in row.iter_mut().enumerate() {
                if j == k {
                    continue;
                }
                let a = pivot.clone() * x.clone();
                *x = if factor.is_zero() {
                    a / prev.clone()
                } else {
                    (a - factor.clone() * pivot_row[j].clone()) / prev.clone()
                };
            }
            row[k] = T::zero();
        }
        prev = pivot;
    }
    let inv = DenseMatrix::from_fn(n, n, |i, j| aug[(i, n + j)].clone());
    Some((inv, prev))
}

/// Textbook Gauss-Jordan inverse over a field.
pub fn gauss_jordan_inverse<F: Field>(m: &DenseMatrix<F>) -> Option<DenseMatrix<F>> {
    assert_eq!(m.rows, m.cols, "square matrix required");
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = DenseMatrix::<F>::identity(n);
    for k in 0..n {
        let p = (k..n).find(|&i| !a[(i, k)].is_zero())?;
        a.swap_rows(p, k);
        inv.swap_rows(p, k);
        let s = a[(k, k)].inv();
        for j in 0..n {
            a[(k, j)] = a[(k, j)].clone() * s.clone();
            inv[(k, j)] = inv[(k, j)].clone() * s.clone();
        }
        for i in 0..n {
            if i == k || a[(i, k)].is_zero() {
                continue;
            }
            let f = a[(i, k)].clone();
            for j in 0..n {
                a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(k, j)].clone();
                inv[(i, j)] = inv[(i, j)].clone() - f.clone() * inv[(k, j)].clone();
            }
        }
    }
    Some(inv)
}

/// Outcome of solving a square system.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<F> {
    Unique(Vec<F>),
    /// Some equation reduced to `0 = c` with `c != 0`.
    Inconsistent,
    /// Consistent but rank-deficient.
    Underdetermined,
}

impl<F> Solution<F> {
    pub fn unique(self) -> Option<Vec<F>> {
        match self {
            Solution::Unique(z) => Some(z),
            _ => None,
        }
    }
}

/// Solves `A z = b` for a square system whose rows are given sparsely as
/// `(column, coefficient)` lists.
///
/// Rows are reduced one at a time against the pivots found so far, using a
/// dense scratch row, and stored sparsely in echelon form; back substitution
/// then runs over the stored pivot rows.
/// A normalized pivot row: entries right of the pivot column, and its rhs.
type PivotRow<F> = (Vec<(usize, F)>, F);

pub fn solve_sparse<F: Field>(n: usize, rows: &[Vec<(usize, F)>], rhs: &[F]) -> Solution<F> {
    assert_eq!(rows.len(), rhs.len(), "one right-hand side per row");
    // pivot[c] = (entries with column > c, rhs) of the row normalized so col c is 1
    let mut pivots: Vec<Option<PivotRow<F>>> = vec![None; n];
    let mut scratch: Vec<F> = vec![F::zero(); n];
    let mut rank = 0;
    let mut inconsistent = false;

    for (row, b) in rows.iter().zip(rhs) {
        let mut lo = n;
        for (c, v) in row {
            scratch[*c] = scratch[*c].clone() + v.clone();
            lo = lo.min(*c);
        }
        let mut b = b.clone();
        let mut lead = None;
        for c in lo..n {
            if scratch[c].is_zero() {
                continue;
            }
            match &pivots[c] {
                Some((entries, pb)) => {
                    let f = std::mem::replace(&mut scratch[c], F::zero());
                    for (j, v) in entries {
                        scratch[*j] = scratch[*j].clone() - f.clone() * v.clone();
                    }
                    b = b - f * pb.clone();
                }
                None => {
                    lead = Some(c);
                    break;
                }
            }
        }
        match lead {
            Some(c) => {
                let s = scratch[c].inv();
                scratch[c] = F::zero();
                let mut entries = Vec::new();
                for (j, x) in scratch.iter_mut().enumerate().skip(c + 1) {
                    if !x.is_zero() {
                        entries.push((j, std::mem::replace(x, F::zero()) * s.clone()));
                    }
                }
                pivots[c] = Some((entries, b * s));
                rank += 1;
            }
            None => {
                if !b.is_zero() {
                    inconsistent = true;
                }
            }
        }
    }

    if inconsistent {
        return Solution::Inconsistent;
    }
    if rank < n {
        return Solution::Underdetermined;
    }
    let mut z = vec![F::zero(); n];
    for c in (0..n).rev() {
        let (entries, b) = pivots[c].as_ref().expect("full rank");
        let mut v = b.clone();
        for (j, a) in entries {
            v = v - a.clone() * z[*j].clone();
        }
        z[c] = v;
    }
    Solution::Unique(z)
}
