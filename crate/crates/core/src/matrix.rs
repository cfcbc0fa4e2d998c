//! Sparse matrices over exact rationals: ranks, kernels, images, linear
//! solves and inner-product-orthogonal projections.
//!
//! Elimination uses one fixed pivot rule — first nonzero entry in column
//! order — so every basis and every report is byte-stable across runs.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, Rat};

/// Sparse rational matrix. No zero entries are stored and no duplicate
/// positions exist, so structural equality is semantic equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries.insert((i, i), Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zero(nrows, ncols);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Column of the first stored entry (row-major order), if any.
    pub fn first_nonzero_column(&self) -> Option<usize> {
        self.entries.keys().next().map(|&(_, c)| c)
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for (r, c, v) in self.entries() {
            t.entries.insert((c, r), v.clone());
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Self::zero(self.rows, other.cols);
        // group rhs by row for sparse traversal
        for (r, k, a) in self.entries() {
            for ((rk, c), b) in other.entries.range((k, 0)..(k, other.cols.max(1))) {
                debug_assert_eq!(*rk, k);
                let cur = out.get(r, *c) + a * b;
                out.set(r, *c, cur);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        let mut out = vec![Rat::zero(); self.rows];
        for (r, c, a) in self.entries() {
            if !v[c].is_zero() {
                out[r] += a * &v[c];
            }
        }
        out
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            let cur = out.get(r, c) + v;
            out.set(r, c, cur);
        }
        out
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            let cur = out.get(r, c) - v;
            out.set(r, c, cur);
        }
        out
    }

    pub fn neg(&self) -> RatMatrix {
        let mut out = Self::zero(self.rows, self.cols);
        for (r, c, v) in self.entries() {
            out.entries.insert((r, c), -v.clone());
        }
        out
    }

    /// Stack `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols);
        let mut out = Self::zero(self.rows + other.rows, self.cols);
        for (r, c, v) in self.entries() {
            out.entries.insert((r, c), v.clone());
        }
        for (r, c, v) in other.entries() {
            out.entries.insert((self.rows + r, c), v.clone());
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries()
            .all(|(r, c, v)| *v == self.get(c, r))
    }

    fn to_dense(&self) -> Vec<Vec<Rat>> {
        let mut rows = vec![vec![Rat::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            rows[r][c] = v.clone();
        }
        rows
    }

    /// Rank, kernel basis, image basis. The kernel basis is in reduced form
    /// (one vector per free column, unit entry at the free position); the
    /// image basis consists of the original columns at the pivot positions.
    pub fn rank_kernel_image(&self) -> (usize, Vec<Vec<Rat>>, Vec<Vec<Rat>>) {
        let (rref, pivots) = rref(self.to_dense(), self.cols);
        let rank = pivots.len();
        let mut kernel = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rref[row][free].clone();
            }
            kernel.push(v);
        }
        let image = pivots.iter().map(|&j| self.column(j)).collect();
        (rank, kernel, image)
    }

    pub fn rank(&self) -> usize {
        self.rank_kernel_image().0
    }

    /// Some solution of `self * x = b`, or `None` when `b` is outside the
    /// image. Free variables are set to zero; the result is re-checked by
    /// substitution before being returned.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        self.solve_many(&[b.to_vec()]).pop().unwrap()
    }

    /// Solve against several right-hand sides with a single elimination.
    pub fn solve_many(&self, rhs: &[Vec<Rat>]) -> Vec<Option<Vec<Rat>>> {
        for b in rhs {
            assert_eq!(b.len(), self.rows, "rhs length mismatch");
        }
        let width = self.cols + rhs.len();
        let mut aug = vec![vec![Rat::zero(); width]; self.rows];
        for (r, c, v) in self.entries() {
            aug[r][c] = v.clone();
        }
        for (k, b) in rhs.iter().enumerate() {
            for (r, v) in b.iter().enumerate() {
                aug[r][self.cols + k] = v.clone();
            }
        }
        let (rref_rows, pivots) = rref(aug, self.cols);
        let mut out = Vec::with_capacity(rhs.len());
        'next_rhs: for k in 0..rhs.len() {
            // inconsistent when a zero row of the coefficient block has a
            // nonzero entry in this rhs column
            for row in rref_rows.iter().skip(pivots.len()) {
                if !row[self.cols + k].is_zero() {
                    out.push(None);
                    continue 'next_rhs;
                }
            }
            let mut x = vec![Rat::zero(); self.cols];
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = rref_rows[row][self.cols + k].clone();
            }
            debug_assert_eq!(self.mul_vec(&x), rhs[k]);
            out.push(Some(x));
        }
        out
    }

    /// Inverse of a square invertible matrix; panics when singular.
    pub fn inverse(&self) -> RatMatrix {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let rhs: Vec<Vec<Rat>> = (0..self.rows)
            .map(|k| {
                let mut e = vec![Rat::zero(); self.rows];
                e[k] = Rat::one();
                e
            })
            .collect();
        let cols = self.solve_many(&rhs);
        let mut inv = Self::zero(self.rows, self.rows);
        for (j, col) in cols.into_iter().enumerate() {
            let col = col.expect("matrix is singular");
            for (i, v) in col.into_iter().enumerate() {
                inv.set(i, j, v);
            }
        }
        inv
    }

    /// Symmetric-decomposition positive-definiteness check: eliminates
    /// without row exchanges and demands every diagonal pivot be positive.
    #[allow(clippy::needless_range_loop)]
    pub fn check_positive_definite(&self, degree: usize) -> Result<()> {
        assert_eq!(self.rows, self.cols);
        if !self.is_symmetric() {
            return Err(Error::Shape(format!(
                "inner product in degree {degree} is not symmetric"
            )));
        }
        let mut a = self.to_dense();
        let n = self.rows;
        for k in 0..n {
            let pivot = a[k][k].clone();
            if pivot.is_zero() || pivot < Rat::zero() {
                return Err(Error::InnerNotPositiveDefinite {
                    degree,
                    index: k,
                    pivot: fmt_rat(&pivot),
                });
            }
            for i in (k + 1)..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let factor = &a[i][k] / &pivot;
                for j in k..n {
                    let delta = &factor * &a[k][j];
                    a[i][j] -= delta;
                }
            }
        }
        Ok(())
    }
}

/// Row-reduce `rows`, treating only the first `pivot_cols` columns as
/// eligible pivot columns (the rest ride along, e.g. augmented right-hand
/// sides). Returns the reduced rows and the pivot column indices.
#[allow(clippy::needless_range_loop)]
fn rref(mut rows: Vec<Vec<Rat>>, pivot_cols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let nrows = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut current = 0usize;
    for col in 0..pivot_cols.min(width) {
        // fixed rule: first row (in order) with a nonzero entry in this column
        let Some(pr) = (current..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(current, pr);
        let inv = rows[current][col].clone();
        for j in col..width {
            let v = std::mem::replace(&mut rows[current][j], Rat::zero());
            rows[current][j] = v / &inv;
        }
        for r in 0..nrows {
            if r == current || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for j in col..width {
                let delta = &factor * &rows[current][j];
                rows[r][j] -= delta;
            }
        }
        pivots.push(col);
        current += 1;
        if current == nrows {
            break;
        }
    }
    (rows, pivots)
}

// -- vector helpers --------------------------------------------------------

pub fn vec_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Rat], s: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * s).collect()
}

pub fn vec_is_zero(a: &[Rat]) -> bool {
    a.iter().all(Rat::is_zero)
}

/// `u^T S v` for a symmetric Gram matrix `S`.
pub fn inner_dot(inner: &RatMatrix, u: &[Rat], v: &[Rat]) -> Rat {
    let sv = inner.mul_vec(v);
    u.iter().zip(sv).map(|(a, b)| a * b).sum()
}

/// Matrix of the inner-product-orthogonal projection onto the span of
/// `basis` (given as a list of column vectors of length `dim`).
pub fn projector_matrix(basis: &[Vec<Rat>], inner: &RatMatrix, dim: usize) -> RatMatrix {
    if basis.is_empty() {
        return RatMatrix::zero(dim, dim);
    }
    let g = basis.len();
    let mut b = RatMatrix::zero(dim, g);
    for (j, col) in basis.iter().enumerate() {
        assert_eq!(col.len(), dim);
        for (i, v) in col.iter().enumerate() {
            b.set(i, j, v.clone());
        }
    }
    let bt_s = b.transpose().mul(inner); // g x dim
    let gram = bt_s.mul(&b); // g x g, invertible for independent basis + SPD inner
    let coeffs = gram.inverse().mul(&bt_s); // g x dim
    b.mul(&coeffs)
}

/// Orthogonal projection of `v` onto the span of `subspace_basis` with
/// respect to the symmetric positive definite Gram matrix `inner`.
pub fn orthogonal_project(
    subspace_basis: &[Vec<Rat>],
    inner: &RatMatrix,
    v: &[Rat],
) -> Result<Vec<Rat>> {
    inner.check_positive_definite(0)?;
    if subspace_basis.is_empty() {
        return Ok(vec![Rat::zero(); v.len()]);
    }
    let p = projector_matrix(subspace_basis, inner, v.len());
    Ok(p.mul_vec(v))
}
