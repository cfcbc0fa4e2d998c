//! Finite-dimensional graded complexes with labeled bases.
//!
//! A [`GradedComplex`] stands in for the cochain complex of invariant forms:
//! per-degree rational vector spaces with a degree +1 differential and a
//! symmetric positive definite inner product (identity unless stated).

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedComplex {
    /// Basis labels per degree; index = degree. Empty degrees are allowed.
    labels: Vec<Vec<String>>,
    /// `d[m]: C^m -> C^{m+1}`; the top differential has zero rows.
    differential: Vec<RatMatrix>,
    /// Per-degree Gram matrices.
    inner: Vec<RatMatrix>,
}

impl GradedComplex {
    /// Build a complex from labels, differentials and optional inner
    /// products (identity when `None`). Checks shapes, label uniqueness and
    /// symmetry; the mathematical conditions (d^2 = 0, positive
    /// definiteness) are checked by datum validation and the Hodge package.
    pub fn new(
        labels: Vec<Vec<String>>,
        differential: Vec<RatMatrix>,
        inner: Option<Vec<RatMatrix>>,
    ) -> Result<Self> {
        let n = labels.len();
        if differential.len() != n {
            return Err(Error::Shape(format!(
                "expected {n} differential blocks, got {}",
                differential.len()
            )));
        }
        for (m, ls) in labels.iter().enumerate() {
            for (i, l) in ls.iter().enumerate() {
                if ls[..i].contains(l) {
                    return Err(Error::Parse(format!(
                        "duplicate basis label {l:?} in degree {m}"
                    )));
                }
            }
        }
        for m in 0..n {
            let next_dim = if m + 1 < n { labels[m + 1].len() } else { 0 };
            let d = &differential[m];
            if d.rows() != next_dim || d.cols() != labels[m].len() {
                return Err(Error::Shape(format!(
                    "differential at degree {m} has shape {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    next_dim,
                    labels[m].len()
                )));
            }
        }
        let inner = match inner {
            Some(gs) => {
                if gs.len() != n {
                    return Err(Error::Shape(format!(
                        "expected {n} inner-product blocks, got {}",
                        gs.len()
                    )));
                }
                for (m, g) in gs.iter().enumerate() {
                    let dim = labels[m].len();
                    if g.rows() != dim || g.cols() != dim {
                        return Err(Error::Shape(format!(
                            "inner product at degree {m} has shape {}x{}, expected {dim}x{dim}",
                            g.rows(),
                            g.cols()
                        )));
                    }
                    if !g.is_symmetric() {
                        return Err(Error::Shape(format!(
                            "inner product at degree {m} is not symmetric"
                        )));
                    }
                }
                gs
            }
            None => labels.iter().map(|ls| RatMatrix::identity(ls.len())).collect(),
        };
        Ok(GradedComplex {
            labels,
            differential,
            inner,
        })
    }

    /// Number of stored degrees (max degree + 1); zero for the empty complex.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self, m: usize) -> usize {
        self.labels.get(m).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    pub fn labels(&self, m: usize) -> &[String] {
        self.labels.get(m).map_or(&[], Vec::as_slice)
    }

    pub fn label(&self, m: usize, i: usize) -> &str {
        &self.labels[m][i]
    }

    /// Locate a label anywhere in the complex.
    pub fn find_label(&self, label: &str) -> Option<(usize, usize)> {
        for (m, ls) in self.labels.iter().enumerate() {
            if let Some(i) = ls.iter().position(|l| l == label) {
                return Some((m, i));
            }
        }
        None
    }

    /// `d_m` for any `m`; degrees beyond the top give an empty matrix.
    pub fn d(&self, m: usize) -> RatMatrix {
        self.differential
            .get(m)
            .cloned()
            .unwrap_or_else(|| RatMatrix::zero(0, self.dim(m)))
    }

    pub fn inner(&self, m: usize) -> RatMatrix {
        self.inner
            .get(m)
            .cloned()
            .unwrap_or_else(|| RatMatrix::identity(self.dim(m)))
    }

    pub fn inner_blocks(&self) -> &[RatMatrix] {
        &self.inner
    }

    pub fn differential_blocks(&self) -> &[RatMatrix] {
        &self.differential
    }

    /// True when every inner product is the identity.
    pub fn identity_inner(&self) -> bool {
        self.inner
            .iter()
            .enumerate()
            .all(|(m, g)| *g == RatMatrix::identity(self.dim(m)))
    }

    /// First basis element on which `d_{m+1} . d_m` is nonzero, if any.
    pub fn d_squared_witness(&self) -> Option<(usize, String)> {
        for m in 0..self.len() {
            let dd = self.d(m + 1).mul(&self.d(m));
            if let Some(c) = dd.first_nonzero_column() {
                return Some((m, self.label(m, c).to_string()));
            }
        }
        None
    }
}
