//! The Hodge package on a finite-dimensional graded complex.
//!
//! From a complex with inner products this module produces the
//! codifferential `d*` (the adjoint of `d`), the Laplacian `Δ = d*d + dd*`,
//! the harmonic projector `H`, Green's operator `G` and the three-way
//! orthogonal decomposition `C = H ⊕ B ⊕ E` into harmonic forms, boundaries
//! `B = im(d)` and coexact forms `E = im(d*)`.
//!
//! `G` is found without any eigenvalue computation: for each basis vector we
//! solve the stacked exact system `Δx = (I - H)e, Hx = 0`, which pins the
//! unique preimage orthogonal to the kernel of `Δ`.

use num_traits::Zero;

use crate::complex::GradedComplex;
use crate::error::{Error, Result};
use crate::matrix::{projector_matrix, RatMatrix};
use crate::rational::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeData {
    /// Per-degree basis of the harmonic subspace `ker d ∩ ker d*`.
    pub harmonic_basis: Vec<Vec<Vec<Rat>>>,
    /// Per-degree basis of `B = im(d)`.
    pub boundary_basis: Vec<Vec<Vec<Rat>>>,
    /// Per-degree basis of `E = im(d*)`.
    pub coexact_basis: Vec<Vec<Vec<Rat>>>,
    /// `d*[m]: C^m -> C^{m-1}` (zero rows at degree 0).
    pub codifferential: Vec<RatMatrix>,
    pub laplacian: Vec<RatMatrix>,
    pub harmonic_projector: Vec<RatMatrix>,
    pub greens: Vec<RatMatrix>,
}

/// Adjoint of the differential with respect to the inner products:
/// `d*_{m+1} = inner_m^{-1} . d_m^T . inner_{m+1}`.
pub fn codifferential(c: &GradedComplex) -> Result<Vec<RatMatrix>> {
    let n = c.len();
    for m in 0..n {
        c.inner(m)
            .check_positive_definite(m)
            .map_err(|e| promote_degree(e, m))?;
    }
    let mut out = Vec::with_capacity(n);
    for m in 0..n {
        if m == 0 {
            out.push(RatMatrix::zero(0, c.dim(0)));
            continue;
        }
        let prev_inv = c.inner(m - 1).inverse();
        let dstar = prev_inv.mul(&c.d(m - 1).transpose()).mul(&c.inner(m));
        out.push(dstar);
    }
    Ok(out)
}

fn promote_degree(e: Error, m: usize) -> Error {
    match e {
        Error::InnerNotPositiveDefinite { index, pivot, .. } => {
            Error::InnerNotPositiveDefinite {
                degree: m,
                index,
                pivot,
            }
        }
        other => other,
    }
}

/// Assemble the full Hodge package for a complex.
pub fn hodge_data(c: &GradedComplex) -> Result<HodgeData> {
    let n = c.len();
    let codiff = codifferential(c)?;
    let dstar = |m: usize| -> RatMatrix {
        codiff
            .get(m)
            .cloned()
            .unwrap_or_else(|| RatMatrix::zero(if m >= 1 { c.dim(m - 1) } else { 0 }, c.dim(m)))
    };

    let mut harmonic_basis = Vec::with_capacity(n);
    let mut boundary_basis = Vec::with_capacity(n);
    let mut coexact_basis = Vec::with_capacity(n);
    let mut laplacian = Vec::with_capacity(n);
    let mut harmonic_projector = Vec::with_capacity(n);
    let mut greens = Vec::with_capacity(n);

    for m in 0..n {
        let dim = c.dim(m);
        let d_m = c.d(m);
        let ds_m = dstar(m);
        let mut lap = dstar(m + 1).mul(&d_m);
        if m >= 1 {
            lap = lap.add(&c.d(m - 1).mul(&ds_m));
        }
        // harmonics: ker d ∩ ker d*
        let stacked = d_m.vstack(&ds_m);
        let (_, kernel, _) = stacked.rank_kernel_image();
        let hproj = projector_matrix(&kernel, &c.inner(m), dim);

        // Green's operator: unique x with Δx = (I - H)e_k and Hx = 0
        let id = RatMatrix::identity(dim);
        let target = id.sub(&hproj);
        let system = lap.vstack(&hproj);
        let rhs: Vec<Vec<Rat>> = (0..dim)
            .map(|k| {
                let mut v = target.column(k);
                v.extend(vec![Rat::zero(); dim]);
                v
            })
            .collect();
        let sols = system.solve_many(&rhs);
        let mut g = RatMatrix::zero(dim, dim);
        for (k, sol) in sols.into_iter().enumerate() {
            let x = sol.ok_or_else(|| {
                Error::Shape(format!(
                    "Green system unsolvable in degree {m} (is d^2 = 0?)"
                ))
            })?;
            for (i, v) in x.into_iter().enumerate() {
                g.set(i, k, v);
            }
        }

        let bnd = if m >= 1 {
            c.d(m - 1).rank_kernel_image().2
        } else {
            Vec::new()
        };
        let coe = dstar(m + 1).rank_kernel_image().2;

        harmonic_basis.push(kernel);
        boundary_basis.push(bnd);
        coexact_basis.push(coe);
        laplacian.push(lap);
        harmonic_projector.push(hproj);
        greens.push(g);
    }

    Ok(HodgeData {
        harmonic_basis,
        boundary_basis,
        coexact_basis,
        codifferential: codiff,
        laplacian,
        harmonic_projector,
        greens,
    })
}

impl HodgeData {
    pub fn dstar(&self, m: usize) -> Option<&RatMatrix> {
        self.codifferential.get(m)
    }

    pub fn projector(&self, m: usize) -> Option<&RatMatrix> {
        self.harmonic_projector.get(m)
    }

    pub fn greens_at(&self, m: usize) -> Option<&RatMatrix> {
        self.greens.get(m)
    }

    pub fn harmonic_dim(&self, m: usize) -> usize {
        self.harmonic_basis.get(m).map_or(0, Vec::len)
    }

    /// Coordinates of `v` in the harmonic basis of degree `m`, or `None`
    /// when `v` lies outside the harmonic subspace.
    pub fn harmonic_coords(&self, m: usize, v: &[Rat]) -> Option<Vec<Rat>> {
        let basis = self.harmonic_basis.get(m)?;
        if basis.is_empty() {
            return if v.iter().all(Rat::is_zero) {
                Some(Vec::new())
            } else {
                None
            };
        }
        let dim = basis[0].len();
        let mut b = RatMatrix::zero(dim, basis.len());
        for (j, col) in basis.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                b.set(i, j, x.clone());
            }
        }
        b.solve(v)
    }
}

/// The three-way decomposition of `v ∈ C^m`: harmonic part `H(v)`, exact
/// part `d d* G(v)` and coexact part `d* d G(v)`.
pub fn decompose(
    c: &GradedComplex,
    h: &HodgeData,
    m: usize,
    v: &[Rat],
) -> Result<(Vec<Rat>, Vec<Rat>, Vec<Rat>)> {
    if m >= c.len() {
        return Err(Error::DegreeOutOfRange {
            degree: m,
            max: c.len().saturating_sub(1),
        });
    }
    if v.len() != c.dim(m) {
        return Err(Error::Shape(format!(
            "vector length {} does not match dim C^{m} = {}",
            v.len(),
            c.dim(m)
        )));
    }
    let harmonic = h.harmonic_projector[m].mul_vec(v);
    let g = h.greens[m].mul_vec(v);
    let exact = if m >= 1 {
        c.d(m - 1).mul_vec(&h.codifferential[m].mul_vec(&g))
    } else {
        vec![Rat::zero(); v.len()]
    };
    let zero_dstar = RatMatrix::zero(c.dim(m), c.dim(m + 1));
    let dstar_up = h.codifferential.get(m + 1).unwrap_or(&zero_dstar);
    let coexact = dstar_up.mul_vec(&c.d(m).mul_vec(&g));
    Ok((harmonic, exact, coexact))
}

/// Exhaustive per-degree identity checks on a Hodge package. Returns
/// `(name, pass, witness)` triples; used by reports and the test suites.
pub fn identity_checks(c: &GradedComplex, h: &HodgeData) -> Vec<(String, bool, String)> {
    let mut out = Vec::new();
    let mut push = |name: String, ok: bool, witness: String| out.push((name, ok, witness));
    for m in 0..c.len() {
        let dim = c.dim(m);
        let id = RatMatrix::identity(dim);
        let hm = &h.harmonic_projector[m];
        let gm = &h.greens[m];
        let lap = &h.laplacian[m];
        let dm = c.d(m);
        let dsm = &h.codifferential[m];

        // H + d d* G + d* d G = I
        let mut total = hm.clone();
        if m >= 1 {
            total = total.add(&c.d(m - 1).mul(&dsm.mul(gm)));
        }
        if m + 1 < c.len() {
            total = total.add(&h.codifferential[m + 1].mul(&dm.mul(gm)));
        }
        push(
            format!("hodge_decomposition[{m}]"),
            total == id,
            String::new(),
        );

        push(format!("projector_idempotent[{m}]"), hm.mul(hm) == *hm, String::new());
        push(
            format!("greens_vanishes_on_harmonics[{m}]"),
            gm.mul(hm).is_zero() && hm.mul(gm).is_zero(),
            String::new(),
        );
        push(
            format!("laplacian_greens[{m}]"),
            lap.mul(gm) == id.sub(hm) && gm.mul(lap) == id.sub(hm),
            String::new(),
        );
        if m + 1 < c.len() {
            push(
                format!("d_commutes_with_greens[{m}]"),
                dm.mul(gm) == h.greens[m + 1].mul(&dm),
                String::new(),
            );
        }
        if m >= 1 {
            push(
                format!("dstar_commutes_with_greens[{m}]"),
                dsm.mul(gm) == h.greens[m - 1].mul(dsm),
                String::new(),
            );
        }
        // adjointness <d x, y> = <x, d* y>
        if m + 1 < c.len() {
            let lhs = dm.transpose().mul(&c.inner(m + 1));
            let rhs = c.inner(m).mul(&h.codifferential[m + 1]);
            push(format!("adjointness[{m}]"), lhs == rhs, String::new());
        }
        // pairwise orthogonality of the three summand bases
        let gram = c.inner(m);
        let mut ortho = true;
        let families = [
            &h.harmonic_basis[m],
            &h.boundary_basis[m],
            &h.coexact_basis[m],
        ];
        for a in 0..3 {
            for b in (a + 1)..3 {
                for u in families[a] {
                    for w in families[b] {
                        if !crate::matrix::inner_dot(&gram, u, w).is_zero() {
                            ortho = false;
                        }
                    }
                }
            }
        }
        push(format!("summands_orthogonal[{m}]"), ortho, String::new());
        // dimensions add up
        push(
            format!("summand_dimensions[{m}]"),
            h.harmonic_basis[m].len() + h.boundary_basis[m].len() + h.coexact_basis[m].len()
                == dim,
            String::new(),
        );
        // harmonics compute cohomology
        let ker = dim - dm.rank();
        let im_prev = if m >= 1 { c.d(m - 1).rank() } else { 0 };
        push(
            format!("harmonics_equal_betti[{m}]"),
            h.harmonic_basis[m].len() == ker - im_prev,
            String::new(),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{vec_is_zero, vec_sub};
    use crate::rational::{rat, ratio};

    fn labels(groups: &[&[&str]]) -> Vec<Vec<String>> {
        groups.iter()
            .map(|ls| ls.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    /// Circle: C^0 = span{1}, C^1 = span{dθ}, d = 0.
    fn circle() -> GradedComplex {
        GradedComplex::new(
            labels(&[&["one"], &["dtheta"]]),
            vec![RatMatrix::zero(1, 1), RatMatrix::zero(0, 1)],
            None,
        )
        .unwrap()
    }

    /// Interval: C^0 = Q^2, C^1 = Q, d = (-1 1).
    fn interval() -> GradedComplex {
        let mut d0 = RatMatrix::zero(1, 2);
        d0.set(0, 0, rat(-1));
        d0.set(0, 1, rat(1));
        GradedComplex::new(
            labels(&[&["p", "q"], &["e"]]),
            vec![d0, RatMatrix::zero(0, 1)],
            None,
        )
        .unwrap()
    }

    #[test]
    fn codifferential_zero_differential() {
        let c = circle();
        let ds = codifferential(&c).unwrap();
        assert!(ds[1].is_zero());
    }

    #[test]
    fn codifferential_identity_inner_is_transpose() {
        let mut d0 = RatMatrix::zero(1, 1);
        d0.set(0, 0, rat(1));
        let c = GradedComplex::new(
            labels(&[&["x"], &["y"]]),
            vec![d0, RatMatrix::zero(0, 1)],
            None,
        )
        .unwrap();
        let ds = codifferential(&c).unwrap();
        assert_eq!(ds[1].get(0, 0), rat(1));
    }

    #[test]
    fn codifferential_weighted_inner() {
        // inner_0 = (1), inner_1 = (2): d* = 1 * 1 * 2 = (2), and
        // adjointness <d x, y>_1 = <x, d* y>_0 holds on the basis.
        let mut d0 = RatMatrix::zero(1, 1);
        d0.set(0, 0, rat(1));
        let mut g1 = RatMatrix::zero(1, 1);
        g1.set(0, 0, rat(2));
        let c = GradedComplex::new(
            labels(&[&["x"], &["y"]]),
            vec![d0, RatMatrix::zero(0, 1)],
            Some(vec![RatMatrix::identity(1), g1]),
        )
        .unwrap();
        let ds = codifferential(&c).unwrap();
        assert_eq!(ds[1].get(0, 0), rat(2));
        let lhs = crate::matrix::inner_dot(&c.inner(1), &c.d(0).mul_vec(&[rat(1)]), &[rat(1)]);
        let rhs = crate::matrix::inner_dot(&c.inner(0), &[rat(1)], &ds[1].mul_vec(&[rat(1)]));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn circle_hodge_package() {
        let c = circle();
        let h = hodge_data(&c).unwrap();
        for m in 0..2 {
            assert!(h.laplacian[m].is_zero());
            assert_eq!(h.harmonic_projector[m], RatMatrix::identity(1));
            assert!(h.greens[m].is_zero());
            assert_eq!(h.harmonic_basis[m].len(), 1);
        }
    }

    #[test]
    fn interval_hodge_package() {
        let c = interval();
        let h = hodge_data(&c).unwrap();
        // harmonic degree 0 is the diagonal
        assert_eq!(h.harmonic_basis[0].len(), 1);
        let hb = &h.harmonic_basis[0][0];
        assert_eq!(hb[0], hb[1]);
        assert_eq!(h.harmonic_basis[1].len(), 0);
        assert_eq!(h.laplacian[1].get(0, 0), rat(2));
        assert_eq!(h.greens[1].get(0, 0), ratio(1, 2));
        for (name, ok, _) in identity_checks(&c, &h) {
            assert!(ok, "failed: {name}");
        }
    }

    #[test]
    fn decompose_splits_orthogonally() {
        let c = interval();
        let h = hodge_data(&c).unwrap();
        let v = vec![rat(3), rat(5)];
        let (harm, exact, coex) = decompose(&c, &h, 0, &v).unwrap();
        let sum = crate::matrix::vec_add(&crate::matrix::vec_add(&harm, &exact), &coex);
        assert_eq!(sum, v);
        // harmonic input returns in the harmonic slot only
        let (h2, e2, c2) = decompose(&c, &h, 0, &harm).unwrap();
        assert_eq!(h2, harm);
        assert!(vec_is_zero(&e2) && vec_is_zero(&c2));
        // boundary input returns in the exact slot only
        let b = c.d(0).mul_vec(&[rat(1), rat(0)]);
        let (h3, e3, c3) = decompose(&c, &h, 1, &b).unwrap();
        assert!(vec_is_zero(&h3) && vec_is_zero(&c3));
        assert_eq!(e3, b);
        // residual after removing harmonic part is orthogonal to harmonics
        let res = vec_sub(&v, &harm);
        assert!(crate::matrix::inner_dot(&c.inner(0), &res, &h.harmonic_basis[0][0]).is_zero());
    }

    #[test]
    fn decompose_degree_out_of_range() {
        let c = circle();
        let h = hodge_data(&c).unwrap();
        assert!(matches!(
            decompose(&c, &h, 7, &[]),
            Err(Error::DegreeOutOfRange { degree: 7, .. })
        ));
    }
}
