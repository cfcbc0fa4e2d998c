//! Deterministic generators for derived test data: basis-changed
//! (conjugated), tensored and direct-sum data built from the shipped
//! fixtures.
//!
//! Valid data satisfying the Cartan relations cannot be sampled entry by
//! entry, so the property suites build variants compositionally instead:
//! invertible basis changes conjugate every operator at once (and move the
//! inner products by congruence, exercising non-identity Gram matrices),
//! while tensor products and direct sums grow genuinely new complexes.
//! Every constructor here re-validates, so a sign error in these builders
//! cannot slip through silently.

use num_traits::{One, Zero};

use crate::complex::GradedComplex;
use crate::equivariant::{Contraction, EquivariantDatum, ProductTable};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::Rat;

/// Small deterministic PRNG (splitmix64), so variant suites are
/// reproducible without pulling in an RNG dependency.
#[derive(Debug, Clone)]
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n.max(1) as u64) as usize
    }

    /// Small nonzero integer in `-2..=2`.
    pub fn shear_coeff(&mut self) -> i64 {
        [(-2i64), -1, 1, 2][self.below(4)]
    }

    /// Small rational with denominator 1..=3, numerator -3..=3.
    pub fn small_rat(&mut self) -> Rat {
        let num = self.below(7) as i64 - 3;
        let den = self.below(3) as i64 + 1;
        Rat::new(num.into(), den.into())
    }
}

/// Random unimodular matrix together with its exact inverse, built from
/// row shears so the determinant is one.
pub fn random_unimodular(dim: usize, shears: usize, rng: &mut SplitMix64) -> (RatMatrix, RatMatrix) {
    let mut t = RatMatrix::identity(dim);
    let mut t_inv = RatMatrix::identity(dim);
    if dim < 2 {
        return (t, t_inv);
    }
    let mut ops = Vec::new();
    for _ in 0..shears {
        let i = rng.below(dim);
        let mut j = rng.below(dim);
        if i == j {
            j = (j + 1) % dim;
        }
        let c = Rat::from_integer(rng.shear_coeff().into());
        ops.push((i, j, c));
    }
    for (i, j, c) in &ops {
        // row_i += c * row_j
        let mut shear = RatMatrix::identity(dim);
        shear.set(*i, *j, c.clone());
        t = shear.mul(&t);
    }
    // T = S_k .. S_1, so T^{-1} = S_1^{-1} .. S_k^{-1}; right-multiplying
    // in the original order builds exactly that product.
    for (i, j, c) in &ops {
        let mut shear = RatMatrix::identity(dim);
        shear.set(*i, *j, -c.clone());
        t_inv = t_inv.mul(&shear);
    }
    debug_assert_eq!(t.mul(&t_inv), RatMatrix::identity(dim));
    (t, t_inv)
}

/// Conjugate every structure of the datum by a random basis change per
/// degree: operators transform by `T A T^{-1}`, inner products by
/// congruence, the product table by its tensor rule.
#[allow(clippy::needless_range_loop)]
pub fn conjugate(datum: &EquivariantDatum, rng: &mut SplitMix64) -> Result<EquivariantDatum> {
    let c = &datum.complex;
    let n = c.len();
    let mut t = Vec::with_capacity(n);
    let mut t_inv = Vec::with_capacity(n);
    for m in 0..n {
        let (a, a_inv) = random_unimodular(c.dim(m), 2 * c.dim(m), rng);
        t.push(a);
        t_inv.push(a_inv);
    }
    let block = |m: usize| -> &RatMatrix { &t[m] };

    let mut differential = Vec::with_capacity(n);
    for m in 0..n {
        if m + 1 < n {
            differential.push(block(m + 1).mul(&c.d(m)).mul(&t_inv[m]));
        } else {
            differential.push(RatMatrix::zero(0, c.dim(m)));
        }
    }
    let inner: Vec<RatMatrix> = (0..n)
        .map(|m| t_inv[m].transpose().mul(&c.inner(m)).mul(&t_inv[m]))
        .collect();
    let labels: Vec<Vec<String>> = (0..n).map(|m| c.labels(m).to_vec()).collect();
    let complex = GradedComplex::new(labels, differential, Some(inner))?;

    let contractions = datum
        .contractions
        .iter()
        .map(|con| {
            let ops = (0..n)
                .map(|m| match (m + 1).checked_sub(con.t_degree) {
                    Some(target) if c.dim(target) > 0 => {
                        block(target).mul(&con.ops[m]).mul(&t_inv[m])
                    }
                    _ => con.ops[m].clone(),
                })
                .collect();
            Contraction {
                t_degree: con.t_degree,
                ops,
            }
        })
        .collect();

    let product = datum.product.as_ref().map(|table| {
        let mut out = ProductTable::new();
        for p in 0..n {
            for i in 0..c.dim(p) {
                for q in 0..n {
                    for j in 0..c.dim(q) {
                        if p + q >= n || c.dim(p + q) == 0 {
                            continue;
                        }
                        // columns of T^{-1} are the new basis vectors in old
                        // coordinates
                        let vi = t_inv[p].column(i);
                        let vj = t_inv[q].column(j);
                        let w = table.mul_vectors(p, &vi, q, &vj, c.dim(p + q));
                        let new = block(p + q).mul_vec(&w);
                        for (k, coeff) in new.into_iter().enumerate() {
                            if !coeff.is_zero() {
                                out.insert(p, i, q, j, k, coeff);
                            }
                        }
                    }
                }
            }
        }
        out
    });

    EquivariantDatum::new(complex, contractions, product)
}

/// How contractions combine under a tensor product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorMode {
    /// Same generator list on both sides: `i_j ⊗ 1 + (-1)^deg 1 ⊗ i_j`.
    Diagonal,
    /// Independent actions: the generator lists concatenate.
    Independent,
}

struct TensorLayout {
    len: usize,
    /// `offsets[m]` maps each `(p, q)` block with `p + q = m` to its start.
    offsets: Vec<Vec<(usize, usize, usize)>>,
    dims: Vec<usize>,
}

fn tensor_layout(a: &GradedComplex, b: &GradedComplex) -> TensorLayout {
    let len = match (a.len(), b.len()) {
        (0, _) | (_, 0) => 0,
        (x, y) => x + y - 1,
    };
    let mut offsets = Vec::with_capacity(len);
    let mut dims = Vec::with_capacity(len);
    for m in 0..len {
        let mut blocks = Vec::new();
        let mut total = 0usize;
        for p in 0..=m.min(a.len().saturating_sub(1)) {
            let q = m - p;
            if q >= b.len() {
                continue;
            }
            let size = a.dim(p) * b.dim(q);
            if size > 0 {
                blocks.push((p, q, total));
            }
            total += size;
        }
        offsets.push(blocks);
        dims.push(total);
    }
    TensorLayout { len, offsets, dims }
}

impl TensorLayout {
    fn block_start(&self, m: usize, p: usize) -> Option<usize> {
        self.offsets
            .get(m)?
            .iter()
            .find(|(bp, _, _)| *bp == p)
            .map(|(_, _, off)| *off)
    }
}

/// Tensor product of two data. Operators of odd degree extend with the
/// Koszul sign on the second factor; inner products multiply blockwise.
/// Products are dropped (the variants only feed the operator suites).
pub fn tensor(
    a: &EquivariantDatum,
    b: &EquivariantDatum,
    mode: TensorMode,
) -> Result<EquivariantDatum> {
    if mode == TensorMode::Diagonal && a.t_degrees() != b.t_degrees() {
        return Err(Error::Shape(
            "diagonal tensor needs matching generator degrees".into(),
        ));
    }
    let ca = &a.complex;
    let cb = &b.complex;
    let layout = tensor_layout(ca, cb);

    let mut labels: Vec<Vec<String>> = Vec::with_capacity(layout.len);
    for m in 0..layout.len {
        let mut ls = vec![String::new(); layout.dims[m]];
        for &(p, q, off) in &layout.offsets[m] {
            for i in 0..ca.dim(p) {
                for j in 0..cb.dim(q) {
                    ls[off + i * cb.dim(q) + j] =
                        format!("({})@({})", ca.label(p, i), cb.label(q, j));
                }
            }
        }
        labels.push(ls);
    }

    // generic builder: apply an odd operator f_a on the first factor and
    // f_b (with Koszul sign) on the second; each is a per-degree family
    // with a fixed degree shift.
    let build = |fa: &dyn Fn(usize) -> Option<RatMatrix>,
                 fa_shift: isize,
                 fb: &dyn Fn(usize) -> Option<RatMatrix>,
                 fb_shift: isize|
     -> Vec<RatMatrix> {
        let mut result = Vec::with_capacity(layout.len);
        for m in 0..layout.len {
            let target_m = m as isize + fa_shift; // same total shift for both parts
            let target_dim = if target_m < 0 {
                0
            } else {
                layout.dims.get(target_m as usize).copied().unwrap_or(0)
            };
            let mut mat = RatMatrix::zero(target_dim, layout.dims[m]);
            if target_dim > 0 {
                for &(p, q, off) in &layout.offsets[m] {
                    // first-factor part: block (p, q) -> (p + fa_shift, q)
                    let tp = p as isize + fa_shift;
                    if tp >= 0 {
                        if let Some(op) = fa(p) {
                            if let Some(toff) = layout.block_start(target_m as usize, tp as usize)
                            {
                                for (r, ccol, v) in op.entries() {
                                    for j in 0..cb.dim(q) {
                                        let col = off + ccol * cb.dim(q) + j;
                                        let row = toff + r * cb.dim(q) + j;
                                        let cur = mat.get(row, col) + v;
                                        mat.set(row, col, cur);
                                    }
                                }
                            }
                        }
                    }
                    // second-factor part with sign (-1)^p: (p, q) -> (p, q + fb_shift)
                    let tq = q as isize + fb_shift;
                    if tq >= 0 {
                        if let Some(op) = fb(q) {
                            if let Some(toff) = layout.block_start(target_m as usize, p) {
                                let sign = if p % 2 == 1 { -Rat::one() } else { Rat::one() };
                                let tq_dim = cb.dim(tq as usize);
                                for (r, ccol, v) in op.entries() {
                                    for i in 0..ca.dim(p) {
                                        let col = off + i * cb.dim(q) + ccol;
                                        let row = toff + i * tq_dim + r;
                                        let cur = mat.get(row, col) + v * &sign;
                                        mat.set(row, col, cur);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            result.push(mat);
        }
        result
    };

    let d_a = |p: usize| -> Option<RatMatrix> {
        (p < ca.len()).then(|| ca.d(p))
    };
    let d_b = |q: usize| -> Option<RatMatrix> {
        (q < cb.len()).then(|| cb.d(q))
    };
    let differential = build(&d_a, 1, &d_b, 1);

    // blockwise Kronecker inner products
    let mut inner = Vec::with_capacity(layout.len);
    for m in 0..layout.len {
        let mut g = RatMatrix::zero(layout.dims[m], layout.dims[m]);
        for &(p, q, off) in &layout.offsets[m] {
            let ga = ca.inner(p);
            let gb = cb.inner(q);
            for (r1, c1, v1) in ga.entries() {
                for (r2, c2, v2) in gb.entries() {
                    g.set(
                        off + r1 * cb.dim(q) + r2,
                        off + c1 * cb.dim(q) + c2,
                        v1 * v2,
                    );
                }
            }
        }
        inner.push(g);
    }

    let complex = GradedComplex::new(labels, differential, Some(inner))?;

    let zero_a = |_p: usize| -> Option<RatMatrix> { None };
    let zero_b = |_q: usize| -> Option<RatMatrix> { None };
    let mut contractions = Vec::new();
    match mode {
        TensorMode::Diagonal => {
            for (ja, con_a) in a.contractions.iter().enumerate() {
                let con_b = &b.contractions[ja];
                let shift = 1 - con_a.t_degree as isize;
                let ia = |p: usize| -> Option<RatMatrix> { con_a.ops.get(p).cloned() };
                let ib = |q: usize| -> Option<RatMatrix> { con_b.ops.get(q).cloned() };
                contractions.push(Contraction {
                    t_degree: con_a.t_degree,
                    ops: build(&ia, shift, &ib, shift),
                });
            }
        }
        TensorMode::Independent => {
            for con_a in &a.contractions {
                let shift = 1 - con_a.t_degree as isize;
                let ia = |p: usize| -> Option<RatMatrix> { con_a.ops.get(p).cloned() };
                contractions.push(Contraction {
                    t_degree: con_a.t_degree,
                    ops: build(&ia, shift, &zero_b, shift),
                });
            }
            for con_b in &b.contractions {
                let shift = 1 - con_b.t_degree as isize;
                let ib = |q: usize| -> Option<RatMatrix> { con_b.ops.get(q).cloned() };
                contractions.push(Contraction {
                    t_degree: con_b.t_degree,
                    ops: build(&zero_a, shift, &ib, shift),
                });
            }
        }
    }

    EquivariantDatum::new(complex, contractions, None)
}

/// Direct sum of two data with identical generator degree lists.
pub fn direct_sum(a: &EquivariantDatum, b: &EquivariantDatum) -> Result<EquivariantDatum> {
    if a.t_degrees() != b.t_degrees() {
        return Err(Error::Shape(
            "direct sum needs matching generator degrees".into(),
        ));
    }
    let ca = &a.complex;
    let cb = &b.complex;
    let len = ca.len().max(cb.len());
    let mut labels = Vec::with_capacity(len);
    for m in 0..len {
        let mut ls: Vec<String> = ca
            .labels(m)
            .iter()
            .map(|l| format!("a.{l}"))
            .collect();
        ls.extend(cb.labels(m).iter().map(|l| format!("b.{l}")));
        labels.push(ls);
    }
    let block_sum = |ma: &RatMatrix, mb: &RatMatrix| -> RatMatrix {
        let mut out = RatMatrix::zero(ma.rows() + mb.rows(), ma.cols() + mb.cols());
        for (r, c, v) in ma.entries() {
            out.set(r, c, v.clone());
        }
        for (r, c, v) in mb.entries() {
            out.set(ma.rows() + r, ma.cols() + c, v.clone());
        }
        out
    };
    let differential: Vec<RatMatrix> = (0..len)
        .map(|m| block_sum(&shaped(ca, m), &shaped(cb, m)))
        .collect();
    let inner: Vec<RatMatrix> = (0..len)
        .map(|m| block_sum(&inner_shaped(ca, m), &inner_shaped(cb, m)))
        .collect();
    let complex = GradedComplex::new(labels, differential, Some(inner))?;
    let contractions = a
        .contractions
        .iter()
        .zip(&b.contractions)
        .map(|(con_a, con_b)| {
            let ops = (0..len)
                .map(|m| {
                    let oa = contraction_shaped(ca, con_a, m);
                    let ob = contraction_shaped(cb, con_b, m);
                    block_sum(&oa, &ob)
                })
                .collect();
            Contraction {
                t_degree: con_a.t_degree,
                ops,
            }
        })
        .collect();
    EquivariantDatum::new(complex, contractions, None)
}

fn shaped(c: &GradedComplex, m: usize) -> RatMatrix {
    if m < c.len() {
        c.d(m)
    } else {
        RatMatrix::zero(c.dim(m + 1), 0)
    }
}

fn inner_shaped(c: &GradedComplex, m: usize) -> RatMatrix {
    if m < c.len() {
        c.inner(m)
    } else {
        RatMatrix::zero(0, 0)
    }
}

fn contraction_shaped(c: &GradedComplex, con: &Contraction, m: usize) -> RatMatrix {
    if m < con.ops.len() {
        con.ops[m].clone()
    } else {
        let target_dim = (m + 1).checked_sub(con.t_degree).map_or(0, |t| c.dim(t));
        RatMatrix::zero(target_dim, 0)
    }
}

/// The standard derived-data suite used by the verification tests: at
/// least twenty conjugated, tensored and summed variants of the shipped
/// fixtures, deterministic in the seed.
pub fn standard_variants(seed: u64) -> Vec<(String, EquivariantDatum)> {
    let mut rng = SplitMix64(seed);
    let mut out: Vec<(String, EquivariantDatum)> = Vec::new();
    let base = crate::fixtures::all_valid();
    let get = |name: &str| -> EquivariantDatum {
        base.iter()
            .find(|(n, _)| *n == name)
            .map(|(_, d)| d.clone())
            .expect("fixture exists")
    };

    let conj_counts = [
        ("poly-rot-2", 4),
        ("rot-2-weighted", 3),
        ("free-rotation", 2),
        ("two-torus-rotation", 3),
        ("su2-free", 2),
        ("trivial-rot-2", 2),
    ];
    for (name, count) in conj_counts {
        let datum = get(name);
        for k in 0..count {
            let v = conjugate(&datum, &mut rng).expect("conjugation stays valid");
            out.push((format!("conj-{name}-{k}"), v));
        }
    }

    let pairs = [
        ("poly-rot-2", "free-rotation", TensorMode::Diagonal),
        ("free-rotation", "free-rotation", TensorMode::Diagonal),
        ("two-torus-rotation", "free-rotation", TensorMode::Diagonal),
        ("free-rotation", "free-rotation", TensorMode::Independent),
        ("poly-rot-2", "free-rotation", TensorMode::Independent),
        ("free-rotation", "su2-free", TensorMode::Independent),
    ];
    for (la, lb, mode) in pairs {
        let v = tensor(&get(la), &get(lb), mode).expect("tensor stays valid");
        let tag = match mode {
            TensorMode::Diagonal => "diag",
            TensorMode::Independent => "indep",
        };
        out.push((format!("tensor-{tag}-{la}-{lb}"), v));
    }

    let sums = [
        ("poly-rot-2", "free-rotation"),
        ("su2-free", "su2-free"),
    ];
    for (la, lb) in sums {
        let v = direct_sum(&get(la), &get(lb)).expect("direct sum stays valid");
        out.push((format!("sum-{la}-{lb}"), v));
    }

    // conjugated composites
    let t = tensor(&get("poly-rot-2"), &get("free-rotation"), TensorMode::Diagonal).unwrap();
    out.push((
        "conj-tensor-poly-rot-2-free-rotation".into(),
        conjugate(&t, &mut rng).expect("conjugation stays valid"),
    ));
    let s = direct_sum(&get("poly-rot-2"), &get("free-rotation")).unwrap();
    out.push((
        "conj-sum-poly-rot-2-free-rotation".into(),
        conjugate(&s, &mut rng).expect("conjugation stays valid"),
    ));

    out
}
