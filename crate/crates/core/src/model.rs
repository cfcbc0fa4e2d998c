//! The minimal model on `R ⊗ H` with the transferred differential, its
//! cohomology, canonical extensions, and the twisted product.
//!
//! The transferred differential is computed two independent ways on every
//! generator — as the harmonic projection of `ψ^{-1} d_G ψ` and as
//! `φ d_G φ^{-1}` — and the two results are required to agree exactly
//! before anything else runs. Cohomology of the minimal model is always
//! cross-checkable against the brute-force computation on the full
//! truncated module.

use num_traits::Zero;

use crate::equivariant::{ModuleElement, Monomial, TruncatedModule};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::Rat;

/// The free module `R ⊗ H` with the transferred differential stored on the
/// weight-zero generators (it extends R-linearly).
#[derive(Debug, Clone)]
pub struct MinimalModel {
    pub cap: usize,
    /// `d(1 ⊗ h)` per degree per harmonic-basis index, as elements of the
    /// truncated module with harmonic form parts.
    pub dhb: Vec<Vec<ModuleElement>>,
    /// True when the transferred differential vanishes on every generator
    /// at this cap (free equivariant cohomology; extensions exist).
    pub dhb_is_zero: bool,
}

/// Cohomology dimensions per total degree `0..=cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyTable {
    pub dims: Vec<usize>,
    pub cap: usize,
}

impl CohomologyTable {
    pub fn dim(&self, m: usize) -> usize {
        self.dims.get(m).copied().unwrap_or(0)
    }
}

/// `ψ^{-1} d_G ψ`, the conjugated differential on the truncated module.
pub fn dbar(module: &TruncatedModule, x: &ModuleElement) -> ModuleElement {
    module.psi_inv(&module.apply_dg(&module.psi(x)))
}

/// Transferred differential on one harmonic vector, computed both as
/// `(I ⊗ H) ψ^{-1} d_G ψ` and as `φ d_G φ^{-1}` and compared exactly.
pub fn d_hb(module: &TruncatedModule, degree: usize, harmonic: &[Rat]) -> Result<ModuleElement> {
    let mut x = ModuleElement::zero();
    x.add_term(
        Monomial::one(module.datum().rank()),
        degree,
        harmonic.to_vec(),
    );
    let via_projection = module.harmonic_proj(&dbar(module, &x));
    let via_conjugation = module.phi(&module.apply_dg(&module.phi_inv(&x)));
    if via_projection != via_conjugation {
        return Err(Error::TheoremMismatch {
            witness: format!("degree {degree}: {}", module.render_element(&x)),
        });
    }
    Ok(via_projection)
}

/// Assemble the minimal model: transferred differential on every harmonic
/// generator, with the dual-computation self-check built in.
pub fn minimal_model(module: &TruncatedModule) -> Result<MinimalModel> {
    let mut dhb = Vec::new();
    let mut all_zero = true;
    for deg in 0..module.datum().complex.len() {
        let mut per_degree = Vec::new();
        for h in &module.hodge().harmonic_basis[deg] {
            let value = d_hb(module, deg, h)?;
            all_zero &= value.is_zero();
            per_degree.push(value);
        }
        dhb.push(per_degree);
    }
    Ok(MinimalModel {
        cap: module.cap(),
        dhb,
        dhb_is_zero: all_zero,
    })
}

/// Multiply an element by a fixed monomial, truncating at the cap.
pub fn monomial_scale(
    module: &TruncatedModule,
    mon: &Monomial,
    x: &ModuleElement,
) -> ModuleElement {
    let degs = module.datum().t_degrees();
    let mut out = ModuleElement::zero();
    out.dropped = x.dropped;
    for (m, deg, v) in x.terms() {
        let nm = mon.mul(m);
        if nm.weight(&degs) > module.cap() {
            out.dropped += 1;
            continue;
        }
        out.add_term(nm, deg, v.clone());
    }
    out
}

/// Apply the transferred differential R-linearly to an element of `R ⊗ H`
/// (every form part must lie in the harmonic subspace).
pub fn dhb_apply(
    module: &TruncatedModule,
    mm: &MinimalModel,
    x: &ModuleElement,
) -> ModuleElement {
    let mut out = ModuleElement::zero();
    for (mon, deg, v) in x.terms() {
        let coords = module
            .hodge()
            .harmonic_coords(deg, v)
            .expect("element must have harmonic form parts");
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = monomial_scale(module, mon, &mm.dhb[deg][i]).scale(c);
            out = out.add(&scaled);
        }
    }
    out
}

/// Generators of `R ⊗ H` of one total degree: `(monomial, degree, index)`
/// with index into the harmonic basis.
pub fn minimal_slice(module: &TruncatedModule, total: usize) -> Vec<(Monomial, usize, usize)> {
    let degs = module.datum().t_degrees();
    let mut out = Vec::new();
    for mon in module.monomials() {
        let w = mon.weight(&degs);
        if w > total {
            continue;
        }
        let deg = total - w;
        for idx in 0..module.hodge().harmonic_dim(deg) {
            out.push((mon.clone(), deg, idx));
        }
    }
    out
}

fn minimal_generator(
    module: &TruncatedModule,
    mon: &Monomial,
    deg: usize,
    idx: usize,
) -> ModuleElement {
    let mut e = ModuleElement::zero();
    e.add_term(
        mon.clone(),
        deg,
        module.hodge().harmonic_basis[deg][idx].clone(),
    );
    e
}

/// Matrix of the transferred differential from total degree `m` into the
/// ambient slice basis of degree `m + 1`.
fn dhb_matrix(module: &TruncatedModule, mm: &MinimalModel, m: usize) -> RatMatrix {
    let gens = minimal_slice(module, m);
    let target = module.slice_basis(m + 1);
    let mut out = RatMatrix::zero(target.len(), gens.len());
    for (col, (mon, deg, idx)) in gens.iter().enumerate() {
        let image = monomial_scale(module, mon, &mm.dhb[*deg][*idx]);
        if image.is_zero() {
            continue;
        }
        for (row, v) in module.coords_of(&image, m + 1).into_iter().enumerate() {
            out.set(row, col, v);
        }
    }
    out
}

/// Cohomology of the minimal model per total degree up to the cap.
pub fn cohomology_minimal(module: &TruncatedModule, mm: &MinimalModel) -> CohomologyTable {
    let cap = module.cap();
    let mut dims = Vec::with_capacity(cap + 1);
    let mut prev_rank = 0usize;
    for m in 0..=cap {
        let gens = minimal_slice(module, m).len();
        let rank = dhb_matrix(module, mm, m).rank();
        dims.push(gens - rank - prev_rank);
        prev_rank = rank;
    }
    CohomologyTable { dims, cap }
}

/// Matrix of `d_G` from the slice of total degree `m` to the slice of
/// total degree `m + 1`.
pub fn dg_matrix(module: &TruncatedModule, m: usize) -> RatMatrix {
    let source = module.slice_basis(m);
    let target = module.slice_basis(m + 1);
    let mut out = RatMatrix::zero(target.len(), source.len());
    for (col, (mon, deg, idx)) in source.iter().enumerate() {
        let e = module.basis_element(mon, *deg, *idx);
        let image = module.apply_dg(&e);
        if image.is_zero() {
            continue;
        }
        for (row, v) in module.coords_of(&image, m + 1).into_iter().enumerate() {
            out.set(row, col, v);
        }
    }
    out
}

/// Brute-force cohomology of the full truncated module under `d_G` — the
/// independent oracle the minimal model is checked against.
pub fn cohomology_cartan(module: &TruncatedModule) -> CohomologyTable {
    let cap = module.cap();
    let mut dims = Vec::with_capacity(cap + 1);
    let mut prev_rank = 0usize;
    for m in 0..=cap {
        let n = module.slice_basis(m).len();
        let rank = dg_matrix(module, m).rank();
        dims.push(n - rank - prev_rank);
        prev_rank = rank;
    }
    CohomologyTable { dims, cap }
}

/// Representative cycles for the truncated Cartan cohomology of one total
/// degree, chosen by the deterministic pivot rule: kernel vectors that
/// extend the image to a basis of the cycle space.
pub fn cartan_representatives(module: &TruncatedModule, m: usize) -> Vec<ModuleElement> {
    let d_here = dg_matrix(module, m);
    let (_, kernel, _) = d_here.rank_kernel_image();
    let image = if m >= 1 {
        dg_matrix(module, m - 1).rank_kernel_image().2
    } else {
        Vec::new()
    };
    let dim = module.slice_basis(m).len();
    let mut chosen = Vec::new();
    let mut span = image;
    let mut current_rank = matrix_from_cols(&span, dim).rank();
    for k in kernel {
        let mut candidate = span.clone();
        candidate.push(k.clone());
        let r = matrix_from_cols(&candidate, dim).rank();
        if r > current_rank {
            current_rank = r;
            span = candidate;
            chosen.push(module.element_from_coords(m, &k));
        }
    }
    chosen
}

fn matrix_from_cols(cols: &[Vec<Rat>], dim: usize) -> RatMatrix {
    let mut m = RatMatrix::zero(dim, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            m.set(i, j, v.clone());
        }
    }
    m
}

// ---------------------------------------------------------------------------
// identity reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct IdentityOutcome {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

fn outcome(name: &str, witness: Option<String>) -> IdentityOutcome {
    IdentityOutcome {
        name: name.to_string(),
        passed: witness.is_none(),
        witness,
    }
}

/// The three homotopy identities tying the minimal model to the truncated
/// Cartan model, checked on every basis element inside the window:
/// (a) `(I⊗H) ψ^{-1} φ^{-1}` splits the inclusion of `R ⊗ H`;
/// (b) `(I⊗H) ψ^{-1}` is a chain map onto the minimal model;
/// (c) `φ^{-1}` includes the minimal model as a subcomplex of cycles.
pub fn homotopy_identities(
    module: &TruncatedModule,
    mm: &MinimalModel,
) -> Vec<IdentityOutcome> {
    let window = module.window();
    let mut out = Vec::new();

    let mut split_witness = None;
    let mut include_witness = None;
    let degs = module.datum().t_degrees();
    for m in 0..=window {
        for (mon, deg, idx) in minimal_slice(module, m) {
            let x = minimal_generator(module, &mon, deg, idx);
            let split = module.harmonic_proj(&module.psi_inv(&module.phi_inv(&x)));
            if split != x && split_witness.is_none() {
                split_witness = Some(module.render_element(&x));
            }
            let lhs = module.apply_dg(&module.phi_inv(&x));
            let rhs = module.phi_inv(&dhb_apply(module, mm, &x));
            if lhs != rhs && include_witness.is_none() {
                include_witness = Some(module.render_element(&x));
            }
        }
    }
    out.push(outcome("harmonic_projection_splits_inclusion", split_witness));
    out.push(outcome("extension_is_chain_map", include_witness));

    let mut proj_witness = None;
    for (mon, deg, idx) in module.basis() {
        if mon.weight(&degs) + deg > window {
            continue;
        }
        let e = module.basis_element(&mon, deg, idx);
        let lhs = module.harmonic_proj(&module.psi_inv(&module.apply_dg(&e)));
        let rhs = dhb_apply(module, mm, &module.harmonic_proj(&module.psi_inv(&e)));
        if lhs != rhs {
            proj_witness = Some(module.describe_basis(&mon, deg, idx));
            break;
        }
    }
    out.push(outcome("projection_is_chain_map", proj_witness));
    out
}

/// The conjugated differential splits by Hodge type: it vanishes on
/// boundary parts, equals `d` on coexact parts, and equals both
/// `-ψ^{-1}∂` and `-∂φ^{-1}` on harmonic parts.
pub fn dbar_trichotomy(module: &TruncatedModule) -> Vec<IdentityOutcome> {
    let window = module.window();
    let degs = module.datum().t_degrees();
    let hodge = module.hodge();
    let mut boundary_witness = None;
    let mut coexact_witness = None;
    let mut harmonic_witness = None;
    for mon in module.monomials() {
        let w = mon.weight(&degs);
        for deg in 0..module.datum().complex.len() {
            if w + deg > window {
                continue;
            }
            for b in &hodge.boundary_basis[deg] {
                let mut x = ModuleElement::zero();
                x.add_term(mon.clone(), deg, b.clone());
                if !dbar(module, &x).is_zero() && boundary_witness.is_none() {
                    boundary_witness = Some(module.render_element(&x));
                }
            }
            for e in &hodge.coexact_basis[deg] {
                let mut x = ModuleElement::zero();
                x.add_term(mon.clone(), deg, e.clone());
                if dbar(module, &x) != module.apply_d(&x) && coexact_witness.is_none() {
                    coexact_witness = Some(module.render_element(&x));
                }
            }
            for h in &hodge.harmonic_basis[deg] {
                let mut x = ModuleElement::zero();
                x.add_term(mon.clone(), deg, h.clone());
                let db = dbar(module, &x);
                let via_psi = module.psi_inv(&module.apply_del(&x)).neg();
                let via_phi = module.apply_del(&module.phi_inv(&x)).neg();
                if (db != via_psi || db != via_phi) && harmonic_witness.is_none() {
                    harmonic_witness = Some(module.render_element(&x));
                }
            }
        }
    }
    vec![
        outcome("dbar_vanishes_on_boundaries", boundary_witness),
        outcome("dbar_equals_d_on_coexact", coexact_witness),
        outcome("dbar_contracts_harmonics", harmonic_witness),
    ]
}

/// On coexact parts, `ψ ∘ d` agrees with `d_G`.
pub fn coexact_square(module: &TruncatedModule) -> IdentityOutcome {
    let window = module.window();
    let degs = module.datum().t_degrees();
    let mut witness = None;
    'outer: for mon in module.monomials() {
        let w = mon.weight(&degs);
        for deg in 0..module.datum().complex.len() {
            if w + deg > window {
                continue;
            }
            for e in &module.hodge().coexact_basis[deg] {
                let mut x = ModuleElement::zero();
                x.add_term(mon.clone(), deg, e.clone());
                if module.psi(&module.apply_d(&x)) != module.apply_dg(&x) {
                    witness = Some(module.render_element(&x));
                    break 'outer;
                }
            }
        }
    }
    outcome("psi_d_equals_dg_on_coexact", witness)
}

/// `ψ^{-1} φ^{-1} = I + (P+Q) + (P+Q)^2 + ...` on the truncated module.
pub fn neumann_expansion_identity(module: &TruncatedModule) -> IdentityOutcome {
    let window = module.window();
    let degs = module.datum().t_degrees();
    let mut witness = None;
    for (mon, deg, idx) in module.basis() {
        if mon.weight(&degs) + deg > window {
            continue;
        }
        let e = module.basis_element(&mon, deg, idx);
        let lhs = module.psi_inv(&module.phi_inv(&e));
        let mut rhs = e.clone();
        let mut term = module.op_p(&e).add(&module.op_q(&e));
        while !term.is_zero() {
            rhs = rhs.add(&term);
            term = module.op_p(&term).add(&module.op_q(&term));
        }
        if lhs != rhs {
            witness = Some(module.describe_basis(&mon, deg, idx));
            break;
        }
    }
    outcome("neumann_product_expansion", witness)
}

/// `Q ∂ = ∂ P` on the truncated module.
pub fn q_del_equals_del_p(module: &TruncatedModule) -> IdentityOutcome {
    let window = module.window();
    let degs = module.datum().t_degrees();
    let mut witness = None;
    for (mon, deg, idx) in module.basis() {
        if mon.weight(&degs) + deg > window {
            continue;
        }
        let e = module.basis_element(&mon, deg, idx);
        if module.op_q(&module.apply_del(&e)) != module.apply_del(&module.op_p(&e)) {
            witness = Some(module.describe_basis(&mon, deg, idx));
            break;
        }
    }
    outcome("q_del_equals_del_p", witness)
}

/// For an arbitrary element `x` (harmonic or not),
/// `φ d_G φ^{-1}(x) = (I⊗H) d_G φ^{-1}(x) + d x`.
pub fn transfer_on_general_element(
    module: &TruncatedModule,
    x: &ModuleElement,
) -> Result<()> {
    let ext = module.phi_inv(x);
    let lhs = module.phi(&module.apply_dg(&ext));
    let rhs = module
        .harmonic_proj(&module.apply_dg(&ext))
        .add(&module.apply_d(x));
    if lhs == rhs {
        Ok(())
    } else {
        Err(Error::IdentityFailed {
            identity: "transfer_on_general_element".into(),
            witness: module.render_element(x),
        })
    }
}

// ---------------------------------------------------------------------------
// extensions and products
// ---------------------------------------------------------------------------

/// Canonical closed extension `φ^{-1}(h)` of a harmonic vector, available
/// when the transferred differential vanishes. Verifies `d_G`-closedness
/// and that the weight-zero part is `h` itself.
pub fn canonical_extension(
    module: &TruncatedModule,
    mm: &MinimalModel,
    degree: usize,
    harmonic: &[Rat],
) -> Result<ModuleElement> {
    if !mm.dhb_is_zero {
        return Err(Error::NotCEF { cap: module.cap() });
    }
    let mut x = ModuleElement::zero();
    x.add_term(
        Monomial::one(module.datum().rank()),
        degree,
        harmonic.to_vec(),
    );
    let ext = module.phi_inv(&x);
    if !module.apply_dg(&ext).is_zero() {
        return Err(Error::IdentityFailed {
            identity: "extension_is_closed".into(),
            witness: module.render_element(&x),
        });
    }
    let w0 = ext.weight_zero_part(
        module.datum().rank(),
        degree,
        module.datum().complex.dim(degree),
    );
    if w0 != harmonic {
        return Err(Error::IdentityFailed {
            identity: "extension_starts_at_input".into(),
            witness: module.render_element(&x),
        });
    }
    Ok(ext)
}

fn require_product(module: &TruncatedModule, mm: &MinimalModel) -> Result<()> {
    if !module.datum().is_abelian() {
        return Err(Error::NotAbelian);
    }
    if !module.product_enabled() {
        return Err(Error::ProductUnavailable {
            reason: module
                .validation()
                .product_reason
                .clone()
                .unwrap_or_else(|| "product checks failed".into()),
        });
    }
    if !mm.dhb_is_zero {
        return Err(Error::NotCEF { cap: module.cap() });
    }
    Ok(())
}

/// Product of two harmonic vectors in the minimal model: extend both
/// canonically, multiply in the truncated Cartan model, then project back
/// with `(I⊗H) ψ^{-1}`. Also checks that the weight-zero part equals the
/// harmonic projection of the plain form product.
pub fn twisted_product(
    module: &TruncatedModule,
    mm: &MinimalModel,
    left: (usize, &[Rat]),
    right: (usize, &[Rat]),
) -> Result<ModuleElement> {
    require_product(module, mm)?;
    let a_ext = canonical_extension(module, mm, left.0, left.1)?;
    let b_ext = canonical_extension(module, mm, right.0, right.1)?;
    let prod = module.element_product(&a_ext, &b_ext)?;
    let result = module.harmonic_proj(&module.psi_inv(&prod));

    // weight-zero part must be the harmonic projection of the form product
    let mut a0 = ModuleElement::zero();
    a0.add_term(Monomial::one(module.datum().rank()), left.0, left.1.to_vec());
    let mut b0 = ModuleElement::zero();
    b0.add_term(Monomial::one(module.datum().rank()), right.0, right.1.to_vec());
    let plain = module.harmonic_proj(&module.element_product(&a0, &b0)?);
    let out_deg = left.0 + right.0;
    let dim = module.datum().complex.dim(out_deg);
    let got = result.weight_zero_part(module.datum().rank(), out_deg, dim);
    let expect = plain.weight_zero_part(module.datum().rank(), out_deg, dim);
    if got != expect {
        return Err(Error::IdentityFailed {
            identity: "twisted_product_weight_zero".into(),
            witness: format!(
                "{} * {}",
                module.render_element(&a0),
                module.render_element(&b0)
            ),
        });
    }
    Ok(result)
}

/// Exact witness `γ` with `d_G γ = φ^{-1}(a ∧̃ b) - â b̂`, found by solving
/// the linear system on the truncated module and verified by substitution.
pub fn gamma_witness(
    module: &TruncatedModule,
    mm: &MinimalModel,
    left: (usize, &[Rat]),
    right: (usize, &[Rat]),
) -> Result<ModuleElement> {
    require_product(module, mm)?;
    let tw = twisted_product(module, mm, left, right)?;
    let lifted = module.phi_inv(&tw);
    let a_ext = canonical_extension(module, mm, left.0, left.1)?;
    let b_ext = canonical_extension(module, mm, right.0, right.1)?;
    let target = lifted.sub(&module.element_product(&a_ext, &b_ext)?);
    if target.is_zero() {
        return Ok(ModuleElement::zero());
    }
    let total = left.0 + right.0;
    if total == 0 {
        return Err(Error::NoWitnessInWindow);
    }
    let system = dg_matrix(module, total - 1);
    let rhs = module.coords_of(&target, total);
    let gamma_coords = system.solve(&rhs).ok_or(Error::NoWitnessInWindow)?;
    let gamma = module.element_from_coords(total - 1, &gamma_coords);
    if module.apply_dg(&gamma) != target {
        return Err(Error::IdentityFailed {
            identity: "gamma_witness_substitution".into(),
            witness: module.render_element(&gamma),
        });
    }
    Ok(gamma)
}

/// Associativity oracle for triple products: the image of the triple
/// Cartan-model product under `(I⊗H) ψ^{-1}` must agree with both
/// R-bilinear groupings of the twisted product.
pub fn triple_product_oracle(
    module: &TruncatedModule,
    mm: &MinimalModel,
    a: (usize, &[Rat]),
    b: (usize, &[Rat]),
    c: (usize, &[Rat]),
) -> Result<()> {
    require_product(module, mm)?;
    let a_ext = canonical_extension(module, mm, a.0, a.1)?;
    let b_ext = canonical_extension(module, mm, b.0, b.1)?;
    let c_ext = canonical_extension(module, mm, c.0, c.1)?;
    let triple = module.element_product(&module.element_product(&a_ext, &b_ext)?, &c_ext)?;
    let direct = module.harmonic_proj(&module.psi_inv(&triple));

    let left_grouped = extend_product_right(module, mm, &twisted_product(module, mm, a, b)?, c)?;
    let right_grouped = extend_product_left(module, mm, a, &twisted_product(module, mm, b, c)?)?;

    for (name, got) in [
        ("left_grouping", &left_grouped),
        ("right_grouping", &right_grouped),
    ] {
        if got != &direct {
            return Err(Error::IdentityFailed {
                identity: format!("triple_product_{name}"),
                witness: module.render_element(&direct),
            });
        }
    }
    Ok(())
}

/// `(Σ t^κ h_κ) ∧̃ c`, extending the twisted product R-bilinearly.
fn extend_product_right(
    module: &TruncatedModule,
    mm: &MinimalModel,
    x: &ModuleElement,
    c: (usize, &[Rat]),
) -> Result<ModuleElement> {
    let mut out = ModuleElement::zero();
    for (mon, deg, v) in x.terms() {
        let part = twisted_product(module, mm, (deg, v), c)?;
        out = out.add(&monomial_scale(module, mon, &part));
    }
    Ok(out)
}

fn extend_product_left(
    module: &TruncatedModule,
    mm: &MinimalModel,
    a: (usize, &[Rat]),
    x: &ModuleElement,
) -> Result<ModuleElement> {
    let mut out = ModuleElement::zero();
    for (mon, deg, v) in x.terms() {
        let part = twisted_product(module, mm, a, (deg, v))?;
        out = out.add(&monomial_scale(module, mon, &part));
    }
    Ok(out)
}

/// Transferred differential squares to zero on all generators inside the
/// window.
pub fn dhb_squares_to_zero(module: &TruncatedModule, mm: &MinimalModel) -> IdentityOutcome {
    let window = module.window();
    let mut witness = None;
    'outer: for m in 0..=window {
        for (mon, deg, idx) in minimal_slice(module, m) {
            let x = minimal_generator(module, &mon, deg, idx);
            let once = dhb_apply(module, mm, &x);
            let twice = dhb_apply(module, mm, &once);
            if !twice.is_zero() {
                witness = Some(module.render_element(&x));
                break 'outer;
            }
        }
    }
    outcome("dhb_squares_to_zero", witness)
}
