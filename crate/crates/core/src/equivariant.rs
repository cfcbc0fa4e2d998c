//! The (small) Cartan model, truncated by polynomial weight, and the
//! operator calculus on it.
//!
//! An [`EquivariantDatum`] is a graded complex together with contraction
//! operators `i_j` of degree `1 - deg t_j` (one per polynomial generator)
//! and an optional product table. The [`TruncatedModule`] is the free module
//! `R ⊗ C` over the polynomial ring `R = Q[t_1, .., t_k]`, keeping only
//! monomials of t-weight at most the cap `W`. Dropping the high-weight span
//! is a quotient of complexes — no operator here ever lowers t-weight — so
//! every identity below holds exactly on the truncated module.
//!
//! Operators: `d`, `∂ = Σ t_j ⊗ i_j`, `d_G = d - ∂`, the perturbations
//! `P = d*G ∂` and `Q = ∂ d*G`, and the Neumann inverses of `φ = I - P`
//! and `ψ = I - Q` (finite sums, since each application of `∂` raises
//! t-weight by at least two).

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::complex::GradedComplex;
use crate::error::{Error, Result};
use crate::hodge::{hodge_data, HodgeData};
use crate::matrix::{vec_add, vec_is_zero, RatMatrix};
use crate::rational::{fmt_rat, Rat};

// ---------------------------------------------------------------------------
// datum
// ---------------------------------------------------------------------------

/// One polynomial generator: its degree and the contraction operator it is
/// paired with, given per complex degree (`ops[m]: C^m -> C^{m + 1 - t_degree}`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub t_degree: usize,
    pub ops: Vec<RatMatrix>,
}

/// `(left degree, left index, right degree, right index)`.
pub type ProductKey = (usize, usize, usize, usize);
/// Sparse coordinate vector: `(index, coefficient)` pairs.
pub type SparseVec = Vec<(usize, Rat)>;

/// Structure constants of a graded product on the complex basis.
///
/// The table may list a pair in one order only; the other order is derived
/// with the Koszul sign. Pairs absent in both orders multiply to zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProductTable {
    entries: BTreeMap<ProductKey, SparseVec>,
}

impl ProductTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: usize, i: usize, q: usize, j: usize, out_index: usize, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.entries.entry((p, i, q, j)).or_default();
        match slot.iter_mut().find(|(k, _)| *k == out_index) {
            Some((_, c)) => *c += coeff,
            None => {
                slot.push((out_index, coeff));
                slot.sort_by_key(|(k, _)| *k);
            }
        }
        slot.retain(|(_, c)| !c.is_zero());
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ProductKey, &SparseVec)> {
        self.entries.iter()
    }

    fn stored(&self, p: usize, i: usize, q: usize, j: usize) -> Option<&SparseVec> {
        self.entries.get(&(p, i, q, j))
    }

    /// Product of two basis elements as a sparse vector in degree `p + q`,
    /// applying graded commutativity when only the mirrored order is stored.
    pub fn mul_basis(&self, p: usize, i: usize, q: usize, j: usize) -> SparseVec {
        if let Some(v) = self.stored(p, i, q, j) {
            return v.clone();
        }
        if let Some(v) = self.stored(q, j, p, i) {
            let sign = if p % 2 == 1 && q % 2 == 1 { -1 } else { 1 };
            return v
                .iter()
                .map(|(k, c)| (*k, c * Rat::from_integer(sign.into())))
                .collect();
        }
        Vec::new()
    }

    /// Bilinear extension to coordinate vectors `vp ∈ C^p`, `vq ∈ C^q`.
    pub fn mul_vectors(
        &self,
        p: usize,
        vp: &[Rat],
        q: usize,
        vq: &[Rat],
        out_dim: usize,
    ) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); out_dim];
        for (i, a) in vp.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in vq.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.mul_basis(p, i, q, j) {
                    out[k] += &ab * c;
                }
            }
        }
        out
    }
}

/// The input datum of the small Cartan model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantDatum {
    pub complex: GradedComplex,
    pub contractions: Vec<Contraction>,
    pub product: Option<ProductTable>,
}

impl EquivariantDatum {
    pub fn new(
        complex: GradedComplex,
        contractions: Vec<Contraction>,
        product: Option<ProductTable>,
    ) -> Result<Self> {
        for (j, con) in contractions.iter().enumerate() {
            if con.t_degree < 2 || con.t_degree % 2 != 0 {
                return Err(Error::Shape(format!(
                    "generator {j} has t-degree {}, expected an even integer >= 2",
                    con.t_degree
                )));
            }
            if con.ops.len() != complex.len() {
                return Err(Error::Shape(format!(
                    "contraction {j} has {} blocks, expected {}",
                    con.ops.len(),
                    complex.len()
                )));
            }
            for (m, op) in con.ops.iter().enumerate() {
                let target = (m + 1).checked_sub(con.t_degree);
                let target_dim = target.map_or(0, |t| complex.dim(t));
                if op.rows() != target_dim || op.cols() != complex.dim(m) {
                    return Err(Error::Shape(format!(
                        "contraction {j} at degree {m} has shape {}x{}, expected {}x{}",
                        op.rows(),
                        op.cols(),
                        target_dim,
                        complex.dim(m)
                    )));
                }
            }
        }
        if let Some(table) = &product {
            for (&(p, i, q, j), vals) in table.iter() {
                if i >= complex.dim(p) || j >= complex.dim(q) {
                    return Err(Error::Shape(format!(
                        "product entry ({p},{i})x({q},{j}) is out of range"
                    )));
                }
                for (k, _) in vals {
                    if *k >= complex.dim(p + q) {
                        return Err(Error::Shape(format!(
                            "product entry ({p},{i})x({q},{j}) lands outside C^{}",
                            p + q
                        )));
                    }
                }
            }
        }
        Ok(EquivariantDatum {
            complex,
            contractions,
            product,
        })
    }

    /// Number of polynomial generators.
    pub fn rank(&self) -> usize {
        self.contractions.len()
    }

    /// Torus case: every generator sits in degree 2.
    pub fn is_abelian(&self) -> bool {
        self.contractions.iter().all(|c| c.t_degree == 2)
    }

    pub fn max_t_degree(&self) -> usize {
        self.contractions.iter().map(|c| c.t_degree).max().unwrap_or(0)
    }

    pub fn t_degrees(&self) -> Vec<usize> {
        self.contractions.iter().map(|c| c.t_degree).collect()
    }
}

// ---------------------------------------------------------------------------
// monomials and module elements
// ---------------------------------------------------------------------------

/// Exponent tuple of a monomial in the polynomial generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(rank: usize) -> Self {
        Monomial(vec![0; rank])
    }

    pub fn weight(&self, t_degrees: &[usize]) -> usize {
        self.0
            .iter()
            .zip(t_degrees)
            .map(|(a, d)| *a as usize * d)
            .sum()
    }

    pub fn bump(&self, j: usize) -> Monomial {
        let mut e = self.0.clone();
        e[j] += 1;
        Monomial(e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// `"1"`, `"t"`, `"t^2"`, or `"t1*t2^2"` for several generators.
    pub fn render(&self) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let single = self.0.len() == 1;
        let mut parts = Vec::new();
        for (j, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let name = if single {
                "t".to_string()
            } else {
                format!("t{}", j + 1)
            };
            if a == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{a}"));
            }
        }
        parts.join("*")
    }
}

/// An element of the truncated module: form-part coefficient vectors keyed
/// by (monomial, form degree). `dropped` counts terms discarded because
/// their t-weight passed the cap; it is bookkeeping and does not take part
/// in equality.
#[derive(Debug, Clone, Default)]
pub struct ModuleElement {
    terms: BTreeMap<(Monomial, usize), Vec<Rat>>,
    pub dropped: usize,
}

impl PartialEq for ModuleElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for ModuleElement {}

impl ModuleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncated(&self) -> bool {
        self.dropped > 0
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, usize, &Vec<Rat>)> {
        self.terms.iter().map(|((m, d), v)| (m, *d, v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, mon: Monomial, degree: usize, vec: Vec<Rat>) {
        if vec_is_zero(&vec) {
            return;
        }
        match self.terms.entry((mon, degree)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(vec);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = vec_add(e.get(), &vec);
                if vec_is_zero(&sum) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn get(&self, mon: &Monomial, degree: usize) -> Option<&Vec<Rat>> {
        self.terms.get(&(mon.clone(), degree))
    }

    /// The coefficient vector at t-weight zero in the given degree.
    pub fn weight_zero_part(&self, rank: usize, degree: usize, dim: usize) -> Vec<Rat> {
        self.get(&Monomial::one(rank), degree)
            .cloned()
            .unwrap_or_else(|| vec![Rat::zero(); dim])
    }

    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        let mut out = self.clone();
        out.dropped += other.dropped;
        for (mon, deg, v) in other.terms() {
            out.add_term(mon.clone(), deg, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &ModuleElement) -> ModuleElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ModuleElement {
        let mut out = ModuleElement {
            terms: BTreeMap::new(),
            dropped: self.dropped,
        };
        for (mon, deg, v) in self.terms() {
            out.terms.insert(
                (mon.clone(), deg),
                v.iter().map(|c| -c.clone()).collect(),
            );
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> ModuleElement {
        if s.is_zero() {
            return ModuleElement {
                terms: BTreeMap::new(),
                dropped: self.dropped,
            };
        }
        let mut out = ModuleElement {
            terms: BTreeMap::new(),
            dropped: self.dropped,
        };
        for (mon, deg, v) in self.terms() {
            out.terms
                .insert((mon.clone(), deg), v.iter().map(|c| c * s).collect());
        }
        out
    }

    /// Total degree (t-weight + form degree) when homogeneous.
    pub fn total_degree(&self, t_degrees: &[usize]) -> Option<usize> {
        let mut result = None;
        for (mon, deg, _) in self.terms() {
            let total = mon.weight(t_degrees) + deg;
            match result {
                None => result = Some(total),
                Some(t) if t != total => return None,
                _ => {}
            }
        }
        result
    }
}

// ---------------------------------------------------------------------------
// validation report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub cap: usize,
    pub checks: Vec<CheckLine>,
    pub product_enabled: bool,
    /// Why product operations are unavailable, when they are.
    pub product_reason: Option<String>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckLine> {
        self.checks.iter().find(|c| !c.passed)
    }
}

// ---------------------------------------------------------------------------
// the truncated module
// ---------------------------------------------------------------------------

/// The weight-truncated free module with its operator calculus and Hodge
/// package. Immutable once validated.
#[derive(Debug, Clone)]
pub struct TruncatedModule {
    datum: EquivariantDatum,
    hodge: HodgeData,
    cap: usize,
    monomials: Vec<Monomial>,
    validation: ValidationReport,
}

impl TruncatedModule {
    /// Validate the datum at the given cap and build the module. Fatal
    /// validation failures (`d^2 != 0`, broken Cartan relations,
    /// indefinite inner products, bad cap) are returned as errors; soft
    /// failures only disable the product operations and are recorded in
    /// the validation report.
    pub fn new(datum: EquivariantDatum, cap: usize) -> Result<Self> {
        if cap < 2 || !cap.is_multiple_of(2) {
            return Err(Error::InvalidCap {
                cap,
                reason: "cap must be an even integer >= 2".into(),
            });
        }
        let min_cap = 2 * datum.max_t_degree();
        if cap < min_cap {
            return Err(Error::InvalidCap {
                cap,
                reason: format!(
                    "cap must be at least twice the largest generator degree ({min_cap})"
                ),
            });
        }

        let mut checks: Vec<CheckLine> = Vec::new();
        let mut fatal: Option<Error> = None;
        let mut record = |name: String, witness: Option<(String, String)>| -> bool {
            match witness {
                None => {
                    checks.push(CheckLine {
                        name,
                        passed: true,
                        witness: None,
                    });
                    true
                }
                Some((check, w)) => {
                    checks.push(CheckLine {
                        name,
                        passed: false,
                        witness: Some(w.clone()),
                    });
                    if fatal.is_none() {
                        fatal = Some(Error::InvalidComplex { check, witness: w });
                    }
                    false
                }
            }
        };

        let c = &datum.complex;
        record(
            "d2_zero".into(),
            c.d_squared_witness()
                .map(|(_, l)| ("d^2 = 0".to_string(), l)),
        );

        // Cartan relations at the matrix level: d i_j + i_j d = 0 and
        // i_j i_k + i_k i_j = 0 (including j = k).
        for (j, con) in datum.contractions.iter().enumerate() {
            let mut witness = None;
            for m in 0..c.len() {
                // d_{m+1-t} . i_j[m] + i_j[m+1] . d_m : C^m -> C^{m+2-t}
                let t = con.t_degree;
                let first = match (m + 1).checked_sub(t) {
                    Some(target) => c.d(target).mul(&con.ops[m]),
                    None => RatMatrix::zero(0, c.dim(m)),
                };
                let second = if m + 1 < c.len() {
                    con.ops[m + 1].mul(&c.d(m))
                } else {
                    RatMatrix::zero(first.rows(), c.dim(m))
                };
                let sum = if first.rows() == second.rows() {
                    first.add(&second)
                } else if first.rows() == 0 {
                    second
                } else {
                    first
                };
                if let Some(col) = sum.first_nonzero_column() {
                    witness = Some((
                        format!("d i_{} + i_{} d = 0", j + 1, j + 1),
                        c.label(m, col).to_string(),
                    ));
                    break;
                }
            }
            record(format!("anticommute_d_i{}", j + 1), witness);
        }
        for j in 0..datum.contractions.len() {
            for k in j..datum.contractions.len() {
                let cj = &datum.contractions[j];
                let ck = &datum.contractions[k];
                let mut witness = None;
                for m in 0..c.len() {
                    let via_k = match (m + 1).checked_sub(ck.t_degree) {
                        Some(mid) => cj.ops.get(mid).map(|op| op.mul(&ck.ops[m])),
                        None => None,
                    };
                    let via_j = match (m + 1).checked_sub(cj.t_degree) {
                        Some(mid) => ck.ops.get(mid).map(|op| op.mul(&cj.ops[m])),
                        None => None,
                    };
                    let sum = match (via_k, via_j) {
                        (Some(a), Some(b)) if a.rows() == b.rows() => a.add(&b),
                        (Some(a), _) => a,
                        (_, Some(b)) => b,
                        _ => continue,
                    };
                    if let Some(col) = sum.first_nonzero_column() {
                        witness = Some((
                            format!("i_{} i_{} + i_{} i_{} = 0", j + 1, k + 1, k + 1, j + 1),
                            c.label(m, col).to_string(),
                        ));
                        break;
                    }
                }
                record(format!("anticommute_i{}_i{}", j + 1, k + 1), witness);
            }
        }

        if let Some(err) = fatal {
            return Err(err);
        }

        // Hodge package (also verifies positive definiteness of the inners).
        let hodge = hodge_data(c)?;

        let monomials = enumerate_monomials(&datum.t_degrees(), cap);
        let mut module = TruncatedModule {
            datum,
            hodge,
            cap,
            monomials,
            validation: ValidationReport {
                cap,
                checks: Vec::new(),
                product_enabled: false,
                product_reason: None,
            },
        };

        // d_G^2 = 0 directly on every truncated basis element.
        let mut dg2_witness = None;
        for (mon, deg, idx) in module.basis() {
            let e = module.basis_element(&mon, deg, idx);
            let dd = module.apply_dg(&module.apply_dg(&e));
            if !dd.is_zero() {
                dg2_witness = Some((
                    "d_G^2 = 0".to_string(),
                    module.describe_basis(&mon, deg, idx),
                ));
                break;
            }
        }
        let dg2_pass = dg2_witness.is_none();
        checks.push(CheckLine {
            name: "dG2_zero".into(),
            passed: dg2_pass,
            witness: dg2_witness.as_ref().map(|(_, w)| w.clone()),
        });
        if let Some((check, witness)) = dg2_witness {
            return Err(Error::InvalidComplex { check, witness });
        }

        // PQ = QP = 0 on the truncated module.
        let (pq_ok, pq_witnesses) = module.check_pq_zero();
        checks.push(CheckLine {
            name: "pq_qp_zero".into(),
            passed: pq_ok,
            witness: pq_witnesses.first().cloned(),
        });

        // Product checks are soft: failures only disable product operations.
        let (product_enabled, product_reason) = module.validate_product(&mut checks);

        module.validation = ValidationReport {
            cap,
            checks,
            product_enabled,
            product_reason,
        };
        Ok(module)
    }

    fn validate_product(&self, checks: &mut Vec<CheckLine>) -> (bool, Option<String>) {
        let datum = &self.datum;
        let c = &datum.complex;
        let Some(table) = &datum.product else {
            return (false, Some("no product table given".into()));
        };
        if !datum.is_abelian() {
            return (
                false,
                Some("non-abelian datum: product operations are rejected".into()),
            );
        }
        let mut all_ok = true;
        let mut soft = |checks: &mut Vec<CheckLine>, name: &str, witness: Option<String>| {
            let passed = witness.is_none();
            all_ok &= passed;
            checks.push(CheckLine {
                name: name.into(),
                passed,
                witness,
            });
        };

        // graded commutativity where both orders are stored
        let mut comm_witness = None;
        'outer: for (&(p, i, q, j), vals) in table.iter() {
            if let Some(mirror) = table.stored(q, j, p, i) {
                let sign = if p % 2 == 1 && q % 2 == 1 { -1 } else { 1 };
                let expect: SparseVec = mirror
                    .iter()
                    .map(|(k, v)| (*k, v * Rat::from_integer(sign.into())))
                    .collect();
                if *vals != expect {
                    comm_witness = Some(format!(
                        "{} * {}",
                        c.label(p, i),
                        c.label(q, j)
                    ));
                    break 'outer;
                }
            }
        }
        soft(checks, "product_graded_commutative", comm_witness);

        // associativity on all basis triples
        let mut assoc_witness = None;
        let degrees: Vec<usize> = (0..c.len()).collect();
        'assoc: for &p in &degrees {
            for i in 0..c.dim(p) {
                for &q in &degrees {
                    for j in 0..c.dim(q) {
                        for &r in &degrees {
                            for l in 0..c.dim(r) {
                                let e_i = unit_vec(c.dim(p), i);
                                let e_j = unit_vec(c.dim(q), j);
                                let e_l = unit_vec(c.dim(r), l);
                                let ij = table.mul_vectors(p, &e_i, q, &e_j, c.dim(p + q));
                                let left =
                                    table.mul_vectors(p + q, &ij, r, &e_l, c.dim(p + q + r));
                                let jl = table.mul_vectors(q, &e_j, r, &e_l, c.dim(q + r));
                                let right =
                                    table.mul_vectors(p, &e_i, q + r, &jl, c.dim(p + q + r));
                                if left != right {
                                    assoc_witness = Some(format!(
                                        "({} * {}) * {}",
                                        c.label(p, i),
                                        c.label(q, j),
                                        c.label(r, l)
                                    ));
                                    break 'assoc;
                                }
                            }
                        }
                    }
                }
            }
        }
        soft(checks, "product_associative", assoc_witness);

        // a two-sided unit in degree 0 (any vector, not necessarily a basis
        // element, so the check survives basis changes)
        let unit_witness = if self.find_unit().is_some() {
            None
        } else {
            Some("no unit element in degree 0".to_string())
        };
        soft(checks, "product_unit", unit_witness);

        // d is a graded derivation
        let mut d_witness = None;
        'd_der: for &p in &degrees {
            for i in 0..c.dim(p) {
                for &q in &degrees {
                    for j in 0..c.dim(q) {
                        let e_i = unit_vec(c.dim(p), i);
                        let e_j = unit_vec(c.dim(q), j);
                        let prod = table.mul_vectors(p, &e_i, q, &e_j, c.dim(p + q));
                        let lhs = c.d(p + q).mul_vec(&prod);
                        let di = c.d(p).mul_vec(&e_i);
                        let dj = c.d(q).mul_vec(&e_j);
                        let mut rhs =
                            table.mul_vectors(p + 1, &di, q, &e_j, c.dim(p + q + 1));
                        let sign = if p % 2 == 1 { -1 } else { 1 };
                        let second = table.mul_vectors(p, &e_i, q + 1, &dj, c.dim(p + q + 1));
                        for (a, b) in rhs.iter_mut().zip(second) {
                            *a += b * Rat::from_integer(sign.into());
                        }
                        if lhs != rhs {
                            d_witness =
                                Some(format!("{} * {}", c.label(p, i), c.label(q, j)));
                            break 'd_der;
                        }
                    }
                }
            }
        }
        soft(checks, "product_d_derivation", d_witness);

        // each degree-2 contraction is a graded derivation
        for (jc, con) in datum.contractions.iter().enumerate() {
            let mut witness = None;
            'i_der: for &p in &degrees {
                for i in 0..c.dim(p) {
                    for &q in &degrees {
                        for j in 0..c.dim(q) {
                            let e_i = unit_vec(c.dim(p), i);
                            let e_j = unit_vec(c.dim(q), j);
                            let prod = table.mul_vectors(p, &e_i, q, &e_j, c.dim(p + q));
                            let out_dim = if p + q >= 1 { c.dim(p + q - 1) } else { 0 };
                            let lhs = match con.ops.get(p + q) {
                                Some(op) => op.mul_vec(&prod),
                                None => vec![Rat::zero(); out_dim],
                            };
                            let ii = apply_block(&con.ops, p, &e_i);
                            let ij = apply_block(&con.ops, q, &e_j);
                            let mut rhs = if p >= 1 {
                                table.mul_vectors(p - 1, &ii, q, &e_j, out_dim)
                            } else {
                                vec![Rat::zero(); out_dim]
                            };
                            let sign = if p % 2 == 1 { -1 } else { 1 };
                            if q >= 1 {
                                let second =
                                    table.mul_vectors(p, &e_i, q - 1, &ij, out_dim);
                                for (a, b) in rhs.iter_mut().zip(second) {
                                    *a += b * Rat::from_integer(sign.into());
                                }
                            }
                            if lhs != rhs {
                                witness =
                                    Some(format!("{} * {}", c.label(p, i), c.label(q, j)));
                                break 'i_der;
                            }
                        }
                    }
                }
            }
            soft(checks, &format!("product_i{}_derivation", jc + 1), witness);
        }

        if all_ok {
            (true, None)
        } else {
            (false, Some("derivation or ring checks failed".into()))
        }
    }

    /// Solve for a two-sided unit in degree 0, if one exists.
    pub fn find_unit(&self) -> Option<Vec<Rat>> {
        let c = &self.datum.complex;
        let table = self.datum.product.as_ref()?;
        let dim0 = c.dim(0);
        if dim0 == 0 {
            return None;
        }
        // unknowns u_i; equations: sum_i u_i (e_i . e_j^q) = e_j^q for all (q, j)
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        let mut rhs: Vec<Rat> = Vec::new();
        for q in 0..c.len() {
            for j in 0..c.dim(q) {
                let e_j = unit_vec(c.dim(q), j);
                for coord in 0..c.dim(q) {
                    let mut row = Vec::with_capacity(dim0);
                    for i in 0..dim0 {
                        let e_i = unit_vec(dim0, i);
                        let prod = table.mul_vectors(0, &e_i, q, &e_j, c.dim(q));
                        row.push(prod[coord].clone());
                    }
                    rows.push(row);
                    rhs.push(if coord == j { Rat::from_integer(1.into()) } else { Rat::zero() });
                }
            }
        }
        RatMatrix::from_rows(rows).solve(&rhs)
    }

    pub fn datum(&self) -> &EquivariantDatum {
        &self.datum
    }

    pub fn hodge(&self) -> &HodgeData {
        &self.hodge
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn validation(&self) -> &ValidationReport {
        &self.validation
    }

    pub fn product_enabled(&self) -> bool {
        self.validation.product_enabled
    }

    /// Identity checks are reported for total degrees up to this window
    /// (one application of `∂` must stay under the cap).
    pub fn window(&self) -> usize {
        self.cap - self.datum.max_t_degree()
    }

    // -- basis bookkeeping --------------------------------------------------

    /// Every truncated basis triple `(monomial, form degree, index)`.
    pub fn basis(&self) -> Vec<(Monomial, usize, usize)> {
        let mut out = Vec::new();
        for mon in &self.monomials {
            for deg in 0..self.datum.complex.len() {
                for idx in 0..self.datum.complex.dim(deg) {
                    out.push((mon.clone(), deg, idx));
                }
            }
        }
        out
    }

    /// Basis triples of one total degree, in report order.
    pub fn slice_basis(&self, total: usize) -> Vec<(Monomial, usize, usize)> {
        let degs = self.datum.t_degrees();
        let mut out = Vec::new();
        for mon in &self.monomials {
            let w = mon.weight(&degs);
            if w > total {
                continue;
            }
            let deg = total - w;
            for idx in 0..self.datum.complex.dim(deg) {
                out.push((mon.clone(), deg, idx));
            }
        }
        out
    }

    pub fn basis_element(&self, mon: &Monomial, deg: usize, idx: usize) -> ModuleElement {
        let mut e = ModuleElement::zero();
        e.add_term(mon.clone(), deg, unit_vec(self.datum.complex.dim(deg), idx));
        e
    }

    pub fn describe_basis(&self, mon: &Monomial, deg: usize, idx: usize) -> String {
        let label = self.datum.complex.label(deg, idx);
        if mon.is_one() {
            label.to_string()
        } else {
            format!("{}*{}", mon.render(), label)
        }
    }

    /// Coordinates of a homogeneous element in the slice basis of its total
    /// degree.
    pub fn coords_of(&self, x: &ModuleElement, total: usize) -> Vec<Rat> {
        let slice = self.slice_basis(total);
        let mut pos: BTreeMap<(Monomial, usize), usize> = BTreeMap::new();
        let mut last: Option<(Monomial, usize)> = None;
        for (offset, (mon, deg, _)) in slice.iter().enumerate() {
            let key = (mon.clone(), *deg);
            if last.as_ref() != Some(&key) {
                pos.insert(key.clone(), offset);
                last = Some(key);
            }
        }
        let mut coords = vec![Rat::zero(); slice.len()];
        for (mon, deg, v) in x.terms() {
            let base = *pos
                .get(&(mon.clone(), deg))
                .expect("element term outside the slice");
            for (i, c) in v.iter().enumerate() {
                coords[base + i] = c.clone();
            }
        }
        coords
    }

    pub fn element_from_coords(
        &self,
        total: usize,
        coords: &[Rat],
    ) -> ModuleElement {
        let slice = self.slice_basis(total);
        assert_eq!(slice.len(), coords.len());
        let mut out = ModuleElement::zero();
        for ((mon, deg, idx), c) in slice.into_iter().zip(coords) {
            if !c.is_zero() {
                let mut v = vec![Rat::zero(); self.datum.complex.dim(deg)];
                v[idx] = c.clone();
                out.add_term(mon, deg, v);
            }
        }
        out
    }

    // -- operators -----------------------------------------------------------

    /// `I ⊗ d`.
    pub fn apply_d(&self, x: &ModuleElement) -> ModuleElement {
        let mut out = ModuleElement {
            terms: BTreeMap::new(),
            dropped: x.dropped,
        };
        for (mon, deg, v) in x.terms() {
            let w = self.datum.complex.d(deg).mul_vec(v);
            out.add_term(mon.clone(), deg + 1, w);
        }
        out
    }

    /// `∂ = Σ_j t_j ⊗ i_j`; terms pushed past the cap are dropped and counted.
    pub fn apply_del(&self, x: &ModuleElement) -> ModuleElement {
        let degs = self.datum.t_degrees();
        let mut out = ModuleElement {
            terms: BTreeMap::new(),
            dropped: x.dropped,
        };
        for (mon, deg, v) in x.terms() {
            for (j, con) in self.datum.contractions.iter().enumerate() {
                let Some(target) = (deg + 1).checked_sub(con.t_degree) else {
                    continue;
                };
                if self.datum.complex.dim(target) == 0 {
                    continue;
                }
                let w = con.ops[deg].mul_vec(v);
                if vec_is_zero(&w) {
                    continue;
                }
                let new_mon = mon.bump(j);
                if new_mon.weight(&degs) > self.cap {
                    out.dropped += 1;
                    continue;
                }
                out.add_term(new_mon, target, w);
            }
        }
        out
    }

    /// `d_G = d - ∂`.
    pub fn apply_dg(&self, x: &ModuleElement) -> ModuleElement {
        self.apply_d(x).sub(&self.apply_del(x))
    }

    /// `I ⊗ d*G` applied factorwise on form parts.
    pub fn apply_dstar_g(&self, x: &ModuleElement) -> ModuleElement {
        let mut out = ModuleElement {
            terms: BTreeMap::new(),
            dropped: x.dropped,
        };
        for (mon, deg, v) in x.terms() {
            if deg == 0 {
                continue;
            }
            let g = self.hodge.greens[deg].mul_vec(v);
            let w = self.hodge.codifferential[deg].mul_vec(&g);
            out.add_term(mon.clone(), deg - 1, w);
        }
        out
    }

    /// `I ⊗ H`, the harmonic projection of every form part.
    pub fn harmonic_proj(&self, x: &ModuleElement) -> ModuleElement {
        let mut out = ModuleElement {
            terms: BTreeMap::new(),
            dropped: x.dropped,
        };
        for (mon, deg, v) in x.terms() {
            let w = self.hodge.harmonic_projector[deg].mul_vec(v);
            out.add_term(mon.clone(), deg, w);
        }
        out
    }

    /// `P = (I ⊗ d*G) ∂`.
    pub fn op_p(&self, x: &ModuleElement) -> ModuleElement {
        self.apply_dstar_g(&self.apply_del(x))
    }

    /// `Q = ∂ (I ⊗ d*G)`.
    pub fn op_q(&self, x: &ModuleElement) -> ModuleElement {
        self.apply_del(&self.apply_dstar_g(x))
    }

    /// `φ = I - P`.
    pub fn phi(&self, x: &ModuleElement) -> ModuleElement {
        x.sub(&self.op_p(x))
    }

    /// `ψ = I - Q`.
    pub fn psi(&self, x: &ModuleElement) -> ModuleElement {
        x.sub(&self.op_q(x))
    }

    /// `φ^{-1} = Σ P^k`; the series terminates because every application of
    /// `∂` raises t-weight by at least two and the module is truncated.
    pub fn phi_inv(&self, x: &ModuleElement) -> ModuleElement {
        self.neumann(x, |y| self.op_p(y))
    }

    /// `ψ^{-1} = Σ Q^k`.
    pub fn psi_inv(&self, x: &ModuleElement) -> ModuleElement {
        self.neumann(x, |y| self.op_q(y))
    }

    fn neumann(
        &self,
        x: &ModuleElement,
        op: impl Fn(&ModuleElement) -> ModuleElement,
    ) -> ModuleElement {
        let mut acc = x.clone();
        let mut term = op(x);
        while !term.is_zero() {
            acc = acc.add(&term);
            term = op(&term);
        }
        acc.dropped += term.dropped;
        acc
    }

    /// Verify `PQ = QP = 0` on every truncated basis element.
    pub fn check_pq_zero(&self) -> (bool, Vec<String>) {
        let mut witnesses = Vec::new();
        for (mon, deg, idx) in self.basis() {
            let e = self.basis_element(&mon, deg, idx);
            if !self.op_p(&self.op_q(&e)).is_zero() || !self.op_q(&self.op_p(&e)).is_zero() {
                witnesses.push(self.describe_basis(&mon, deg, idx));
            }
        }
        (witnesses.is_empty(), witnesses)
    }

    /// Cartan-model product, extended t-bilinearly over the form product.
    pub fn element_product(&self, x: &ModuleElement, y: &ModuleElement) -> Result<ModuleElement> {
        let table = self
            .datum
            .product
            .as_ref()
            .ok_or_else(|| Error::ProductUnavailable {
                reason: "no product table given".into(),
            })?;
        let degs = self.datum.t_degrees();
        let c = &self.datum.complex;
        let mut out = ModuleElement::zero();
        for (ma, p, va) in x.terms() {
            for (mb, q, vb) in y.terms() {
                let out_dim = c.dim(p + q);
                if out_dim == 0 {
                    continue;
                }
                let prod = table.mul_vectors(p, va, q, vb, out_dim);
                if vec_is_zero(&prod) {
                    continue;
                }
                let mon = ma.mul(mb);
                if mon.weight(&degs) > self.cap {
                    out.dropped += 1;
                    continue;
                }
                out.add_term(mon, p + q, prod);
            }
        }
        Ok(out)
    }

    // -- rendering ------------------------------------------------------------

    /// Deterministic plain-text rendering, e.g. `omega + t*mu`.
    pub fn render_element(&self, x: &ModuleElement) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let degs = self.datum.t_degrees();
        let mut pieces: Vec<(usize, Monomial, usize, usize, Rat)> = Vec::new();
        for (mon, deg, v) in x.terms() {
            for (idx, coeff) in v.iter().enumerate() {
                if !coeff.is_zero() {
                    pieces.push((mon.weight(&degs), mon.clone(), deg, idx, coeff.clone()));
                }
            }
        }
        pieces.sort_by(|a, b| (a.0, &a.1, a.2, a.3).cmp(&(b.0, &b.1, b.2, b.3)));
        let mut out = String::new();
        for (i, (_, mon, deg, idx, coeff)) in pieces.iter().enumerate() {
            let negative = crate::rational::is_negative(coeff);
            let abs = if negative { -coeff.clone() } else { coeff.clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if abs != Rat::from_integer(1.into()) {
                factors.push(fmt_rat(&abs));
            }
            if !mon.is_one() {
                factors.push(mon.render());
            }
            factors.push(self.datum.complex.label(*deg, *idx).to_string());
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// Standalone datum validation (builds a module internally and returns its
/// report).
pub fn validate(datum: &EquivariantDatum, cap: usize) -> Result<ValidationReport> {
    TruncatedModule::new(datum.clone(), cap).map(|m| m.validation.clone())
}

fn enumerate_monomials(t_degrees: &[usize], cap: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; t_degrees.len()];
    fn recurse(
        t_degrees: &[usize],
        cap: usize,
        j: usize,
        used: usize,
        current: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if j == t_degrees.len() {
            out.push(Monomial(current.clone()));
            return;
        }
        let mut a = 0u32;
        loop {
            let w = used + a as usize * t_degrees[j];
            if w > cap {
                break;
            }
            current[j] = a;
            recurse(t_degrees, cap, j + 1, w, current, out);
            a += 1;
        }
        current[j] = 0;
    }
    recurse(t_degrees, cap, 0, 0, &mut current, &mut out);
    out.sort_by_key(|m| (m.weight(t_degrees), m.0.clone()));
    out
}

fn unit_vec(dim: usize, idx: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    v[idx] = Rat::from_integer(1.into());
    v
}

/// Apply one block family (`ops[m]: C^m -> C^{m+1-t}`) to a vector in
/// degree `m`, returning the image vector (empty when the target degree
/// does not exist).
fn apply_block(ops: &[RatMatrix], m: usize, v: &[Rat]) -> Vec<Rat> {
    match ops.get(m) {
        Some(op) => op.mul_vec(v),
        None => Vec::new(),
    }
}
