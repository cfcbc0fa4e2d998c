//! Curated data shipped with the workbench.
//!
//! Six valid fixtures cover the cases the verification suites need (free and
//! non-free circle actions, a rank-one non-abelian datum, a trivial action,
//! non-identity inner products), plus one deliberately broken datum for the
//! negative controls.

use crate::complex::GradedComplex;
use crate::equivariant::{Contraction, EquivariantDatum, ProductTable};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::rat;

pub const FIXTURES: &[(&str, &str)] = &[
    (
        "poly-rot-2",
        "circle-action model with moment data in degrees 0..2 (CEF, with product)",
    ),
    (
        "free-rotation",
        "free circle rotation: the angle form contracts to the unit",
    ),
    (
        "two-torus-rotation",
        "exterior algebra on two angle forms, circle rotating the first",
    ),
    (
        "su2-free",
        "rank-one non-abelian datum with a degree-4 polynomial generator",
    ),
    (
        "trivial-rot-2",
        "trivial action on the poly-rot-2 complex (with product)",
    ),
    (
        "rot-2-weighted",
        "poly-rot-2 with non-identity inner products",
    ),
];

/// Name of the shipped invalid datum (negative control).
pub const BROKEN_FIXTURE: (&str, &str) = (
    "broken-rot-2",
    "poly-rot-2 with an injected broken Cartan relation (fails validation)",
);

pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|(n, _)| *n).collect()
}

/// Build a shipped fixture (including the broken one) by name.
pub fn fixture(name: &str) -> Result<EquivariantDatum> {
    match name {
        "poly-rot-2" => Ok(poly_rot_2()),
        "free-rotation" => Ok(free_rotation()),
        "two-torus-rotation" => Ok(two_torus_rotation()),
        "su2-free" => Ok(su2_free()),
        "trivial-rot-2" => Ok(trivial_rot_2()),
        "rot-2-weighted" => Ok(rot_2_weighted()),
        "broken-rot-2" => Ok(broken_rot_2()),
        other => Err(Error::Parse(format!(
            "unknown fixture {other:?}; run the examples command for the list"
        ))),
    }
}

/// All six valid fixtures, in listing order.
pub fn all_valid() -> Vec<(&'static str, EquivariantDatum)> {
    fixture_names()
        .into_iter()
        .map(|n| (n, fixture(n).expect("shipped fixture builds")))
        .collect()
}

fn labels(groups: &[&[&str]]) -> Vec<Vec<String>> {
    groups.iter()
        .map(|ls| ls.iter().map(|s| s.to_string()).collect())
        .collect()
}

fn mat(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> RatMatrix {
    let mut m = RatMatrix::zero(rows, cols);
    for &(r, c, v) in entries {
        m.set(r, c, rat(v));
    }
    m
}

fn rot2_complex(inner: Option<Vec<RatMatrix>>) -> GradedComplex {
    // degree 0: 1, mu, mu2; degree 1: dmu, mudmu; degree 2: omega, muomega
    // d: mu -> dmu, mu2 -> 2 mudmu
    let d0 = mat(2, 3, &[(0, 1, 1), (1, 2, 2)]);
    let d1 = RatMatrix::zero(2, 2);
    let d2 = RatMatrix::zero(0, 2);
    GradedComplex::new(
        labels(&[
            &["1", "mu", "mu2"],
            &["dmu", "mudmu"],
            &["omega", "muomega"],
        ]),
        vec![d0, d1, d2],
        inner,
    )
    .expect("fixture complex is well formed")
}

fn rot2_contraction() -> Contraction {
    // i_V of t-degree 2: omega -> dmu, muomega -> mudmu
    Contraction {
        t_degree: 2,
        ops: vec![
            RatMatrix::zero(0, 3),
            RatMatrix::zero(3, 2),
            mat(2, 2, &[(0, 0, 1), (1, 1, 1)]),
        ],
    }
}

fn rot2_product() -> ProductTable {
    let mut t = ProductTable::new();
    // unit row: 1 * x = x
    t.insert(0, 0, 0, 0, 0, rat(1));
    t.insert(0, 0, 0, 1, 1, rat(1));
    t.insert(0, 0, 0, 2, 2, rat(1));
    t.insert(0, 0, 1, 0, 0, rat(1));
    t.insert(0, 0, 1, 1, 1, rat(1));
    t.insert(0, 0, 2, 0, 0, rat(1));
    t.insert(0, 0, 2, 1, 1, rat(1));
    // mu * mu = mu2, mu * dmu = mudmu, mu * omega = muomega; all other
    // pairs vanish (mu2 and muomega annihilate everything, omega^2 = 0)
    t.insert(0, 1, 0, 1, 2, rat(1));
    t.insert(0, 1, 1, 0, 1, rat(1));
    t.insert(0, 1, 2, 0, 1, rat(1));
    t
}

/// Abstract finite model of a circle action with moment function `mu`:
/// `d(mu) = dmu`, `i_V(omega) = dmu`, everything exact over the rationals.
pub fn poly_rot_2() -> EquivariantDatum {
    EquivariantDatum::new(
        rot2_complex(None),
        vec![rot2_contraction()],
        Some(rot2_product()),
    )
    .expect("fixture datum is well formed")
}

/// poly-rot-2 with non-identity (but block-triangular-friendly) inner
/// products; same harmonic dimensions, different adjoints and Green's
/// operators.
pub fn rot_2_weighted() -> EquivariantDatum {
    let inner0 = mat(3, 3, &[(0, 0, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1), (2, 2, 1)]);
    let inner1 = mat(2, 2, &[(0, 0, 2), (0, 1, 1), (1, 0, 1), (1, 1, 1)]);
    let inner2 = mat(2, 2, &[(0, 0, 3), (0, 1, 1), (1, 0, 1), (1, 1, 2)]);
    EquivariantDatum::new(
        rot2_complex(Some(vec![inner0, inner1, inner2])),
        vec![rot2_contraction()],
        Some(rot2_product()),
    )
    .expect("fixture datum is well formed")
}

/// The poly-rot-2 complex with the circle acting trivially: the polynomial
/// generator is still there, but its contraction is the zero operator.
pub fn trivial_rot_2() -> EquivariantDatum {
    let contraction = Contraction {
        t_degree: 2,
        ops: vec![
            RatMatrix::zero(0, 3),
            RatMatrix::zero(3, 2),
            RatMatrix::zero(2, 2),
        ],
    };
    EquivariantDatum::new(rot2_complex(None), vec![contraction], Some(rot2_product()))
        .expect("fixture datum is well formed")
}

/// Free circle rotation: degrees 0 and 1, zero differential,
/// `i_V(dtheta) = 1`.
pub fn free_rotation() -> EquivariantDatum {
    let complex = GradedComplex::new(
        labels(&[&["1"], &["dtheta"]]),
        vec![RatMatrix::zero(1, 1), RatMatrix::zero(0, 1)],
        None,
    )
    .unwrap();
    let contraction = Contraction {
        t_degree: 2,
        ops: vec![RatMatrix::zero(0, 1), mat(1, 1, &[(0, 0, 1)])],
    };
    EquivariantDatum::new(complex, vec![contraction], None).unwrap()
}

/// Exterior algebra on two angle forms with the circle rotating the first:
/// `i_V(dtheta1) = 1`, `i_V(dtheta1^dtheta2) = dtheta2`.
pub fn two_torus_rotation() -> EquivariantDatum {
    let complex = GradedComplex::new(
        labels(&[&["1"], &["dtheta1", "dtheta2"], &["dtheta12"]]),
        vec![
            RatMatrix::zero(2, 1),
            RatMatrix::zero(1, 2),
            RatMatrix::zero(0, 1),
        ],
        None,
    )
    .unwrap();
    let contraction = Contraction {
        t_degree: 2,
        ops: vec![
            RatMatrix::zero(0, 1),
            mat(1, 2, &[(0, 0, 1)]),
            mat(2, 1, &[(1, 0, 1)]),
        ],
    };
    let mut product = ProductTable::new();
    product.insert(0, 0, 0, 0, 0, rat(1));
    product.insert(0, 0, 1, 0, 0, rat(1));
    product.insert(0, 0, 1, 1, 1, rat(1));
    product.insert(0, 0, 2, 0, 0, rat(1));
    product.insert(1, 0, 1, 1, 0, rat(1)); // dtheta1 * dtheta2 = dtheta12
    EquivariantDatum::new(complex, vec![contraction], Some(product)).unwrap()
}

/// Rank-one non-abelian shape: one degree-4 polynomial generator whose
/// contraction drops degree by three (`x3 -> 1`).
pub fn su2_free() -> EquivariantDatum {
    let complex = GradedComplex::new(
        labels(&[&["1"], &[], &[], &["x3"]]),
        vec![
            RatMatrix::zero(0, 1),
            RatMatrix::zero(0, 0),
            RatMatrix::zero(1, 0),
            RatMatrix::zero(0, 1),
        ],
        None,
    )
    .unwrap();
    let contraction = Contraction {
        t_degree: 4,
        ops: vec![
            RatMatrix::zero(0, 1),
            RatMatrix::zero(0, 0),
            RatMatrix::zero(0, 0),
            mat(1, 1, &[(0, 0, 1)]),
        ],
    };
    EquivariantDatum::new(complex, vec![contraction], None).unwrap()
}

/// poly-rot-2 with `i_V(dmu) = mu` injected: breaks `d i_V + i_V d = 0` at
/// `dmu` (and with it `d_G^2 = 0`), so validation must reject it.
pub fn broken_rot_2() -> EquivariantDatum {
    let mut contraction = rot2_contraction();
    contraction.ops[1] = mat(3, 2, &[(1, 0, 1)]);
    EquivariantDatum::new(rot2_complex(None), vec![contraction], Some(rot2_product()))
        .expect("shape is still consistent; validation catches the math")
}
