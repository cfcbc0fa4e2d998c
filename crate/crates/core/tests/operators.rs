//! Operator calculus on the truncated module: the differential, the
//! perturbations P and Q, their Neumann inverses, and datum validation.

mod common;

use common::{elem, module, one};
use hbmodel_core::equivariant::{validate, Monomial, TruncatedModule};
use hbmodel_core::fixtures;
use hbmodel_core::rational::{rat, ratio};
use hbmodel_core::Error;

#[test]
fn monomials_enumerate_up_to_the_cap() {
    let m = module("poly-rot-2", 10);
    // one generator of degree 2: exponents 0..=5
    assert_eq!(m.monomials().len(), 6);
    let m8 = module("su2-free", 8);
    // one generator of degree 4 at cap 8: exponents 0..=2
    assert_eq!(m8.monomials().len(), 3);
}

#[test]
fn differential_on_the_standard_examples() {
    let m = module("free-rotation", 10);
    let x = one(&m, "dtheta");
    let expected = elem(&m, &[(&[1], "1", rat(-1))]);
    assert_eq!(m.apply_dg(&x), expected);

    let p = module("poly-rot-2", 10);
    let omega = one(&p, "omega");
    assert_eq!(p.apply_dg(&omega), elem(&p, &[(&[1], "dmu", rat(-1))]));
    // harmonic with vanishing contraction: t^2 (x) 1 is a d_G-cycle
    let t2 = elem(&p, &[(&[2], "1", rat(1))]);
    assert!(p.apply_dg(&t2).is_zero());
}

#[test]
fn perturbation_operator_values() {
    let p = module("poly-rot-2", 10);
    assert_eq!(
        p.op_p(&one(&p, "omega")),
        elem(&p, &[(&[1], "mu", rat(1))])
    );
    assert!(p.op_p(&one(&p, "mu")).is_zero());
    assert_eq!(
        p.op_p(&one(&p, "muomega")),
        elem(&p, &[(&[1], "mu2", ratio(1, 2))])
    );
}

#[test]
fn neumann_inverse_values() {
    let p = module("poly-rot-2", 10);
    let ext = p.phi_inv(&one(&p, "omega"));
    assert_eq!(
        ext,
        elem(&p, &[(&[], "omega", rat(1)), (&[1], "mu", rat(1))])
    );
    let ext2 = p.phi_inv(&one(&p, "muomega"));
    assert_eq!(
        ext2,
        elem(&p, &[(&[], "muomega", rat(1)), (&[1], "mu2", ratio(1, 2))])
    );
    // trivial action: the inverse is the identity
    let t = module("trivial-rot-2", 10);
    for label in ["1", "mu", "mu2", "dmu", "omega"] {
        let x = one(&t, label);
        assert_eq!(t.phi_inv(&x), x);
        assert_eq!(t.psi_inv(&x), x);
    }
}

#[test]
fn inverses_invert_on_the_whole_truncated_module() {
    // the high-weight span is a subcomplex, so the Neumann sums are honest
    // two-sided inverses everywhere on the quotient, not just in the window
    for name in ["poly-rot-2", "rot-2-weighted", "two-torus-rotation", "su2-free"] {
        let m = module(name, 10);
        for (mon, deg, idx) in m.basis() {
            let e = m.basis_element(&mon, deg, idx);
            assert_eq!(m.phi(&m.phi_inv(&e)), e, "{name}");
            assert_eq!(m.psi(&m.psi_inv(&e)), e, "{name}");
            assert_eq!(m.phi_inv(&m.phi(&e)), e, "{name}");
            assert_eq!(m.psi_inv(&m.psi(&e)), e, "{name}");
        }
    }
}

#[test]
fn hodge_identities_hold_on_every_fixture_complex() {
    use hbmodel_core::variants::{conjugate, SplitMix64};
    let mut rng = SplitMix64(99);
    for (name, datum) in fixtures::all_valid() {
        let h = hbmodel_core::hodge::hodge_data(&datum.complex).unwrap();
        for (check, ok, _) in hbmodel_core::hodge::identity_checks(&datum.complex, &h) {
            assert!(ok, "{name}: {check}");
        }
        let conj = conjugate(&datum, &mut rng).unwrap();
        let hc = hbmodel_core::hodge::hodge_data(&conj.complex).unwrap();
        for (check, ok, _) in hbmodel_core::hodge::identity_checks(&conj.complex, &hc) {
            assert!(ok, "conj-{name}: {check}");
        }
    }
}

#[test]
fn pq_and_qp_vanish_on_all_fixtures() {
    for (name, datum) in fixtures::all_valid() {
        let m = TruncatedModule::new(datum, 10).unwrap();
        let (ok, witnesses) = m.check_pq_zero();
        assert!(ok, "{name}: {witnesses:?}");
    }
}

#[test]
fn truncation_is_counted() {
    let p = module("poly-rot-2", 10);
    // weight 10 term: one more contraction would reach weight 12 > cap
    let x = elem(&p, &[(&[5], "omega", rat(1))]);
    let dg = p.apply_dg(&x);
    assert!(dg.is_zero());
    assert!(dg.truncated());
    assert_eq!(dg.dropped, 1);
    // the same at low weight is kept and exact
    let y = elem(&p, &[(&[1], "omega", rat(1))]);
    assert!(!p.apply_dg(&y).truncated());
}

#[test]
fn validation_passes_on_shipped_fixtures() {
    for (name, datum) in fixtures::all_valid() {
        let report = validate(&datum, 10).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(report.all_passed(), "{name}: {:?}", report.first_failure());
    }
}

#[test]
fn validation_rejects_broken_relation_naming_the_witness() {
    let datum = fixtures::fixture("broken-rot-2").unwrap();
    match validate(&datum, 10) {
        Err(Error::InvalidComplex { check, witness }) => {
            assert!(check.contains("d i_1 + i_1 d"), "check was {check}");
            // the injected i(dmu) = mu breaks the relation both at mu
            // (where i(d mu) = mu) and at dmu (where d(i dmu) = dmu); the
            // validator reports the lowest degree first
            assert_eq!(witness, "mu");
        }
        other => panic!("expected InvalidComplex, got {other:?}"),
    }
}

#[test]
fn product_soft_checks_disable_only_products() {
    // su2-free is non-abelian and has no table: products off, validation ok
    let m = module("su2-free", 10);
    assert!(!m.product_enabled());
    assert!(m.validation().all_passed());
    // poly-rot-2 has a fully valid table
    let p = module("poly-rot-2", 10);
    assert!(p.product_enabled());
}

#[test]
fn caps_are_policed() {
    let datum = fixtures::fixture("poly-rot-2").unwrap();
    assert!(matches!(
        TruncatedModule::new(datum.clone(), 3),
        Err(Error::InvalidCap { cap: 3, .. })
    ));
    assert!(matches!(
        TruncatedModule::new(datum.clone(), 2),
        Err(Error::InvalidCap { cap: 2, .. })
    ));
    let su2 = fixtures::fixture("su2-free").unwrap();
    assert!(matches!(
        TruncatedModule::new(su2, 6),
        Err(Error::InvalidCap { cap: 6, .. })
    ));
    assert!(TruncatedModule::new(datum, 4).is_ok());
}

#[test]
fn coexact_parts_satisfy_the_commuting_square() {
    for name in ["poly-rot-2", "rot-2-weighted", "free-rotation", "su2-free"] {
        let m = module(name, 10);
        let report = hbmodel_core::model::coexact_square(&m);
        assert!(report.passed, "{name}: {:?}", report.witness);
    }
}

#[test]
fn product_of_neumann_inverses_expands_in_p_and_q() {
    for name in ["poly-rot-2", "rot-2-weighted", "two-torus-rotation"] {
        let m = module(name, 10);
        let report = hbmodel_core::model::neumann_expansion_identity(&m);
        assert!(report.passed, "{name}: {:?}", report.witness);
    }
}

#[test]
fn q_del_and_del_p_agree() {
    for name in ["poly-rot-2", "two-torus-rotation", "su2-free"] {
        let m = module(name, 10);
        let report = hbmodel_core::model::q_del_equals_del_p(&m);
        assert!(report.passed, "{name}: {:?}", report.witness);
    }
}

#[test]
fn element_rendering_is_readable() {
    let p = module("poly-rot-2", 10);
    let x = elem(
        &p,
        &[
            (&[], "omega", rat(1)),
            (&[1], "mu", rat(-1)),
            (&[2], "mu2", ratio(1, 2)),
        ],
    );
    assert_eq!(p.render_element(&x), "omega - t*mu + 1/2*t^2*mu2");
    assert_eq!(p.render_element(&elem(&p, &[])), "0");
    let m = Monomial(vec![3]);
    assert_eq!(m.render(), "t^3");
    assert_eq!(Monomial(vec![1, 2]).render(), "t1*t2^2");
}

#[test]
fn two_generator_monomials_enumerate() {
    use hbmodel_core::variants::{tensor, TensorMode};
    let a = fixtures::fixture("free-rotation").unwrap();
    let t = tensor(&a, &a, TensorMode::Independent).unwrap();
    let m = TruncatedModule::new(t, 6).unwrap();
    // weights: 2a + 2b <= 6: (a, b) with a + b <= 3: 10 monomials
    assert_eq!(m.monomials().len(), 10);
    assert!(m.validation().all_passed());
}
