//! The transferred differential, cohomology against the brute-force
//! oracle, canonical extensions, and the twisted product.

mod common;

use common::{elem, labeled_vector, module, one};
use hbmodel_core::fixtures;
use hbmodel_core::model::{
    canonical_extension, cartan_representatives, cohomology_cartan, cohomology_minimal, d_hb,
    dbar, dbar_trichotomy, dhb_squares_to_zero, gamma_witness, homotopy_identities,
    minimal_model, transfer_on_general_element, triple_product_oracle, twisted_product,
};
use hbmodel_core::rational::{rat, ratio};
use hbmodel_core::Error;

#[test]
fn poly_rot_2_hodge_values() {
    let p = module("poly-rot-2", 10);
    let h = p.hodge();
    // Laplacian in degree 0 is diag(0, 1, 4)
    let lap = &h.laplacian[0];
    assert_eq!(lap.get(0, 0), rat(0));
    assert_eq!(lap.get(1, 1), rat(1));
    assert_eq!(lap.get(2, 2), rat(4));
    assert_eq!(lap.get(0, 1), rat(0));
    // harmonic dimensions (1, 0, 2)
    assert_eq!(h.harmonic_dim(0), 1);
    assert_eq!(h.harmonic_dim(1), 0);
    assert_eq!(h.harmonic_dim(2), 2);
    // Green's operator sends mu2 to mu2 / 4
    assert_eq!(h.greens[0].get(2, 2), ratio(1, 4));
    // mu is purely coexact
    let (deg, mu) = labeled_vector(&p, "mu");
    let (harm, exact, coex) =
        hbmodel_core::hodge::decompose(&p.datum().complex, h, deg, &mu).unwrap();
    assert!(harm.iter().all(|x| x == &rat(0)));
    assert!(exact.iter().all(|x| x == &rat(0)));
    assert_eq!(coex, mu);
}

#[test]
fn transferred_differential_values() {
    // trivial action: d vanishes on every harmonic generator
    let t = module("trivial-rot-2", 10);
    let mmt = minimal_model(&t).unwrap();
    assert!(mmt.dhb_is_zero);

    // free rotation: d(dtheta) = -t (x) 1
    let f = module("free-rotation", 10);
    let (deg, dtheta) = labeled_vector(&f, "dtheta");
    let value = d_hb(&f, deg, &dtheta).unwrap();
    assert_eq!(value, elem(&f, &[(&[1], "1", rat(-1))]));
    let mmf = minimal_model(&f).unwrap();
    assert!(!mmf.dhb_is_zero);

    // poly-rot-2: all three harmonic generators are cycles
    let p = module("poly-rot-2", 10);
    let mmp = minimal_model(&p).unwrap();
    assert!(mmp.dhb_is_zero);

    // two-torus rotation: d(dtheta1) = -t (x) 1, d(dtheta2) = 0,
    // d(dtheta1^dtheta2) = -t (x) dtheta2
    let tt = module("two-torus-rotation", 10);
    let (d1, v1) = labeled_vector(&tt, "dtheta1");
    assert_eq!(d_hb(&tt, d1, &v1).unwrap(), elem(&tt, &[(&[1], "1", rat(-1))]));
    let (d2, v2) = labeled_vector(&tt, "dtheta2");
    assert!(d_hb(&tt, d2, &v2).unwrap().is_zero());
    let (d12, v12) = labeled_vector(&tt, "dtheta12");
    assert_eq!(
        d_hb(&tt, d12, &v12).unwrap(),
        elem(&tt, &[(&[1], "dtheta2", rat(-1))])
    );

    // the degree-4 generator case: d(x3) = -t (x) 1
    let s = module("su2-free", 10);
    let (d3, x3) = labeled_vector(&s, "x3");
    assert_eq!(d_hb(&s, d3, &x3).unwrap(), elem(&s, &[(&[1], "1", rat(-1))]));
}

#[test]
fn cohomology_tables_match_the_oracle_on_all_fixtures() {
    for (name, datum) in fixtures::all_valid() {
        let m = hbmodel_core::TruncatedModule::new(datum, 10).unwrap();
        let mm = minimal_model(&m).unwrap();
        let minimal = cohomology_minimal(&m, &mm);
        let cartan = cohomology_cartan(&m);
        assert_eq!(minimal.dims, cartan.dims, "disagreement on {name}");
    }
}

#[test]
fn cohomology_values_per_fixture() {
    let f = module("free-rotation", 10);
    let mmf = minimal_model(&f).unwrap();
    let t = cohomology_minimal(&f, &mmf);
    assert_eq!(t.dims[0], 1);
    assert!(t.dims[1..].iter().all(|&d| d == 0), "{:?}", t.dims);

    let s = module("su2-free", 10);
    let mms = minimal_model(&s).unwrap();
    let ts = cohomology_minimal(&s, &mms);
    assert_eq!(ts.dims[0], 1);
    assert!(ts.dims[1..].iter().all(|&d| d == 0), "{:?}", ts.dims);

    // free module over one degree-2 generator on harmonic ranks (1, 0, 2):
    // dimension 1 in degree 0 and 3 in every positive even degree
    let p = module("poly-rot-2", 10);
    let mmp = minimal_model(&p).unwrap();
    let tp = cohomology_minimal(&p, &mmp);
    assert_eq!(tp.dims, vec![1, 0, 3, 0, 3, 0, 3, 0, 3, 0, 3]);

    // one circle of a two-torus quotients away: a circle remains
    let tt = module("two-torus-rotation", 10);
    let mmtt = minimal_model(&tt).unwrap();
    let ttt = cohomology_minimal(&tt, &mmtt);
    assert_eq!(ttt.dims[0], 1);
    assert_eq!(ttt.dims[1], 1);
    assert!(ttt.dims[2..].iter().all(|&d| d == 0), "{:?}", ttt.dims);
}

#[test]
fn trivial_action_matches_free_module_count() {
    let t = module("trivial-rot-2", 10);
    let mm = minimal_model(&t).unwrap();
    let table = cohomology_minimal(&t, &mm);
    assert_eq!(table.dims, vec![1, 0, 3, 0, 3, 0, 3, 0, 3, 0, 3]);
}

#[test]
fn representatives_span_the_cohomology() {
    let p = module("poly-rot-2", 10);
    let reps = cartan_representatives(&p, 2);
    assert_eq!(reps.len(), 3);
    for r in &reps {
        assert!(p.apply_dg(r).is_zero());
    }
}

#[test]
fn conjugated_differential_splits_by_hodge_type() {
    for name in ["poly-rot-2", "rot-2-weighted", "free-rotation", "two-torus-rotation", "su2-free"] {
        let m = module(name, 10);
        for check in dbar_trichotomy(&m) {
            assert!(check.passed, "{name}/{}: {:?}", check.name, check.witness);
        }
    }
}

#[test]
fn dbar_on_boundary_and_coexact_examples() {
    let p = module("poly-rot-2", 10);
    // dmu = d(mu) is a boundary: dbar kills it
    assert!(dbar(&p, &one(&p, "dmu")).is_zero());
    // mu is coexact: dbar(mu) = d(mu) = dmu
    assert_eq!(dbar(&p, &one(&p, "mu")), one(&p, "dmu"));
}

#[test]
fn homotopy_identities_hold_on_fixtures() {
    for (name, datum) in fixtures::all_valid() {
        let m = hbmodel_core::TruncatedModule::new(datum, 10).unwrap();
        let mm = minimal_model(&m).unwrap();
        for check in homotopy_identities(&m, &mm) {
            assert!(check.passed, "{name}/{}: {:?}", check.name, check.witness);
        }
        let sq = dhb_squares_to_zero(&m, &mm);
        assert!(sq.passed, "{name}: {:?}", sq.witness);
    }
}

#[test]
fn canonical_extensions() {
    let p = module("poly-rot-2", 10);
    let mm = minimal_model(&p).unwrap();
    let (do_, omega) = labeled_vector(&p, "omega");
    let ext = canonical_extension(&p, &mm, do_, &omega).unwrap();
    assert_eq!(
        ext,
        elem(&p, &[(&[], "omega", rat(1)), (&[1], "mu", rat(1))])
    );
    assert_eq!(p.render_element(&ext), "omega + t*mu");
    let (dm, muomega) = labeled_vector(&p, "muomega");
    let ext2 = canonical_extension(&p, &mm, dm, &muomega).unwrap();
    assert_eq!(
        ext2,
        elem(&p, &[(&[], "muomega", rat(1)), (&[1], "mu2", ratio(1, 2))])
    );
    // every harmonic generator extends to a cycle
    for deg in 0..p.datum().complex.len() {
        for h in &p.hodge().harmonic_basis[deg] {
            let e = canonical_extension(&p, &mm, deg, h).unwrap();
            assert!(p.apply_dg(&e).is_zero());
        }
    }
    // trivial action: the extension is the element itself
    let t = module("trivial-rot-2", 10);
    let mmt = minimal_model(&t).unwrap();
    let (dg, om) = labeled_vector(&t, "omega");
    assert_eq!(canonical_extension(&t, &mmt, dg, &om).unwrap(), one(&t, "omega"));
}

#[test]
fn extension_requires_vanishing_transferred_differential() {
    let f = module("free-rotation", 10);
    let mm = minimal_model(&f).unwrap();
    let (deg, dtheta) = labeled_vector(&f, "dtheta");
    assert!(matches!(
        canonical_extension(&f, &mm, deg, &dtheta),
        Err(Error::NotCEF { cap: 10 })
    ));
}

#[test]
fn transfer_formula_for_general_elements() {
    let p = module("poly-rot-2", 10);
    // x = mu: both sides equal dmu
    let mu = one(&p, "mu");
    transfer_on_general_element(&p, &mu).unwrap();
    let lhs = p.phi(&p.apply_dg(&p.phi_inv(&mu)));
    assert_eq!(lhs, one(&p, "dmu"));
    // harmonic x reduces to the dual-computation statement
    transfer_on_general_element(&p, &one(&p, "omega")).unwrap();
    // inhomogeneous element
    let x = elem(
        &p,
        &[(&[], "mu", rat(2)), (&[1], "mu2", rat(-3)), (&[], "omega", rat(1))],
    );
    transfer_on_general_element(&p, &x).unwrap();
}

#[test]
fn twisted_product_values() {
    let p = module("poly-rot-2", 10);
    let mm = minimal_model(&p).unwrap();
    let (d2, omega) = labeled_vector(&p, "omega");
    let prod = twisted_product(&p, &mm, (d2, &omega), (d2, &omega)).unwrap();
    assert_eq!(prod, elem(&p, &[(&[1], "muomega", rat(2))]));
    assert_eq!(p.render_element(&prod), "2*t*muomega");
    // weight-zero part is the harmonic projection of omega^omega = 0
    assert!(prod.weight_zero_part(1, 4, 0).is_empty());

    // unit: 1 (x) h = h for every harmonic h
    let (d0, unit) = labeled_vector(&p, "1");
    for deg in 0..p.datum().complex.len() {
        for h in p.hodge().harmonic_basis[deg].clone() {
            let left = twisted_product(&p, &mm, (d0, &unit), (deg, &h)).unwrap();
            let mut expect = hbmodel_core::ModuleElement::zero();
            expect.add_term(hbmodel_core::Monomial::one(1), deg, h.clone());
            assert_eq!(left, expect);
        }
    }

    // graded commutativity on the even-degree generators
    let (dm, muomega) = labeled_vector(&p, "muomega");
    let ab = twisted_product(&p, &mm, (d2, &omega), (dm, &muomega)).unwrap();
    let ba = twisted_product(&p, &mm, (dm, &muomega), (d2, &omega)).unwrap();
    assert_eq!(ab, ba);
}

#[test]
fn twisted_product_is_bilinear_in_harmonic_vectors() {
    let p = module("poly-rot-2", 10);
    let mm = minimal_model(&p).unwrap();
    let (d2, omega) = labeled_vector(&p, "omega");
    let (_, muomega) = labeled_vector(&p, "muomega");
    let sum: Vec<hbmodel_core::Rat> = omega
        .iter()
        .zip(&muomega)
        .map(|(a, b)| a + b * rat(3))
        .collect();
    let lhs = twisted_product(&p, &mm, (d2, &sum), (d2, &omega)).unwrap();
    let part1 = twisted_product(&p, &mm, (d2, &omega), (d2, &omega)).unwrap();
    let part2 = twisted_product(&p, &mm, (d2, &muomega), (d2, &omega)).unwrap();
    assert_eq!(lhs, part1.add(&part2.scale(&rat(3))));
}

#[test]
fn twisted_product_on_trivial_action_is_the_harmonic_product() {
    let t = module("trivial-rot-2", 10);
    let mm = minimal_model(&t).unwrap();
    let c = &t.datum().complex;
    for p_deg in 0..c.len() {
        for a in t.hodge().harmonic_basis[p_deg].clone() {
            for q_deg in 0..c.len() {
                for b in t.hodge().harmonic_basis[q_deg].clone() {
                    let tw = twisted_product(&t, &mm, (p_deg, &a), (q_deg, &b)).unwrap();
                    let mut xa = hbmodel_core::ModuleElement::zero();
                    xa.add_term(hbmodel_core::Monomial::one(t.datum().rank()), p_deg, a.clone());
                    let mut xb = hbmodel_core::ModuleElement::zero();
                    xb.add_term(hbmodel_core::Monomial::one(t.datum().rank()), q_deg, b.clone());
                    let plain = t.harmonic_proj(&t.element_product(&xa, &xb).unwrap());
                    assert_eq!(tw, plain);
                }
            }
        }
    }
}

#[test]
fn twisted_product_rejections_in_order() {
    // non-abelian datum: rejected before anything else
    let s = module("su2-free", 10);
    let mms = minimal_model(&s).unwrap();
    let (d3, x3) = labeled_vector(&s, "x3");
    assert!(matches!(
        twisted_product(&s, &mms, (d3, &x3), (d3, &x3)),
        Err(Error::NotAbelian)
    ));
    // abelian, product present, but the transferred differential is nonzero
    let tt = module("two-torus-rotation", 10);
    let mmtt = minimal_model(&tt).unwrap();
    let (d1, v1) = labeled_vector(&tt, "dtheta2");
    assert!(matches!(
        twisted_product(&tt, &mmtt, (d1, &v1), (d1, &v1)),
        Err(Error::NotCEF { .. })
    ));
    // abelian and CEF but no product table
    let f = module("free-rotation", 10);
    let mmf = minimal_model(&f).unwrap();
    // free-rotation is not CEF either; use a trivial datum without a table
    let bare = hbmodel_core::EquivariantDatum::new(
        fixtures::fixture("free-rotation").unwrap().complex,
        Vec::new(),
        None,
    )
    .unwrap();
    let bm = hbmodel_core::TruncatedModule::new(bare, 10).unwrap();
    let bmm = minimal_model(&bm).unwrap();
    let (dg, one_v) = labeled_vector(&bm, "1");
    assert!(matches!(
        twisted_product(&bm, &bmm, (dg, &one_v), (dg, &one_v)),
        Err(Error::ProductUnavailable { .. })
    ));
    let _ = mmf;
}

#[test]
fn gamma_witnesses_verify_by_substitution() {
    let p = module("poly-rot-2", 10);
    let mm = minimal_model(&p).unwrap();
    let (d2, omega) = labeled_vector(&p, "omega");
    // the two sides agree on the nose here, so zero is a valid witness
    let g = gamma_witness(&p, &mm, (d2, &omega), (d2, &omega)).unwrap();
    let lifted = p.phi_inv(&twisted_product(&p, &mm, (d2, &omega), (d2, &omega)).unwrap());
    let ext = canonical_extension(&p, &mm, d2, &omega).unwrap();
    let prod = p.element_product(&ext, &ext).unwrap();
    assert_eq!(p.apply_dg(&g), lifted.sub(&prod));

    // unit case: gamma = 0 works
    let (d0, unit) = labeled_vector(&p, "1");
    let g0 = gamma_witness(&p, &mm, (d0, &unit), (d2, &omega)).unwrap();
    assert!(g0.is_zero());

    // trivial action
    let t = module("trivial-rot-2", 10);
    let mmt = minimal_model(&t).unwrap();
    let (dm, muomega) = labeled_vector(&t, "muomega");
    let gt = gamma_witness(&t, &mmt, (dm, &muomega), (dm, &muomega)).unwrap();
    let lift = t.phi_inv(&twisted_product(&t, &mmt, (dm, &muomega), (dm, &muomega)).unwrap());
    let extt = canonical_extension(&t, &mmt, dm, &muomega).unwrap();
    let prodt = t.element_product(&extt, &extt).unwrap();
    assert_eq!(t.apply_dg(&gt), lift.sub(&prodt));
}

#[test]
fn triple_products_agree_with_the_direct_image() {
    let p = module("poly-rot-2", 10);
    let mm = minimal_model(&p).unwrap();
    let harmonics: Vec<(usize, Vec<hbmodel_core::Rat>)> = vec![
        labeled_vector(&p, "1"),
        labeled_vector(&p, "omega"),
        labeled_vector(&p, "muomega"),
    ];
    for (pa, a) in &harmonics {
        for (pb, b) in &harmonics {
            for (pc, c) in &harmonics {
                triple_product_oracle(&p, &mm, (*pa, a), (*pb, b), (*pc, c)).unwrap();
            }
        }
    }
}

#[test]
fn weighted_inner_products_change_nothing_essential() {
    let w = module("rot-2-weighted", 10);
    let mm = minimal_model(&w).unwrap();
    assert!(mm.dhb_is_zero);
    let minimal = cohomology_minimal(&w, &mm);
    assert_eq!(minimal.dims, vec![1, 0, 3, 0, 3, 0, 3, 0, 3, 0, 3]);
    // extensions still close
    let (d2, omega) = labeled_vector(&w, "omega");
    let ext = canonical_extension(&w, &mm, d2, &omega).unwrap();
    assert!(w.apply_dg(&ext).is_zero());
    // the inner products genuinely differ from the identity
    assert!(!w.datum().complex.identity_inner());
}
