//! Shared helpers for the integration suites.
#![allow(dead_code)] // each suite uses its own subset

use hbmodel_core::equivariant::{ModuleElement, Monomial, TruncatedModule};
use hbmodel_core::fixtures;
use hbmodel_core::rational::{ratio, Rat};
use hbmodel_core::EquivariantDatum;

pub fn module(name: &str, cap: usize) -> TruncatedModule {
    let datum = fixtures::fixture(name).unwrap();
    TruncatedModule::new(datum, cap).unwrap()
}

pub fn module_of(datum: EquivariantDatum, cap: usize) -> TruncatedModule {
    TruncatedModule::new(datum, cap).unwrap()
}

/// Build an element from `(exponents, label, coeff)` triples.
pub fn elem(module: &TruncatedModule, parts: &[(&[u32], &str, Rat)]) -> ModuleElement {
    let mut out = ModuleElement::zero();
    let c = &module.datum().complex;
    for (exps, label, coeff) in parts {
        let (deg, idx) = c
            .find_label(label)
            .unwrap_or_else(|| panic!("no label {label}"));
        let mut v = vec![Rat::from_integer(0.into()); c.dim(deg)];
        v[idx] = coeff.clone();
        let mon = if exps.is_empty() {
            Monomial::one(module.datum().rank())
        } else {
            Monomial(exps.to_vec())
        };
        out.add_term(mon, deg, v);
    }
    out
}

pub fn one(module: &TruncatedModule, label: &str) -> ModuleElement {
    elem(module, &[(&[], label, ratio(1, 1))])
}

/// The labeled basis vector as a plain coordinate vector, with its degree.
pub fn labeled_vector(module: &TruncatedModule, label: &str) -> (usize, Vec<Rat>) {
    let c = &module.datum().complex;
    let (deg, idx) = c.find_label(label).unwrap();
    let mut v = vec![Rat::from_integer(0.into()); c.dim(deg)];
    v[idx] = Rat::from_integer(1.into());
    (deg, v)
}
