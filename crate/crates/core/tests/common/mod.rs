#![allow(dead_code)]

use combinekit::classify::filters::Filter;
use combinekit::formulas::{parse_formula, to_dnf, Cube};
use combinekit::sets::EvPeriodicSet;
use combinekit::theories::*;
use combinekit::{Method, TheoryHandle};
use std::sync::Arc;

pub fn h<T: Theory + 'static>(t: T) -> TheoryHandle {
    TheoryHandle::new(t)
}

pub fn cube(s: &str) -> Cube {
    let mut cs = to_dnf(&parse_formula(s).unwrap());
    assert_eq!(cs.len(), 1, "{s} is not a single cube");
    cs.remove(0)
}

pub fn leq(n: u64) -> TheoryHandle {
    h(TLeqN::new(n).unwrap())
}
pub fn geq(n: u64) -> TheoryHandle {
    h(TGeqN::new(n).unwrap())
}
pub fn eqn(n: u64) -> TheoryHandle {
    h(TEqN::new(n).unwrap())
}
pub fn leq_s(s: EvPeriodicSet) -> TheoryHandle {
    h(TLeqS::new(s, Arc::new(StandinF::Identity)).unwrap())
}

/// Method triples whose combined spectra, on formulas over four variables and
/// the sampled predicates, always meet inside `[1, 6]` when they meet at all.
pub fn bounded_triples() -> Vec<(Method, TheoryHandle, TheoryHandle)> {
    let odds = EvPeriodicSet::odds();
    vec![
        (Method::Gentle, leq(3), h(TEqP).renamed("P", "R")),
        (Method::Cs, leq(3), geq(2)),
        (Method::Cs, leq(2), eqn(4)),
        (Method::Cs, h(TCs), leq(3)),
        (Method::Shiny, h(Teq), leq(3)),
        (Method::Shiny, geq(2), leq(4)),
        (Method::Smcs, geq(2), eqn(3)),
        (Method::Smcs, geq(3), h(TMN::new(2, 5, odds).unwrap())),
        (Method::NShiny(4), h(TNs::new(4).unwrap()), h(TEqP).renamed("P", "R")),
        (Method::NShiny(3), eqn(3), leq(5)),
        (Method::QuasiGentle(Filter::Frechet), leq_s(EvPeriodicSet::all()), leq_s(EvPeriodicSet::evens()).renamed("P", "R")),
        (Method::Gentle, h(TEqP), leq_s(EvPeriodicSet::evens()).renamed("P", "R")),
        (Method::NelsonOppen, geq(2), geq(3)),
    ]
}
