mod common;

use combinekit::classify::filters::Filter;
use combinekit::combine::{intersect_cubes, method_applicable};
use combinekit::formulas::{parse_formula, Cube, Literal};
use combinekit::sets::{Card, EvPeriodicSet};
use combinekit::theories::*;
use combinekit::{combine_decide, CombineOptions, Error, Method, TheoryHandle};
use common::*;

fn run(t1: &TheoryHandle, t2: &TheoryHandle, f: &str, m: Method) -> combinekit::CombinationVerdict {
    combine_decide(t1, t2, &parse_formula(f).unwrap(), Some(&m), &CombineOptions::default()).unwrap()
}

fn meet(m: Method, t1: &TheoryHandle, c1: &str, t2: &TheoryHandle, c2: &str) -> bool {
    intersect_cubes(&m, t1, &cube(c1), t2, &cube(c2), 10_000).unwrap()
}

#[test]
fn applicability_examples() {
    assert!(method_applicable(&Method::Shiny, &h(Teq), &leq(1)));
    assert!(!method_applicable(&Method::NelsonOppen, &h(Teq), &leq(3)));
    assert!(method_applicable(&Method::Cs, &leq(3), &geq(2)));
}

#[test]
fn every_bounded_triple_is_applicable() {
    for (m, t1, t2) in bounded_triples() {
        assert!(method_applicable(&m, &t1, &t2), "{m} on {} / {}", t1.name(), t2.name());
    }
}

#[test]
fn shell_examples() {
    assert!(!run(&h(Teq), &leq(1), "(distinct x y)", Method::Shiny).sat);
    let v = run(&leq(3), &h(TEqP), "(and (P 2) (distinct x y))", Method::Gentle);
    assert_eq!(v.witness.unwrap().card, Some(Card::Finite(2)));
    assert!(!run(&leq(3), &h(TEqP), "(and (P 4) (distinct x y))", Method::Gentle).sat);
    let si = h(TSi::new(EvPeriodicSet::odds()));
    assert!(run(&si, &geq(3), "(and (P 5) (distinct x y))", Method::NelsonOppen).sat);
    let ev = leq_s(EvPeriodicSet::evens()).renamed("P", "Q");
    let v = run(&leq_s(EvPeriodicSet::all()), &ev, "(distinct x y)", Method::QuasiGentle(Filter::Frechet));
    assert_eq!(v.witness.unwrap().card, Some(Card::Finite(2)));
}

#[test]
fn shiny_intersections() {
    assert!(meet(Method::Shiny, &h(Teq), "true", &leq(3), "true"));
    assert!(!meet(Method::Shiny, &h(Teq), "(distinct x y z w)", &leq(3), "true"));
    let contra = Cube::new([Literal::eq("x", "y"), Literal::neq("x", "y")]);
    assert!(!intersect_cubes(&Method::Shiny, &h(Teq), &contra, &leq(3), &Cube::top(), 10_000).unwrap());
}

#[test]
fn smcs_intersections() {
    assert!(meet(Method::Smcs, &geq(2), "true", &eqn(3), "true"));
    assert!(!meet(Method::Smcs, &geq(4), "true", &eqn(3), "true"));
    assert!(meet(Method::Smcs, &geq(2), "true", &h(TInf), "true"));
}

#[test]
fn cs_intersections() {
    assert!(meet(Method::Cs, &leq(3), "true", &geq(2), "true"));
    assert!(!meet(Method::Cs, &leq(2), "true", &geq(3), "true"));
    assert!(meet(Method::Cs, &h(TCs), "P", &h(TCs).renamed("P", "Q"), "Q"));
}

#[test]
fn nshiny_intersections() {
    let ns = h(TNs::new(4).unwrap());
    let ep = h(TEqP);
    assert!(meet(Method::NShiny(4), &ns, "P", &ep, "(P 4)"));
    assert!(!meet(Method::NShiny(4), &ns, "P", &ep, "(P 5)"));
    assert!(meet(Method::NShiny(4), &ns, "(not P)", &ep, "(P 7)"));
}

#[test]
fn quasigentle_intersections() {
    let qg = Method::QuasiGentle(Filter::Frechet);
    let all = leq_s(EvPeriodicSet::all());
    let ev = leq_s(EvPeriodicSet::evens()).renamed("P", "Q");
    assert!(meet(qg.clone(), &all, "(distinct x y)", &ev, "(distinct x y z)"));
    let ev1 = leq_s(EvPeriodicSet::evens());
    assert!(!meet(qg.clone(), &ev1, "(P 3)", &ev, "(distinct x y z w)"));
    assert!(!meet(qg, &all, "(and (P 1) (P 2))", &ev, "true"));
}

#[test]
fn cap_is_enforced_on_misdeclared_pair() {
    let odd = leq_s(EvPeriodicSet::odds());
    let ev = leq_s(EvPeriodicSet::evens()).renamed("P", "Q");
    let opts = CombineOptions { cap: 50, override_hypotheses: true };
    let r = combine_decide(&odd, &ev, &parse_formula("(= x x)").unwrap(), Some(&Method::QuasiGentle(Filter::Frechet)), &opts);
    assert!(matches!(r, Err(Error::IterationCapExceeded(_))), "{r:?}");
}

#[test]
fn overlapping_signatures_rejected() {
    let r = combine_decide(&h(TEqP), &h(TEqP), &parse_formula("(P 1)").unwrap(), None, &CombineOptions::default());
    assert!(matches!(r, Err(Error::SignatureOverlap(..))));
}

#[test]
fn auto_selection_is_cheapest_first() {
    let v = combine_decide(&geq(2), &geq(3), &parse_formula("(= x x)").unwrap(), None, &CombineOptions::default()).unwrap();
    assert_eq!(v.method, "nelson-oppen");
    let v = combine_decide(&h(Teq), &leq(1), &parse_formula("(distinct x y)").unwrap(), None, &CombineOptions::default()).unwrap();
    assert!(!v.sat);
}
