mod common;

use std::collections::{BTreeMap, BTreeSet};

use combinekit::brute::{brute_combined_sat, brute_sat_at, brute_sat_at_with, brute_formula_sat_combined, eq_sat_at};
use combinekit::combine::intersect_cubes;
use combinekit::diagonal::{Bucket, Diagonalizer};
use combinekit::formulas::{
    arrangement_to_cube, enumerate_arrangements, neq_clique, split_by_signature, to_dnf, Cube, Formula, Literal,
    PredicateId, Var,
};
use combinekit::gen::{random_cube, random_formula, seeded, GenConfig};
use combinekit::registry::Registry;
use combinekit::sets::{Card, EvPeriodicSet, SizeClass};
use combinekit::spectra::SpectrumView;
use combinekit::{combine_decide, CombineOptions, Method, TheoryHandle};
use common::*;
use proptest::prelude::*;

fn set_strategy() -> impl Strategy<Value = EvPeriodicSet> {
    (prop::collection::vec(any::<bool>(), 0..6), prop::collection::vec(any::<bool>(), 1..5))
        .prop_map(|(pre, per)| EvPeriodicSet::new(pre, per))
}

fn horizon(sets: &[&EvPeriodicSet]) -> u64 {
    let pre = sets.iter().map(|s| s.preperiod()).max().unwrap_or(0);
    let per: usize = sets.iter().map(|s| s.period()).product();
    (pre + 2 * per) as u64
}

fn catalog() -> Vec<(String, TheoryHandle)> {
    Registry::default_catalog().all().unwrap()
}

/// Canonical assignments of `vars` into `[0, k)`, the brute way: all of them.
fn all_assignments(vars: &[Var], k: u64) -> Vec<BTreeMap<Var, u64>> {
    let mut out = vec![BTreeMap::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|a| (0..k).map(move |x| {
                let mut b = a.clone();
                b.insert(v.clone(), x);
                b
            }))
            .collect();
    }
    out
}

fn eval_lit(l: &Literal, a: &BTreeMap<Var, u64>, world: &BTreeSet<PredicateId>) -> bool {
    match l {
        Literal::Eq(x, y) => a[x] == a[y],
        Literal::Neq(x, y) => a[x] != a[y],
        Literal::Pred(p, pol) => world.contains(p) == *pol,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn canonical_form_is_idempotent(s in set_strategy()) {
        let again = EvPeriodicSet::from_fn(s.preperiod(), s.period(), |n| s.contains(n));
        prop_assert_eq!(&again, &s);
        let doubled = EvPeriodicSet::from_fn(s.preperiod() + 3, 2 * s.period(), |n| s.contains(n));
        prop_assert_eq!(doubled, s);
    }

    #[test]
    fn boolean_laws_pointwise(s in set_strategy(), t in set_strategy(), u in set_strategy()) {
        let lhs = s.union(&t).complement();
        let rhs = s.complement().intersect(&t.complement());
        let dist_l = s.intersect(&t.union(&u));
        let dist_r = s.intersect(&t).union(&s.intersect(&u));
        for n in 1..=4 * horizon(&[&s, &t, &u]) {
            prop_assert_eq!(lhs.contains(n), rhs.contains(n));
            prop_assert_eq!(dist_l.contains(n), dist_r.contains(n));
            prop_assert_eq!(s.difference(&t).contains(n), s.contains(n) && !t.contains(n));
        }
    }

    #[test]
    fn size_class_flips_under_complement(s in set_strategy()) {
        let c = s.complement().classify_size();
        prop_assert_eq!(s.classify_size() == SizeClass::Cofinite, c == SizeClass::Finite);
    }

    #[test]
    fn superset_matches_pointwise(s in set_strategy(), t in set_strategy()) {
        let pointwise = (1..=horizon(&[&s, &t])).all(|n| !t.contains(n) || s.contains(n));
        prop_assert_eq!(s.is_superset(&t), pointwise);
    }

    #[test]
    fn bitzero_families_intersect_infinitely(ix in prop::collection::btree_set(1u32..8, 1..=5)) {
        let inter = ix.iter().fold(EvPeriodicSet::all(), |acc, i| acc.intersect(&EvPeriodicSet::bitzero(*i)));
        prop_assert!(!inter.is_finite());
    }

    #[test]
    fn dnf_is_equivalent(seed in any::<u64>()) {
        let (t1, t2) = (h(combinekit::theories::TEqP), h(combinekit::theories::TCs));
        let mut rng = seeded(seed);
        let f = random_formula(&t1, &t2, &mut rng);
        let cubes = to_dnf(&f);
        let vars: Vec<Var> = f.vars().into_iter().collect();
        let preds: Vec<PredicateId> = f.preds().into_iter().collect();
        prop_assume!(preds.len() <= 5);
        for a in all_assignments(&vars, 3) {
            for mask in 0u32..1 << preds.len() {
                let world: BTreeSet<PredicateId> =
                    preds.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p.clone()).collect();
                let direct = f.eval(|l| eval_lit(l, &a, &world));
                let via = cubes.iter().any(|c| c.literals().iter().all(|l| eval_lit(l, &a, &world)));
                prop_assert_eq!(direct, via, "{:?}", f);
            }
        }
    }

    #[test]
    fn arrangements_partition_assignments(n in 1usize..=4, k in 1u64..=4) {
        let vars: Vec<Var> = (1..=n).map(|i| format!("v{i}")).collect();
        let set: BTreeSet<Var> = vars.iter().cloned().collect();
        let cubes: Vec<Cube> = enumerate_arrangements(&set).iter().map(arrangement_to_cube).collect();
        for a in all_assignments(&vars, k) {
            let hits = cubes.iter().filter(|c| c.literals().iter().all(|l| eval_lit(l, &a, &BTreeSet::new()))).count();
            prop_assert_eq!(hits, 1);
        }
    }

    #[test]
    fn clique_needs_enough_elements(n in 1usize..=7, k in 1u64..=7) {
        let vars: Vec<Var> = (1..=n).map(|i| format!("v{i}")).collect();
        prop_assert_eq!(eq_sat_at(&neq_clique(&vars, n).unwrap(), k), k >= n as u64);
    }

    #[test]
    fn exact_spectra_are_compact_and_pointwise(ti in 0usize..64, seed in any::<u64>()) {
        let cat = catalog();
        let (_, t) = &cat[ti % cat.len()];
        let c = random_cube(t, &mut seeded(seed), &GenConfig::default());
        if let Ok(es) = t.exact(&c) {
            prop_assert!(es.has_inf || es.finite_part.is_finite());
            for n in 1..=horizon(&[&es.finite_part]) {
                prop_assert_eq!(t.spec_finite(&c, n).unwrap(), es.finite_part.contains(n));
            }
        }
        let st = t.standin_spectrum(&c).unwrap();
        prop_assert!(st.has_inf || st.finite_part.is_finite());
    }

    #[test]
    fn minmod_is_least(ti in 0usize..64, seed in any::<u64>()) {
        let cat = catalog();
        let (_, t) = &cat[ti % cat.len()];
        let c = random_cube(t, &mut seeded(seed), &GenConfig::default());
        let v = SpectrumView::new(t, c.clone());
        if let Ok(Some(Card::Finite(k))) = v.minmod() {
            prop_assert!(t.spec_finite(&c, k).unwrap());
            for j in 1..k {
                if let Ok(b) = t.spec_finite(&c, j) {
                    prop_assert!(!b);
                }
            }
        }
    }

    #[test]
    fn brute_combined_is_symmetric_and_monotone(ti in 0usize..64, tj in 0usize..64, seed in any::<u64>()) {
        let cat = catalog();
        let (t1, t2) = (&cat[ti % cat.len()].1, &cat[tj % cat.len()].1);
        let mut rng = seeded(seed);
        let (c1, c2) = (random_cube(t1, &mut rng, &GenConfig::default()), random_cube(t2, &mut rng, &GenConfig::default()));
        let a = brute_combined_sat(t1, t2, &c1, &c2, 5).is_some();
        prop_assert_eq!(a, brute_combined_sat(t2, t1, &c2, &c1, 5).is_some());
        if a {
            prop_assert!(brute_combined_sat(t1, t2, &c1, &c2, 6).is_some());
        }
    }

    #[test]
    fn extra_predicates_never_hurt(ti in 0usize..64, seed in any::<u64>(), k in 1u64..=6) {
        let cat = catalog();
        let (_, t) = &cat[ti % cat.len()];
        let c = random_cube(t, &mut seeded(seed), &GenConfig::default());
        if brute_sat_at(t, &c, k) {
            let extra: Vec<PredicateId> = t.sample_preds().into_iter().take(3).collect();
            prop_assert!(brute_sat_at_with(t, &c, k, &extra));
        }
    }

    #[test]
    fn symmetric_methods_ignore_order(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        for (m, t1, t2) in [(Method::NelsonOppen, geq(2), geq(3)), (Method::Cs, leq(3), geq(2))] {
            let f = random_formula(&t1, &t2, &mut rng);
            let a = combine_decide(&t1, &t2, &f, Some(&m), &CombineOptions::default()).unwrap();
            let b = combine_decide(&t2, &t1, &f, Some(&m), &CombineOptions::default()).unwrap();
            prop_assert_eq!(a.sat, b.sat);
        }
    }

    #[test]
    fn witnesses_check_out(ix in 0usize..13, seed in any::<u64>()) {
        let triples = bounded_triples();
        let (m, t1, t2) = &triples[ix % triples.len()];
        let f = random_formula(t1, t2, &mut seeded(seed));
        let v = combine_decide(t1, t2, &f, Some(m), &CombineOptions::default()).unwrap();
        prop_assert_eq!(v.sat, brute_formula_sat_combined(t1, t2, &f, 6).is_some());
        if let Some(w) = v.witness {
            if let Some(Card::Finite(k)) = w.card {
                let c = to_dnf(&combinekit::formulas::parse_formula(&w.cube).unwrap()).remove(0);
                let (c1, c2, _) = split_by_signature(&c, &t1.signature(), &t2.signature()).unwrap();
                let blocks = combinekit::formulas::Arrangement { blocks: w.arrangement.clone() };
                let delta = arrangement_to_cube(&blocks);
                let (a, b) = if v.order.starts_with(&t1.name()) { (t1, t2) } else { (t2, t1) };
                let (d1, d2) = if a.name() == t1.name() { (c1.and(&delta), c2.and(&delta)) } else { (c2.and(&delta), c1.and(&delta)) };
                if k <= 6 {
                    prop_assert!(brute_sat_at(a, &d1, k) && brute_sat_at(b, &d2, k));
                }
                prop_assert!(intersect_cubes(m, t1, &c1.and(&delta), t2, &c2.and(&delta), 10_000).unwrap());
            }
        }
    }

    #[test]
    fn random_generation_is_reproducible(seed in any::<u64>()) {
        let (t1, t2) = (leq(3), h(combinekit::theories::TEqP));
        let a: Formula = random_formula(&t1, &t2, &mut seeded(seed));
        let b: Formula = random_formula(&t1, &t2, &mut seeded(seed));
        prop_assert_eq!(a, b);
    }
}

#[test]
fn diagonal_buckets_are_stable() {
    let mut d = Diagonalizer::new(leq(2)).unwrap();
    let mut seen: BTreeMap<u64, Bucket> = BTreeMap::new();
    for r in 1..=40u64 {
        d.round().unwrap();
        let s = &d.state;
        assert!(s.sat.is_disjoint(&s.unsat) && s.sat.is_disjoint(&s.prom) && s.unsat.is_disjoint(&s.prom));
        let below_j = s.skipped.iter().filter(|&&x| x < s.j).count() as u64;
        assert!(below_j >= r);
        for (id, b) in &seen {
            let now = s.bucket(*id).unwrap();
            match b {
                Bucket::Sat | Bucket::Unsat => assert_eq!(now, *b, "id {id} moved"),
                Bucket::Prom => assert_ne!(now, Bucket::Unsat, "promise {id} broken"),
            }
        }
        for id in 1..s.i {
            seen.insert(id, s.bucket(id).unwrap());
        }
    }
}
