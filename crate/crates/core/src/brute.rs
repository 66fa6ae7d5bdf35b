//! Finite-model enumeration, kept independent of every decision procedure:
//! it only evaluates literals and asks theories for `model_check`.

use std::collections::{BTreeMap, BTreeSet};

use crate::formulas::{Cube, Formula, Literal, PredicateId, Var};
use crate::sets::Card;
use crate::theories::TheoryHandle;

pub const DEFAULT_MAX_CARD: u64 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteConfig {
    pub max_card: u64,
    /// Predicates that may be true beyond the cube's positive ones and the theory's always-closure.
    pub extra_preds: Vec<PredicateId>,
}

impl Default for BruteConfig {
    fn default() -> Self {
        BruteConfig { max_card: DEFAULT_MAX_CARD, extra_preds: vec![] }
    }
}

/// Every assignment of `vars` into a domain of size `k`, up to renaming of
/// elements: first occurrences of values appear in increasing order.
fn assignments(vars: &[Var], k: u64) -> Vec<BTreeMap<Var, u64>> {
    let mut out = Vec::new();
    let mut cur: Vec<u64> = Vec::with_capacity(vars.len());
    fn go(vars: &[Var], k: u64, cur: &mut Vec<u64>, out: &mut Vec<BTreeMap<Var, u64>>) {
        if cur.len() == vars.len() {
            out.push(vars.iter().cloned().zip(cur.iter().copied()).collect());
            return;
        }
        let next_fresh = cur.iter().max().map_or(0, |m| m + 1);
        for v in 0..=next_fresh.min(k.saturating_sub(1)) {
            cur.push(v);
            go(vars, k, cur, out);
            cur.pop();
        }
    }
    if k == 0 {
        return out;
    }
    go(vars, k, &mut cur, &mut out);
    out
}

fn holds_eq(l: &Literal, a: &BTreeMap<Var, u64>) -> bool {
    match l {
        Literal::Eq(x, y) => a[x] == a[y],
        Literal::Neq(x, y) => a[x] != a[y],
        Literal::Pred(..) => true,
    }
}

/// The equality part of `c` holds in some assignment over `k` elements.
pub fn eq_sat_at(c: &Cube, k: u64) -> bool {
    let vars: Vec<Var> = c.vars().into_iter().collect();
    assignments(&vars, k).iter().any(|a| c.literals().iter().all(|l| holds_eq(l, a)))
}

fn subsets<T: Clone>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (0u64..(1u64 << items.len())).map(move |mask| {
        items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x.clone()).collect()
    })
}

/// Predicate sets satisfying `c`'s predicate literals, drawn from the positives plus `free`.
fn pred_worlds(c: &Cube, free: &[PredicateId]) -> Vec<BTreeSet<PredicateId>> {
    let pos: BTreeSet<PredicateId> = c.positive_preds().into_iter().cloned().collect();
    let neg: BTreeSet<PredicateId> = c.negative_preds().into_iter().cloned().collect();
    if !pos.is_disjoint(&neg) {
        return vec![];
    }
    let optional: Vec<PredicateId> =
        free.iter().filter(|p| !pos.contains(*p) && !neg.contains(*p)).cloned().collect::<BTreeSet<_>>().into_iter().collect();
    subsets(&optional)
        .map(|extra| pos.iter().cloned().chain(extra).collect())
        .collect()
}

pub fn brute_sat_at_with(t: &TheoryHandle, c: &Cube, k: u64, extra: &[PredicateId]) -> bool {
    if k == 0 || !eq_sat_at(&c.eq_part(), k) {
        return false;
    }
    let free: Vec<PredicateId> = t.always_closure().into_iter().chain(extra.iter().cloned()).collect();
    pred_worlds(c, &free).iter().any(|w| t.model_check(Card::Finite(k), w))
}

/// Some model of size `k` satisfies `c`.
pub fn brute_sat_at(t: &TheoryHandle, c: &Cube, k: u64) -> bool {
    brute_sat_at_with(t, c, k, &[])
}

/// Some infinite model satisfies `c`, judged by the theory's stand-in axioms at `ℵ0`.
pub fn brute_sat_inf(t: &TheoryHandle, c: &Cube) -> bool {
    let width = c.vars().len().max(1) as u64;
    if !eq_sat_at(&c.eq_part(), width) {
        return false;
    }
    pred_worlds(c, &t.always_closure()).iter().any(|w| t.model_check(Card::Aleph0, w))
}

pub fn brute_spectrum(t: &TheoryHandle, c: &Cube, max_card: u64) -> Vec<u64> {
    (1..=max_card).filter(|&k| brute_sat_at(t, c, k)).collect()
}

/// Least `k <= max_card` where both sides have a model.
pub fn brute_combined_sat(t1: &TheoryHandle, t2: &TheoryHandle, c1: &Cube, c2: &Cube, max_card: u64) -> Option<u64> {
    (1..=max_card).find(|&k| brute_sat_at(t1, c1, k) && brute_sat_at(t2, c2, k))
}

/// Least `k <= max_card` with a model of `f` over the union of both theories,
/// evaluating `f` directly (no DNF, no arrangements).
pub fn brute_formula_sat_combined(t1: &TheoryHandle, t2: &TheoryHandle, f: &Formula, max_card: u64) -> Option<u64> {
    let vars: Vec<Var> = f.vars().into_iter().collect();
    let preds = f.preds();
    let (s1, s2) = (t1.signature(), t2.signature());
    let side = |t: &TheoryHandle, sig: &crate::formulas::Signature| -> Vec<PredicateId> {
        preds.iter().filter(|p| sig.owns(p)).cloned().chain(t.always_closure()).collect::<BTreeSet<_>>().into_iter().collect()
    };
    let (p1, p2) = (side(t1, &s1), side(t2, &s2));
    for k in 1..=max_card {
        let w1: Vec<BTreeSet<PredicateId>> =
            subsets(&p1).map(|s| s.into_iter().collect()).filter(|w| t1.model_check(Card::Finite(k), w)).collect();
        if w1.is_empty() {
            continue;
        }
        let w2: Vec<BTreeSet<PredicateId>> =
            subsets(&p2).map(|s| s.into_iter().collect()).filter(|w| t2.model_check(Card::Finite(k), w)).collect();
        if w2.is_empty() {
            continue;
        }
        for a in assignments(&vars, k) {
            for x in &w1 {
                for y in &w2 {
                    let val = |l: &Literal| match l {
                        Literal::Pred(p, pol) => (x.contains(p) || y.contains(p)) == *pol,
                        other => holds_eq(other, &a),
                    };
                    if f.eval(val) {
                        return Some(k);
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{neq_clique, parse_formula, to_dnf};
    use crate::theories::{TEqP, TGeqN, TLeqN, TNs, Teq, TInf};

    fn cube(s: &str) -> Cube {
        to_dnf(&parse_formula(s).unwrap()).remove(0)
    }

    #[test]
    fn pigeonhole() {
        let t = TheoryHandle::new(Teq);
        assert!(!brute_sat_at(&t, &cube("(distinct x y)"), 1));
        assert!(brute_sat_at(&t, &cube("(distinct x y)"), 2));
    }

    #[test]
    fn predicate_axioms() {
        let t = TheoryHandle::new(TEqP);
        assert!(brute_sat_at(&t, &cube("(P 3)"), 3));
        assert!(!brute_sat_at(&t, &cube("(P 3)"), 4));
        let g = TheoryHandle::new(TGeqN::new(2).unwrap());
        assert!(!brute_sat_at(&g, &Cube::top(), 1));
    }

    #[test]
    fn spectra_in_window() {
        let l3 = TheoryHandle::new(TLeqN::new(3).unwrap());
        assert_eq!(brute_spectrum(&l3, &Cube::top(), 6), vec![1, 2, 3]);
        assert!(brute_spectrum(&TheoryHandle::new(TInf), &Cube::top(), 6).is_empty());
        let ns = TheoryHandle::new(TNs::new(4).unwrap());
        assert_eq!(brute_spectrum(&ns, &cube("P"), 6), vec![4]);
    }

    #[test]
    fn combined_window() {
        let l3 = TheoryHandle::new(TLeqN::new(3).unwrap());
        let g2 = TheoryHandle::new(TGeqN::new(2).unwrap());
        assert_eq!(brute_combined_sat(&l3, &g2, &Cube::top(), &Cube::top(), 6), Some(2));
        let l2 = TheoryHandle::new(TLeqN::new(2).unwrap());
        let g3 = TheoryHandle::new(TGeqN::new(3).unwrap());
        assert_eq!(brute_combined_sat(&l2, &g3, &Cube::top(), &Cube::top(), 6), None);
        let ep = TheoryHandle::new(TEqP);
        let e5 = TheoryHandle::new(crate::theories::TEqN::new(5).unwrap());
        assert_eq!(brute_combined_sat(&ep, &e5, &cube("(P 5)"), &Cube::top(), 6), Some(5));
    }

    #[test]
    fn assignment_count_is_bell_bounded() {
        let vs: Vec<Var> = (1..=4).map(|i| format!("v{i}")).collect();
        assert_eq!(assignments(&vs, 6).len(), 15);
        assert_eq!(assignments(&vs, 2).len(), 8);
        let clique = neq_clique(&vs, 4).unwrap();
        assert!(!eq_sat_at(&clique, 3));
        assert!(eq_sat_at(&clique, 4));
    }
}
