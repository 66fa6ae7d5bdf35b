//! Seeded random cubes and formulas for oracle suites and probes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formulas::{Cube, Formula, Literal, PredicateId};
use crate::theories::TheoryHandle;

pub const GEN_VARS: [&str; 4] = ["x", "y", "z", "w"];

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub max_eq_lits: usize,
    pub max_pred_lits: usize,
    /// Probability that an equality literal is a disequality.
    pub neq_bias: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_eq_lits: 4, max_pred_lits: 2, neq_bias: 0.7 }
    }
}

pub fn random_eq_literal<R: Rng>(rng: &mut R, neq_bias: f64) -> Literal {
    let a = GEN_VARS.choose(rng).expect("nonempty");
    let b = GEN_VARS.choose(rng).expect("nonempty");
    if rng.gen_bool(neq_bias) && a != b {
        Literal::neq(a, b)
    } else {
        Literal::eq(a, b)
    }
}

pub fn random_pred_literal<R: Rng>(rng: &mut R, preds: &[PredicateId]) -> Option<Literal> {
    let p = preds.choose(rng)?.clone();
    Some(if rng.gen_bool(0.6) { Literal::pos(p) } else { Literal::neg(p) })
}

/// A cube over `GEN_VARS` and the theory's sample predicates.
pub fn random_cube<R: Rng>(t: &TheoryHandle, rng: &mut R, cfg: &GenConfig) -> Cube {
    random_cube_from(&t.sample_preds(), rng, cfg)
}

pub fn random_cube_from<R: Rng>(preds: &[PredicateId], rng: &mut R, cfg: &GenConfig) -> Cube {
    let mut lits = Vec::new();
    for _ in 0..rng.gen_range(0..=cfg.max_eq_lits) {
        lits.push(random_eq_literal(rng, cfg.neq_bias));
    }
    for _ in 0..rng.gen_range(0..=cfg.max_pred_lits) {
        lits.extend(random_pred_literal(rng, preds));
    }
    Cube::new(lits)
}

/// A small boolean combination over both theories' predicates: a disjunction
/// of up to three conjunctions, literals occasionally under `not`.
pub fn random_formula<R: Rng>(t1: &TheoryHandle, t2: &TheoryHandle, rng: &mut R) -> Formula {
    let (p1, p2) = (t1.sample_preds(), t2.sample_preds());
    let clauses = rng.gen_range(1..=3);
    let mut disj = Vec::with_capacity(clauses);
    for _ in 0..clauses {
        let mut conj = Vec::new();
        for _ in 0..rng.gen_range(1..=4) {
            let lit = match rng.gen_range(0..4) {
                0 => random_pred_literal(rng, &p1),
                1 => random_pred_literal(rng, &p2),
                _ => Some(random_eq_literal(rng, 0.7)),
            };
            let Some(lit) = lit else { continue };
            let f = Formula::lit(lit);
            conj.push(if rng.gen_bool(0.1) { Formula::Not(Box::new(Formula::Not(Box::new(f)))) } else { f });
        }
        if conj.is_empty() {
            conj.push(Formula::lit(Literal::eq("x", "x")));
        }
        disj.push(Formula::And(conj));
    }
    Formula::Or(disj)
}
