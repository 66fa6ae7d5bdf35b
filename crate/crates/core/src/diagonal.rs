//! Prefix runner for the construction of a set S that is not cofinite yet
//! keeps `Spec_{T'}(φ) ∩ (S ∪ {ℵ0}) = ∅` decidable for a CFS theory `T'`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classify::certificate::Flag;
use crate::error::{Error, Result};
use crate::formulas::{enumerate_cubes, Cube};
use crate::theories::TheoryHandle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bucket {
    Sat,
    Unsat,
    Prom,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagState {
    pub s_prefix: BTreeSet<u64>,
    pub sat: BTreeSet<u64>,
    pub unsat: BTreeSet<u64>,
    pub prom: BTreeSet<u64>,
    /// Next formula id (1-based into the canonical cube enumeration).
    pub i: u64,
    /// Next number.
    pub j: u64,
    pub skipped: Vec<u64>,
    pub rounds: u64,
}

impl DiagState {
    pub fn new() -> Self {
        DiagState { i: 1, j: 1, ..Default::default() }
    }

    pub fn bucket(&self, id: u64) -> Option<Bucket> {
        if self.sat.contains(&id) {
            Some(Bucket::Sat)
        } else if self.unsat.contains(&id) {
            Some(Bucket::Unsat)
        } else if self.prom.contains(&id) {
            Some(Bucket::Prom)
        } else {
            None
        }
    }

    /// SHA-256 of the canonical JSON encoding, hex.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("state serializes");
        Sha256::digest(&json).iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub struct Diagonalizer {
    theory: TheoryHandle,
    formulas: Vec<Cube>,
    pub state: DiagState,
}

impl Diagonalizer {
    pub fn new(theory: TheoryHandle) -> Result<Self> {
        if !theory.certificate().has(&Flag::Cfs) {
            return Err(Error::InvalidParameter(format!("{} is not certified CFS", theory.name())));
        }
        let formulas = enumerate_cubes(&theory.enumeration_atoms());
        Ok(Diagonalizer { theory, formulas, state: DiagState::new() })
    }

    pub fn theory(&self) -> &TheoryHandle {
        &self.theory
    }

    pub fn formula(&self, id: u64) -> Result<&Cube> {
        id.checked_sub(1)
            .and_then(|ix| self.formulas.get(ix as usize))
            .ok_or_else(|| Error::InvalidParameter(format!("formula id {id} outside the enumeration of {}", self.formulas.len())))
    }

    pub fn enumeration_len(&self) -> usize {
        self.formulas.len()
    }

    fn has_size(&self, c: &Cube, k: u64) -> Result<bool> {
        self.theory.spec_finite(c, k)
    }

    pub fn process_formula(&mut self) -> Result<Bucket> {
        let id = self.state.i;
        let phi = self.formula(id)?.clone();
        let mut in_s = false;
        for &s in &self.state.s_prefix {
            if self.has_size(&phi, s)? {
                in_s = true;
                break;
            }
        }
        let bucket = if in_s {
            Bucket::Sat
        } else if !self.theory.decide_with_clique(&phi, self.state.j)? {
            Bucket::Unsat
        } else {
            Bucket::Prom
        };
        match bucket {
            Bucket::Sat => self.state.sat.insert(id),
            Bucket::Unsat => self.state.unsat.insert(id),
            Bucket::Prom => self.state.prom.insert(id),
        };
        self.state.i += 1;
        Ok(bucket)
    }

    pub fn process_number(&mut self) -> Result<()> {
        loop {
            let j = self.state.j;
            let mut hit = None;
            for &k in &self.state.prom {
                if self.has_size(self.formula(k)?, j)? {
                    hit = Some(k);
                    break;
                }
            }
            let Some(k) = hit else { break };
            self.state.s_prefix.insert(j);
            self.state.prom.remove(&k);
            self.state.sat.insert(k);
            self.state.j += 1;
        }
        self.state.skipped.push(self.state.j);
        self.state.j += 1;
        Ok(())
    }

    pub fn round(&mut self) -> Result<()> {
        self.process_formula()?;
        self.process_number()?;
        self.state.rounds += 1;
        Ok(())
    }
}

pub fn run_diagonalization(theory: &TheoryHandle, rounds: u64) -> Result<DiagState> {
    if rounds == 0 {
        return Err(Error::InvalidParameter("rounds must be at least 1".into()));
    }
    let mut d = Diagonalizer::new(theory.clone())?;
    for _ in 0..rounds {
        d.round()?;
    }
    Ok(d.state)
}

/// Whether `Spec_{T'}(φ_id) ∩ (S ∪ {ℵ0})` is nonempty, by running until `φ_id` is processed.
pub fn intersect_from_run(theory: &TheoryHandle, id: u64) -> Result<bool> {
    let mut d = Diagonalizer::new(theory.clone())?;
    d.formula(id)?;
    while d.state.i <= id {
        d.round()?;
    }
    Ok(d.state.bucket(id) != Some(Bucket::Unsat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::neq_clique;
    use crate::theories::TLeqN;

    fn t2() -> TheoryHandle {
        TheoryHandle::new(TLeqN::new(2).unwrap())
    }

    fn id_of(d: &Diagonalizer, c: &Cube) -> u64 {
        (1..=d.enumeration_len() as u64).find(|&i| d.formula(i).unwrap() == c).unwrap()
    }

    #[test]
    fn first_round_trace() {
        let mut d = Diagonalizer::new(t2()).unwrap();
        assert_eq!(d.formula(1).unwrap(), &Cube::top());
        assert_eq!(d.process_formula().unwrap(), Bucket::Prom);
        d.process_number().unwrap();
        let s = &d.state;
        assert_eq!(s.s_prefix, BTreeSet::from([1]));
        assert_eq!(s.sat, BTreeSet::from([1]));
        assert!(s.prom.is_empty());
        assert_eq!((s.j, s.skipped.clone()), (3, vec![2]));
    }

    #[test]
    fn empty_promise_skips_current() {
        let mut d = Diagonalizer::new(t2()).unwrap();
        d.state.j = 5;
        d.process_number().unwrap();
        assert_eq!((d.state.j, d.state.skipped.clone()), (6, vec![5]));
    }

    #[test]
    fn consecutive_promises_fulfilled() {
        let t3 = TheoryHandle::new(TLeqN::new(3).unwrap());
        let mut d = Diagonalizer::new(t3).unwrap();
        let vs: Vec<String> = crate::formulas::ENUM_VARS.iter().map(|v| v.to_string()).collect();
        let a = id_of(&d, &Cube::top());
        let b = id_of(&d, &neq_clique(&vs, 2).unwrap());
        d.state.prom = BTreeSet::from([a, b]);
        d.process_number().unwrap();
        // size 1 fulfils the first, size 2 the second, then 3 is skipped
        assert_eq!(d.state.s_prefix, BTreeSet::from([1, 2]));
        assert!(d.state.prom.is_empty());
        assert_eq!(d.state.skipped, vec![3]);
    }

    #[test]
    fn clique_three_is_unsat_for_leq_two() {
        let d = Diagonalizer::new(t2()).unwrap();
        let vs: Vec<String> = crate::formulas::ENUM_VARS.iter().map(|v| v.to_string()).collect();
        let id = id_of(&d, &neq_clique(&vs, 3).unwrap());
        assert!(!intersect_from_run(&t2(), id).unwrap());
        assert!(intersect_from_run(&t2(), 1).unwrap());
    }

    #[test]
    fn rounds_zero_rejected() {
        assert!(run_diagonalization(&t2(), 0).is_err());
    }
}
