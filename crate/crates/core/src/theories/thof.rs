//! `Th_of(T)`: `P_{φ,n}` pins the model size to the `n`-th finite cardinality
//! missing from the spectrum of `φ` in the inner theory (infinite if there is none).

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex, OnceLock};

use super::{single, tail, ActualSpec, Parts, Theory, TheoryHandle};
use crate::brute::brute_sat_at;
use crate::classify::certificate::{Flag, PropertyCertificate};
use crate::error::{Error, Result};
use crate::formulas::{enumerate_cubes, Cube, Index, Literal, PredicateId, Signature};
use crate::sets::Card;
use crate::spectra::ExactSpectrum;

pub struct ThOf {
    inner: TheoryHandle,
    names: BTreeMap<String, Cube>,
    enumeration: OnceLock<Vec<Cube>>,
    /// Per inner cube, `counts[j]` = sizes in `1..=j` missing from its spectrum.
    scans: Arc<Mutex<BTreeMap<Cube, Vec<u64>>>>,
}

impl ThOf {
    /// `names` maps symbolic formula ids; by default every nullary atom `A`
    /// of the inner theory gets `A` for the cube `{A}` and `nA` for `{¬A}`.
    pub fn new(inner: TheoryHandle, names: Option<BTreeMap<String, Cube>>) -> Result<Self> {
        if !inner.certificate().has(&Flag::Cfs) {
            return Err(Error::InvalidParameter(format!(
                "Th_of needs an inner theory with computable finite spectra, {} is not certified CFS",
                inner.name()
            )));
        }
        let names = names.unwrap_or_else(|| {
            let mut m = BTreeMap::new();
            for a in inner.enumeration_atoms() {
                m.insert(a.family.clone(), Cube::new([Literal::pos(a.clone())]));
                m.insert(format!("n{}", a.family), Cube::new([Literal::neg(a)]));
            }
            m
        });
        Ok(ThOf { inner, names, enumeration: OnceLock::new(), scans: Arc::default() })
    }

    pub fn inner(&self) -> &TheoryHandle {
        &self.inner
    }

    fn enumeration(&self) -> &[Cube] {
        self.enumeration.get_or_init(|| enumerate_cubes(&self.inner.enumeration_atoms()))
    }

    /// The inner cube a formula index names.
    pub fn formula(&self, ix: &Index) -> Option<Cube> {
        match ix {
            Index::Sym(s) => self.names.get(s).cloned(),
            Index::Nat(id) => self.enumeration().get((*id as usize).checked_sub(1)?).cloned(),
        }
    }

    fn parts_of(&self, p: &PredicateId) -> (Cube, u64) {
        let phi = self.formula(&p.indices[0]).expect("validated formula id");
        (phi, p.nat(1).expect("validated position"))
    }

    /// Number of finite sizes below `bound` missing from `Spec(φ)`.
    fn excluded_below(inner: &TheoryHandle, scans: &Mutex<BTreeMap<Cube, Vec<u64>>>, phi: &Cube, bound: u64) -> u64 {
        let mut scans = scans.lock().expect("scan cache poisoned");
        let counts = scans.entry(phi.clone()).or_insert_with(|| vec![0]);
        while (counts.len() as u64) < bound {
            let j = counts.len() as u64;
            // the constructor only accepts inner theories certified CFS
            let missing = !inner.spec_finite(phi, j).expect("inner theory answers finite spectrum queries");
            let last = *counts.last().expect("starts with 0");
            counts.push(last + u64::from(missing));
        }
        counts[(bound.max(1) - 1) as usize]
    }

    fn excluded(inner: &TheoryHandle, scans: &Mutex<BTreeMap<Cube, Vec<u64>>>, phi: &Cube, j: u64) -> bool {
        Self::excluded_below(inner, scans, phi, j + 1) > Self::excluded_below(inner, scans, phi, j)
    }
}

impl Theory for ThOf {
    fn name(&self) -> String {
        format!("Th_of({})", self.inner.name())
    }
    fn signature(&self) -> Signature {
        Signature::of(&[("P", 2)])
    }
    fn certificate(&self) -> PropertyCertificate {
        PropertyCertificate::closure([Flag::Cfs])
    }
    fn valid_indices(&self, p: &PredicateId) -> bool {
        p.indices.len() == 2 && self.formula(&p.indices[0]).is_some() && p.nat(1).is_some_and(|n| n >= 1)
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        let q = match p.pos.as_slice() {
            [] => return ActualSpec::known(tail(p.mm)),
            [q] => q,
            _ => return ActualSpec::unsat(),
        };
        let (phi, n) = self.parts_of(q);
        let mm = p.mm;
        // s_{φ,n} >= mm exactly when fewer than n sizes below mm are missing
        if Self::excluded_below(&self.inner, &self.scans, &phi, mm) >= n {
            return ActualSpec::unsat();
        }
        let (inner, scans) = (self.inner.clone(), self.scans.clone());
        ActualSpec::partial(
            true,
            Box::new(move |j| {
                Some(j >= mm && Self::excluded(&inner, &scans, &phi, j) && Self::excluded_below(&inner, &scans, &phi, j) == n - 1)
            }),
            None,
            None,
        )
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        match p.pos.as_slice() {
            [] => tail(p.mm),
            [q] => {
                let (phi, n) = self.parts_of(q);
                let es = self.inner.standin_spectrum(&phi).expect("inner cube is in the inner signature");
                match es.finite_part.nth_excluded(n) {
                    Some(s) => single(s, p.mm),
                    None => ExactSpectrum::only_inf(),
                }
            }
            _ => ExactSpectrum::empty(),
        }
    }
    fn model_check(&self, size: Card, t: &BTreeSet<PredicateId>) -> bool {
        if t.len() > 1 {
            return false;
        }
        let Some(q) = t.iter().next() else { return true };
        let (phi, n) = self.parts_of(q);
        match size {
            Card::Finite(k) => {
                let missing: Vec<u64> = (1..=k).filter(|&j| !brute_sat_at(&self.inner, &phi, j)).collect();
                missing.last() == Some(&k) && missing.len() as u64 == n
            }
            Card::Aleph0 => {
                let es = self.inner.standin_spectrum(&phi).expect("inner cube is in the inner signature");
                es.finite_part.nth_excluded(n).is_none()
            }
        }
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        let mut out = Vec::new();
        for name in self.names.keys() {
            for n in 1..=5 {
                out.push(PredicateId::new("P", vec![Index::Sym(name.clone()), Index::Nat(n)]));
            }
        }
        for id in 1..=12 {
            for n in 1..=3 {
                out.push(PredicateId::nats("P", &[id, n]));
            }
        }
        out
    }
}
