//! The theory catalog and the handle every other module works through.
//!
//! Each theory answers spectrum questions at two levels. `actual` follows the
//! proven procedure and withholds every answer that would need the undecidable
//! set U or the value of F (only `F(m) >= n` may be asked). `standin` and
//! `model_check` fix U to a decidable stand-in and read F off its `geq`; they
//! exist for the brute-force oracle and the probes, never for decisions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::classify::certificate::{Flag, PropertyCertificate};
use crate::classify::filters::Filter;
use crate::error::{Error, Result};
use crate::formulas::{Cube, Index, Literal, PredicateId, Signature};
use crate::sets::{Card, EvPeriodicSet};
use crate::spectra::{minmod_eq, ExactSpectrum};

mod catalog;
mod complete;
mod thof;

pub use catalog::*;
pub use complete::*;
pub use thof::*;

/// The function F of the parameterized theories, visible only through `F(m) >= n`.
pub trait FOracle: Send + Sync + fmt::Debug {
    fn geq(&self, m: u64, n: u64) -> bool;
}

/// Total computable stand-ins for F.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StandinF {
    #[default]
    Identity,
    Doubling,
    Constant { value: u64 },
    Offset { by: u64 },
    /// Number of Collatz steps from `m` down to 1, plus one.
    Collatz,
    /// `ℵ0` on `set`, identity elsewhere.
    InfiniteOn { set: EvPeriodicSet },
}

impl StandinF {
    fn value(&self, m: u64) -> u64 {
        match self {
            StandinF::Identity => m,
            StandinF::Doubling => 2 * m,
            StandinF::Constant { value } => *value,
            StandinF::Offset { by } => m + by,
            StandinF::InfiniteOn { .. } => m,
            StandinF::Collatz => {
                let (mut x, mut steps) = (m.max(1), 1);
                while x != 1 {
                    x = if x % 2 == 0 { x / 2 } else { 3 * x + 1 };
                    steps += 1;
                }
                steps
            }
        }
    }
}

impl FOracle for StandinF {
    fn geq(&self, m: u64, n: u64) -> bool {
        match self {
            StandinF::InfiniteOn { set } if set.contains(m) => true,
            _ => self.value(m) >= n,
        }
    }
}

const F_SEARCH_LIMIT: u64 = 1 << 40;

/// Reads `F(m)` off `geq` by doubling then bisection; values past the search
/// limit are reported as `ℵ0`. Stand-in use only.
pub fn f_value(f: &dyn FOracle, m: u64) -> Card {
    if !f.geq(m, 1) {
        // F maps into N*, so this only happens for a broken oracle
        return Card::Finite(1);
    }
    let mut lo = 1;
    let mut hi = 2;
    while f.geq(m, hi) {
        if hi >= F_SEARCH_LIMIT {
            return Card::Aleph0;
        }
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f.geq(m, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Card::Finite(lo)
}

/// Cube data every procedure works from: the equality-part minimal model
/// (raised by any requested clique) and the predicate literals.
#[derive(Debug, Clone)]
pub struct Parts {
    pub mm: u64,
    pub pos: Vec<PredicateId>,
    pub neg: Vec<PredicateId>,
}

impl Parts {
    /// `None` when the cube is already contradictory in pure logic.
    pub fn of(c: &Cube, clique: u64) -> Option<Parts> {
        if c.is_contradictory() {
            return None;
        }
        let mm = minmod_eq(&c.eq_part())?.max(clique).max(1);
        Some(Parts {
            mm,
            pos: c.positive_preds().into_iter().cloned().collect(),
            neg: c.negative_preds().into_iter().cloned().collect(),
        })
    }

    pub fn pos_in(&self, family: &str) -> Vec<&PredicateId> {
        self.pos.iter().filter(|p| p.family == family).collect()
    }

    pub fn has_neg(&self, p: &PredicateId) -> bool {
        self.neg.contains(p)
    }
}

type FiniteQuery = Box<dyn Fn(u64) -> Option<bool> + Send + Sync>;

/// What the proven procedure can say about one cube. `None` marks an answer
/// that would need U or the value of F.
pub struct ActualSpec {
    pub sat: bool,
    pub finite: FiniteQuery,
    pub inf: Option<bool>,
    pub exact: Option<ExactSpectrum>,
    pub minmod: Option<Option<Card>>,
}

impl ActualSpec {
    pub fn unsat() -> Self {
        Self::known(ExactSpectrum::empty())
    }

    /// Everything about the spectrum is computable.
    pub fn known(es: ExactSpectrum) -> Self {
        let fp = es.finite_part.clone();
        ActualSpec {
            sat: !es.is_empty(),
            finite: Box::new(move |j| Some(fp.contains(j))),
            inf: Some(es.has_inf),
            minmod: Some(es.min()),
            exact: Some(es),
        }
    }

    pub fn partial(sat: bool, finite: FiniteQuery, inf: Option<bool>, minmod: Option<Option<Card>>) -> Self {
        ActualSpec { sat, finite, inf, exact: None, minmod }
    }
}

pub trait Theory: Send + Sync {
    fn name(&self) -> String;
    fn signature(&self) -> Signature;
    /// Properties proven for the theory itself, not for its stand-in.
    fn certificate(&self) -> PropertyCertificate;
    /// Index-shape check for a predicate already owned by the signature.
    fn valid_indices(&self, p: &PredicateId) -> bool {
        p.indices.iter().all(|i| matches!(i, Index::Nat(n) if *n >= 1))
    }
    fn actual(&self, parts: &Parts) -> ActualSpec;
    fn standin(&self, parts: &Parts) -> ExactSpectrum;
    /// Axioms instantiated for the true predicates (stand-ins for U and F).
    fn model_check(&self, size: Card, true_preds: &BTreeSet<PredicateId>) -> bool;
    /// Predicates whose falsity is itself constraining; the brute oracle must
    /// let them be true even when the cube does not mention them.
    fn always_closure(&self) -> Vec<PredicateId> {
        vec![]
    }
    /// Deterministic sample of predicates for random cubes and probes.
    fn sample_preds(&self) -> Vec<PredicateId>;
    /// Filter-relative quasi-gentleness `(F-QG, co-F-QG)`.
    fn qg(&self, filter: &Filter) -> (bool, bool) {
        let cert = self.certificate();
        (cert.has(&Flag::Fqg(filter.id())), cert.has(&Flag::CoFqg(filter.id())))
    }
    /// Nullary atoms used by the canonical cube enumeration.
    fn enumeration_atoms(&self) -> Vec<PredicateId> {
        self.signature()
            .families
            .iter()
            .filter(|(_, a)| *a == 0)
            .map(|(f, _)| PredicateId::bare(f))
            .collect()
    }
    /// Extra cubes the probes should always look at.
    fn probe_preds(&self) -> Vec<PredicateId> {
        self.sample_preds()
    }
}

/// A theory with an optional renaming of its predicate families.
#[derive(Clone)]
pub struct TheoryHandle {
    theory: Arc<dyn Theory>,
    /// internal family -> external family
    rename: BTreeMap<String, String>,
    label: Option<String>,
}

impl fmt::Debug for TheoryHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TheoryHandle({})", self.name())
    }
}

impl TheoryHandle {
    pub fn new<T: Theory + 'static>(t: T) -> Self {
        TheoryHandle { theory: Arc::new(t), rename: BTreeMap::new(), label: None }
    }

    pub fn from_arc(t: Arc<dyn Theory>) -> Self {
        TheoryHandle { theory: t, rename: BTreeMap::new(), label: None }
    }

    /// Rename predicate family `from` (internal) to `to`.
    pub fn renamed(mut self, from: &str, to: &str) -> Self {
        self.rename.insert(from.to_string(), to.to_string());
        self
    }

    pub fn labeled(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn name(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let base = self.theory.name();
        if self.rename.is_empty() {
            base
        } else {
            let r: Vec<String> = self.rename.iter().map(|(a, b)| format!("{a}->{b}")).collect();
            format!("{base}[{}]", r.join(","))
        }
    }

    pub fn theory(&self) -> &dyn Theory {
        self.theory.as_ref()
    }

    fn ext_family<'a>(&'a self, internal: &'a str) -> &'a str {
        self.rename.get(internal).map(String::as_str).unwrap_or(internal)
    }

    fn int_family<'a>(&'a self, external: &'a str) -> Option<&'a str> {
        if let Some((i, _)) = self.rename.iter().find(|(_, e)| e.as_str() == external) {
            return Some(i.as_str());
        }
        if self.rename.contains_key(external) {
            // renamed away; the old name is no longer in the signature
            return None;
        }
        Some(external)
    }

    pub fn signature(&self) -> Signature {
        Signature {
            families: self
                .theory
                .signature()
                .families
                .into_iter()
                .map(|(f, a)| (self.ext_family(&f).to_string(), a))
                .collect(),
        }
    }

    pub fn certificate(&self) -> PropertyCertificate {
        self.theory.certificate()
    }

    pub fn qg(&self, filter: &Filter) -> (bool, bool) {
        self.theory.qg(filter)
    }

    pub fn to_external(&self, p: &PredicateId) -> PredicateId {
        PredicateId { family: self.ext_family(&p.family).to_string(), indices: p.indices.clone() }
    }

    pub fn to_internal(&self, p: &PredicateId) -> Result<PredicateId> {
        let foreign = || Error::ForeignPredicate { theory: self.name(), predicate: p.to_string() };
        let fam = self.int_family(&p.family).ok_or_else(foreign)?;
        let q = PredicateId { family: fam.to_string(), indices: p.indices.clone() };
        if self.theory.signature().owns(&q) && self.theory.valid_indices(&q) {
            Ok(q)
        } else {
            Err(foreign())
        }
    }

    pub fn internal_cube(&self, c: &Cube) -> Result<Cube> {
        let mut lits = Vec::with_capacity(c.len());
        for l in c.literals() {
            lits.push(match l {
                Literal::Pred(p, pol) => Literal::Pred(self.to_internal(p)?, *pol),
                other => other.clone(),
            });
        }
        Ok(Cube::new(lits))
    }

    fn analyze(&self, c: &Cube, clique: u64) -> Result<ActualSpec> {
        let ic = self.internal_cube(c)?;
        Ok(match Parts::of(&ic, clique) {
            None => ActualSpec::unsat(),
            Some(parts) => self.theory.actual(&parts),
        })
    }

    pub fn decide(&self, c: &Cube) -> Result<bool> {
        self.decide_with_clique(c, 0)
    }

    /// Satisfiability of `c ∧ ≠(x1..xk)` over fresh variables, without building the clique.
    pub fn decide_with_clique(&self, c: &Cube, k: u64) -> Result<bool> {
        Ok(self.analyze(c, k)?.sat)
    }

    pub fn spec_finite(&self, c: &Cube, k: u64) -> Result<bool> {
        if k == 0 {
            return Err(Error::InvalidParameter("cardinality 0".into()));
        }
        let ps = self.analyze(c, 0)?;
        (ps.finite)(k).ok_or_else(|| Error::missing(&self.name(), format!("membership of {k} in the spectrum of {c}")))
    }

    pub fn spec_inf(&self, c: &Cube) -> Result<bool> {
        self.analyze(c, 0)?
            .inf
            .ok_or_else(|| Error::missing(&self.name(), format!("membership of aleph0 in the spectrum of {c}")))
    }

    /// Only for theories certified gentle.
    pub fn exact(&self, c: &Cube) -> Result<ExactSpectrum> {
        if !self.certificate().has(&Flag::Gentle) {
            return Err(Error::missing(&self.name(), "exact spectra (not gentle)"));
        }
        self.analyze(c, 0)?
            .exact
            .ok_or_else(|| Error::missing(&self.name(), format!("exact spectrum of {c}")))
    }

    pub fn minmod(&self, c: &Cube) -> Result<Option<Card>> {
        self.analyze(c, 0)?
            .minmod
            .ok_or_else(|| Error::missing(&self.name(), format!("minimal model of {c}")))
    }

    /// Spectrum of the stand-in theory (U and F replaced by computable ones).
    pub fn standin_spectrum(&self, c: &Cube) -> Result<ExactSpectrum> {
        let ic = self.internal_cube(c)?;
        Ok(match Parts::of(&ic, 0) {
            None => ExactSpectrum::empty(),
            Some(parts) => self.theory.standin(&parts),
        })
    }

    /// `true_preds` in external names; predicates outside the signature make the check fail.
    pub fn model_check(&self, size: Card, true_preds: &BTreeSet<PredicateId>) -> bool {
        let mut internal = BTreeSet::new();
        for p in true_preds {
            match self.to_internal(p) {
                Ok(q) => {
                    internal.insert(q);
                }
                Err(_) => return false,
            }
        }
        self.theory.model_check(size, &internal)
    }

    pub fn always_closure(&self) -> Vec<PredicateId> {
        self.theory.always_closure().iter().map(|p| self.to_external(p)).collect()
    }

    pub fn sample_preds(&self) -> Vec<PredicateId> {
        self.theory.sample_preds().iter().map(|p| self.to_external(p)).collect()
    }

    pub fn probe_preds(&self) -> Vec<PredicateId> {
        self.theory.probe_preds().iter().map(|p| self.to_external(p)).collect()
    }

    pub fn enumeration_atoms(&self) -> Vec<PredicateId> {
        self.theory.enumeration_atoms().iter().map(|p| self.to_external(p)).collect()
    }

    pub fn random_pred(&self, rng: &mut dyn RngCore) -> Option<PredicateId> {
        self.sample_preds().choose(rng).cloned()
    }
}

/// `P_1 → ψ≥n+1` style extension used by the T>nP witness: `c` plus `n+1`
/// fresh self-equalities, where `P_n` is the single positive predicate.
pub fn witness_tgtnp(t: &TheoryHandle, c: &Cube) -> Result<Cube> {
    let pos = c.positive_preds();
    if pos.len() != 1 {
        return Err(Error::InvalidParameter(format!("witness needs exactly one positive predicate, got {}", pos.len())));
    }
    let p = t.to_internal(pos[0])?;
    let n = p.nat(0).ok_or_else(|| Error::InvalidParameter(format!("{p} has no numeric index")))?;
    let fresh = crate::formulas::fresh_vars(&c.vars(), (n + 1) as usize);
    Ok(c.and(&Cube::new(fresh.iter().map(|v| Literal::eq(v, v)))))
}

/// `[lo, ℵ0]` with `lo` raised to at least 1.
pub(crate) fn tail(lo: u64) -> ExactSpectrum {
    ExactSpectrum::upfrom(lo.max(1))
}

/// `{k}` if `mm <= k`.
pub(crate) fn single(k: u64, mm: u64) -> ExactSpectrum {
    if mm <= k {
        ExactSpectrum::finite(EvPeriodicSet::finite(&[k]))
    } else {
        ExactSpectrum::empty()
    }
}

pub(crate) fn nat_preds(family: &str, range: std::ops::RangeInclusive<u64>) -> Vec<PredicateId> {
    range.map(|i| PredicateId::indexed(family, i)).collect()
}

/// More than one distinct positive predicate among `family`.
pub(crate) fn clash(parts: &Parts, family: &str) -> bool {
    parts.pos_in(family).len() > 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_value_search() {
        assert_eq!(f_value(&StandinF::Identity, 7), Card::Finite(7));
        assert_eq!(f_value(&StandinF::Doubling, 5), Card::Finite(10));
        assert_eq!(f_value(&StandinF::Constant { value: 3 }, 99), Card::Finite(3));
        assert_eq!(f_value(&StandinF::Collatz, 1), Card::Finite(1));
        assert_eq!(f_value(&StandinF::Collatz, 6), Card::Finite(9));
        let inf3 = StandinF::InfiniteOn { set: EvPeriodicSet::from_fn(0, 3, |m| m % 3 == 0) };
        assert_eq!(f_value(&inf3, 6), Card::Aleph0);
        assert_eq!(f_value(&inf3, 5), Card::Finite(5));
    }

    #[test]
    fn standin_f_downward_consistent() {
        for f in [StandinF::Identity, StandinF::Doubling, StandinF::Offset { by: 2 }, StandinF::Collatz] {
            for m in 1..20 {
                for n in 2..40 {
                    if f.geq(m, n) {
                        assert!(f.geq(m, n - 1));
                    }
                }
            }
        }
    }
}
