//! The single theories: equality-only ones, the test theories and the example theories.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{clash, f_value, nat_preds, single, tail, FOracle, ActualSpec, Parts, Theory};
use crate::classify::certificate::{Flag, FilterId, NSet, PropertyCertificate};
use crate::classify::filters::{Filter, Membership};
use crate::error::{Error, Result};
use crate::formulas::{PredicateId, Signature};
use crate::sets::{Card, EvPeriodicSet};
use crate::spectra::ExactSpectrum;

fn cert(flags: &[Flag]) -> PropertyCertificate {
    PropertyCertificate::closure(flags.iter().cloned())
}

fn known(es: ExactSpectrum) -> ActualSpec {
    ActualSpec::known(es)
}

fn family_p() -> Signature {
    Signature::of(&[("P", 1)])
}

fn nat0(p: &PredicateId) -> u64 {
    p.nat(0).expect("validated numeric index")
}

fn at_most_one(true_preds: &BTreeSet<PredicateId>, family: &str) -> bool {
    true_preds.iter().filter(|p| p.family == family).count() <= 1
}

fn is_finite_at_least(size: Card, n: u64) -> bool {
    size >= Card::Finite(n)
}

// ---- T ≤ F(k) pieces shared with the complete theories ----

/// `P_k → ψ≤F(k)` on top of size set `s` (every finite model size must be in `s`).
pub(crate) fn le_f_actual(f: &Arc<dyn FOracle>, s: &EvPeriodicSet, k: u64, mm: u64) -> ActualSpec {
    let first = s.next_from(mm);
    let sat = first.is_some_and(|x| f.geq(k, x));
    let (f2, s2) = (f.clone(), s.clone());
    ActualSpec::partial(
        sat,
        Box::new(move |j| Some(j >= mm && s2.contains(j) && f2.geq(k, j))),
        None,
        Some(if sat { first.map(Card::Finite) } else { None }),
    )
}

pub(crate) fn le_f_standin(f: &dyn FOracle, s: &EvPeriodicSet, k: u64, mm: u64) -> ExactSpectrum {
    match f_value(f, k) {
        Card::Finite(b) => ExactSpectrum::finite(EvPeriodicSet::interval(mm, b).intersect(s)),
        Card::Aleph0 => ExactSpectrum::new(EvPeriodicSet::upfrom(mm).intersect(s), true),
    }
}

/// Sizes `{m, n}`, where a positive guard predicate may force `n`.
pub(crate) fn tmn_actual(m: u64, n: u64, mm: u64, guarded: bool) -> ActualSpec {
    let sat = mm <= n;
    let minmod = if mm <= m {
        if guarded {
            None
        } else {
            Some(Some(Card::Finite(m)))
        }
    } else if mm <= n {
        Some(Some(Card::Finite(n)))
    } else {
        Some(None)
    };
    ActualSpec::partial(
        sat,
        Box::new(move |j| {
            if j == n {
                Some(mm <= n)
            } else if j == m {
                if mm > m {
                    Some(false)
                } else if guarded {
                    None
                } else {
                    Some(true)
                }
            } else {
                Some(false)
            }
        }),
        Some(false),
        minmod,
    )
}

pub(crate) fn tmn_standin(m: u64, n: u64, mm: u64, forced: bool) -> ExactSpectrum {
    let mut elems = vec![];
    if !forced && mm <= m {
        elems.push(m);
    }
    if mm <= n {
        elems.push(n);
    }
    ExactSpectrum::finite(EvPeriodicSet::finite(&elems))
}

/// `P → ψ≥n+1` where whether the axiom applies depends on U.
pub(crate) fn gt_actual(n: u64, mm: u64, guarded: bool) -> ActualSpec {
    if !guarded || mm > n {
        return known(tail(mm));
    }
    ActualSpec::partial(
        true,
        Box::new(move |j| if j < mm { Some(false) } else if j > n { Some(true) } else { None }),
        Some(true),
        None,
    )
}

pub(crate) fn gt_standin(n: u64, mm: u64, forced: bool) -> ExactSpectrum {
    tail(if forced { mm.max(n + 1) } else { mm })
}

fn check_n(n: u64, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter(format!("{what} must be positive")))
    } else {
        Ok(())
    }
}

// ---- equality-only theories ----

/// Pure equality.
#[derive(Debug, Clone, Default)]
pub struct Teq;

impl Theory for Teq {
    fn name(&self) -> String {
        "Teq".into()
    }
    fn signature(&self) -> Signature {
        Signature::empty()
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::Shiny])
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        known(tail(p.mm))
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        tail(p.mm)
    }
    fn model_check(&self, _: Card, _: &BTreeSet<PredicateId>) -> bool {
        true
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        vec![]
    }
}

/// At least `n` elements.
#[derive(Debug, Clone)]
pub struct TGeqN {
    n: u64,
}

impl TGeqN {
    pub fn new(n: u64) -> Result<Self> {
        check_n(n, "n")?;
        Ok(TGeqN { n })
    }
}

impl Theory for TGeqN {
    fn name(&self) -> String {
        format!("T_geq_{}", self.n)
    }
    fn signature(&self) -> Signature {
        Signature::empty()
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::Shiny])
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        known(tail(p.mm.max(self.n)))
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        tail(p.mm.max(self.n))
    }
    fn model_check(&self, size: Card, _: &BTreeSet<PredicateId>) -> bool {
        is_finite_at_least(size, self.n)
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        vec![]
    }
}

/// At most `n` elements.
#[derive(Debug, Clone)]
pub struct TLeqN {
    n: u64,
}

impl TLeqN {
    pub fn new(n: u64) -> Result<Self> {
        check_n(n, "n")?;
        Ok(TLeqN { n })
    }
}

impl Theory for TLeqN {
    fn name(&self) -> String {
        format!("T_leq_{}", self.n)
    }
    fn signature(&self) -> Signature {
        Signature::empty()
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::Gentle])
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        known(ExactSpectrum::finite(EvPeriodicSet::interval(p.mm, self.n)))
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        ExactSpectrum::finite(EvPeriodicSet::interval(p.mm, self.n))
    }
    fn model_check(&self, size: Card, _: &BTreeSet<PredicateId>) -> bool {
        size <= Card::Finite(self.n)
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        vec![]
    }
}

/// Exactly `n` elements.
#[derive(Debug, Clone)]
pub struct TEqN {
    n: u64,
}

impl TEqN {
    pub fn new(n: u64) -> Result<Self> {
        check_n(n, "n")?;
        Ok(TEqN { n })
    }
}

impl Theory for TEqN {
    fn name(&self) -> String {
        format!("T_eq_{}", self.n)
    }
    fn signature(&self) -> Signature {
        Signature::empty()
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::NShiny(NSet::At(self.n))])
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        known(single(self.n, p.mm))
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        single(self.n, p.mm)
    }
    fn model_check(&self, size: Card, _: &BTreeSet<PredicateId>) -> bool {
        size == Card::Finite(self.n)
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        vec![]
    }
}

/// Only infinite models.
#[derive(Debug, Clone, Default)]
pub struct TInf;

impl Theory for TInf {
    fn name(&self) -> String {
        "T_inf".into()
    }
    fn signature(&self) -> Signature {
        Signature::empty()
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::SmCs])
    }
    fn actual(&self, _: &Parts) -> ActualSpec {
        known(ExactSpectrum::only_inf())
    }
    fn standin(&self, _: &Parts) -> ExactSpectrum {
        ExactSpectrum::only_inf()
    }
    fn model_check(&self, size: Card, _: &BTreeSet<PredicateId>) -> bool {
        size == Card::Aleph0
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        vec![]
    }
}

// ---- test theories over P_1, P_2, ... ----

/// `P_m → ψ≥n+1` for `m ∈ U`, predicates pairwise exclusive.
#[derive(Debug, Clone)]
pub struct TGtNP {
    n: u64,
    u: EvPeriodicSet,
}

impl TGtNP {
    pub fn new(n: u64, u: EvPeriodicSet) -> Result<Self> {
        check_n(n, "n")?;
        Ok(TGtNP { n, u })
    }
}

impl Theory for TGtNP {
    fn name(&self) -> String {
        format!("T_gt_{}P", self.n)
    }
    fn signature(&self) -> Signature {
        family_p()
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::Decidable, Flag::Si, Flag::Polite])
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        if clash(p, "P") {
            return ActualSpec::unsat();
        }
        gt_actual(self.n, p.mm, !p.pos.is_empty())
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        if clash(p, "P") {
            return ExactSpectrum::empty();
        }
        let forced = p.pos.first().is_some_and(|q| self.u.contains(nat0(q)));
        gt_standin(self.n, p.mm, forced)
    }
    fn model_check(&self, size: Card, t: &BTreeSet<PredicateId>) -> bool {
        at_most_one(t, "P") && t.iter().all(|q| !self.u.contains(nat0(q)) || is_finite_at_least(size, self.n + 1))
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        nat_preds("P", 1..=6)
    }
}

/// `P_n → ψ=n`.
#[derive(Debug, Clone, Default)]
pub struct TEqP;

impl TEqP {
    fn spectrum(p: &Parts) -> ExactSpectrum {
        p.pos.iter().fold(tail(p.mm), |acc, q| acc.intersect(&single(nat0(q), p.mm)))
    }
}

impl Theory for TEqP {
    fn name(&self) -> String {
        "T_eq_P".into()
    }
    fn signature(&self) -> Signature {
        family_p()
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::Gentle])
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        known(Self::spectrum(p))
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        Self::spectrum(p)
    }
    fn model_check(&self, size: Card, t: &BTreeSet<PredicateId>) -> bool {
        t.iter().all(|q| size == Card::Finite(nat0(q)))
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        nat_preds("P", 1..=6)
    }
}

/// Sizes `m` and `n` only; `P_k` with `k ∈ U` forces `n`.
#[derive(Debug, Clone)]
pub struct TMN {
    m: u64,
    n: u64,
    u: EvPeriodicSet,
}

impl TMN {
    pub fn new(m: u64, n: u64, u: EvPeriodicSet) -> Result<Self> {
        check_n(m, "m")?;
        if m >= n {
            return Err(Error::InvalidParameter(format!("T_mn needs m < n, got m={m}, n={n}")));
        }
        Ok(TMN { m, n, u })
    }
}

impl Theory for TMN {
    fn name(&self) -> String {
        format!("T_mn({},{})", self.m, self.n)
    }
    fn signature(&self) -> Signature {
        family_p()
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::Decidable, Flag::Id, Flag::NDecidable(NSet::AllBut(self.m))])
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        if clash(p, "P") {
            return ActualSpec::unsat();
        }
        tmn_actual(self.m, self.n, p.mm, !p.pos.is_empty())
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        if clash(p, "P") {
            return ExactSpectrum::empty();
        }
        let forced = p.pos.first().is_some_and(|q| self.u.contains(nat0(q)));
        tmn_standin(self.m, self.n, p.mm, forced)
    }
    fn model_check(&self, size: Card, t: &BTreeSet<PredicateId>) -> bool {
        let (m, n) = (Card::Finite(self.m), Card::Finite(self.n));
        (size == m || size == n) && at_most_one(t, "P") && t.iter().all(|q| !self.u.contains(nat0(q)) || size == n)
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        nat_preds("P", 1..=6)
    }
}

/// Finite sizes restricted to an infinite set `S`; `P_k → ψ≤F(k)`; exclusive.
#[derive(Debug, Clone)]
pub struct TLeqS {
    s: EvPeriodicSet,
    f: Arc<dyn FOracle>,
}

impl TLeqS {
    pub fn new(s: EvPeriodicSet, f: Arc<dyn FOracle>) -> Result<Self> {
        if s.is_finite() {
            return Err(Error::InvalidParameter(format!("T_leq_S needs an infinite S, got {s}")));
        }
        Ok(TLeqS { s, f })
    }

    pub fn set(&self) -> &EvPeriodicSet {
        &self.s
    }
}

impl Theory for TLeqS {
    fn name(&self) -> String {
        format!("T_leq_S({})", short_set(&self.s))
    }
    fn signature(&self) -> Signature {
        family_p()
    }
    fn certificate(&self) -> PropertyCertificate {
        let mut flags = vec![Flag::Cfs];
        if self.s.is_cofinite() {
            flags.push(Flag::Fqg(FilterId::Every));
        } else {
            // S is infinite, so its complement is not cofinite
            flags.push(Flag::CoFqg(FilterId::Frechet));
        }
        cert(&flags)
    }
    fn qg(&self, filter: &Filter) -> (bool, bool) {
        let bound = usize::MAX;
        let fqg = filter.member(&self.s, bound).is_yes();
        let cofqg = fqg || filter.member(&self.s.complement(), bound) == Membership::No;
        (fqg, cofqg)
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        match p.pos.as_slice() {
            [] => known(ExactSpectrum::new(EvPeriodicSet::upfrom(p.mm).intersect(&self.s), true)),
            [q] => le_f_actual(&self.f, &self.s, nat0(q), p.mm),
            _ => ActualSpec::unsat(),
        }
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        match p.pos.as_slice() {
            [] => ExactSpectrum::new(EvPeriodicSet::upfrom(p.mm).intersect(&self.s), true),
            [q] => le_f_standin(self.f.as_ref(), &self.s, nat0(q), p.mm),
            _ => ExactSpectrum::empty(),
        }
    }
    fn model_check(&self, size: Card, t: &BTreeSet<PredicateId>) -> bool {
        let in_s = match size {
            Card::Finite(k) => self.s.contains(k),
            Card::Aleph0 => true,
        };
        in_s && at_most_one(t, "P") && t.iter().all(|q| size <= f_value(self.f.as_ref(), nat0(q)))
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        nat_preds("P", 1..=7)
    }
}

pub(crate) fn short_set(s: &EvPeriodicSet) -> String {
    if *s == EvPeriodicSet::all() {
        "N*".into()
    } else if *s == EvPeriodicSet::evens() {
        "evens".into()
    } else if *s == EvPeriodicSet::odds() {
        "odds".into()
    } else {
        s.to_string()
    }
}

// ---- example theories ----

/// `P_{2k+1} → ψ≥n+1` for `k ∈ U`, `P_{2k} → ψ≤F(k)`, exclusive.
#[derive(Debug, Clone)]
pub struct TD {
    n: u64,
    f: Arc<dyn FOracle>,
    u: EvPeriodicSet,
}

impl TD {
    pub fn new(n: u64, f: Arc<dyn FOracle>, u: EvPeriodicSet) -> Result<Self> {
        check_n(n, "n")?;
        Ok(TD { n, f, u })
    }
}

impl Theory for TD {
    fn name(&self) -> String {
        format!("T_d({})", self.n)
    }
    fn signature(&self) -> Signature {
        family_p()
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::Decidable, Flag::NDecidable(NSet::At(self.n + 1))])
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        match p.pos.as_slice() {
            [] => known(tail(p.mm)),
            [q] => {
                let i = nat0(q);
                if i.is_multiple_of(2) {
                    le_f_actual(&self.f, &EvPeriodicSet::all(), i / 2, p.mm)
                } else {
                    // P_1 carries no axiom: 0 is not a candidate member of U
                    gt_actual(self.n, p.mm, i > 1)
                }
            }
            _ => ActualSpec::unsat(),
        }
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        match p.pos.as_slice() {
            [] => tail(p.mm),
            [q] => {
                let i = nat0(q);
                if i.is_multiple_of(2) {
                    le_f_standin(self.f.as_ref(), &EvPeriodicSet::all(), i / 2, p.mm)
                } else {
                    gt_standin(self.n, p.mm, i > 1 && self.u.contains(i / 2))
                }
            }
            _ => ExactSpectrum::empty(),
        }
    }
    fn model_check(&self, size: Card, t: &BTreeSet<PredicateId>) -> bool {
        at_most_one(t, "P")
            && t.iter().all(|q| {
                let i = nat0(q);
                if i.is_multiple_of(2) {
                    size <= f_value(self.f.as_ref(), i / 2)
                } else {
                    i == 1 || !self.u.contains(i / 2) || is_finite_at_least(size, self.n + 1)
                }
            })
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        nat_preds("P", 1..=8)
    }
}

/// `P_1` forces an infinite model, `P_k → ψ≤F(k)` for `k ≥ 2`, exclusive.
#[derive(Debug, Clone)]
pub struct TCfs {
    f: Arc<dyn FOracle>,
}

impl TCfs {
    pub fn new(f: Arc<dyn FOracle>) -> Self {
        TCfs { f }
    }
}

impl Theory for TCfs {
    fn name(&self) -> String {
        "T_cfs".into()
    }
    fn signature(&self) -> Signature {
        family_p()
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::Cfs])
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        match p.pos.as_slice() {
            [] => known(tail(p.mm)),
            [q] if nat0(q) == 1 => known(ExactSpectrum::only_inf()),
            [q] => le_f_actual(&self.f, &EvPeriodicSet::all(), nat0(q), p.mm),
            _ => ActualSpec::unsat(),
        }
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        match p.pos.as_slice() {
            [] => tail(p.mm),
            [q] if nat0(q) == 1 => ExactSpectrum::only_inf(),
            [q] => le_f_standin(self.f.as_ref(), &EvPeriodicSet::all(), nat0(q), p.mm),
            _ => ExactSpectrum::empty(),
        }
    }
    fn model_check(&self, size: Card, t: &BTreeSet<PredicateId>) -> bool {
        at_most_one(t, "P")
            && t.iter().all(|q| match nat0(q) {
                1 => size == Card::Aleph0,
                k => size <= f_value(self.f.as_ref(), k),
            })
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        nat_preds("P", 1..=6)
    }
}

/// `P_n` with `n ∈ U` forces an infinite model; exclusive.
#[derive(Debug, Clone)]
pub struct TSi {
    u: EvPeriodicSet,
}

impl TSi {
    pub fn new(u: EvPeriodicSet) -> Self {
        TSi { u }
    }
}

impl Theory for TSi {
    fn name(&self) -> String {
        "T_si".into()
    }
    fn signature(&self) -> Signature {
        family_p()
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::Si])
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        match p.pos.as_slice() {
            [] => known(tail(p.mm)),
            [_] => {
                let mm = p.mm;
                ActualSpec::partial(true, Box::new(move |j| if j < mm { Some(false) } else { None }), Some(true), None)
            }
            _ => ActualSpec::unsat(),
        }
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        match p.pos.as_slice() {
            [] => tail(p.mm),
            [q] if self.u.contains(nat0(q)) => ExactSpectrum::only_inf(),
            [_] => tail(p.mm),
            _ => ExactSpectrum::empty(),
        }
    }
    fn model_check(&self, size: Card, t: &BTreeSet<PredicateId>) -> bool {
        at_most_one(t, "P") && t.iter().all(|q| !self.u.contains(nat0(q)) || size == Card::Aleph0)
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        nat_preds("P", 1..=6)
    }
}

/// `P → ψ=1`, `¬P` forces an infinite model.
#[derive(Debug, Clone, Default)]
pub struct TCs;

impl TCs {
    fn spectrum(p: &Parts) -> ExactSpectrum {
        let one = if p.mm == 1 { ExactSpectrum::finite(EvPeriodicSet::finite(&[1])) } else { ExactSpectrum::empty() };
        if !p.pos.is_empty() {
            one
        } else if !p.neg.is_empty() {
            ExactSpectrum::only_inf()
        } else {
            one.union(&ExactSpectrum::only_inf())
        }
    }
}

impl Theory for TCs {
    fn name(&self) -> String {
        "T_cs".into()
    }
    fn signature(&self) -> Signature {
        Signature::of(&[("P", 0)])
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::Cs])
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        known(Self::spectrum(p))
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        Self::spectrum(p)
    }
    fn model_check(&self, size: Card, t: &BTreeSet<PredicateId>) -> bool {
        if t.is_empty() {
            size == Card::Aleph0
        } else {
            size == Card::Finite(1)
        }
    }
    fn always_closure(&self) -> Vec<PredicateId> {
        vec![PredicateId::bare("P")]
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        vec![PredicateId::bare("P")]
    }
}

/// `P → ψ=n`, `¬P → ψ≥n`.
#[derive(Debug, Clone)]
pub struct TNs {
    n: u64,
}

impl TNs {
    pub fn new(n: u64) -> Result<Self> {
        check_n(n, "n")?;
        Ok(TNs { n })
    }

    fn spectrum(&self, p: &Parts) -> ExactSpectrum {
        if p.pos.is_empty() {
            tail(p.mm.max(self.n))
        } else {
            single(self.n, p.mm)
        }
    }
}

impl Theory for TNs {
    fn name(&self) -> String {
        format!("T_ns({})", self.n)
    }
    fn signature(&self) -> Signature {
        Signature::of(&[("P", 0)])
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::NShiny(NSet::At(self.n))])
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        known(self.spectrum(p))
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        self.spectrum(p)
    }
    fn model_check(&self, size: Card, t: &BTreeSet<PredicateId>) -> bool {
        if t.is_empty() {
            is_finite_at_least(size, self.n)
        } else {
            size == Card::Finite(self.n)
        }
    }
    fn always_closure(&self) -> Vec<PredicateId> {
        vec![PredicateId::bare("P")]
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        vec![PredicateId::bare("P")]
    }
}

/// `P_n → ψ≥F(n)` (no exclusivity): smooth with computable spectra, minimal models withheld.
#[derive(Debug, Clone)]
pub struct TGeqF {
    f: Arc<dyn FOracle>,
}

impl TGeqF {
    pub fn new(f: Arc<dyn FOracle>) -> Self {
        TGeqF { f }
    }
}

impl Theory for TGeqF {
    fn name(&self) -> String {
        "T_geq_F".into()
    }
    fn signature(&self) -> Signature {
        family_p()
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::SmCs])
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        if p.pos.is_empty() {
            return known(tail(p.mm));
        }
        let (f, mm) = (self.f.clone(), p.mm);
        let idx: Vec<u64> = p.pos.iter().map(nat0).collect();
        ActualSpec::partial(
            true,
            Box::new(move |j| Some(j >= mm && idx.iter().all(|&i| !f.geq(i, j + 1)))),
            Some(true),
            None,
        )
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        let mut lo = Card::Finite(p.mm);
        for q in &p.pos {
            lo = lo.max(f_value(self.f.as_ref(), nat0(q)));
        }
        match lo {
            Card::Finite(k) => tail(k),
            Card::Aleph0 => ExactSpectrum::only_inf(),
        }
    }
    fn model_check(&self, size: Card, t: &BTreeSet<PredicateId>) -> bool {
        t.iter().all(|q| size >= f_value(self.f.as_ref(), nat0(q)))
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        nat_preds("P", 1..=6)
    }
}

/// `Q → ψ=4`, `¬Q → ψ≥3`: the small inner theory for `Th_of`.
#[derive(Debug, Clone, Default)]
pub struct ToyQ;

impl ToyQ {
    fn spectrum(p: &Parts) -> ExactSpectrum {
        if p.pos.is_empty() {
            tail(p.mm.max(3))
        } else {
            single(4, p.mm)
        }
    }
}

impl Theory for ToyQ {
    fn name(&self) -> String {
        "toy_Q".into()
    }
    fn signature(&self) -> Signature {
        Signature::of(&[("Q", 0)])
    }
    fn certificate(&self) -> PropertyCertificate {
        cert(&[Flag::Gentle])
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        known(Self::spectrum(p))
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        Self::spectrum(p)
    }
    fn model_check(&self, size: Card, t: &BTreeSet<PredicateId>) -> bool {
        if t.is_empty() {
            is_finite_at_least(size, 3)
        } else {
            size == Card::Finite(4)
        }
    }
    fn always_closure(&self) -> Vec<PredicateId> {
        vec![PredicateId::bare("Q")]
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        vec![PredicateId::bare("Q")]
    }
}
