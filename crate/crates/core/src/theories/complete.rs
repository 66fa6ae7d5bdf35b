//! Single theories that play several test theories at once, one predicate
//! family per role, with positive literals of different families exclusive.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::catalog::{gt_actual, gt_standin, le_f_actual, le_f_standin, tmn_actual, tmn_standin};
use super::{f_value, single, tail, FOracle, ActualSpec, Parts, Theory};
use crate::classify::certificate::{Flag, NSet, PropertyCertificate};
use crate::error::{Error, Result};
use crate::formulas::{Index, PredicateId, Signature};
use crate::sets::{Card, EvPeriodicSet};
use crate::spectra::ExactSpectrum;

/// The axiom schema attached to one predicate family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    /// `P_n → ψ=n`; with `P_{aleph0}` asserting an infinite domain when allowed.
    Exact { with_inf: bool },
    /// `Q_n → ψ≤F(n)`, exclusive.
    AtMostF,
    /// `R_{m,n,k} → ψ=m ∨ ψ=n`, and `ψ=n` when `k ∈ U`; exclusive; `m ≠ skip`.
    SizesMN { skip: Option<u64> },
    /// `P_{n,k} → ψ≥n+1` when `k ∈ U`; exclusive.
    Above,
}

impl Role {
    fn arity(self) -> usize {
        match self {
            Role::Exact { .. } | Role::AtMostF => 1,
            Role::SizesMN { .. } => 3,
            Role::Above => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompleteKind {
    Shiny,
    Si,
    Id,
    Cs,
    NDecidable(u64),
}

#[derive(Debug, Clone)]
pub struct CompleteTheory {
    kind: CompleteKind,
    families: Vec<(&'static str, Role)>,
    f: Arc<dyn FOracle>,
    u: EvPeriodicSet,
}

const ALEPH0: &str = "aleph0";

impl CompleteTheory {
    pub fn new(kind: CompleteKind, f: Arc<dyn FOracle>, u: EvPeriodicSet) -> Result<Self> {
        let families = match kind {
            CompleteKind::Shiny => vec![
                ("P", Role::Exact { with_inf: false }),
                ("Q", Role::AtMostF),
                ("R", Role::SizesMN { skip: None }),
            ],
            CompleteKind::Si => vec![("P", Role::Above)],
            CompleteKind::Id => vec![("P", Role::Exact { with_inf: false }), ("Q", Role::SizesMN { skip: None })],
            CompleteKind::Cs => vec![("P", Role::Exact { with_inf: true })],
            CompleteKind::NDecidable(n) => {
                if n == 0 {
                    return Err(Error::InvalidParameter("n must be positive".into()));
                }
                vec![
                    ("P", Role::Exact { with_inf: false }),
                    ("Q", Role::AtMostF),
                    ("R", Role::SizesMN { skip: Some(n) }),
                ]
            }
        };
        Ok(CompleteTheory { kind, families, f, u })
    }

    fn role(&self, family: &str) -> Option<Role> {
        self.families.iter().find(|(f, _)| *f == family).map(|(_, r)| *r)
    }

    /// The positive literals all come from one family (or none); returns it.
    fn active<'a>(&self, p: &'a Parts) -> std::result::Result<Option<(Role, Vec<&'a PredicateId>)>, ()> {
        let fams: BTreeSet<&str> = p.pos.iter().map(|q| q.family.as_str()).collect();
        match fams.len() {
            0 => Ok(None),
            1 => {
                let fam = *fams.iter().next().expect("one family");
                Ok(Some((self.role(fam).expect("validated family"), p.pos.iter().collect())))
            }
            _ => Err(()),
        }
    }

    fn exact_spectrum(qs: &[&PredicateId], mm: u64) -> ExactSpectrum {
        qs.iter().fold(tail(mm), |acc, q| {
            acc.intersect(&match q.nat(0) {
                Some(k) => single(k, mm),
                None => ExactSpectrum::only_inf(),
            })
        })
    }
}

fn nats(q: &PredicateId) -> Vec<u64> {
    q.indices.iter().filter_map(|i| if let Index::Nat(n) = i { Some(*n) } else { None }).collect()
}

impl Theory for CompleteTheory {
    fn name(&self) -> String {
        match self.kind {
            CompleteKind::Shiny => "shiny_complete".into(),
            CompleteKind::Si => "si_complete".into(),
            CompleteKind::Id => "id_complete".into(),
            CompleteKind::Cs => "cs_complete".into(),
            CompleteKind::NDecidable(n) => format!("ndec_complete({n})"),
        }
    }
    fn signature(&self) -> Signature {
        Signature { families: self.families.iter().map(|(f, r)| (f.to_string(), r.arity())).collect() }
    }
    fn certificate(&self) -> PropertyCertificate {
        let flag = match self.kind {
            CompleteKind::Shiny => Flag::Decidable,
            CompleteKind::Si => Flag::Si,
            CompleteKind::Id => Flag::Id,
            CompleteKind::Cs => Flag::Cs,
            CompleteKind::NDecidable(n) => Flag::NDecidable(NSet::At(n)),
        };
        PropertyCertificate::closure([flag])
    }
    fn valid_indices(&self, p: &PredicateId) -> bool {
        let Some(role) = self.role(&p.family) else { return false };
        let ns = nats(p);
        match role {
            Role::Exact { with_inf } => match p.indices.as_slice() {
                [Index::Nat(n)] => *n >= 1,
                [Index::Sym(s)] => with_inf && s == ALEPH0,
                _ => false,
            },
            Role::AtMostF => ns.len() == 1 && ns[0] >= 1,
            Role::Above => ns.len() == 2 && ns.iter().all(|&n| n >= 1),
            Role::SizesMN { skip } => {
                ns.len() == 3 && ns[0] >= 1 && ns[0] < ns[1] && ns[2] >= 1 && skip != Some(ns[0])
            }
        }
    }
    fn actual(&self, p: &Parts) -> ActualSpec {
        let (role, qs) = match self.active(p) {
            Err(()) => return ActualSpec::unsat(),
            Ok(None) => return ActualSpec::known(tail(p.mm)),
            Ok(Some(x)) => x,
        };
        if let Role::Exact { .. } = role {
            return ActualSpec::known(Self::exact_spectrum(&qs, p.mm));
        }
        if qs.len() > 1 {
            return ActualSpec::unsat();
        }
        let ns = nats(qs[0]);
        match role {
            Role::AtMostF => le_f_actual(&self.f, &EvPeriodicSet::all(), ns[0], p.mm),
            Role::SizesMN { .. } => tmn_actual(ns[0], ns[1], p.mm, true),
            Role::Above => gt_actual(ns[0], p.mm, true),
            Role::Exact { .. } => unreachable!(),
        }
    }
    fn standin(&self, p: &Parts) -> ExactSpectrum {
        let (role, qs) = match self.active(p) {
            Err(()) => return ExactSpectrum::empty(),
            Ok(None) => return tail(p.mm),
            Ok(Some(x)) => x,
        };
        if let Role::Exact { .. } = role {
            return Self::exact_spectrum(&qs, p.mm);
        }
        if qs.len() > 1 {
            return ExactSpectrum::empty();
        }
        let ns = nats(qs[0]);
        match role {
            Role::AtMostF => le_f_standin(self.f.as_ref(), &EvPeriodicSet::all(), ns[0], p.mm),
            Role::SizesMN { .. } => tmn_standin(ns[0], ns[1], p.mm, self.u.contains(ns[2])),
            Role::Above => gt_standin(ns[0], p.mm, self.u.contains(ns[1])),
            Role::Exact { .. } => unreachable!(),
        }
    }
    fn model_check(&self, size: Card, t: &BTreeSet<PredicateId>) -> bool {
        let fams: BTreeSet<&str> = t.iter().map(|q| q.family.as_str()).collect();
        if fams.len() > 1 {
            return false;
        }
        let Some(fam) = fams.into_iter().next() else { return true };
        let Some(role) = self.role(fam) else { return false };
        if !matches!(role, Role::Exact { .. }) && t.len() > 1 {
            return false;
        }
        t.iter().all(|q| {
            let ns = nats(q);
            match role {
                Role::Exact { .. } => match q.nat(0) {
                    Some(k) => size == Card::Finite(k),
                    None => size == Card::Aleph0,
                },
                Role::AtMostF => size <= f_value(self.f.as_ref(), ns[0]),
                Role::SizesMN { .. } => {
                    let (m, n) = (Card::Finite(ns[0]), Card::Finite(ns[1]));
                    (size == m || size == n) && (!self.u.contains(ns[2]) || size == n)
                }
                Role::Above => !self.u.contains(ns[1]) || size >= Card::Finite(ns[0] + 1),
            }
        })
    }
    fn sample_preds(&self) -> Vec<PredicateId> {
        let mut out = Vec::new();
        for (fam, role) in &self.families {
            match role {
                Role::Exact { with_inf } => {
                    out.extend((1..=5).map(|n| PredicateId::indexed(fam, n)));
                    if *with_inf {
                        out.push(PredicateId::new(fam, vec![Index::Sym(ALEPH0.into())]));
                    }
                }
                Role::AtMostF => out.extend((1..=5).map(|n| PredicateId::indexed(fam, n))),
                Role::Above => {
                    for n in 1..=4 {
                        for k in 1..=3 {
                            out.push(PredicateId::nats(fam, &[n, k]));
                        }
                    }
                }
                Role::SizesMN { skip } => {
                    for m in 1..=4 {
                        for n in m + 1..=5 {
                            if *skip == Some(m) {
                                continue;
                            }
                            for k in 1..=2 {
                                out.push(PredicateId::nats(fam, &[m, n, k]));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}
