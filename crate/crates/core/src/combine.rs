//! The combination shell: DNF, split by signature, arrange shared variables,
//! then ask a method whether the two spectra meet.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classify::certificate::{Flag, NSet};
use crate::classify::filters::Filter;
use crate::error::{Error, Result};
use crate::formulas::{arrangement_to_cube, enumerate_arrangements, split_by_signature, to_dnf, Cube, Formula, Var};
use crate::sets::Card;
use crate::spectra::{NShinyShape, SpectrumView, DEFAULT_CAP};
use crate::theories::TheoryHandle;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method {
    Shiny,
    NelsonOppen,
    Gentle,
    Smcs,
    Cs,
    NShiny(u64),
    QuasiGentle(Filter),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Shiny => f.write_str("shiny"),
            Method::NelsonOppen => f.write_str("nelson-oppen"),
            Method::Gentle => f.write_str("gentle"),
            Method::Smcs => f.write_str("smcs"),
            Method::Cs => f.write_str("cs"),
            Method::NShiny(n) => write!(f, "n-shiny({n})"),
            Method::QuasiGentle(flt) => write!(f, "quasi-gentle({})", flt.id()),
        }
    }
}

impl Method {
    /// Parses `shiny`, `no`/`nelson-oppen`, `gentle`, `smcs`, `cs`, `nshiny:<n>`, `qg`/`qg:frechet`, `qg:bitzero:1,2`.
    pub fn parse(s: &str) -> Result<Method> {
        let bad = || Error::InvalidParameter(format!("unknown method `{s}`"));
        Ok(match s {
            "shiny" => Method::Shiny,
            "no" | "nelson-oppen" | "nelsonoppen" => Method::NelsonOppen,
            "gentle" => Method::Gentle,
            "smcs" | "sm+cs" => Method::Smcs,
            "cs" => Method::Cs,
            "qg" | "qg:frechet" | "quasi-gentle" => Method::QuasiGentle(Filter::Frechet),
            _ => {
                if let Some(n) = s.strip_prefix("nshiny:").or_else(|| s.strip_prefix("n-shiny:")) {
                    Method::NShiny(n.parse().map_err(|_| bad())?)
                } else if let Some(ix) = s.strip_prefix("qg:bitzero:") {
                    let ix: std::result::Result<Vec<u32>, _> = ix.split(',').map(str::parse).collect();
                    Method::QuasiGentle(Filter::bitzero(&ix.map_err(|_| bad())?))
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

/// Hypotheses of `m` on the ordered pair, or a list of what is missing.
pub fn check_hypotheses(m: &Method, t1: &TheoryHandle, t2: &TheoryHandle) -> std::result::Result<(), String> {
    let (c1, c2) = (t1.certificate(), t2.certificate());
    let mut missing = Vec::new();
    let mut need = |t: &TheoryHandle, ok: bool, what: String| {
        if !ok {
            missing.push(format!("{} is not {what}", t.name()));
        }
    };
    match m {
        Method::Shiny => need(t1, c1.has(&Flag::Shiny), "shiny".into()),
        Method::NelsonOppen => {
            need(t1, c1.has(&Flag::Si), "SI".into());
            need(t2, c2.has(&Flag::Si), "SI".into());
        }
        Method::Gentle => {
            need(t1, c1.has(&Flag::Gentle), "gentle".into());
            need(t2, c2.has(&Flag::Cfs), "CFS".into());
        }
        Method::Smcs => {
            need(t1, c1.has(&Flag::SmCs), "SM+CS".into());
            need(t2, c2.has(&Flag::Id), "ID".into());
        }
        Method::Cs => {
            need(t1, c1.has(&Flag::Cs), "CS".into());
            need(t2, c2.has(&Flag::Cs), "CS".into());
        }
        Method::NShiny(n) => {
            need(t1, c1.has(&Flag::NShiny(NSet::At(*n))), format!("{n}-shiny"));
            need(t2, c2.has(&Flag::NDecidable(NSet::At(*n))), format!("{n}-decidable"));
        }
        Method::QuasiGentle(flt) => {
            need(t1, t1.qg(flt).0, format!("{}-QG", flt.id()));
            need(t2, t2.qg(flt).1, format!("co-{}-QG", flt.id()));
        }
    }
    if missing.is_empty() {
        Ok(())
    } else {
        Err(missing.join("; "))
    }
}

pub fn method_applicable(m: &Method, t1: &TheoryHandle, t2: &TheoryHandle) -> bool {
    check_hypotheses(m, t1, t2).is_ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub arrangement: Vec<Vec<Var>>,
    /// A cardinality in both spectra, when the method pins one down.
    pub card: Option<Card>,
    pub cube: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub cubes: u64,
    pub arrangements_tried: u64,
    pub loop_iterations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationVerdict {
    pub sat: bool,
    pub method: String,
    /// `"T1,T2"` names in the order the method was applied.
    pub order: String,
    pub witness: Option<Witness>,
    pub stats: Stats,
}

#[derive(Debug, Clone)]
pub struct CombineOptions {
    pub cap: u64,
    /// Run the method even when the certificates do not meet its hypotheses.
    pub override_hypotheses: bool,
}

impl Default for CombineOptions {
    fn default() -> Self {
        CombineOptions { cap: DEFAULT_CAP, override_hypotheses: false }
    }
}

/// Methods in auto-selection order; `NShiny` and `QuasiGentle` are instantiated from the pair.
pub fn auto_candidates(t1: &TheoryHandle, t2: &TheoryHandle) -> Vec<Method> {
    let mut ns: Vec<u64> = Vec::new();
    for t in [t1, t2] {
        for f in t.certificate().flags() {
            if let Flag::NShiny(NSet::At(n)) = f {
                ns.push(*n);
            }
        }
    }
    ns.sort_unstable();
    ns.dedup();
    let mut out = vec![Method::NelsonOppen, Method::Gentle, Method::Cs, Method::Smcs];
    out.extend(ns.into_iter().map(Method::NShiny));
    out.push(Method::QuasiGentle(Filter::Frechet));
    out.push(Method::Shiny);
    out
}

/// Picks the order (and for `None`, the method). `swapped` means `(t2, t1)`.
pub fn select(method: Option<&Method>, t1: &TheoryHandle, t2: &TheoryHandle, opts: &CombineOptions) -> Result<(Method, bool)> {
    match method {
        Some(m) => {
            let fwd = check_hypotheses(m, t1, t2);
            if fwd.is_ok() {
                return Ok((m.clone(), false));
            }
            let bwd = check_hypotheses(m, t2, t1);
            if bwd.is_ok() {
                return Ok((m.clone(), true));
            }
            if opts.override_hypotheses {
                return Ok((m.clone(), false));
            }
            Err(Error::MethodNotApplicable {
                method: m.to_string(),
                reason: format!(
                    "as ({}, {}): {}; as ({}, {}): {}",
                    t1.name(),
                    t2.name(),
                    fwd.unwrap_err(),
                    t2.name(),
                    t1.name(),
                    bwd.unwrap_err()
                ),
            })
        }
        None => {
            for m in auto_candidates(t1, t2) {
                if method_applicable(&m, t1, t2) {
                    return Ok((m, false));
                }
                if method_applicable(&m, t2, t1) {
                    return Ok((m, true));
                }
            }
            Err(Error::MethodNotApplicable {
                method: "auto".into(),
                reason: format!("no method applies to {} and {}", t1.name(), t2.name()),
            })
        }
    }
}

/// Decide `f` over the disjoint union of `t1` and `t2`.
pub fn combine_decide(
    t1: &TheoryHandle,
    t2: &TheoryHandle,
    f: &Formula,
    method: Option<&Method>,
    opts: &CombineOptions,
) -> Result<CombinationVerdict> {
    if !t1.signature().is_disjoint(&t2.signature()) {
        return Err(Error::SignatureOverlap(t1.name(), t2.name()));
    }
    let (m, swapped) = select(method, t1, t2, opts)?;
    let (a, b) = if swapped { (t2, t1) } else { (t1, t2) };
    let mut stats = Stats::default();
    let order = format!("{},{}", a.name(), b.name());
    for cube in to_dnf(f) {
        stats.cubes += 1;
        let (c1, c2, shared) = split_by_signature(&cube, &a.signature(), &b.signature())?;
        for arr in enumerate_arrangements(&shared) {
            stats.arrangements_tried += 1;
            let delta = arrangement_to_cube(&arr);
            let (d1, d2) = (c1.and(&delta), c2.and(&delta));
            let v1 = SpectrumView::new(a, d1).with_cap(opts.cap);
            let v2 = SpectrumView::new(b, d2).with_cap(opts.cap);
            let (meet, card) = intersect(&m, &v1, &v2, opts.cap, &mut stats.loop_iterations)?;
            if meet {
                return Ok(CombinationVerdict {
                    sat: true,
                    method: m.to_string(),
                    order,
                    witness: Some(Witness { arrangement: arr.blocks, card, cube: cube.to_string() }),
                    stats,
                });
            }
        }
    }
    Ok(CombinationVerdict { sat: false, method: m.to_string(), order, witness: None, stats })
}

/// Method-specific emptiness test for `Spec(v1) ∩ Spec(v2)`.
pub fn intersect(
    m: &Method,
    v1: &SpectrumView,
    v2: &SpectrumView,
    cap: u64,
    iters: &mut u64,
) -> Result<(bool, Option<Card>)> {
    match m {
        Method::Shiny => intersect_shiny(v1, v2),
        Method::NelsonOppen => Ok((v1.is_sat()? && v2.is_sat()?, None)),
        Method::Gentle => intersect_gentle(v1, v2),
        Method::Smcs => intersect_smcs(v1, v2, iters),
        Method::Cs => intersect_cs(v1, v2, iters),
        Method::NShiny(n) => intersect_nshiny(v1, v2, *n),
        Method::QuasiGentle(_) => intersect_quasigentle(v1, v2, cap, iters),
    }
}

pub fn intersect_shiny(v1: &SpectrumView, v2: &SpectrumView) -> Result<(bool, Option<Card>)> {
    if !v1.is_sat()? {
        return Ok((false, None));
    }
    match v1.minmod()? {
        Some(Card::Finite(k)) => Ok((v2.sat_with_clique(k)?, None)),
        Some(Card::Aleph0) => Ok((v2.spec_contains(Card::Aleph0)?, Some(Card::Aleph0))),
        None => Ok((false, None)),
    }
}

pub fn intersect_smcs(v1: &SpectrumView, v2: &SpectrumView, iters: &mut u64) -> Result<(bool, Option<Card>)> {
    if v2.spec_contains(Card::Aleph0)? {
        // smoothness puts ℵ0 in Spec(v1) as soon as it is nonempty
        let sat = v1.is_sat()?;
        return Ok((sat, sat.then_some(Card::Aleph0)));
    }
    let (k, it) = v2.max_finite()?;
    *iters += it;
    match k {
        Some(k) if k >= 1 => {
            let hit = v1.spec_contains(Card::Finite(k))?;
            Ok((hit, hit.then_some(Card::Finite(k))))
        }
        _ => Ok((false, None)),
    }
}

pub fn intersect_cs(v1: &SpectrumView, v2: &SpectrumView, iters: &mut u64) -> Result<(bool, Option<Card>)> {
    let inf1 = v1.spec_contains(Card::Aleph0)?;
    if inf1 && v2.spec_contains(Card::Aleph0)? {
        return Ok((true, Some(Card::Aleph0)));
    }
    // bound the search by the side without infinite models
    let bounded = if !inf1 { v1 } else { v2 };
    let (k, it) = bounded.max_finite()?;
    *iters += it;
    for n in 1..=k.unwrap_or(0) {
        if v1.spec_contains(Card::Finite(n))? && v2.spec_contains(Card::Finite(n))? {
            return Ok((true, Some(Card::Finite(n))));
        }
    }
    Ok((false, None))
}

pub fn intersect_nshiny(v1: &SpectrumView, v2: &SpectrumView, n: u64) -> Result<(bool, Option<Card>)> {
    if v1.spec_contains(Card::Finite(n))? && v2.spec_contains(Card::Finite(n))? {
        return Ok((true, Some(Card::Finite(n))));
    }
    if !v1.is_sat()? {
        return Ok((false, None));
    }
    match v1.nshiny_shape(n)? {
        // {n} alone and n already failed
        None | Some(NShinyShape::Only) => Ok((false, None)),
        Some(NShinyShape::WithTail(k)) | Some(NShinyShape::Tail(k)) => Ok((v2.sat_with_clique(k)?, None)),
    }
}

pub fn intersect_gentle(v1: &SpectrumView, v2: &SpectrumView) -> Result<(bool, Option<Card>)> {
    let es = v1.exact_spectrum()?;
    if !es.has_inf {
        let max = es.finite_part.max_element().unwrap_or(0);
        for n in es.members_upto(max) {
            if v2.spec_contains(Card::Finite(n))? {
                return Ok((true, Some(Card::Finite(n))));
            }
        }
        return Ok((false, None));
    }
    let k = es.finite_part.complement().max_element().unwrap_or(0);
    for n in es.members_upto(k) {
        if v2.spec_contains(Card::Finite(n))? {
            return Ok((true, Some(Card::Finite(n))));
        }
    }
    Ok((v2.sat_with_clique(k + 1)?, None))
}

pub fn intersect_quasigentle(
    v1: &SpectrumView,
    v2: &SpectrumView,
    cap: u64,
    iters: &mut u64,
) -> Result<(bool, Option<Card>)> {
    let mut n = 1;
    while v1.sat_with_clique(n)? && v2.sat_with_clique(n)? {
        *iters += 1;
        if v1.spec_contains(Card::Finite(n))? && v2.spec_contains(Card::Finite(n))? {
            return Ok((true, Some(Card::Finite(n))));
        }
        n += 1;
        if n > cap {
            return Err(Error::IterationCapExceeded(cap));
        }
    }
    Ok((false, None))
}

/// Convenience for callers holding a cube pair rather than a formula.
pub fn intersect_cubes(m: &Method, t1: &TheoryHandle, c1: &Cube, t2: &TheoryHandle, c2: &Cube, cap: u64) -> Result<bool> {
    let v1 = SpectrumView::new(t1, c1.clone()).with_cap(cap);
    let v2 = SpectrumView::new(t2, c2.clone()).with_cap(cap);
    let mut it = 0;
    Ok(intersect(m, &v1, &v2, cap, &mut it)?.0)
}
