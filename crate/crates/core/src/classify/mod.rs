//! Sampled property probes, the inclusion lattice with separating theories,
//! the test-theory membership table and the bitzero filter chains.

pub mod certificate;
pub mod filters;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{neq_clique, Cube, Literal, Var};
use crate::gen::{random_cube_from, seeded, GenConfig};
use crate::sets::{Card, EvPeriodicSet};
use crate::spectra::{ExactSpectrum, NShinyShape};
use crate::theories::*;
use certificate::{lattice_edges, FilterId, Flag, NSet, PropertyCertificate};
use filters::{Filter, Membership};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    /// Shape evidence on samples for a property no finite test settles.
    ProbePass,
    Fail,
    Unknown,
    /// Holds for the stand-in; the real theory needs U or F to answer.
    Withheld,
}

impl Verdict {
    pub fn passed(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::ProbePass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub theory: String,
    pub flag: String,
    pub verdict: Verdict,
    pub evidence: String,
}

#[derive(Debug, Clone)]
pub struct ProbeConfig {
    pub samples: usize,
    pub max_card: u64,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { samples: 200, max_card: 6, seed: 0 }
    }
}

/// Everything the probes read about one cube.
struct Sample {
    cube: Cube,
    sat: bool,
    finite: Vec<Result<bool>>,
    inf: Result<bool>,
    minmod: Result<Option<Card>>,
    exact: Result<ExactSpectrum>,
    standin: ExactSpectrum,
}

/// Probe evidence for one theory, reusable across flags.
pub struct ProbeData {
    theory: TheoryHandle,
    max_card: u64,
    samples: Vec<Sample>,
}

fn gen_vars() -> Vec<Var> {
    crate::gen::GEN_VARS.iter().map(|v| v.to_string()).collect()
}

impl ProbeData {
    pub fn collect(t: &TheoryHandle, cfg: &ProbeConfig) -> Result<ProbeData> {
        let preds = t.probe_preds();
        let mut cubes = vec![Cube::top()];
        for p in &preds {
            cubes.push(Cube::new([Literal::pos(p.clone())]));
            cubes.push(Cube::new([Literal::neg(p.clone())]));
        }
        cubes.push(neq_clique(&gen_vars(), 4)?);
        let mut rng = seeded(cfg.seed);
        let gcfg = GenConfig::default();
        while cubes.len() < cfg.samples.max(1) + 2 * preds.len() + 2 {
            cubes.push(random_cube_from(&preds, &mut rng, &gcfg));
        }
        let mut samples = Vec::with_capacity(cubes.len());
        for cube in cubes {
            let sat = t.decide(&cube)?;
            samples.push(Sample {
                finite: (1..=cfg.max_card).map(|k| t.spec_finite(&cube, k)).collect(),
                inf: t.spec_inf(&cube),
                minmod: t.minmod(&cube),
                exact: t.exact(&cube),
                standin: t.standin_spectrum(&cube)?,
                sat,
                cube,
            });
        }
        Ok(ProbeData { theory: t.clone(), max_card: cfg.max_card, samples })
    }

    fn sat(&self) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(|s| s.sat)
    }

    fn withheld<F: Fn(&Sample) -> bool>(&self, what: &str, answered: F) -> Option<String> {
        self.samples.iter().find(|s| !answered(s)).map(|s| format!("{what} withheld for {}", s.cube))
    }

    fn cap_cfs(&self) -> Option<String> {
        self.withheld("finite membership", |s| s.finite.iter().all(|r| r.is_ok()))
    }

    fn cap_ndec(&self, n: u64) -> Option<String> {
        if n == 0 || n > self.max_card {
            return Some(format!("size {n} lies outside the probe window"));
        }
        self.withheld(&format!("membership of {n}"), |s| s.finite[(n - 1) as usize].is_ok())
    }

    fn cap_id(&self) -> Option<String> {
        self.withheld("membership of aleph0", |s| s.inf.is_ok())
    }

    fn cap_minmod(&self) -> Option<String> {
        self.withheld("minimal model", |s| !s.sat || s.minmod.is_ok())
    }

    /// First satisfiable cube whose stand-in spectrum violates `ok`.
    fn violation<F: Fn(&ExactSpectrum) -> bool>(&self, what: &str, ok: F) -> Option<String> {
        self.sat()
            .find(|s| !ok(&s.standin))
            .map(|s| format!("{what} fails on {}: spectrum {}", s.cube, show_spectrum(&s.standin)))
    }

    fn smooth_shape(&self) -> Option<String> {
        let k = self.max_card;
        self.violation("upward closure", |sp| {
            let inside: Vec<u64> = sp.members_upto(k);
            sp.has_inf && inside.first().is_none_or(|&lo| inside.len() as u64 == k - lo + 1)
        })
    }

    /// Runs the probe for `flag`; `filter` instantiates the QG flags.
    pub fn probe(&self, flag: &Flag, filter: &Filter) -> ProbeReport {
        let (verdict, evidence) = self.judge(flag, filter);
        ProbeReport { theory: self.theory.name(), flag: flag.to_string(), verdict, evidence }
    }

    fn judge(&self, flag: &Flag, filter: &Filter) -> (Verdict, String) {
        let combine = |shapes: Vec<Option<String>>, caps: Vec<Option<String>>, ok: Verdict| -> (Verdict, String) {
            if let Some(e) = shapes.into_iter().flatten().next() {
                return (Verdict::Fail, e);
            }
            if let Some(e) = caps.into_iter().flatten().next() {
                return (Verdict::Withheld, e);
            }
            (ok, format!("{} samples", self.samples.len()))
        };
        let cs = || self.cap_cfs().or_else(|| self.cap_id());
        match flag {
            Flag::Decidable => (Verdict::Pass, format!("{} samples decided", self.samples.len())),
            Flag::NDecidable(NSet::At(n)) => combine(vec![], vec![self.cap_ndec(*n)], Verdict::Pass),
            Flag::Cfs => combine(vec![], vec![self.cap_cfs()], Verdict::Pass),
            Flag::Id => combine(vec![], vec![self.cap_id()], Verdict::Pass),
            Flag::Cs => combine(vec![], vec![cs()], Verdict::Pass),
            Flag::Si => combine(vec![self.violation("infinite model", |sp| sp.has_inf)], vec![self.cap_id()], Verdict::Pass),
            Flag::Smooth => combine(vec![self.smooth_shape()], vec![], Verdict::ProbePass),
            Flag::Fmp => combine(vec![self.violation("finite model", |sp| !sp.finite_part.is_empty())], vec![], Verdict::Pass),
            Flag::MinmodComputable => combine(vec![], vec![self.cap_minmod()], Verdict::Pass),
            Flag::SmCs => combine(vec![self.smooth_shape()], vec![cs()], Verdict::ProbePass),
            Flag::Polite => combine(
                vec![self.smooth_shape(), self.violation("finite model", |sp| !sp.finite_part.is_empty())],
                vec![self.cap_id()],
                Verdict::ProbePass,
            ),
            Flag::Shiny => combine(
                vec![self.smooth_shape(), self.violation("finite model", |sp| !sp.finite_part.is_empty())],
                vec![self.cap_minmod(), cs()],
                Verdict::ProbePass,
            ),
            Flag::Gentle => self.judge_gentle(None, &combine, cs()),
            Flag::NShiny(NSet::At(n)) => self.judge_gentle(Some(*n), &combine, cs()),
            Flag::Fqg(_) | Flag::CoFqg(_) => {
                let co = matches!(flag, Flag::CoFqg(_));
                let unknown = std::cell::RefCell::new(None);
                let shape = self.violation(if co { "co-filter shape" } else { "filter shape" }, |sp| {
                    if !sp.has_inf {
                        return sp.finite_part.is_finite();
                    }
                    let target = if co { sp.finite_part.complement() } else { sp.finite_part.clone() };
                    match filter.member(&target, usize::MAX) {
                        Membership::Yes { .. } => !co,
                        Membership::No => co,
                        Membership::Unknown => {
                            *unknown.borrow_mut() = Some(target.to_string());
                            true
                        }
                    }
                });
                if shape.is_none() {
                    if let Some(t) = unknown.into_inner() {
                        return (Verdict::Unknown, format!("membership of {t} undetermined"));
                    }
                }
                combine(vec![shape], vec![self.cap_cfs()], Verdict::Pass)
            }
            Flag::NDecidable(s) | Flag::NShiny(s) => (Verdict::Unknown, format!("no finite probe for the family {s}")),
        }
    }

    fn judge_gentle(
        &self,
        n: Option<u64>,
        combine: &dyn Fn(Vec<Option<String>>, Vec<Option<String>>, Verdict) -> (Verdict, String),
        cs: Option<String>,
    ) -> (Verdict, String) {
        let shape = match n {
            None => self.violation("finite-or-cofinite shape", ExactSpectrum::is_gentle_shape),
            Some(n) => self.violation(&format!("{n}-shiny shape"), |sp| NShinyShape::classify(sp, n).is_some()),
        };
        let (v, e) = combine(vec![shape], vec![cs], Verdict::Pass);
        if v != Verdict::Pass {
            return (v, e);
        }
        match self.samples.iter().find(|s| s.exact.is_err()) {
            Some(s) => (Verdict::Unknown, format!("spectra computable but no explicit form for {}", s.cube)),
            None => (v, e),
        }
    }
}

fn show_spectrum(sp: &ExactSpectrum) -> String {
    if sp.has_inf {
        format!("{} + aleph0", sp.finite_part)
    } else {
        sp.finite_part.to_string()
    }
}

/// Probes every flag the certificate claims (instantiated at `n` and `filter` where parametric).
pub fn probe_certificate(t: &TheoryHandle, cfg: &ProbeConfig, n: u64, filter: &Filter) -> Result<Vec<ProbeReport>> {
    let data = ProbeData::collect(t, cfg)?;
    let nodes = lattice_nodes(n, filter);
    let mut out = Vec::new();
    for node in &nodes {
        if holds(t, node, filter) {
            out.push(data.probe(node, filter));
        }
    }
    for extra in [Flag::Smooth, Flag::Fmp, Flag::MinmodComputable, Flag::Polite] {
        if t.certificate().has(&extra) {
            out.push(data.probe(&extra, filter));
        }
    }
    Ok(out)
}

/// The twelve classes of the lattice with `n` and the filter fixed.
pub fn lattice_nodes(n: u64, filter: &Filter) -> Vec<Flag> {
    let fid = filter.id();
    vec![
        Flag::Decidable,
        Flag::NDecidable(NSet::At(n)),
        Flag::Cfs,
        Flag::Id,
        Flag::CoFqg(fid.clone()),
        Flag::Cs,
        Flag::Si,
        Flag::Fqg(fid),
        Flag::Gentle,
        Flag::SmCs,
        Flag::NShiny(NSet::At(n)),
        Flag::Shiny,
    ]
}

fn instantiate(f: &Flag, n: u64, fid: &FilterId) -> Flag {
    match f {
        Flag::NDecidable(NSet::Every) => Flag::NDecidable(NSet::At(n)),
        Flag::NShiny(NSet::Every) => Flag::NShiny(NSet::At(n)),
        Flag::Fqg(FilterId::Every) => Flag::Fqg(fid.clone()),
        Flag::CoFqg(FilterId::Every) => Flag::CoFqg(fid.clone()),
        other => other.clone(),
    }
}

/// `(stronger, weaker)` edges at `n` and the filter.
pub fn lattice_edges_at(n: u64, filter: &Filter) -> Vec<(Flag, Flag)> {
    let fid = filter.id();
    lattice_edges().iter().map(|(a, b)| (instantiate(a, n, &fid), instantiate(b, n, &fid))).collect()
}

/// Classes reachable upward from `x`, excluding `x`.
pub fn ancestors(x: &Flag, edges: &[(Flag, Flag)]) -> BTreeSet<Flag> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![x.clone()];
    while let Some(f) = stack.pop() {
        for (a, b) in edges {
            if *a == f && seen.insert(b.clone()) {
                stack.push(b.clone());
            }
        }
    }
    seen
}

/// Class membership by certificate; QG classes go through the theory's filter test.
pub fn holds(t: &TheoryHandle, f: &Flag, filter: &Filter) -> bool {
    match f {
        Flag::Fqg(_) => t.qg(filter).0,
        Flag::CoFqg(_) => t.qg(filter).1,
        other => t.certificate().has(other),
    }
}

/// Strongest classes the theory belongs to.
pub fn placement(t: &TheoryHandle, n: u64, filter: &Filter) -> Vec<Flag> {
    let edges = lattice_edges_at(n, filter);
    let held: Vec<Flag> = lattice_nodes(n, filter).into_iter().filter(|f| holds(t, f, filter)).collect();
    held.iter()
        .filter(|f| !held.iter().any(|g| g != *f && ancestors(g, &edges).contains(f)))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeEdge {
    pub stronger: String,
    pub weaker: String,
    /// A catalog theory in the weaker class and not the stronger one.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub nodes: Vec<String>,
    pub edges: Vec<LatticeEdge>,
    pub placements: BTreeMap<String, Vec<String>>,
    /// Theories whose certificate is not closed under the implications.
    pub inconsistent: BTreeMap<String, String>,
}

impl Lattice {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph lattice {\n  rankdir=BT;\n");
        for n in &self.nodes {
            let _ = writeln!(s, "  \"{n}\";");
        }
        for e in &self.edges {
            match &e.witness {
                Some(w) => {
                    let _ = writeln!(s, "  \"{}\" -> \"{}\" [label=\"{}\"];", e.stronger, e.weaker, w);
                }
                None => {
                    let _ = writeln!(s, "  \"{}\" -> \"{}\";", e.stronger, e.weaker);
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

pub fn build_lattice(catalog: &[TheoryHandle], n: u64, filter: &Filter) -> Lattice {
    let edges = lattice_edges_at(n, filter);
    let mut placements = BTreeMap::new();
    let mut inconsistent = BTreeMap::new();
    for t in catalog {
        placements.insert(t.name(), placement(t, n, filter).iter().map(|f| f.to_string()).collect());
        if let Err(e) = PropertyCertificate::new(t.certificate().flags().cloned()) {
            inconsistent.insert(t.name(), e.to_string());
        }
    }
    let edges = edges
        .iter()
        .map(|(a, b)| {
            let in_b: Vec<&TheoryHandle> = catalog.iter().filter(|t| holds(t, b, filter) && !holds(t, a, filter)).collect();
            // prefer a theory placed exactly at the weaker class
            let witness = in_b
                .iter()
                .find(|t| placement(t, n, filter).contains(b))
                .or(in_b.first())
                .map(|t| t.name());
            LatticeEdge { stronger: a.to_string(), weaker: b.to_string(), witness }
        })
        .collect();
    Lattice {
        nodes: lattice_nodes(n, filter).iter().map(|f| f.to_string()).collect(),
        edges,
        placements,
        inconsistent,
    }
}

/// F stand-in for the separating theories: `ℵ0` on multiples of 3, identity elsewhere.
pub fn separating_f() -> Arc<dyn FOracle> {
    Arc::new(StandinF::InfiniteOn { set: EvPeriodicSet::from_fn(0, 3, |m| m % 3 == 0) })
}

pub fn standin_u() -> EvPeriodicSet {
    EvPeriodicSet::odds()
}

/// The separating theories with their expected class, at lattice parameter `n >= 2`.
pub fn separation_catalog(n: u64) -> Result<Vec<(TheoryHandle, Flag)>> {
    if n < 2 {
        return Err(Error::InvalidParameter("lattice parameter must be at least 2".into()));
    }
    let f = separating_f();
    let u = standin_u();
    Ok(vec![
        (TheoryHandle::new(TD::new(n - 1, f.clone(), u.clone())?), Flag::NDecidable(NSet::At(n))),
        (TheoryHandle::new(TCfs::new(f.clone())), Flag::Cfs),
        (TheoryHandle::new(TMN::new(n, n + 1, u.clone())?), Flag::Id),
        (TheoryHandle::new(TLeqS::new(EvPeriodicSet::evens(), f.clone())?), Flag::CoFqg(FilterId::Frechet)),
        (TheoryHandle::new(TCs), Flag::Cs),
        (TheoryHandle::new(TSi::new(u)), Flag::Si),
        (TheoryHandle::new(TLeqS::new(EvPeriodicSet::all(), f)?), Flag::Fqg(FilterId::Frechet)),
        (TheoryHandle::new(TLeqN::new(n)?), Flag::Gentle),
        (TheoryHandle::new(TInf), Flag::SmCs),
        (TheoryHandle::new(TNs::new(n)?), Flag::NShiny(NSet::At(n))),
        (TheoryHandle::new(TGeqN::new(n)?), Flag::Shiny),
    ])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementCheck {
    pub theory: String,
    pub expected: String,
    pub placed_at: Vec<String>,
    /// Probes of the expected class and everything above it.
    pub own: Vec<ProbeReport>,
    /// Probes of every class not above the expected one.
    pub others: Vec<ProbeReport>,
    /// Non-ancestor classes with no separation claimed.
    pub exempt: Vec<String>,
    pub ok: bool,
}

pub fn separation_report(n: u64, cfg: &ProbeConfig) -> Result<Vec<PlacementCheck>> {
    let filter = Filter::Frechet;
    let edges = lattice_edges_at(n, &filter);
    let nodes = lattice_nodes(n, &filter);
    let mut out = Vec::new();
    for (t, expected) in separation_catalog(n)? {
        let data = ProbeData::collect(&t, cfg)?;
        let up = ancestors(&expected, &edges);
        let placed = placement(&t, n, &filter);
        let mut own = vec![data.probe(&expected, &filter)];
        own.extend(up.iter().map(|f| data.probe(f, &filter)));
        let mut others = Vec::new();
        let mut exempt = Vec::new();
        for node in nodes.iter().filter(|f| **f != expected && !up.contains(f)) {
            if matches!((&expected, node), (Flag::CoFqg(_), Flag::Fqg(_))) {
                exempt.push(node.to_string());
            }
            others.push(data.probe(node, &filter));
        }
        let ok = placed == vec![expected.clone()]
            && own.iter().all(|r| r.verdict.passed())
            && others
                .iter()
                .all(|r| exempt.contains(&r.flag) || matches!(r.verdict, Verdict::Fail | Verdict::Withheld));
        out.push(PlacementCheck {
            theory: t.name(),
            expected: expected.to_string(),
            placed_at: placed.iter().map(|f| f.to_string()).collect(),
            own,
            others,
            exempt,
            ok,
        });
    }
    Ok(out)
}

/// Columns of the test-theory membership table.
pub fn membership_columns() -> Result<Vec<TheoryHandle>> {
    let u = standin_u();
    Ok(vec![
        TheoryHandle::new(TGtNP::new(2, u.clone())?),
        TheoryHandle::new(TEqP),
        TheoryHandle::new(TMN::new(2, 5, u)?),
        TheoryHandle::new(TLeqS::new(EvPeriodicSet::evens(), separating_f())?),
        TheoryHandle::new(TInf),
        TheoryHandle::new(ThOf::new(TheoryHandle::new(ToyQ), None)?),
        TheoryHandle::new(TEqN::new(3)?),
    ])
}

pub fn membership_rows() -> Vec<Flag> {
    vec![Flag::Decidable, Flag::Cfs, Flag::Id, Flag::Si, Flag::Gentle, Flag::SmCs, Flag::Polite]
}

/// Check marks, column by column in `membership_columns` order, listing marked rows.
pub fn membership_marks() -> Vec<Vec<Flag>> {
    use Flag::*;
    vec![
        vec![Decidable, Si, Polite],
        vec![Decidable, Cfs, Id, Gentle],
        vec![Decidable, Id],
        vec![Decidable, Cfs],
        vec![Decidable, Cfs, Id, SmCs],
        vec![Decidable, Cfs],
        vec![Decidable],
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCell {
    pub theory: String,
    pub row: String,
    pub marked: bool,
    pub verdict: Verdict,
    pub evidence: String,
    /// Marked cells must pass; blank cells are informational.
    pub ok: bool,
}

pub fn membership_report(cfg: &ProbeConfig) -> Result<Vec<TableCell>> {
    let mut out = Vec::new();
    for (t, marks) in membership_columns()?.iter().zip(membership_marks()) {
        let data = ProbeData::collect(t, cfg)?;
        for row in membership_rows() {
            let r = data.probe(&row, &Filter::Frechet);
            let marked = marks.contains(&row);
            out.push(TableCell {
                theory: r.theory,
                row: r.flag,
                marked,
                ok: !marked || r.verdict.passed(),
                verdict: r.verdict,
                evidence: r.evidence,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterComparison {
    pub s: Vec<u32>,
    pub t: Vec<u32>,
    /// Verdict on `F_s ⊆ F_t`.
    pub included: Membership,
    pub expected: bool,
    /// For strict inclusions, a generator of `F_t` missing from `F_s`.
    pub separator: Option<u32>,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterDemo {
    pub depth: u32,
    pub comparisons: Vec<FilterComparison>,
    pub chain: Vec<Vec<u32>>,
    pub antichain: Vec<Vec<u32>>,
    pub all_agree: bool,
}

fn compare_filters(s: &[u32], t: &[u32]) -> FilterComparison {
    let (fs, ft) = (Filter::bitzero(s), Filter::bitzero(t));
    let included = fs.is_subfilter_of(&ft, t.len());
    let expected = s.iter().all(|i| t.contains(i));
    let separator = t
        .iter()
        .copied()
        .find(|i| !s.contains(i) && !fs.member(&EvPeriodicSet::bitzero(*i), s.len()).is_yes());
    let agrees = match &included {
        Membership::Yes { .. } => expected,
        Membership::No => !expected,
        Membership::Unknown => false,
    };
    FilterComparison { s: s.to_vec(), t: t.to_vec(), included, expected, separator, agrees }
}

/// Inclusion between bitzero-generated filters against index-set inclusion.
/// All pairs of subsets when `depth <= 5`; otherwise the chain and the singletons.
pub fn filter_chain_demo(depth: u32) -> Result<FilterDemo> {
    if depth == 0 || depth > 12 {
        return Err(Error::InvalidParameter(format!("depth must be in 1..=12, got {depth}")));
    }
    let chain: Vec<Vec<u32>> = (0..=depth).map(|k| (1..=k).collect()).collect();
    let antichain: Vec<Vec<u32>> = (1..=depth).map(|i| vec![i]).collect();
    let family: Vec<Vec<u32>> = if depth <= 5 {
        (0u32..1 << depth).map(|mask| (1..=depth).filter(|i| mask >> (i - 1) & 1 == 1).collect()).collect()
    } else {
        chain.iter().chain(antichain.iter()).cloned().collect()
    };
    let mut comparisons = Vec::new();
    for s in &family {
        for t in &family {
            comparisons.push(compare_filters(s, t));
        }
    }
    let all_agree = comparisons.iter().all(|c| c.agrees);
    Ok(FilterDemo { depth, comparisons, chain, antichain, all_agree })
}
