//! Spectrum queries over a theory and a cube.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{Cube, Literal, Var};
use crate::sets::{Card, EvPeriodicSet};
use crate::theories::TheoryHandle;

pub const DEFAULT_CAP: u64 = 10_000;

/// Materialized spectrum: `finite_part ∪ ({ℵ0} if has_inf)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSpectrum {
    pub finite_part: EvPeriodicSet,
    pub has_inf: bool,
}

impl ExactSpectrum {
    /// Panics when an infinite finite part comes without `ℵ0`: no first-order spectrum looks like that.
    pub fn new(finite_part: EvPeriodicSet, has_inf: bool) -> Self {
        assert!(has_inf || finite_part.is_finite(), "infinite finite part without aleph0");
        ExactSpectrum { finite_part, has_inf }
    }

    pub fn empty() -> Self {
        Self::new(EvPeriodicSet::empty(), false)
    }

    pub fn only_inf() -> Self {
        Self::new(EvPeriodicSet::empty(), true)
    }

    /// `[lo, ℵ0]`
    pub fn upfrom(lo: u64) -> Self {
        Self::new(EvPeriodicSet::upfrom(lo), true)
    }

    pub fn finite(set: EvPeriodicSet) -> Self {
        Self::new(set, false)
    }

    pub fn contains(&self, c: Card) -> bool {
        match c {
            Card::Finite(n) => self.finite_part.contains(n),
            Card::Aleph0 => self.has_inf,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.has_inf && self.finite_part.is_empty()
    }

    pub fn min(&self) -> Option<Card> {
        match self.finite_part.min_element() {
            Some(n) => Some(Card::Finite(n)),
            None if self.has_inf => Some(Card::Aleph0),
            None => None,
        }
    }

    pub fn intersect(&self, other: &ExactSpectrum) -> ExactSpectrum {
        Self::new(self.finite_part.intersect(&other.finite_part), self.has_inf && other.has_inf)
    }

    pub fn union(&self, other: &ExactSpectrum) -> ExactSpectrum {
        Self::new(self.finite_part.union(&other.finite_part), self.has_inf || other.has_inf)
    }

    /// Finite-or-cofinite with `ℵ0` exactly in the cofinite case.
    pub fn is_gentle_shape(&self) -> bool {
        (self.finite_part.is_finite() && !self.has_inf) || (self.finite_part.is_cofinite() && self.has_inf)
    }

    pub fn members_upto(&self, bound: u64) -> Vec<u64> {
        self.finite_part.elements_upto(bound)
    }
}

/// The `(t, k)` pair of an n-shiny spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NShinyShape {
    /// `{n}`
    Only,
    /// `{n} ∪ [k, ℵ0]`
    WithTail(u64),
    /// `[k, ℵ0]`
    Tail(u64),
}

impl NShinyShape {
    pub fn classify(spec: &ExactSpectrum, n: u64) -> Option<NShinyShape> {
        let fp = &spec.finite_part;
        if !spec.has_inf {
            return (*fp == EvPeriodicSet::finite(&[n])).then_some(NShinyShape::Only);
        }
        if !fp.is_cofinite() {
            return None;
        }
        let k = fp.complement().max_element().map_or(1, |m| m + 1);
        let tail = EvPeriodicSet::upfrom(k);
        if *fp == tail {
            Some(NShinyShape::Tail(k))
        } else if *fp == tail.union(&EvPeriodicSet::finite(&[n])) {
            Some(NShinyShape::WithTail(k))
        } else {
            None
        }
    }
}

/// Minimal model size of the equality part of `c` in pure logic, or `None`
/// if it is unsatisfiable. Classes of `=` must be properly colored along `≠`,
/// so this is the chromatic number of the class graph (at least 1).
pub fn minmod_eq(c: &Cube) -> Option<u64> {
    let vars: Vec<Var> = c.vars().into_iter().collect();
    let idx: BTreeMap<&Var, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..vars.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for l in c.literals() {
        if let Literal::Eq(a, b) = l {
            let (ra, rb) = (find(&mut parent, idx[a]), find(&mut parent, idx[b]));
            parent[ra] = rb;
        }
    }
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for l in c.literals() {
        if let Literal::Neq(a, b) = l {
            let (ra, rb) = (find(&mut parent, idx[a]), find(&mut parent, idx[b]));
            if ra == rb {
                return None;
            }
            edges.insert((ra.min(rb), ra.max(rb)));
        }
    }
    let nodes: BTreeSet<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    if nodes.is_empty() {
        return Some(1);
    }
    let nodes: Vec<usize> = nodes.into_iter().collect();
    let pos: BTreeMap<usize, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let mut adj = vec![vec![false; nodes.len()]; nodes.len()];
    for &(a, b) in &edges {
        adj[pos[&a]][pos[&b]] = true;
        adj[pos[&b]][pos[&a]] = true;
    }
    Some(chromatic_number(&adj))
}

fn chromatic_number(adj: &[Vec<bool>]) -> u64 {
    let n = adj.len();
    // connected components are colored independently
    let mut comp = vec![usize::MAX; n];
    let mut best = 1;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut members = vec![s];
        comp[s] = s;
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            for v in 0..n {
                if adj[u][v] && comp[v] == usize::MAX {
                    comp[v] = s;
                    members.push(v);
                }
            }
            i += 1;
        }
        let m = members.len();
        let edge_count = members.iter().map(|&u| members.iter().filter(|&&v| adj[u][v]).count()).sum::<usize>() / 2;
        let chi = if edge_count == m * (m - 1) / 2 {
            m as u64
        } else {
            (1..=m as u64).find(|&k| colorable(adj, &members, k)).unwrap_or(m as u64)
        };
        best = best.max(chi);
    }
    best
}

fn colorable(adj: &[Vec<bool>], members: &[usize], k: u64) -> bool {
    fn go(adj: &[Vec<bool>], members: &[usize], colors: &mut Vec<u64>, k: u64) -> bool {
        let i = colors.len();
        if i == members.len() {
            return true;
        }
        // symmetry: a new vertex may open at most one fresh color
        let used = colors.iter().copied().max().map_or(0, |m| m + 1);
        for c in 0..k.min(used + 1) {
            if (0..i).all(|j| !(adj[members[i]][members[j]] && colors[j] == c)) {
                colors.push(c);
                if go(adj, members, colors, k) {
                    return true;
                }
                colors.pop();
            }
        }
        false
    }
    go(adj, members, &mut Vec::new(), k)
}

/// A theory paired with a cube, answering spectrum questions through the
/// theory's proven procedures only.
#[derive(Clone)]
pub struct SpectrumView<'a> {
    pub theory: &'a TheoryHandle,
    pub cube: Cube,
    pub cap: u64,
}

impl<'a> SpectrumView<'a> {
    pub fn new(theory: &'a TheoryHandle, cube: Cube) -> Self {
        SpectrumView { theory, cube, cap: DEFAULT_CAP }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn is_sat(&self) -> Result<bool> {
        self.theory.decide(&self.cube)
    }

    /// Satisfiability of the cube conjoined with a `k`-clique of fresh variables.
    pub fn sat_with_clique(&self, k: u64) -> Result<bool> {
        self.theory.decide_with_clique(&self.cube, k)
    }

    pub fn spec_contains(&self, c: Card) -> Result<bool> {
        match c {
            Card::Finite(n) => self.theory.spec_finite(&self.cube, n),
            Card::Aleph0 => self.theory.spec_inf(&self.cube),
        }
    }

    /// Largest finite model size, by growing a fresh clique until unsat.
    /// Returns `(max, iterations)`.
    pub fn max_finite(&self) -> Result<(Option<u64>, u64)> {
        if !self.is_sat()? {
            return Ok((None, 0));
        }
        let mut k = 0;
        while self.sat_with_clique(k + 1)? {
            k += 1;
            if k >= self.cap {
                return Err(Error::IterationCapExceeded(k));
            }
        }
        Ok((Some(k), k + 1))
    }

    pub fn minmod(&self) -> Result<Option<Card>> {
        if !self.is_sat()? {
            return Ok(None);
        }
        match self.theory.minmod(&self.cube) {
            Ok(m) => return Ok(m),
            Err(Error::CapabilityMissing { .. }) => {}
            Err(e) => return Err(e),
        }
        for k in 1..=self.cap {
            if self.spec_contains(Card::Finite(k))? {
                return Ok(Some(Card::Finite(k)));
            }
            // sat, yet no model of size <= k and none of size > k
            if !self.sat_with_clique(k + 1)? {
                return Err(Error::InvalidParameter(format!(
                    "{} answered inconsistently on {}",
                    self.theory.name(),
                    self.cube
                )));
            }
        }
        Err(Error::IterationCapExceeded(self.cap))
    }

    pub fn exact_spectrum(&self) -> Result<ExactSpectrum> {
        self.theory.exact(&self.cube)
    }

    pub fn nshiny_shape(&self, n: u64) -> Result<Option<NShinyShape>> {
        let spec = self.exact_spectrum()?;
        if spec.is_empty() {
            return Ok(None);
        }
        NShinyShape::classify(&spec, n)
            .map(Some)
            .ok_or_else(|| Error::InvalidParameter(format!("spectrum of {} is not {n}-shiny", self.cube)))
    }
}
