//! Free filters on the decidable subsets of N*: Fréchet, and filters generated by bitzero families.

use serde::{Deserialize, Serialize};

use super::certificate::FilterId;
use crate::sets::EvPeriodicSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Membership {
    /// Indices (into the generator list) of a finite subfamily whose intersection is almost contained in the set.
    Yes { witness: Vec<usize> },
    No,
    Unknown,
}

impl Membership {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::Yes { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Filter {
    Frechet,
    /// The free filter generated by the sets, which must have the strong finite intersection property.
    Generated { id: FilterId, gens: Vec<EvPeriodicSet> },
}

impl Filter {
    pub fn bitzero(indices: &[u32]) -> Filter {
        let mut ix = indices.to_vec();
        ix.sort_unstable();
        ix.dedup();
        let gens = ix.iter().map(|&i| EvPeriodicSet::bitzero(i)).collect();
        Filter::Generated { id: FilterId::Bitzero(ix), gens }
    }

    pub fn id(&self) -> FilterId {
        match self {
            Filter::Frechet => FilterId::Frechet,
            Filter::Generated { id, .. } => id.clone(),
        }
    }

    /// `s` is in the filter iff some finite subfamily's intersection minus `s`
    /// is finite (cofinite sets are always in, so the filter is free).
    /// Subfamilies up to `search_bound` generators are tried.
    pub fn member(&self, s: &EvPeriodicSet, search_bound: usize) -> Membership {
        match self {
            Filter::Frechet => {
                if s.is_cofinite() {
                    Membership::Yes { witness: vec![] }
                } else {
                    Membership::No
                }
            }
            Filter::Generated { gens, .. } => {
                let n = gens.len();
                let limit = search_bound.min(n);
                for size in 0..=limit {
                    for subset in subsets_of_size(n, size) {
                        let mut acc = EvPeriodicSet::all();
                        for &i in &subset {
                            acc = acc.intersect(&gens[i]);
                        }
                        if acc.difference(s).is_finite() {
                            return Membership::Yes { witness: subset };
                        }
                    }
                }
                // the full family has the smallest intersection, so trying it decides membership
                if limit == n {
                    Membership::No
                } else {
                    Membership::Unknown
                }
            }
        }
    }

    /// `self ⊆ other`, decided on generators.
    pub fn is_subfilter_of(&self, other: &Filter, search_bound: usize) -> Membership {
        match self {
            Filter::Frechet => Membership::Yes { witness: vec![] },
            Filter::Generated { gens, .. } => {
                let mut unknown = false;
                for g in gens {
                    match other.member(g, search_bound) {
                        Membership::Yes { .. } => {}
                        Membership::No => return Membership::No,
                        Membership::Unknown => unknown = true,
                    }
                }
                if unknown {
                    Membership::Unknown
                } else {
                    Membership::Yes { witness: vec![] }
                }
            }
        }
    }
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}
