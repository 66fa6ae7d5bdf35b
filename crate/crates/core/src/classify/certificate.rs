//! Property flags and their implication closure.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which cardinalities an n-indexed property talks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NSet {
    Every,
    At(u64),
    AllBut(u64),
}

impl NSet {
    pub fn covers(&self, n: u64) -> bool {
        match *self {
            NSet::Every => true,
            NSet::At(m) => m == n,
            NSet::AllBut(m) => m != n,
        }
    }

    /// Every `n` covered by `other` is covered by `self`.
    pub fn includes(&self, other: &NSet) -> bool {
        match (*self, *other) {
            (NSet::Every, _) => true,
            (NSet::At(a), NSet::At(b)) => a == b,
            (NSet::AllBut(a), NSet::At(b)) => a != b,
            (NSet::AllBut(a), NSet::AllBut(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for NSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NSet::Every => f.write_str("all"),
            NSet::At(n) => write!(f, "{n}"),
            NSet::AllBut(m) => write!(f, "all-but-{m}"),
        }
    }
}

/// Names a free filter in a certificate. `Every` means "for every free filter".
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FilterId {
    Every,
    Frechet,
    /// Generated by the bitzero sets with these indices.
    Bitzero(Vec<u32>),
}

impl fmt::Display for FilterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterId::Every => f.write_str("every"),
            FilterId::Frechet => f.write_str("frechet"),
            FilterId::Bitzero(ix) => {
                let parts: Vec<String> = ix.iter().map(|i| i.to_string()).collect();
                write!(f, "bitzero{{{}}}", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flag {
    Decidable,
    Id,
    Cfs,
    Cs,
    Si,
    Smooth,
    Fmp,
    MinmodComputable,
    Gentle,
    Shiny,
    SmCs,
    Polite,
    NDecidable(NSet),
    NShiny(NSet),
    Fqg(FilterId),
    CoFqg(FilterId),
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::Decidable => f.write_str("decidable"),
            Flag::Id => f.write_str("ID"),
            Flag::Cfs => f.write_str("CFS"),
            Flag::Cs => f.write_str("CS"),
            Flag::Si => f.write_str("SI"),
            Flag::Smooth => f.write_str("smooth"),
            Flag::Fmp => f.write_str("FMP"),
            Flag::MinmodComputable => f.write_str("minmod"),
            Flag::Gentle => f.write_str("gentle"),
            Flag::Shiny => f.write_str("shiny"),
            Flag::SmCs => f.write_str("SM+CS"),
            Flag::Polite => f.write_str("polite"),
            Flag::NDecidable(s) => write!(f, "{s}-decidable"),
            Flag::NShiny(s) => write!(f, "{s}-shiny"),
            Flag::Fqg(id) => write!(f, "{id}-QG"),
            Flag::CoFqg(id) => write!(f, "co-{id}-QG"),
        }
    }
}

/// The inclusion edges of the property lattice, as `(stronger, weaker)`
/// templates. `NSet::Every` and `FilterId::Every` stand for the parameter.
pub fn lattice_edges() -> Vec<(Flag, Flag)> {
    use Flag::*;
    vec![
        (NDecidable(NSet::Every), Decidable),
        (Id, Decidable),
        (Cfs, NDecidable(NSet::Every)),
        (CoFqg(FilterId::Every), Cfs),
        (Cs, Cfs),
        (Cs, Id),
        (Si, Id),
        (Fqg(FilterId::Every), CoFqg(FilterId::Every)),
        (Gentle, Fqg(FilterId::Every)),
        (Gentle, Cs),
        (SmCs, Cs),
        (SmCs, Si),
        (NShiny(NSet::Every), Gentle),
        (Shiny, NShiny(NSet::Every)),
        (Shiny, SmCs),
    ]
}

/// One-step consequences of a flag, instantiated at its parameter.
fn direct_implications(f: &Flag) -> Vec<Flag> {
    use Flag::*;
    match f {
        Decidable => vec![],
        Id => vec![Decidable],
        Cfs => vec![NDecidable(NSet::Every)],
        Cs => vec![Cfs, Id],
        Si => vec![Id],
        Smooth => vec![],
        Fmp => vec![],
        MinmodComputable => vec![],
        Gentle => vec![Fqg(FilterId::Every), Cs],
        Shiny => vec![NShiny(NSet::Every), SmCs, Smooth, Fmp, MinmodComputable],
        SmCs => vec![Cs, Si, Smooth],
        Polite => vec![Smooth, Si],
        NDecidable(_) => vec![Decidable],
        NShiny(_) => vec![Gentle],
        Fqg(id) => vec![CoFqg(id.clone())],
        CoFqg(_) => vec![Cfs],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PropertyCertificate {
    flags: BTreeSet<Flag>,
}

impl PropertyCertificate {
    /// Accepts only flag sets already closed under the lattice implications.
    pub fn new<I: IntoIterator<Item = Flag>>(flags: I) -> Result<Self> {
        let cert = PropertyCertificate { flags: flags.into_iter().collect() };
        for f in &cert.flags {
            for g in direct_implications(f) {
                if !cert.has(&g) {
                    return Err(Error::CertificateClosure { from: f.to_string(), to: g.to_string() });
                }
            }
        }
        Ok(cert)
    }

    /// The smallest closed certificate containing `flags`.
    pub fn closure<I: IntoIterator<Item = Flag>>(flags: I) -> Self {
        let mut set: BTreeSet<Flag> = flags.into_iter().collect();
        loop {
            let mut next = set.clone();
            for f in &set {
                next.extend(direct_implications(f));
            }
            // the conjunctive definitions
            if next.contains(&Flag::Cfs) && next.contains(&Flag::Id) {
                next.insert(Flag::Cs);
            }
            if next.contains(&Flag::Smooth) && next.contains(&Flag::Cs) {
                next.insert(Flag::SmCs);
            }
            if next == set {
                return PropertyCertificate { flags: set };
            }
            set = next;
        }
    }

    pub fn flags(&self) -> impl Iterator<Item = &Flag> {
        self.flags.iter()
    }

    /// Membership up to parameter subsumption: `NDecidable(Every)` covers `NDecidable(At(3))`, and so on.
    pub fn has(&self, f: &Flag) -> bool {
        if self.flags.contains(f) {
            return true;
        }
        match f {
            Flag::NDecidable(s) => self.flags.iter().any(|g| matches!(g, Flag::NDecidable(t) if t.includes(s))),
            Flag::NShiny(s) => self.flags.iter().any(|g| matches!(g, Flag::NShiny(t) if t.includes(s))),
            Flag::Fqg(_) => self.flags.contains(&Flag::Fqg(FilterId::Every)),
            Flag::CoFqg(_) => self.flags.contains(&Flag::CoFqg(FilterId::Every)),
            _ => false,
        }
    }

    pub fn with(&self, extra: Flag) -> Self {
        Self::closure(self.flags.iter().cloned().chain(std::iter::once(extra)))
    }
}

impl fmt::Display for PropertyCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.flags.iter().map(|g| g.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_edges_each_enforced() {
        let edges = lattice_edges();
        assert_eq!(edges.len(), 15);
        for (from, to) in edges {
            let bad = PropertyCertificate::closure([from.clone()])
                .flags()
                .filter(|g| **g != to)
                .cloned()
                .collect::<Vec<_>>();
            assert!(
                matches!(PropertyCertificate::new(bad), Err(Error::CertificateClosure { .. })),
                "{from} => {to} not enforced"
            );
            assert!(PropertyCertificate::closure([from]).has(&to));
        }
    }

    #[test]
    fn closure_chains() {
        let c = PropertyCertificate::closure([Flag::Shiny]);
        for f in [Flag::Gentle, Flag::Cs, Flag::Si, Flag::Id, Flag::Cfs, Flag::Decidable, Flag::SmCs] {
            assert!(c.has(&f), "{f}");
        }
        assert!(c.has(&Flag::NShiny(NSet::At(7))));
        assert!(c.has(&Flag::Fqg(FilterId::Frechet)));
        assert!(!c.has(&Flag::Polite));
    }

    #[test]
    fn parameter_subsumption() {
        let c = PropertyCertificate::closure([Flag::NDecidable(NSet::AllBut(2))]);
        assert!(c.has(&Flag::NDecidable(NSet::At(3))));
        assert!(!c.has(&Flag::NDecidable(NSet::At(2))));
        let g = PropertyCertificate::closure([Flag::NShiny(NSet::At(4))]);
        assert!(g.has(&Flag::Gentle));
        assert!(!g.has(&Flag::NShiny(NSet::At(3))));
        assert!(PropertyCertificate::closure([Flag::Cfs, Flag::Id]).has(&Flag::Cs));
    }

    #[test]
    fn closed_sets_accepted() {
        let c = PropertyCertificate::closure([Flag::Gentle]);
        let again = PropertyCertificate::new(c.flags().cloned()).unwrap();
        assert_eq!(again, c);
    }
}
