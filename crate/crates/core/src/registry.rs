//! JSON theory definitions and the named catalog.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::Cube;
use crate::sets::EvPeriodicSet;
use crate::theories::*;

const DEFAULT_CATALOG: &str = include_str!("../catalog/default.json");

fn odds() -> EvPeriodicSet {
    EvPeriodicSet::odds()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompleteName {
    Shiny,
    Si,
    Id,
    Cs,
    Ndec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum TheorySpec {
    Teq,
    #[serde(rename = "T_geq_n")]
    GeqN { n: u64 },
    #[serde(rename = "T_leq_n")]
    LeqN { n: u64 },
    #[serde(rename = "T_eq_n")]
    EqN { n: u64 },
    #[serde(rename = "T_inf")]
    Inf,
    #[serde(rename = "T_gt_nP")]
    GtNP {
        n: u64,
        #[serde(rename = "U", default = "odds")]
        u: EvPeriodicSet,
    },
    #[serde(rename = "T_eq_P")]
    EqP,
    #[serde(rename = "T_mn")]
    Mn {
        m: u64,
        n: u64,
        #[serde(rename = "U", default = "odds")]
        u: EvPeriodicSet,
    },
    #[serde(rename = "T_leq_S")]
    LeqS {
        #[serde(rename = "S")]
        s: EvPeriodicSet,
        #[serde(rename = "F", default)]
        f: StandinF,
    },
    #[serde(rename = "T_d")]
    D {
        n: u64,
        #[serde(rename = "F", default)]
        f: StandinF,
        #[serde(rename = "U", default = "odds")]
        u: EvPeriodicSet,
    },
    #[serde(rename = "T_cfs")]
    Cfs {
        #[serde(rename = "F", default)]
        f: StandinF,
    },
    #[serde(rename = "T_si")]
    Si {
        #[serde(rename = "U", default = "odds")]
        u: EvPeriodicSet,
    },
    #[serde(rename = "T_cs")]
    Cs,
    #[serde(rename = "T_ns")]
    Ns { n: u64 },
    #[serde(rename = "T_geq_F")]
    GeqF {
        #[serde(rename = "F", default)]
        f: StandinF,
    },
    #[serde(rename = "toy_Q")]
    ToyQ,
    #[serde(rename = "Th_of")]
    ThOf {
        inner: Box<TheoryDef>,
        /// Symbolic formula names over the inner signature, e.g. `{"A": "(pred Q)"}`.
        #[serde(default)]
        names: Option<BTreeMap<String, String>>,
    },
    #[serde(rename = "complete")]
    Complete {
        complete: CompleteName,
        #[serde(default)]
        n: Option<u64>,
        #[serde(rename = "F", default)]
        f: StandinF,
        #[serde(rename = "U", default = "odds")]
        u: EvPeriodicSet,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoryDef {
    #[serde(flatten)]
    pub spec: TheorySpec,
    /// Internal family name to external.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rename: BTreeMap<String, String>,
}

impl TheoryDef {
    pub fn build(&self) -> Result<TheoryHandle> {
        let f = |f: &StandinF| -> Arc<dyn FOracle> { Arc::new(f.clone()) };
        let h = match &self.spec {
            TheorySpec::Teq => TheoryHandle::new(Teq),
            TheorySpec::GeqN { n } => TheoryHandle::new(TGeqN::new(*n)?),
            TheorySpec::LeqN { n } => TheoryHandle::new(TLeqN::new(*n)?),
            TheorySpec::EqN { n } => TheoryHandle::new(TEqN::new(*n)?),
            TheorySpec::Inf => TheoryHandle::new(TInf),
            TheorySpec::GtNP { n, u } => TheoryHandle::new(TGtNP::new(*n, u.clone())?),
            TheorySpec::EqP => TheoryHandle::new(TEqP),
            TheorySpec::Mn { m, n, u } => TheoryHandle::new(TMN::new(*m, *n, u.clone())?),
            TheorySpec::LeqS { s, f: ff } => TheoryHandle::new(TLeqS::new(s.clone(), f(ff))?),
            TheorySpec::D { n, f: ff, u } => TheoryHandle::new(TD::new(*n, f(ff), u.clone())?),
            TheorySpec::Cfs { f: ff } => TheoryHandle::new(TCfs::new(f(ff))),
            TheorySpec::Si { u } => TheoryHandle::new(TSi::new(u.clone())),
            TheorySpec::Cs => TheoryHandle::new(TCs),
            TheorySpec::Ns { n } => TheoryHandle::new(TNs::new(*n)?),
            TheorySpec::GeqF { f: ff } => TheoryHandle::new(TGeqF::new(f(ff))),
            TheorySpec::ToyQ => TheoryHandle::new(ToyQ),
            TheorySpec::ThOf { inner, names } => {
                let inner = inner.build()?;
                let names = match names {
                    None => None,
                    Some(m) => {
                        let mut out = BTreeMap::new();
                        for (k, src) in m {
                            out.insert(k.clone(), single_cube(src)?);
                        }
                        Some(out)
                    }
                };
                TheoryHandle::new(ThOf::new(inner, names)?)
            }
            TheorySpec::Complete { complete, n, f: ff, u } => {
                let kind = match complete {
                    CompleteName::Shiny => CompleteKind::Shiny,
                    CompleteName::Si => CompleteKind::Si,
                    CompleteName::Id => CompleteKind::Id,
                    CompleteName::Cs => CompleteKind::Cs,
                    CompleteName::Ndec => CompleteKind::NDecidable(
                        n.ok_or_else(|| Error::Registry("ndec complete theory needs n".into()))?,
                    ),
                };
                TheoryHandle::new(CompleteTheory::new(kind, f(ff), u.clone())?)
            }
        };
        Ok(self.rename.iter().fold(h, |h, (a, b)| h.renamed(a, b)))
    }
}

fn single_cube(src: &str) -> Result<Cube> {
    let f = crate::formulas::parse_formula(src)?;
    let mut cubes = crate::formulas::to_dnf(&f);
    if cubes.len() != 1 {
        return Err(Error::Registry(format!("`{src}` is not a single conjunction")));
    }
    Ok(cubes.remove(0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Registry {
    pub theories: BTreeMap<String, TheoryDef>,
    /// Extra names for catalog entries.
    #[serde(default)]
    pub aliases: BTreeMap<String, String>,
}

impl Registry {
    pub fn from_json(text: &str) -> Result<Registry> {
        serde_json::from_str(text).map_err(|e| Error::Registry(e.to_string()))
    }

    pub fn default_catalog() -> Registry {
        Self::from_json(DEFAULT_CATALOG).expect("shipped catalog parses")
    }

    pub fn from_path(path: &Path) -> Result<Registry> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Registry(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.theories.keys()
    }

    /// A registry name, `T_leq_<n>`/`T_geq_<n>`/`T_eq_<n>`, or an inline JSON definition.
    pub fn resolve(&self, name: &str) -> Result<TheoryHandle> {
        let key = self.aliases.get(name).map(String::as_str).unwrap_or(name);
        if let Some(def) = self.theories.get(key) {
            return def.build();
        }
        let t = name.trim();
        if t.starts_with('{') {
            let def: TheoryDef = serde_json::from_str(t).map_err(|e| Error::Registry(e.to_string()))?;
            return def.build();
        }
        for (prefix, mk) in [
            ("T_leq_", (|n| TheorySpec::LeqN { n }) as fn(u64) -> TheorySpec),
            ("T_geq_", |n| TheorySpec::GeqN { n }),
            ("T_eq_", |n| TheorySpec::EqN { n }),
        ] {
            if let Some(n) = t.strip_prefix(prefix).and_then(|r| r.parse::<u64>().ok()) {
                return TheoryDef { spec: mk(n), rename: BTreeMap::new() }.build();
            }
        }
        Err(Error::Registry(format!("unknown theory `{name}`")))
    }

    /// Every named theory, built.
    pub fn all(&self) -> Result<Vec<(String, TheoryHandle)>> {
        self.theories.iter().map(|(k, d)| Ok((k.clone(), d.build()?))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_catalog_builds() {
        let r = Registry::default_catalog();
        let all = r.all().unwrap();
        assert!(all.len() >= 18);
    }

    #[test]
    fn patterns_and_inline() {
        let r = Registry::default_catalog();
        assert_eq!(r.resolve("T_leq_7").unwrap().name(), "T_leq_7");
        let t = r.resolve(r#"{"kind": "T_leq_S", "S": "evens", "F": {"kind": "identity"}}"#).unwrap();
        assert_eq!(t.name(), "T_leq_S(evens)");
        let q = r.resolve(r#"{"kind": "T_eq_P", "rename": {"P": "R"}}"#).unwrap();
        assert!(q.signature().has_family("R"));
        assert_eq!(r.resolve("T=P").unwrap().name(), r.resolve("T_eq_P").unwrap().name());
        assert!(matches!(r.resolve("nope"), Err(Error::Registry(_))));
    }
}
