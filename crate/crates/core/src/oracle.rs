//! Agreement suites between the theory procedures and the brute enumerator.

use serde::{Deserialize, Serialize};

use crate::brute::{brute_sat_at, brute_sat_inf};
use crate::error::{Error, Result};
use crate::gen::{random_cube, seeded, GenConfig};
use crate::theories::TheoryHandle;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub cube: String,
    /// `"decide"` or the cardinality checked.
    pub at: String,
    pub procedure: bool,
    pub brute: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub theory: String,
    pub cubes: usize,
    pub checks: u64,
    /// Finite-membership checks answered by the stand-in because the theory withholds them.
    pub standin_checks: u64,
    pub mismatches: Vec<Mismatch>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `samples` seeded cubes; for each, `spec_finite` at every `k <= max_card` and
/// `decide` against the brute window plus the stand-in infinite check.
pub fn oracle_suite(t: &TheoryHandle, samples: usize, max_card: u64, seed: u64) -> Result<OracleReport> {
    if max_card == 0 {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    let mut rng = seeded(seed);
    let cfg = GenConfig::default();
    let mut rep = OracleReport { theory: t.name(), cubes: samples, checks: 0, standin_checks: 0, mismatches: vec![] };
    for _ in 0..samples {
        let c = random_cube(t, &mut rng, &cfg);
        let mut any = false;
        let mut standin = None;
        for k in 1..=max_card {
            let b = brute_sat_at(t, &c, k);
            any |= b;
            let p = match t.spec_finite(&c, k) {
                Ok(p) => p,
                Err(Error::CapabilityMissing { .. }) => {
                    rep.standin_checks += 1;
                    if standin.is_none() {
                        standin = Some(t.standin_spectrum(&c)?);
                    }
                    standin.as_ref().expect("set above").contains(crate::sets::Card::Finite(k))
                }
                Err(e) => return Err(e),
            };
            rep.checks += 1;
            if p != b {
                rep.mismatches.push(Mismatch { cube: c.to_string(), at: k.to_string(), procedure: p, brute: b });
            }
        }
        let b = any || brute_sat_inf(t, &c);
        let p = t.decide(&c)?;
        rep.checks += 1;
        if p != b {
            rep.mismatches.push(Mismatch { cube: c.to_string(), at: "decide".into(), procedure: p, brute: b });
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theories::{TEqP, TLeqN};

    #[test]
    fn small_suites_agree() {
        for t in [TheoryHandle::new(TEqP), TheoryHandle::new(TLeqN::new(2).unwrap())] {
            let r = oracle_suite(&t, 40, 6, 3).unwrap();
            assert!(r.passed(), "{:?}", r.mismatches);
        }
    }
}
