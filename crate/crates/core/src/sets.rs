//! Eventually periodic subsets of the positive naturals, and cardinals `N* ∪ {ℵ0}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad set literal `{0}`")]
pub struct SetParseError(pub String);

/// A domain cardinality. `Finite(0)` is never constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Card {
    Finite(u64),
    Aleph0,
}

impl Card {
    pub fn finite(self) -> Option<u64> {
        match self {
            Card::Finite(n) => Some(n),
            Card::Aleph0 => None,
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Finite(n) => write!(f, "{n}"),
            Card::Aleph0 => f.write_str("aleph0"),
        }
    }
}

impl Serialize for Card {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Card::Finite(n) => s.serialize_u64(*n),
            Card::Aleph0 => s.serialize_str("aleph0"),
        }
    }
}

impl<'de> Deserialize<'de> for Card {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "aleph0" => Ok(Card::Aleph0),
            serde_json::Value::Number(n) => match n.as_u64() {
                Some(k) if k >= 1 => Ok(Card::Finite(k)),
                _ => Err(serde::de::Error::custom("cardinal must be a positive integer")),
            },
            other => Err(serde::de::Error::custom(format!("bad cardinal {other}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeClass {
    Finite,
    Cofinite,
    InfiniteCoinfinite,
}

/// Membership over `[1, p]` is `pre`; from `p+1` on, `per` repeats.
/// Always stored in canonical form (minimal period, then minimal preperiod),
/// so structural equality is extensional equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EvPeriodicSet {
    pre: Vec<bool>,
    per: Vec<bool>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl EvPeriodicSet {
    pub fn new(pre: Vec<bool>, per: Vec<bool>) -> Self {
        assert!(!per.is_empty(), "period must be at least 1");
        let mut s = EvPeriodicSet { pre, per };
        s.canonicalize();
        s
    }

    /// Build from a membership function known to be periodic with period `q` after `p`.
    pub fn from_fn<F: Fn(u64) -> bool>(p: usize, q: usize, f: F) -> Self {
        let pre = (1..=p as u64).map(&f).collect();
        let per = (p as u64 + 1..=(p + q) as u64).map(&f).collect();
        Self::new(pre, per)
    }

    fn canonicalize(&mut self) {
        let q = self.per.len();
        let d = (1..=q)
            .find(|d| q.is_multiple_of(*d) && (0..q).all(|i| self.per[i] == self.per[i % d]))
            .unwrap_or(q);
        self.per.truncate(d);
        while let Some(&last) = self.pre.last() {
            if last != *self.per.last().unwrap() {
                break;
            }
            self.pre.pop();
            self.per.rotate_right(1);
        }
    }

    pub fn preperiod(&self) -> usize {
        self.pre.len()
    }

    pub fn period(&self) -> usize {
        self.per.len()
    }

    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        let p = self.pre.len() as u64;
        if n <= p {
            self.pre[(n - 1) as usize]
        } else {
            self.per[((n - p - 1) % self.per.len() as u64) as usize]
        }
    }

    pub fn empty() -> Self {
        Self::new(vec![], vec![false])
    }

    pub fn all() -> Self {
        Self::new(vec![], vec![true])
    }

    pub fn finite(elems: &[u64]) -> Self {
        let p = elems.iter().copied().max().unwrap_or(0) as usize;
        Self::from_fn(p, 1, |n| elems.contains(&n))
    }

    pub fn cofinite_excluding(elems: &[u64]) -> Self {
        Self::finite(elems).complement()
    }

    /// `{n, n+1, ...}`
    pub fn upfrom(n: u64) -> Self {
        let p = n.saturating_sub(1) as usize;
        Self::from_fn(p, 1, |k| k >= n)
    }

    /// `[lo, hi]`, empty when `lo > hi`.
    pub fn interval(lo: u64, hi: u64) -> Self {
        Self::from_fn(hi as usize, 1, |k| k >= lo && k <= hi)
    }

    pub fn evens() -> Self {
        Self::from_fn(0, 2, |n| n % 2 == 0)
    }

    pub fn odds() -> Self {
        Self::from_fn(0, 2, |n| n % 2 == 1)
    }

    /// Positive naturals whose `i`-th least significant bit (1-based) is 0.
    pub fn bitzero(i: u32) -> Self {
        assert!((1..=20).contains(&i), "bitzero index out of range");
        Self::from_fn(0, 1 << i, |n| (n >> (i - 1)) & 1 == 0)
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let p = self.preperiod().max(other.preperiod());
        let q = lcm(self.period(), other.period());
        Self::from_fn(p, q, |n| op(self.contains(n), other.contains(n)))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        Self::new(self.pre.iter().map(|b| !b).collect(), self.per.iter().map(|b| !b).collect())
    }

    pub fn is_superset(&self, other: &Self) -> bool {
        let bound = self.preperiod().max(other.preperiod()) + lcm(self.period(), other.period());
        (1..=bound as u64).all(|n| !other.contains(n) || self.contains(n))
    }

    pub fn is_empty(&self) -> bool {
        !self.pre.iter().any(|&b| b) && !self.per.iter().any(|&b| b)
    }

    pub fn is_finite(&self) -> bool {
        self.per.iter().all(|&b| !b)
    }

    pub fn is_cofinite(&self) -> bool {
        self.per.iter().all(|&b| b)
    }

    pub fn classify_size(&self) -> SizeClass {
        if self.is_finite() {
            SizeClass::Finite
        } else if self.is_cofinite() {
            SizeClass::Cofinite
        } else {
            SizeClass::InfiniteCoinfinite
        }
    }

    pub fn min_element(&self) -> Option<u64> {
        self.nth_element(1)
    }

    /// Greatest element of a finite set.
    pub fn max_element(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        self.pre.iter().rposition(|&b| b).map(|i| i as u64 + 1)
    }

    /// The `n`-th element (1-based) in increasing order.
    pub fn nth_element(&self, n: u64) -> Option<u64> {
        if n == 0 {
            return None;
        }
        let mut seen = 0;
        for (i, &b) in self.pre.iter().enumerate() {
            if b {
                seen += 1;
                if seen == n {
                    return Some(i as u64 + 1);
                }
            }
        }
        let per_count = self.per.iter().filter(|&&b| b).count() as u64;
        if per_count == 0 {
            return None;
        }
        let rest = n - seen;
        let (full, r) = ((rest - 1) / per_count, (rest - 1) % per_count + 1);
        let base = self.pre.len() as u64 + full * self.per.len() as u64;
        let mut cnt = 0;
        for (i, &b) in self.per.iter().enumerate() {
            if b {
                cnt += 1;
                if cnt == r {
                    return Some(base + i as u64 + 1);
                }
            }
        }
        unreachable!("period has {per_count} members")
    }

    /// The `n`-th element of the complement, or `None` when it has fewer than `n`.
    pub fn nth_excluded(&self, n: u64) -> Option<u64> {
        self.complement().nth_element(n)
    }

    pub fn elements_upto(&self, bound: u64) -> Vec<u64> {
        (1..=bound).filter(|&n| self.contains(n)).collect()
    }

    /// Least element `>= n`.
    pub fn next_from(&self, n: u64) -> Option<u64> {
        self.intersect(&Self::upfrom(n.max(1))).min_element()
    }
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn list(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(|n| n.to_string()).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for EvPeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "finite:{}", list(&self.elements_upto(self.pre.len() as u64)))
        } else if self.is_cofinite() {
            let c = self.complement();
            write!(f, "cofinite-excluding:{}", list(&c.elements_upto(c.pre.len() as u64)))
        } else {
            write!(
                f,
                "periodic:p={},q={},pre={},per={}",
                self.pre.len(),
                self.per.len(),
                bits(&self.pre),
                bits(&self.per)
            )
        }
    }
}

fn parse_list(s: &str) -> Option<Vec<u64>> {
    let inner = s.strip_prefix('[')?.strip_suffix(']')?.trim();
    if inner.is_empty() {
        return Some(vec![]);
    }
    inner
        .split(',')
        .map(|t| t.trim().parse::<u64>().ok().filter(|&n| n >= 1))
        .collect()
}

fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

impl FromStr for EvPeriodicSet {
    type Err = SetParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || SetParseError(text.to_string());
        let t = text.trim();
        match t {
            "evens" => return Ok(Self::evens()),
            "odds" => return Ok(Self::odds()),
            "all" | "nstar" => return Ok(Self::all()),
            "empty" => return Ok(Self::empty()),
            _ => {}
        }
        let (kind, rest) = t.split_once(':').ok_or_else(err)?;
        match kind {
            "finite" => Ok(Self::finite(&parse_list(rest).ok_or_else(err)?)),
            "cofinite-excluding" => Ok(Self::cofinite_excluding(&parse_list(rest).ok_or_else(err)?)),
            "upfrom" => Ok(Self::upfrom(rest.parse().map_err(|_| err())?)),
            "bitzero" => {
                let i: u32 = rest.parse().map_err(|_| err())?;
                if !(1..=20).contains(&i) {
                    return Err(err());
                }
                Ok(Self::bitzero(i))
            }
            "periodic" => {
                let mut p = None;
                let mut q = None;
                let mut pre = None;
                let mut per = None;
                for field in rest.split(',') {
                    let (k, v) = field.split_once('=').ok_or_else(err)?;
                    match k.trim() {
                        "p" => p = v.parse::<usize>().ok(),
                        "q" => q = v.parse::<usize>().ok(),
                        "pre" => pre = parse_bits(v),
                        "per" => per = parse_bits(v),
                        _ => return Err(err()),
                    }
                }
                let (p, q) = (p.ok_or_else(err)?, q.ok_or_else(err)?);
                let pre = pre.unwrap_or_default();
                let per = per.ok_or_else(err)?;
                if pre.len() != p || per.len() != q || q == 0 {
                    return Err(err());
                }
                Ok(Self::new(pre, per))
            }
            _ => Err(err()),
        }
    }
}

impl Serialize for EvPeriodicSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for EvPeriodicSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PartialOrd for EvPeriodicSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.is_superset(other), other.is_superset(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Greater),
            (false, true) => Some(Ordering::Less),
            (false, false) => None,
        }
    }
}
