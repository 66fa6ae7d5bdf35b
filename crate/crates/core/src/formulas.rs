//! Quantifier-free formulas over equality and indexed nullary predicates.
//!
//! Cardinality constraints are never represented syntactically. "At least n
//! elements" is expressed by conjoining [`neq_clique`] over fresh variables.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Var = String;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("unknown predicate family `{family}` at byte {offset}")]
    UnknownFamily { family: String, offset: usize },
    #[error("non-positive predicate index at byte {offset}")]
    NonPositiveIndex { offset: usize },
    #[error("a disequality clique needs at least one variable")]
    EmptyClique,
    #[error("predicate {0} belongs to neither signature")]
    ForeignPredicate(String),
    #[error("predicate {0} belongs to both signatures")]
    SharedPredicate(String),
}

/// One index of a predicate symbol: a positive natural or a symbolic name
/// (used for formula ids such as `P_{Q,4}` and for `P_{aleph0}`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Index {
    Nat(u64),
    Sym(String),
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Nat(n) => write!(f, "{n}"),
            Index::Sym(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PredicateId {
    pub family: String,
    pub indices: Vec<Index>,
}

impl PredicateId {
    pub fn new(family: &str, indices: Vec<Index>) -> Self {
        PredicateId { family: family.to_string(), indices }
    }

    /// `P_n`
    pub fn indexed(family: &str, n: u64) -> Self {
        Self::new(family, vec![Index::Nat(n)])
    }

    /// A single nullary predicate with no index, like the `P` of a one-predicate signature.
    pub fn bare(family: &str) -> Self {
        Self::new(family, vec![])
    }

    pub fn nats(family: &str, ns: &[u64]) -> Self {
        Self::new(family, ns.iter().map(|&n| Index::Nat(n)).collect())
    }

    pub fn arity(&self) -> usize {
        self.indices.len()
    }

    /// The `i`-th index if it is numeric.
    pub fn nat(&self, i: usize) -> Option<u64> {
        match self.indices.get(i) {
            Some(Index::Nat(n)) => Some(*n),
            _ => None,
        }
    }

    fn sexpr(&self) -> String {
        if self.indices.is_empty() {
            return format!("(pred {})", self.family);
        }
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        format!("(pred {} {})", self.family, idx.join(" "))
    }
}

impl fmt::Display for PredicateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.indices.len() {
            0 => f.write_str(&self.family),
            1 => write!(f, "{}_{}", self.family, self.indices[0]),
            _ => {
                let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
                write!(f, "{}_{{{}}}", self.family, idx.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Literal {
    Eq(Var, Var),
    Neq(Var, Var),
    Pred(PredicateId, bool),
}

impl Literal {
    pub fn eq(a: &str, b: &str) -> Self {
        let (a, b) = ordered(a, b);
        Literal::Eq(a, b)
    }

    pub fn neq(a: &str, b: &str) -> Self {
        let (a, b) = ordered(a, b);
        Literal::Neq(a, b)
    }

    pub fn pos(p: PredicateId) -> Self {
        Literal::Pred(p, true)
    }

    pub fn neg(p: PredicateId) -> Self {
        Literal::Pred(p, false)
    }

    pub fn negate(&self) -> Self {
        match self {
            Literal::Eq(a, b) => Literal::Neq(a.clone(), b.clone()),
            Literal::Neq(a, b) => Literal::Eq(a.clone(), b.clone()),
            Literal::Pred(p, pol) => Literal::Pred(p.clone(), !pol),
        }
    }

    fn normalized(self) -> Self {
        match self {
            Literal::Eq(a, b) => Literal::eq(&a, &b),
            Literal::Neq(a, b) => Literal::neq(&a, &b),
            l => l,
        }
    }

    pub fn vars(&self) -> Vec<&Var> {
        match self {
            Literal::Eq(a, b) | Literal::Neq(a, b) => vec![a, b],
            Literal::Pred(..) => vec![],
        }
    }

    pub fn is_pred(&self) -> bool {
        matches!(self, Literal::Pred(..))
    }
}

fn ordered(a: &str, b: &str) -> (Var, Var) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Eq(a, b) => write!(f, "(= {a} {b})"),
            Literal::Neq(a, b) => write!(f, "(not (= {a} {b}))"),
            Literal::Pred(p, true) => f.write_str(&p.sexpr()),
            Literal::Pred(p, false) => write!(f, "(not {})", p.sexpr()),
        }
    }
}

/// A conjunction of literals, kept sorted and duplicate-free.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cube {
    lits: Vec<Literal>,
}

impl Cube {
    pub fn new<I: IntoIterator<Item = Literal>>(lits: I) -> Self {
        let mut lits: Vec<Literal> = lits.into_iter().map(Literal::normalized).collect();
        lits.sort();
        lits.dedup();
        Cube { lits }
    }

    pub fn top() -> Self {
        Cube::default()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.lits.iter().flat_map(|l| l.vars()).cloned().collect()
    }

    /// `x≠x`, or some literal together with its negation.
    pub fn is_contradictory(&self) -> bool {
        self.lits.iter().any(|l| match l {
            Literal::Neq(a, b) => a == b,
            other => self.lits.binary_search(&other.negate()).is_ok(),
        })
    }

    pub fn and(&self, other: &Cube) -> Cube {
        Cube::new(self.lits.iter().chain(other.lits.iter()).cloned())
    }

    pub fn with(&self, lit: Literal) -> Cube {
        Cube::new(self.lits.iter().cloned().chain(std::iter::once(lit)))
    }

    /// The equality part: every literal that is not a predicate literal.
    pub fn eq_part(&self) -> Cube {
        Cube { lits: self.lits.iter().filter(|l| !l.is_pred()).cloned().collect() }
    }

    pub fn positive_preds(&self) -> Vec<&PredicateId> {
        self.lits
            .iter()
            .filter_map(|l| match l {
                Literal::Pred(p, true) => Some(p),
                _ => None,
            })
            .collect()
    }

    pub fn negative_preds(&self) -> Vec<&PredicateId> {
        self.lits
            .iter()
            .filter_map(|l| match l {
                Literal::Pred(p, false) => Some(p),
                _ => None,
            })
            .collect()
    }

    pub fn preds(&self) -> BTreeSet<&PredicateId> {
        self.lits
            .iter()
            .filter_map(|l| match l {
                Literal::Pred(p, _) => Some(p),
                _ => None,
            })
            .collect()
    }

    /// Rename predicate families; literals of other families are kept.
    pub fn map_preds<F: Fn(&PredicateId) -> PredicateId>(&self, f: F) -> Cube {
        Cube::new(self.lits.iter().map(|l| match l {
            Literal::Pred(p, pol) => Literal::Pred(f(p), *pol),
            other => other.clone(),
        }))
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(and")?;
        for l in &self.lits {
            write!(f, " {l}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Formula {
    Lit(Literal),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn lit(l: Literal) -> Self {
        Formula::Lit(l)
    }

    pub fn atoms(&self) -> BTreeSet<Literal> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Literal>) {
        match self {
            Formula::Lit(l) => {
                let atom = match l {
                    Literal::Neq(a, b) => Literal::eq(a, b),
                    Literal::Pred(p, _) => Literal::pos(p.clone()),
                    other => other.clone(),
                };
                out.insert(atom);
            }
            Formula::Not(g) => g.collect_atoms(out),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.collect_atoms(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.atoms().iter().flat_map(|l| l.vars()).cloned().collect()
    }

    pub fn preds(&self) -> BTreeSet<PredicateId> {
        self.atoms()
            .into_iter()
            .filter_map(|l| match l {
                Literal::Pred(p, _) => Some(p),
                _ => None,
            })
            .collect()
    }

    /// Evaluate under a valuation of literals.
    pub fn eval<F: Fn(&Literal) -> bool + Copy>(&self, val: F) -> bool {
        match self {
            Formula::Lit(l) => val(l),
            Formula::Not(g) => !g.eval(val),
            Formula::And(gs) => gs.iter().all(|g| g.eval(val)),
            Formula::Or(gs) => gs.iter().any(|g| g.eval(val)),
        }
    }

    fn nnf(&self, negate: bool) -> Formula {
        match self {
            Formula::Lit(l) => Formula::Lit(if negate { l.negate() } else { l.clone() }),
            Formula::Not(g) => g.nnf(!negate),
            Formula::And(gs) => {
                let kids = gs.iter().map(|g| g.nnf(negate)).collect();
                if negate {
                    Formula::Or(kids)
                } else {
                    Formula::And(kids)
                }
            }
            Formula::Or(gs) => {
                let kids = gs.iter().map(|g| g.nnf(negate)).collect();
                if negate {
                    Formula::And(kids)
                } else {
                    Formula::Or(kids)
                }
            }
        }
    }
}

impl From<&Cube> for Formula {
    fn from(c: &Cube) -> Self {
        Formula::And(c.literals().iter().cloned().map(Formula::Lit).collect())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Lit(l) => write!(f, "{l}"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(gs) | Formula::Or(gs) => {
                f.write_str(if matches!(self, Formula::And(_)) { "(and" } else { "(or" })?;
                for g in gs {
                    write!(f, " {g}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Disjunctive normal form. Contradictory cubes are dropped, duplicates removed.
pub fn to_dnf(f: &Formula) -> Vec<Cube> {
    let raw = dnf_lits(&f.nnf(false));
    let mut out: Vec<Cube> = Vec::new();
    for lits in raw {
        let c = Cube::new(lits);
        if !c.is_contradictory() && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

fn dnf_lits(f: &Formula) -> Vec<Vec<Literal>> {
    match f {
        Formula::Lit(l) => vec![vec![l.clone()]],
        Formula::Not(_) => unreachable!("input is in negation normal form"),
        Formula::Or(gs) => gs.iter().flat_map(dnf_lits).collect(),
        Formula::And(gs) => {
            let mut acc: Vec<Vec<Literal>> = vec![vec![]];
            for g in gs {
                let parts = dnf_lits(g);
                let mut next = Vec::with_capacity(acc.len() * parts.len());
                for a in &acc {
                    for p in &parts {
                        let mut c = a.clone();
                        c.extend(p.iter().cloned());
                        if !Cube::new(c.clone()).is_contradictory() {
                            next.push(c);
                        }
                    }
                }
                acc = next;
            }
            acc
        }
    }
}

/// Pairwise disequalities over the first `n` of `vars`.
pub fn neq_clique(vars: &[Var], n: usize) -> Result<Cube, FormulaError> {
    if n == 0 || vars.len() < n {
        return Err(FormulaError::EmptyClique);
    }
    let mut lits = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            lits.push(Literal::neq(&vars[i], &vars[j]));
        }
    }
    Ok(Cube::new(lits))
}

/// `n` variables named `x1, x2, ...` that do not occur in `avoid`.
pub fn fresh_vars(avoid: &BTreeSet<Var>, n: usize) -> Vec<Var> {
    let mut out = Vec::with_capacity(n);
    let mut i = 1;
    while out.len() < n {
        let v = format!("x{i}");
        if !avoid.contains(&v) {
            out.push(v);
        }
        i += 1;
    }
    out
}

/// `c ∧ ≠(x1..xn)` over variables fresh for `c`.
pub fn with_fresh_clique(c: &Cube, n: usize) -> Cube {
    if n <= 1 {
        // a single fresh variable carries no constraint
        return c.clone();
    }
    let vars = fresh_vars(&c.vars(), n);
    c.and(&neq_clique(&vars, n).expect("n >= 1"))
}

/// Variables of the canonical cube enumeration.
pub const ENUM_VARS: [&str; 4] = ["x1", "x2", "x3", "x4"];

/// Every cube over the equalities between [`ENUM_VARS`] and the given nullary
/// atoms (each atom absent, positive or negated), ordered by literal count
/// and then by cube order. Position `i` (0-based) is formula id `i + 1`.
pub fn enumerate_cubes(atoms: &[PredicateId]) -> Vec<Cube> {
    let mut base: Vec<Literal> = Vec::new();
    for i in 0..ENUM_VARS.len() {
        for j in i + 1..ENUM_VARS.len() {
            base.push(Literal::eq(ENUM_VARS[i], ENUM_VARS[j]));
        }
    }
    base.extend(atoms.iter().cloned().map(Literal::pos));
    let mut out = vec![Cube::top()];
    for atom in &base {
        let mut next = Vec::with_capacity(out.len() * 3);
        for c in &out {
            next.push(c.clone());
            next.push(c.with(atom.clone()));
            next.push(c.with(atom.negate()));
        }
        out = next;
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// A set partition of a finite variable set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrangement {
    pub blocks: Vec<Vec<Var>>,
}

impl Arrangement {
    pub fn vars(&self) -> BTreeSet<Var> {
        self.blocks.iter().flatten().cloned().collect()
    }
}

/// Every partition of `v`, in restricted-growth-string order.
pub fn enumerate_arrangements(v: &BTreeSet<Var>) -> Vec<Arrangement> {
    let vars: Vec<&Var> = v.iter().collect();
    let n = vars.len();
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let nblocks = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(vars[i].clone());
        }
        out.push(Arrangement { blocks });
        // next RGS: bump the rightmost position that may still grow
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let prefix_max = rgs[..i].iter().max().copied().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
        }
    }
}

pub fn arrangement_to_cube(a: &Arrangement) -> Cube {
    let mut lits = Vec::new();
    let indexed: Vec<(usize, &Var)> =
        a.blocks.iter().enumerate().flat_map(|(b, vs)| vs.iter().map(move |v| (b, v))).collect();
    for i in 0..indexed.len() {
        for j in i + 1..indexed.len() {
            let (bi, x) = indexed[i];
            let (bj, y) = indexed[j];
            lits.push(if bi == bj { Literal::eq(x, y) } else { Literal::neq(x, y) });
        }
    }
    Cube::new(lits)
}

/// Predicate families with their arity. Ownership of a predicate is decided
/// by (family, arity), so `P` and `P_n` can live in different signatures.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub families: BTreeSet<(String, usize)>,
}

impl Signature {
    pub fn empty() -> Self {
        Signature::default()
    }

    pub fn of(families: &[(&str, usize)]) -> Self {
        Signature { families: families.iter().map(|(f, a)| (f.to_string(), *a)).collect() }
    }

    pub fn owns(&self, p: &PredicateId) -> bool {
        self.families.contains(&(p.family.clone(), p.arity()))
    }

    pub fn has_family(&self, family: &str) -> bool {
        self.families.iter().any(|(f, _)| f == family)
    }

    pub fn is_disjoint(&self, other: &Signature) -> bool {
        self.families.is_disjoint(&other.families)
    }
}

/// Route predicate literals to their owner and copy equality literals to both
/// sides. The third component is the set of variables shared by both cubes.
pub fn split_by_signature(
    c: &Cube,
    sig1: &Signature,
    sig2: &Signature,
) -> Result<(Cube, Cube, BTreeSet<Var>), FormulaError> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for l in c.literals() {
        match l {
            Literal::Pred(p, _) => match (sig1.owns(p), sig2.owns(p)) {
                (true, false) => left.push(l.clone()),
                (false, true) => right.push(l.clone()),
                (true, true) => return Err(FormulaError::SharedPredicate(p.to_string())),
                (false, false) => return Err(FormulaError::ForeignPredicate(p.to_string())),
            },
            _ => {
                left.push(l.clone());
                right.push(l.clone());
            }
        }
    }
    let (c1, c2) = (Cube::new(left), Cube::new(right));
    let shared = c1.vars().intersection(&c2.vars()).cloned().collect();
    Ok((c1, c2, shared))
}

pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    Parser::new(text, None).parse_all()
}

/// Like [`parse_formula`], rejecting predicate families outside `families`.
pub fn parse_formula_with(text: &str, families: &BTreeSet<String>) -> Result<Formula, FormulaError> {
    Parser::new(text, Some(families)).parse_all()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    families: Option<&'a BTreeSet<String>>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, families: Option<&'a BTreeSet<String>>) -> Self {
        let mut toks = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            match bytes[i] {
                b'(' => {
                    toks.push((i, Tok::Open));
                    i += 1;
                }
                b')' => {
                    toks.push((i, Tok::Close));
                    i += 1;
                }
                c if c.is_ascii_whitespace() => i += 1,
                _ => {
                    let start = i;
                    while i < bytes.len()
                        && !bytes[i].is_ascii_whitespace()
                        && bytes[i] != b'('
                        && bytes[i] != b')'
                    {
                        i += 1;
                    }
                    toks.push((start, Tok::Atom(text[start..i].to_string())));
                }
            }
        }
        Parser { toks, pos: 0, end: text.len(), families }
    }

    fn err<T>(&self, offset: usize, msg: &str) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax { offset, msg: msg.to_string() })
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn parse_all(mut self) -> Result<Formula, FormulaError> {
        let f = self.formula()?;
        if self.pos < self.toks.len() {
            return self.err(self.offset(), "trailing input");
        }
        Ok(f)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        match self.next() {
            None => self.err(self.end, "unexpected end of input"),
            Some((o, Tok::Close)) => self.err(o, "unexpected `)`"),
            Some((o, Tok::Atom(a))) => match a.as_str() {
                "true" => Ok(Formula::And(vec![])),
                "false" => Ok(Formula::Or(vec![])),
                _ if is_family(&a) => {
                    self.check_family(&a, o)?;
                    Ok(Formula::Lit(Literal::pos(PredicateId::bare(&a))))
                }
                _ => self.err(o, "expected a formula"),
            },
            Some((o, Tok::Open)) => {
                let head = match self.next() {
                    Some((_, Tok::Atom(h))) => h,
                    _ => return self.err(o, "expected an operator after `(`"),
                };
                let f = match head.as_str() {
                    "=" => {
                        let a = self.var()?;
                        let b = self.var()?;
                        Formula::Lit(Literal::eq(&a, &b))
                    }
                    "not" => Formula::Not(Box::new(self.formula()?)),
                    "and" | "or" => {
                        let mut kids = Vec::new();
                        while !matches!(self.toks.get(self.pos), Some((_, Tok::Close)) | None) {
                            kids.push(self.formula()?);
                        }
                        if head == "and" {
                            Formula::And(kids)
                        } else {
                            Formula::Or(kids)
                        }
                    }
                    "distinct" => {
                        let mut vs = Vec::new();
                        while matches!(self.toks.get(self.pos), Some((_, Tok::Atom(_)))) {
                            vs.push(self.var()?);
                        }
                        if vs.is_empty() {
                            return self.err(self.offset(), "`distinct` needs variables");
                        }
                        let c = neq_clique(&vs, vs.len()).expect("nonempty");
                        Formula::And(c.literals().iter().cloned().map(Formula::Lit).collect())
                    }
                    "pred" => {
                        let (fo, fam) = match self.next() {
                            Some((fo, Tok::Atom(f))) if is_family(&f) => (fo, f),
                            Some((fo, _)) => return self.err(fo, "expected a predicate family"),
                            None => return self.err(self.end, "expected a predicate family"),
                        };
                        self.check_family(&fam, fo)?;
                        let idx = self.indices()?;
                        Formula::Lit(Literal::pos(PredicateId::new(&fam, idx)))
                    }
                    h if is_family(h) => {
                        self.check_family(h, o + 1)?;
                        let idx = self.indices()?;
                        Formula::Lit(Literal::pos(PredicateId::new(h, idx)))
                    }
                    _ => return self.err(o + 1, &format!("unknown operator `{head}`")),
                };
                match self.next() {
                    Some((_, Tok::Close)) => Ok(f),
                    Some((o, _)) => self.err(o, "expected `)`"),
                    None => self.err(self.end, "missing `)`"),
                }
            }
        }
    }

    fn check_family(&self, fam: &str, offset: usize) -> Result<(), FormulaError> {
        match self.families {
            Some(fs) if !fs.contains(fam) => {
                Err(FormulaError::UnknownFamily { family: fam.to_string(), offset })
            }
            _ => Ok(()),
        }
    }

    fn var(&mut self) -> Result<Var, FormulaError> {
        match self.next() {
            Some((o, Tok::Atom(a))) => {
                let mut cs = a.chars();
                let ok = cs.next().is_some_and(|c| c.is_ascii_lowercase())
                    && cs.all(|c| c.is_ascii_alphanumeric() || c == '_');
                if ok {
                    Ok(a)
                } else {
                    self.err(o, &format!("`{a}` is not a variable"))
                }
            }
            Some((o, _)) => self.err(o, "expected a variable"),
            None => self.err(self.end, "expected a variable"),
        }
    }

    fn indices(&mut self) -> Result<Vec<Index>, FormulaError> {
        let mut out = Vec::new();
        while let Some((o, Tok::Atom(a))) = self.toks.get(self.pos).cloned() {
            self.pos += 1;
            if let Some(rest) = a.strip_prefix('-') {
                if rest.chars().all(|c| c.is_ascii_digit()) && !rest.is_empty() {
                    return Err(FormulaError::NonPositiveIndex { offset: o });
                }
            }
            if a.chars().all(|c| c.is_ascii_digit()) {
                let n: u64 = a.parse().map_err(|_| FormulaError::Syntax {
                    offset: o,
                    msg: "index out of range".into(),
                })?;
                if n == 0 {
                    return Err(FormulaError::NonPositiveIndex { offset: o });
                }
                out.push(Index::Nat(n));
            } else if a.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && a.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                out.push(Index::Sym(a));
            } else {
                return self.err(o, &format!("bad index `{a}`"));
            }
        }
        Ok(out)
    }
}

fn is_family(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_uppercase()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
