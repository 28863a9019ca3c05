//! Cardinal-characteristic expressions and a small closure engine for
//! provable `≤` facts and consistent `<` facts.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The registered atoms.
pub const ATOMS: [&str; 13] = [
    "p", "t", "b", "s", "d", "cov_M", "od", "theta_star", "E_star", "h", "g", "u", "aleph1",
];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CardinalExpr {
    Atom(&'static str),
    Min(Box<CardinalExpr>, Box<CardinalExpr>),
    Max(Box<CardinalExpr>, Box<CardinalExpr>),
}

impl CardinalExpr {
    pub fn atom(name: &str) -> Result<Self> {
        ATOMS
            .iter()
            .find(|&&a| a == name)
            .map(|&a| CardinalExpr::Atom(a))
            .ok_or_else(|| Error::Parse(format!("unknown cardinal {name:?}")))
    }

    pub fn min(a: CardinalExpr, b: CardinalExpr) -> Self {
        CardinalExpr::Min(Box::new(a), Box::new(b))
    }

    pub fn max(a: CardinalExpr, b: CardinalExpr) -> Self {
        CardinalExpr::Max(Box::new(a), Box::new(b))
    }

    /// This expression and all of its subexpressions.
    pub fn subexpressions(&self) -> Vec<CardinalExpr> {
        let mut out = vec![self.clone()];
        if let CardinalExpr::Min(a, b) | CardinalExpr::Max(a, b) = self {
            out.extend(a.subexpressions());
            out.extend(b.subexpressions());
        }
        out
    }
}

impl fmt::Display for CardinalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardinalExpr::Atom(a) => f.write_str(a),
            CardinalExpr::Min(a, b) => write!(f, "min({a},{b})"),
            CardinalExpr::Max(a, b) => write!(f, "max({a},{b})"),
        }
    }
}

impl FromStr for CardinalExpr {
    type Err = Error;

    /// Accepts `atom`, `min(e,e)`, `max(e,e)`; braces work as well as parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, options: &[u8]) -> Result<u8> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(c) if options.contains(c) => {
                self.pos += 1;
                Ok(*c)
            }
            _ => Err(Error::Parse(format!(
                "expected one of {:?} at offset {}",
                String::from_utf8_lossy(options),
                self.pos
            ))),
        }
    }

    fn expr(&mut self) -> Result<CardinalExpr> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if word == "min" || word == "max" {
            let open = self.eat(b"({")?;
            let a = self.expr()?;
            self.eat(b",")?;
            let b = self.expr()?;
            self.eat(if open == b'(' { b")" } else { b"}" })?;
            Ok(if word == "min" {
                CardinalExpr::min(a, b)
            } else {
                CardinalExpr::max(a, b)
            })
        } else {
            CardinalExpr::atom(word)
        }
    }
}

impl Serialize for CardinalExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CardinalExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub lhs: CardinalExpr,
    pub rhs: CardinalExpr,
    pub provenance: String,
}

impl Fact {
    pub fn new(lhs: CardinalExpr, rhs: CardinalExpr, provenance: impl Into<String>) -> Self {
        Fact {
            lhs,
            rhs,
            provenance: provenance.into(),
        }
    }
}

/// Provable `≤` facts and consistent strict `<` facts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalKb {
    pub provable_le: Vec<Fact>,
    pub con_lt: Vec<Fact>,
}

/// Why `a ≤ b` holds in the closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeWhy {
    Reflexive,
    Fact(usize),
    Transitive(usize),
    MinBelowArgument,
    ArgumentBelowMax,
    MinGreatestLower,
    MaxLeastUpper,
}

/// Why `con(a < b)` holds in the closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtWhy {
    Fact(usize),
    /// `con(a < m)` and `m ≤ b`.
    RaiseUpper(usize),
    /// `a ≤ m` and `con(m < b)`.
    LowerLower(usize),
}

/// The closure of a knowledge base over a finite universe of expressions.
#[derive(Debug, Clone)]
pub struct ClosedKb {
    kb: CardinalKb,
    exprs: Vec<CardinalExpr>,
    index: BTreeMap<CardinalExpr, usize>,
    le: Vec<Option<LeWhy>>,
    lt: Vec<Option<LtWhy>>,
}

/// Closes `kb` over its own expressions plus `extra`.
///
/// `≤` is closed under reflexivity, transitivity and the min/max axioms with
/// their greatest-lower / least-upper bound rules. `con(<)` is closed under
/// raising the upper side and lowering the lower side along `≤`. The only
/// inconsistency detected is a derived `con(a < a)`.
pub fn close_cardinal_kb(kb: &CardinalKb, extra: &[CardinalExpr]) -> Result<ClosedKb> {
    let mut universe: Vec<CardinalExpr> = kb
        .provable_le
        .iter()
        .chain(&kb.con_lt)
        .flat_map(|f| [f.lhs.subexpressions(), f.rhs.subexpressions()])
        .flatten()
        .chain(extra.iter().flat_map(CardinalExpr::subexpressions))
        .collect();
    universe.sort();
    universe.dedup();
    let index: BTreeMap<CardinalExpr, usize> = universe
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let n = universe.len();
    let mut le = vec![None; n * n];
    let mut lt = vec![None; n * n];
    for i in 0..n {
        le[i * n + i] = Some(LeWhy::Reflexive);
    }
    for (i, e) in universe.iter().enumerate() {
        if let CardinalExpr::Min(a, b) = e {
            for x in [a, b] {
                le[i * n + index[x.as_ref()]].get_or_insert(LeWhy::MinBelowArgument);
            }
        }
        if let CardinalExpr::Max(a, b) = e {
            for x in [a, b] {
                le[index[x.as_ref()] * n + i].get_or_insert(LeWhy::ArgumentBelowMax);
            }
        }
    }
    for (k, f) in kb.provable_le.iter().enumerate() {
        le[index[&f.lhs] * n + index[&f.rhs]].get_or_insert(LeWhy::Fact(k));
    }
    for (k, f) in kb.con_lt.iter().enumerate() {
        lt[index[&f.lhs] * n + index[&f.rhs]].get_or_insert(LtWhy::Fact(k));
    }

    let args = |e: &CardinalExpr| match e {
        CardinalExpr::Min(a, b) | CardinalExpr::Max(a, b) => {
            Some((index[a.as_ref()], index[b.as_ref()]))
        }
        CardinalExpr::Atom(_) => None,
    };
    loop {
        let mut changed = false;
        for m in 0..n {
            for a in 0..n {
                if le[a * n + m].is_none() {
                    continue;
                }
                for b in 0..n {
                    if le[m * n + b].is_some() && le[a * n + b].is_none() {
                        le[a * n + b] = Some(LeWhy::Transitive(m));
                        changed = true;
                    }
                }
            }
        }
        for (i, e) in universe.iter().enumerate() {
            let Some((x, y)) = args(e) else { continue };
            for c in 0..n {
                match e {
                    CardinalExpr::Min(..) => {
                        if le[c * n + i].is_none() && le[c * n + x].is_some() && le[c * n + y].is_some() {
                            le[c * n + i] = Some(LeWhy::MinGreatestLower);
                            changed = true;
                        }
                    }
                    _ => {
                        if le[i * n + c].is_none() && le[x * n + c].is_some() && le[y * n + c].is_some() {
                            le[i * n + c] = Some(LeWhy::MaxLeastUpper);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    // `≤` does not depend on `con(<)`, so it is closed first.
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if lt[a * n + b].is_some() {
                    continue;
                }
                if let Some(m) = (0..n).find(|&m| le[a * n + m].is_some() && lt[m * n + b].is_some()) {
                    lt[a * n + b] = Some(LtWhy::LowerLower(m));
                    changed = true;
                } else if let Some(m) =
                    (0..n).find(|&m| lt[a * n + m].is_some() && le[m * n + b].is_some())
                {
                    lt[a * n + b] = Some(LtWhy::RaiseUpper(m));
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let closed = ClosedKb {
        kb: kb.clone(),
        exprs: universe,
        index,
        le,
        lt,
    };
    if let Some(a) = (0..n).find(|&a| closed.lt[a * n + a].is_some()) {
        let e = &closed.exprs[a];
        return Err(Error::InconsistentKb(format!(
            "derived con({e} < {e}):\n{}",
            closed.explain_lt(e, e).join("\n")
        )));
    }
    Ok(closed)
}

impl ClosedKb {
    pub fn kb(&self) -> &CardinalKb {
        &self.kb
    }

    pub fn expressions(&self) -> &[CardinalExpr] {
        &self.exprs
    }

    fn pair(&self, a: &CardinalExpr, b: &CardinalExpr) -> Option<usize> {
        Some(self.index.get(a)? * self.exprs.len() + self.index.get(b)?)
    }

    /// `a ≤ b` is derivable. Expressions outside the universe are only
    /// comparable to themselves.
    pub fn le(&self, a: &CardinalExpr, b: &CardinalExpr) -> bool {
        a == b || self.pair(a, b).is_some_and(|k| self.le[k].is_some())
    }

    /// `con(a < b)` is derivable.
    pub fn con_lt(&self, a: &CardinalExpr, b: &CardinalExpr) -> bool {
        self.pair(a, b).is_some_and(|k| self.lt[k].is_some())
    }

    pub fn le_pairs(&self) -> Vec<(CardinalExpr, CardinalExpr)> {
        self.pairs(&self.le)
    }

    pub fn lt_pairs(&self) -> Vec<(CardinalExpr, CardinalExpr)> {
        self.pairs(&self.lt)
    }

    fn pairs<T>(&self, table: &[Option<T>]) -> Vec<(CardinalExpr, CardinalExpr)> {
        let n = self.exprs.len();
        (0..n * n)
            .filter(|&k| table[k].is_some())
            .map(|k| (self.exprs[k / n].clone(), self.exprs[k % n].clone()))
            .collect()
    }

    /// Derivation of `a ≤ b`, premises first, one line per step.
    pub fn explain_le(&self, a: &CardinalExpr, b: &CardinalExpr) -> Vec<String> {
        let mut out = Vec::new();
        if let (Some(&i), Some(&j)) = (self.index.get(a), self.index.get(b)) {
            self.le_lines(i, j, &mut out);
        }
        out
    }

    /// Derivation of `con(a < b)`, premises first, one line per step.
    pub fn explain_lt(&self, a: &CardinalExpr, b: &CardinalExpr) -> Vec<String> {
        let mut out = Vec::new();
        if let (Some(&i), Some(&j)) = (self.index.get(a), self.index.get(b)) {
            self.lt_lines(i, j, &mut out);
        }
        out
    }

    fn push(out: &mut Vec<String>, line: String) {
        if !out.contains(&line) {
            out.push(line);
        }
    }

    fn le_lines(&self, i: usize, j: usize, out: &mut Vec<String>) {
        let n = self.exprs.len();
        let (a, b) = (&self.exprs[i], &self.exprs[j]);
        let Some(why) = self.le[i * n + j] else { return };
        let reason = match why {
            LeWhy::Reflexive => return,
            LeWhy::Fact(k) => format!("[{}]", self.kb.provable_le[k].provenance),
            LeWhy::Transitive(m) => {
                self.le_lines(i, m, out);
                self.le_lines(m, j, out);
                format!("[transitivity through {}]", self.exprs[m])
            }
            LeWhy::MinBelowArgument => "[min axiom]".to_string(),
            LeWhy::ArgumentBelowMax => "[max axiom]".to_string(),
            LeWhy::MinGreatestLower | LeWhy::MaxLeastUpper => {
                let target = if why == LeWhy::MinGreatestLower { b } else { a };
                if let CardinalExpr::Min(x, y) | CardinalExpr::Max(x, y) = target {
                    for arg in [x, y] {
                        let k = self.index[arg.as_ref()];
                        if why == LeWhy::MinGreatestLower {
                            self.le_lines(i, k, out);
                        } else {
                            self.le_lines(k, j, out);
                        }
                    }
                }
                if why == LeWhy::MinGreatestLower {
                    "[below both arguments of min]".to_string()
                } else {
                    "[both arguments of max below]".to_string()
                }
            }
        };
        Self::push(out, format!("{a} ≤ {b}  {reason}"));
    }

    fn lt_lines(&self, i: usize, j: usize, out: &mut Vec<String>) {
        let n = self.exprs.len();
        let (a, b) = (&self.exprs[i], &self.exprs[j]);
        let Some(why) = self.lt[i * n + j] else { return };
        let reason = match why {
            LtWhy::Fact(k) => format!("[{}]", self.kb.con_lt[k].provenance),
            LtWhy::RaiseUpper(m) => {
                self.lt_lines(i, m, out);
                self.le_lines(m, j, out);
                format!("[con({a} < {}) and {} ≤ {b}]", self.exprs[m], self.exprs[m])
            }
            LtWhy::LowerLower(m) => {
                self.le_lines(i, m, out);
                self.lt_lines(m, j, out);
                format!("[{a} ≤ {} and con({} < {b})]", self.exprs[m], self.exprs[m])
            }
        };
        Self::push(out, format!("con({a} < {b})  {reason}"));
    }
}
