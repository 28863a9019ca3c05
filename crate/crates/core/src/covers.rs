//! Covers of a finite ground set, their classification under finite budgets,
//! the Marczewski characteristic function, and exhaustive checks of the
//! S1 / Sfin / Ufin selection hypotheses on finite cover sequences.
//!
//! "Infinitely many" becomes "at least `q`", "all but finitely many" becomes
//! "all but at most `e`", and ω-covers are replaced by k-covers (every set of
//! at most `k` points lies in one proper member).

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arrays::{ArrayFamily, BinaryArray};
use crate::error::{Error, Result};
use crate::search::{bounded_subsets, lex_first, SearchLimits};

/// Points are `0..ground`; each set is a bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSystem {
    ground: usize,
    sets: Vec<u64>,
}

impl CoverSystem {
    pub fn new(ground: usize, sets: &[Vec<usize>]) -> Result<Self> {
        if ground > 64 {
            return Err(Error::GroundTooLarge(ground));
        }
        let masks = sets
            .iter()
            .map(|s| {
                s.iter().try_fold(0u64, |acc, &p| {
                    if p >= ground {
                        Err(Error::PointOutOfRange { point: p, ground })
                    } else {
                        Ok(acc | 1 << p)
                    }
                })
            })
            .collect::<Result<_>>()?;
        Ok(CoverSystem {
            ground,
            sets: masks,
        })
    }

    pub fn from_masks(ground: usize, sets: Vec<u64>) -> Result<Self> {
        if ground > 64 {
            return Err(Error::GroundTooLarge(ground));
        }
        let full = full_mask(ground);
        if let Some(bad) = sets.iter().find(|&&s| s & !full != 0) {
            return Err(Error::PointOutOfRange {
                point: 63 - (bad & !full).leading_zeros() as usize,
                ground,
            });
        }
        Ok(CoverSystem { ground, sets })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, i: usize) -> Vec<usize> {
        (0..self.ground)
            .filter(|&p| self.sets[i] >> p & 1 == 1)
            .collect()
    }

    pub fn contains(&self, i: usize, point: usize) -> bool {
        self.sets[i] >> point & 1 == 1
    }

    fn full(&self) -> u64 {
        full_mask(self.ground)
    }
}

fn full_mask(ground: usize) -> u64 {
    if ground == 64 {
        u64::MAX
    } else {
        (1u64 << ground) - 1
    }
}

#[derive(Serialize, Deserialize)]
struct RawCover {
    ground: usize,
    sets: Vec<Vec<usize>>,
}

impl Serialize for CoverSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawCover {
            ground: self.ground,
            sets: (0..self.len()).map(|i| self.set(i)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoverSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawCover::deserialize(d)?;
        CoverSystem::new(raw.ground, &raw.sets).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for CoverSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = (0..self.len())
            .map(|i| {
                let pts: Vec<String> = self.set(i).iter().map(ToString::to_string).collect();
                format!("{{{}}}", pts.join(","))
            })
            .collect();
        write!(f, "[{}] over {} points", sets.join(", "), self.ground)
    }
}

/// Finite stand-ins for the infinitary quantifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteBudget {
    /// "Infinitely many" threshold.
    pub q: usize,
    /// "All but finitely many" exception budget.
    pub e: usize,
    /// ω-cover arity.
    pub k: usize,
}

impl Default for FiniteBudget {
    fn default() -> Self {
        FiniteBudget { q: 1, e: 0, k: 2 }
    }
}

impl FiniteBudget {
    pub fn new(q: usize, e: usize, k: usize) -> Result<Self> {
        if q == 0 || k == 0 {
            return Err(Error::Invalid("budget needs q >= 1 and k >= 1".into()));
        }
        Ok(FiniteBudget { q, e, k })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CoverKindSet {
    pub is_cover: bool,
    pub is_large: bool,
    pub is_k_cover: bool,
    pub is_tau: bool,
    pub is_gamma: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoverKind {
    /// Plain cover.
    O,
    Omega,
    Tau,
    Gamma,
}

impl CoverKindSet {
    pub fn satisfies(&self, kind: CoverKind) -> bool {
        self.is_cover
            && match kind {
                CoverKind::O => true,
                CoverKind::Omega => self.is_k_cover,
                CoverKind::Tau => self.is_tau,
                CoverKind::Gamma => self.is_gamma,
            }
    }
}

impl std::str::FromStr for CoverKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "o" | "open" => Ok(CoverKind::O),
            "omega" => Ok(CoverKind::Omega),
            "tau" => Ok(CoverKind::Tau),
            "gamma" => Ok(CoverKind::Gamma),
            _ => Err(Error::Invalid(format!("unknown cover kind {s:?}"))),
        }
    }
}

/// Classifies an enumerated family of sets (duplicates count with multiplicity).
pub fn classify_sets(ground: usize, sets: &[u64], b: &FiniteBudget) -> CoverKindSet {
    let full = full_mask(ground);
    let union = sets.iter().fold(0, |acc, s| acc | s);
    let is_cover = union == full && sets.iter().all(|&s| s != full);
    let count_in = |x: usize| sets.iter().filter(|&&s| s >> x & 1 == 1).count();
    let is_large = (0..ground).all(|x| count_in(x) >= b.q);
    let is_k_cover = k_cover(ground, sets, b.k);
    let mut is_tau = is_large;
    'pairs: for x in 0..ground {
        for y in x + 1..ground {
            let only_x = sets
                .iter()
                .filter(|&&s| s >> x & 1 == 1 && s >> y & 1 == 0)
                .count();
            let only_y = sets
                .iter()
                .filter(|&&s| s >> y & 1 == 1 && s >> x & 1 == 0)
                .count();
            if only_x.min(only_y) > b.e {
                is_tau = false;
                break 'pairs;
            }
        }
    }
    let is_gamma =
        sets.len() >= b.q && (0..ground).all(|x| sets.len() - count_in(x) <= b.e);
    CoverKindSet {
        is_cover,
        is_large,
        is_k_cover,
        is_tau,
        is_gamma,
    }
}

fn k_cover(ground: usize, sets: &[u64], k: usize) -> bool {
    let full = full_mask(ground);
    let proper: Vec<u64> = sets.iter().copied().filter(|&s| s != full).collect();
    if k >= ground {
        // The ground set itself would have to sit inside a proper member.
        return false;
    }
    // Every set of size <= k lies in a set of size exactly k.
    let mut ok = true;
    for_each_subset(ground, k, &mut |sub| {
        if !proper.iter().any(|&s| s & sub == sub) {
            ok = false;
        }
        ok
    });
    ok
}

fn for_each_subset(n: usize, k: usize, visit: &mut dyn FnMut(u64) -> bool) {
    fn rec(start: usize, n: usize, left: usize, acc: u64, visit: &mut dyn FnMut(u64) -> bool) -> bool {
        if left == 0 {
            return visit(acc);
        }
        for i in start..=n - left {
            if !rec(i + 1, n, left - 1, acc | 1 << i, visit) {
                return false;
            }
        }
        true
    }
    rec(0, n, k, 0, visit);
}

pub fn classify_cover(cs: &CoverSystem, b: &FiniteBudget) -> CoverKindSet {
    classify_sets(cs.ground, &cs.sets, b)
}

/// `h(x)(n) = 1` iff `x ∈ U_n`.
pub fn marczewski(cs: &CoverSystem, x: usize) -> Result<Vec<bool>> {
    if x >= cs.ground {
        return Err(Error::PointOutOfRange {
            point: x,
            ground: cs.ground,
        });
    }
    Ok((0..cs.len()).map(|n| cs.contains(n, x)).collect())
}

/// The image of the ground set under `Ψ(x)(n, m) = h_{U_n}(x)(m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiImage {
    /// One array per ground point, in point order.
    pub family: ArrayFamily,
    /// Number of empty sets appended to each cover to equalize lengths.
    pub padding: Vec<usize>,
}

pub fn psi_image(covers: &[CoverSystem]) -> Result<PsiImage> {
    let ground = covers.first().map_or(0, CoverSystem::ground);
    if let Some(bad) = covers.iter().find(|c| c.ground != ground) {
        return Err(Error::MismatchedGround {
            expected: ground,
            found: bad.ground,
        });
    }
    let rows = covers.len();
    let cols = covers.iter().map(CoverSystem::len).max().unwrap_or(0);
    let padding = covers.iter().map(|c| cols - c.len()).collect();
    let members = (0..ground)
        .map(|x| {
            let mut a = BinaryArray::zeros(rows, cols);
            for (n, c) in covers.iter().enumerate() {
                for m in 0..c.len() {
                    a.set(n, m, c.contains(m, x));
                }
            }
            a
        })
        .collect();
    Ok(PsiImage {
        family: ArrayFamily::new(rows, cols, members)?,
        padding,
    })
}

impl PsiImage {
    /// Reads every row as a γ-cover: tails become 1, and the call fails if some
    /// point misses more than `e` of the genuine (unpadded) sets of a cover.
    pub fn with_gamma_tails(&self, e: usize) -> Result<ArrayFamily> {
        let cols = self.family.cols();
        let mut members = Vec::with_capacity(self.family.len());
        for (x, a) in self.family.members().iter().enumerate() {
            let mut a = a.clone();
            for n in 0..a.rows() {
                let genuine = cols - self.padding[n];
                let misses = a.row(n)[..genuine].iter().filter(|&&b| !b).count();
                if misses > e {
                    return Err(Error::Precondition(format!(
                        "point {x} misses {misses} sets of cover {n}, budget is {e}"
                    )));
                }
                a.set_tail(n, true);
            }
            members.push(a);
        }
        ArrayFamily::new(self.family.rows(), cols, members)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Principle {
    S1,
    Sfin,
    Ufin,
}

impl std::str::FromStr for Principle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(Principle::S1),
            "sfin" => Ok(Principle::Sfin),
            "ufin" => Ok(Principle::Ufin),
            _ => Err(Error::Invalid(format!("unknown selection principle {s:?}"))),
        }
    }
}

/// A successful selection: the chosen indices per cover and the resulting family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Selection {
    pub principle: Principle,
    pub choices: Vec<Vec<usize>>,
    pub family: Vec<Vec<usize>>,
}

/// Sets selected by `choices`, in the order the principle produces them.
/// Rows with an empty choice contribute nothing.
pub fn selected_sets(principle: Principle, covers: &[CoverSystem], choices: &[Vec<usize>]) -> Vec<u64> {
    let mut out = Vec::new();
    for (c, idx) in covers.iter().zip(choices) {
        match principle {
            Principle::S1 | Principle::Sfin => out.extend(idx.iter().map(|&i| c.sets[i])),
            Principle::Ufin => {
                if !idx.is_empty() {
                    out.push(idx.iter().fold(0, |acc, &i| acc | c.sets[i]));
                }
            }
        }
    }
    out
}

/// Exhaustive check of one finite instance of `Π(source, target)`.
///
/// Returns the lexicographically least selection whose family classifies as
/// `target` under `b`, or `None` when the complete search finds none. For S1
/// each row picks one index; for Sfin and Ufin each row picks at most `w`
/// indices, ordered as sorted lists with the empty choice first.
pub fn check_selection(
    principle: Principle,
    source: CoverKind,
    target: CoverKind,
    covers: &[CoverSystem],
    b: &FiniteBudget,
    w: usize,
    limits: &SearchLimits,
) -> Result<Option<Selection>> {
    let ground = covers.first().map_or(0, CoverSystem::ground);
    if let Some(bad) = covers.iter().find(|c| c.ground != ground) {
        return Err(Error::MismatchedGround {
            expected: ground,
            found: bad.ground,
        });
    }
    for (n, c) in covers.iter().enumerate() {
        if !classify_cover(c, b).satisfies(source) {
            return Err(Error::Precondition(format!(
                "cover {n} is not a {source:?}-cover under the budget"
            )));
        }
        if principle == Principle::Ufin {
            if let Some(sub) = small_subcover(c, w) {
                return Err(Error::Precondition(format!(
                    "cover {n} has the finite subcover {sub:?}"
                )));
            }
        }
    }
    let options: Vec<Vec<Vec<usize>>> = covers
        .iter()
        .map(|c| match principle {
            Principle::S1 => (0..c.len()).map(|i| vec![i]).collect(),
            Principle::Sfin | Principle::Ufin => bounded_subsets(c.len(), w),
        })
        .collect();
    let radices: Vec<usize> = options.iter().map(Vec::len).collect();
    let hit = lex_first(&radices, limits, |tuple| {
        let choices: Vec<Vec<usize>> = tuple
            .iter()
            .zip(&options)
            .map(|(&o, opts)| opts[o].clone())
            .collect();
        let fam = selected_sets(principle, covers, &choices);
        classify_sets(ground, &fam, b).satisfies(target)
    })?;
    Ok(hit.map(|tuple| {
        let choices: Vec<Vec<usize>> = tuple
            .iter()
            .zip(&options)
            .map(|(&o, opts)| opts[o].clone())
            .collect();
        let family = selected_sets(principle, covers, &choices)
            .into_iter()
            .map(|s| (0..ground).filter(|&p| s >> p & 1 == 1).collect())
            .collect();
        Selection {
            principle,
            choices,
            family,
        }
    }))
}

/// Some subfamily of at most `w` members whose union is the ground set.
fn small_subcover(c: &CoverSystem, w: usize) -> Option<Vec<usize>> {
    bounded_subsets(c.len(), w)
        .into_iter()
        .find(|idx| idx.iter().fold(0, |acc, &i| acc | c.sets[i]) == c.full())
}
