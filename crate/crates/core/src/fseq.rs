//! f-sequences: o-diagonalization, the everywhere-different covering number
//! `E_f` and the block norm `nor`, the slalom-avoiding chain, and the two
//! constructive bridges to array families.

use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arrays::{ArrayFamily, BinaryArray, Column, GrowthFunction};
use crate::diag::{Diagonalizer, WindowSystem};
use crate::error::{Error, Result};
use crate::search::{first_assignment, minimum_cover, Bits, RowSearch, SearchLimits};

/// One slot set `σ(n) ⊆ [0, f(n))` per index.
pub type Slots = Vec<BTreeSet<usize>>;

fn check_alphabets(f: &[usize]) -> Result<()> {
    match f.iter().position(|&a| a < 2) {
        Some(n) => Err(Error::Invalid(format!(
            "f({n}) = {} but every alphabet needs at least 2 symbols",
            f[n]
        ))),
        None => Ok(()),
    }
}

fn check_slots(f: &[usize], slots: &Slots) -> Result<()> {
    if slots.len() != f.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} slots for {} indices",
            slots.len(),
            f.len()
        )));
    }
    for (n, s) in slots.iter().enumerate() {
        if let Some(&m) = s.iter().find(|&&m| m >= f[n]) {
            return Err(Error::Invalid(format!(
                "slot {m} at index {n} is outside [0, {})",
                f[n]
            )));
        }
    }
    Ok(())
}

/// A single f-sequence together with its alphabet sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FSequence {
    pub f: Vec<usize>,
    pub slots: Slots,
}

impl FSequence {
    pub fn new(f: Vec<usize>, slots: Slots) -> Result<Self> {
        check_alphabets(&f)?;
        check_slots(&f, &slots)?;
        Ok(FSequence { f, slots })
    }
}

#[derive(Serialize, Deserialize)]
struct RawSeq {
    f: Vec<usize>,
    slots: Slots,
}

impl Serialize for FSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawSeq {
            f: self.f.clone(),
            slots: self.slots.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSeq::deserialize(d)?;
        FSequence::new(raw.f, raw.slots).map_err(serde::de::Error::custom)
    }
}

/// Members share one `f`. JSON: `{"f":[..],"members":[[[slots]..]..]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FSeqFamily {
    f: Vec<usize>,
    members: Vec<Slots>,
}

impl FSeqFamily {
    pub fn new(f: Vec<usize>, members: Vec<Slots>) -> Result<Self> {
        check_alphabets(&f)?;
        for m in &members {
            check_slots(&f, m)?;
        }
        Ok(FSeqFamily { f, members })
    }

    pub fn from_sequences(f: Vec<usize>, seqs: Vec<FSequence>) -> Result<Self> {
        if let Some(s) = seqs.iter().find(|s| s.f != f) {
            return Err(Error::ShapeMismatch(format!(
                "member over f = {:?}, family over f = {:?}",
                s.f, f
            )));
        }
        FSeqFamily::new(f, seqs.into_iter().map(|s| s.slots).collect())
    }

    pub fn f(&self) -> &[usize] {
        &self.f
    }

    pub fn members(&self) -> &[Slots] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of indices `N`.
    pub fn width(&self) -> usize {
        self.f.len()
    }
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    f: Vec<usize>,
    members: Vec<Slots>,
}

impl Serialize for FSeqFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawFamily {
            f: self.f.clone(),
            members: self.members.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FSeqFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawFamily::deserialize(d)?;
        FSeqFamily::new(raw.f, raw.members).map_err(serde::de::Error::custom)
    }
}

/// Whether `g` meets every member somewhere.
pub fn is_fseq_o_diagonalized_by(fam: &FSeqFamily, g: &[usize]) -> bool {
    g.len() == fam.width()
        && fam
            .members
            .iter()
            .all(|s| s.iter().zip(g).any(|(slot, x)| slot.contains(x)))
}

struct FSeqSearch<'a> {
    fam: &'a FSeqFamily,
    /// `hits[n][x]`: members with `x ∈ σ(n)`.
    hits: Vec<Vec<Bits>>,
    /// Members with some nonempty slot strictly after index `n`.
    alive_after: Vec<Bits>,
}

impl<'a> FSeqSearch<'a> {
    fn new(fam: &'a FSeqFamily) -> Self {
        let k = fam.len();
        let hits = (0..fam.width())
            .map(|n| {
                (0..fam.f[n])
                    .map(|x| {
                        let mut b = Bits::new(k);
                        for (i, s) in fam.members.iter().enumerate() {
                            if s[n].contains(&x) {
                                b.insert(i);
                            }
                        }
                        b
                    })
                    .collect()
            })
            .collect();
        let mut alive_after = vec![Bits::new(k); fam.width()];
        for n in (0..fam.width().saturating_sub(1)).rev() {
            let mut b = alive_after[n + 1].clone();
            for (i, s) in fam.members.iter().enumerate() {
                if !s[n + 1].is_empty() {
                    b.insert(i);
                }
            }
            alive_after[n] = b;
        }
        FSeqSearch {
            fam,
            hits,
            alive_after,
        }
    }
}

impl RowSearch for FSeqSearch<'_> {
    type State = Bits;

    fn rows(&self) -> usize {
        self.fam.width()
    }

    fn options(&self, row: usize) -> usize {
        self.fam.f[row]
    }

    fn initial(&self) -> Bits {
        Bits::new(self.fam.len())
    }

    fn extend(&self, state: &Bits, row: usize, option: usize) -> Option<Bits> {
        let mut next = state.clone();
        next.union_with(&self.hits[row][option]);
        let mut reachable = next.clone();
        reachable.union_with(&self.alive_after[row]);
        reachable
            .is_superset(&Bits::full(self.fam.len()))
            .then_some(next)
    }

    fn accept(&self, state: &Bits) -> bool {
        state.count() == self.fam.len()
    }
}

/// Lexicographically least `g ∈ ∏ f(n)` meeting every member, by complete search.
pub fn find_fseq_o_diag(fam: &FSeqFamily, limits: &SearchLimits) -> Result<Option<Vec<usize>>> {
    first_assignment(&FSeqSearch::new(fam), limits)
}

/// The three defining conditions of a θ-witness, each evaluated separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaReport {
    /// Every member has at most `e` empty slots.
    pub nonempty_slots: bool,
    /// Every pair is comparable up to `e` exceptions in one direction.
    pub comparable: bool,
    pub not_o_diagonalizable: bool,
    /// Least diagonalizer when one exists.
    pub diagonalizer: Option<Vec<usize>>,
    /// First pair failing comparability.
    pub incomparable_pair: Option<(usize, usize)>,
}

impl ThetaReport {
    pub fn holds(&self) -> bool {
        self.nonempty_slots && self.comparable && self.not_o_diagonalizable
    }
}

pub fn check_theta_witness(fam: &FSeqFamily, e: usize, limits: &SearchLimits) -> Result<ThetaReport> {
    let nonempty_slots = fam
        .members
        .iter()
        .all(|s| s.iter().filter(|slot| slot.is_empty()).count() <= e);
    let not_below = |a: &Slots, b: &Slots| {
        a.iter()
            .zip(b)
            .filter(|(x, y)| !x.is_subset(y))
            .count()
    };
    let mut incomparable_pair = None;
    'outer: for i in 0..fam.len() {
        for j in i + 1..fam.len() {
            let (a, b) = (&fam.members[i], &fam.members[j]);
            if not_below(a, b) > e && not_below(b, a) > e {
                incomparable_pair = Some((i, j));
                break 'outer;
            }
        }
    }
    let diagonalizer = find_fseq_o_diag(fam, limits)?;
    Ok(ThetaReport {
        nonempty_slots,
        comparable: incomparable_pair.is_none(),
        not_o_diagonalizable: diagonalizer.is_none(),
        diagonalizer,
        incomparable_pair,
    })
}

/// Mixed-radix enumeration of `∏ alphabets`, last coordinate fastest.
pub fn product_tuples(alphabets: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &a in alphabets {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..a).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

fn everywhere_different(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(x, y)| x != y)
}

fn product_size(alphabets: &[usize], limits: &SearchLimits) -> Result<usize> {
    let mut size: u64 = 1;
    for &a in alphabets {
        size = size.saturating_mul(a as u64);
        if size > limits.cap {
            return Err(Error::CapExceeded { cap: limits.cap });
        }
    }
    Ok(size as usize)
}

/// Smallest `F ⊆ ∏ f(n)` such that every `g` is everywhere different from some
/// member of `F`.
///
/// Permuting symbols coordinatewise preserves the covering relation, so a
/// minimum family may be assumed to contain the all-zero tuple.
pub fn finite_e(f: &[usize], limits: &SearchLimits) -> Result<usize> {
    if let Some(n) = f.iter().position(|&a| a == 0) {
        return Err(Error::Invalid(format!("f({n}) = 0 leaves nothing to choose")));
    }
    if let Some(n) = f.iter().position(|&a| a == 1) {
        return Err(Error::NoAvoidingFamily(n));
    }
    let size = product_size(f, limits)?;
    let tuples = product_tuples(f);
    debug_assert_eq!(tuples.len(), size);
    let zero = vec![0; f.len()];
    let mut target = Bits::new(size);
    for (i, g) in tuples.iter().enumerate() {
        if !everywhere_different(&zero, g) {
            target.insert(i);
        }
    }
    let candidates = covering_sets(&tuples, &tuples);
    match minimum_cover(&target, &candidates, limits)? {
        Some(rest) => Ok(1 + rest.len()),
        None => unreachable!("with alphabets of size >= 2 every tuple has an avoider"),
    }
}

/// For each candidate `h`, the set of targets `g` it avoids everywhere.
fn covering_sets(candidates: &[Vec<usize>], targets: &[Vec<usize>]) -> Vec<Bits> {
    candidates
        .iter()
        .map(|h| {
            let mut b = Bits::new(targets.len());
            for (i, g) in targets.iter().enumerate() {
                if everywhere_different(h, g) {
                    b.insert(i);
                }
            }
            b
        })
        .collect()
}

/// Block boundaries `0 = t_0 < t_1 < …` and one alphabet size per coordinate
/// below the last boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockSpec {
    pub bounds: Vec<usize>,
    pub alphabets: Vec<usize>,
}

impl BlockSpec {
    pub fn new(bounds: Vec<usize>, alphabets: Vec<usize>) -> Result<Self> {
        if bounds.first() != Some(&0) {
            return Err(Error::Invalid("block bounds must start at 0".into()));
        }
        if bounds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("block bounds must increase strictly".into()));
        }
        let end = *bounds.last().unwrap_or(&0);
        if alphabets.len() != end {
            return Err(Error::ShapeMismatch(format!(
                "{} alphabets for {end} coordinates",
                alphabets.len()
            )));
        }
        Ok(BlockSpec { bounds, alphabets })
    }

    pub fn blocks(&self) -> usize {
        self.bounds.len().saturating_sub(1)
    }

    /// Alphabet sizes of block `i`, the factors of `X_i`.
    pub fn block(&self, i: usize) -> Result<&[usize]> {
        if i >= self.blocks() {
            return Err(Error::Invalid(format!(
                "block {i} does not exist ({} blocks)",
                self.blocks()
            )));
        }
        Ok(&self.alphabets[self.bounds[i]..self.bounds[i + 1]])
    }
}

#[derive(Deserialize)]
struct RawBlocks {
    bounds: Vec<usize>,
    alphabets: Vec<usize>,
}

impl<'de> Deserialize<'de> for BlockSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawBlocks::deserialize(d)?;
        BlockSpec::new(raw.bounds, raw.alphabets).map_err(serde::de::Error::custom)
    }
}

/// Smallest `Z ⊆ ∏ alphabets` such that each `ν ∈ y` is everywhere different
/// from some member of `Z`.
pub fn compute_nor(y: &[Vec<usize>], alphabets: &[usize], limits: &SearchLimits) -> Result<usize> {
    for nu in y {
        if nu.len() != alphabets.len() || nu.iter().zip(alphabets).any(|(x, a)| x >= a) {
            return Err(Error::Invalid(format!(
                "{nu:?} is not a tuple over alphabets {alphabets:?}"
            )));
        }
    }
    let y: Vec<Vec<usize>> = y
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if y.is_empty() {
        return Ok(0);
    }
    if let Some(n) = alphabets.iter().position(|&a| a < 2) {
        return Err(Error::NoAvoidingFamily(n));
    }
    product_size(alphabets, limits)?;
    let candidates = covering_sets(&product_tuples(alphabets), &y);
    match minimum_cover(&Bits::full(y.len()), &candidates, limits)? {
        Some(z) => Ok(z.len()),
        None => unreachable!("with alphabets of size >= 2 every tuple has an avoider"),
    }
}

/// `nor(X_i)` of a whole block.
pub fn nor_of_block(spec: &BlockSpec, i: usize, limits: &SearchLimits) -> Result<usize> {
    let alphabets = spec.block(i)?;
    product_size(alphabets, limits)?;
    compute_nor(&product_tuples(alphabets), alphabets, limits)
}

/// Builds `σ_0 ⊇ σ_1 ⊇ …` with `σ_i(n) = σ_{i-1}(n) ∖ S_i(n)`.
///
/// Requires `alphabet(n) > Σ_i |S_i(n)|` at every coordinate, which keeps every
/// `σ_i(n)` nonempty.
pub fn avoid_slaloms(alphabets: &[usize], slaloms: &[Slots]) -> Result<Vec<Slots>> {
    for (i, s) in slaloms.iter().enumerate() {
        check_slots(alphabets, s).map_err(|e| Error::Invalid(format!("slalom {i}: {e}")))?;
    }
    for (n, &a) in alphabets.iter().enumerate() {
        let used: usize = slaloms.iter().map(|s| s[n].len()).sum();
        if a <= used {
            return Err(Error::SlalomOverflow {
                coordinate: n,
                alphabet: a,
                used,
            });
        }
    }
    let mut current: Slots = alphabets.iter().map(|&a| (0..a).collect()).collect();
    let mut chain = Vec::with_capacity(slaloms.len());
    for s in slaloms {
        for (cur, bad) in current.iter_mut().zip(s) {
            cur.retain(|x| !bad.contains(x));
        }
        chain.push(current.clone());
    }
    Ok(chain)
}

/// Partial sums `f*(k) = Σ_{j<k} f(j)` for `k = 0..=N`.
pub fn f_star(f: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(f.len() + 1);
    let mut acc = 0;
    out.push(0);
    for &a in f {
        acc += a;
        out.push(acc);
    }
    out
}

/// Arrays `A_σ` with `A_σ(n, m) = 1` iff `m ∈ [f*(k), f*(k+1))` and
/// `m − f*(k) ∈ σ(k)` for some `k ∈ B_n`. Tails are 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub family: ArrayFamily,
    pub f_star: Vec<usize>,
    pub partition: Vec<Vec<usize>>,
}

pub fn embed_fseq_as_tau_family(
    fam: &FSeqFamily,
    partition: &[Vec<usize>],
    cols: usize,
) -> Result<Embedding> {
    let n_idx = fam.width();
    let mut seen = vec![false; n_idx];
    for block in partition {
        for &k in block {
            if k >= n_idx {
                return Err(Error::Invalid(format!("block index {k} exceeds N = {n_idx}")));
            }
            if std::mem::replace(&mut seen[k], true) {
                return Err(Error::Invalid(format!("index {k} lies in two blocks")));
            }
        }
    }
    if let Some(k) = seen.iter().position(|&s| !s) {
        return Err(Error::Invalid(format!("index {k} lies in no block")));
    }
    let star = f_star(&fam.f);
    if cols < star[n_idx] {
        return Err(Error::Precondition(format!(
            "{cols} columns cannot hold f*(N) = {}",
            star[n_idx]
        )));
    }
    let rows = partition.len();
    let members = fam
        .members
        .iter()
        .map(|slots| {
            let mut a = BinaryArray::zeros(rows, cols);
            for (n, block) in partition.iter().enumerate() {
                for &k in block {
                    for &x in &slots[k] {
                        a.set(n, star[k] + x, true);
                    }
                }
            }
            a
        })
        .collect();
    let mut partition: Vec<Vec<usize>> = partition.to_vec();
    for b in &mut partition {
        b.sort_unstable();
    }
    Ok(Embedding {
        family: ArrayFamily::new(rows, cols, members)?,
        f_star: star,
        partition,
    })
}

impl Embedding {
    /// Slot choice `h` from an array diagonalizer `g`: `h(k) = g(n) − f*(k)` when
    /// `g(n)` falls in the segment of `k ∈ B_n`, and 0 otherwise.
    pub fn forward(&self, g: &Diagonalizer) -> Result<Vec<usize>> {
        if g.assignment.len() != self.partition.len() {
            return Err(Error::ShapeMismatch(format!(
                "diagonalizer has {} rows, embedding has {}",
                g.assignment.len(),
                self.partition.len()
            )));
        }
        let mut h = vec![0; self.f_star.len() - 1];
        for (block, col) in self.partition.iter().zip(&g.assignment) {
            if let Some(Column::Index(m)) = col {
                for &k in block {
                    if (self.f_star[k]..self.f_star[k + 1]).contains(m) {
                        h[k] = m - self.f_star[k];
                    }
                }
            }
        }
        Ok(h)
    }

    /// Array diagonalizer from a slot choice `h`: row `n` takes column
    /// `f*(k) + h(k)` for the single `k ∈ B_n`. Only defined when every block has
    /// at most one index; rows with empty blocks take the tail.
    pub fn inverse(&self, h: &[usize]) -> Result<Diagonalizer> {
        if h.len() + 1 != self.f_star.len() {
            return Err(Error::ShapeMismatch(format!(
                "slot choice has {} indices, embedding has {}",
                h.len(),
                self.f_star.len() - 1
            )));
        }
        let cols = self
            .partition
            .iter()
            .map(|block| match block.as_slice() {
                [] => Ok(Column::Tail),
                [k] => Ok(Column::Index(self.f_star[*k] + h[*k])),
                _ => Err(Error::Precondition(
                    "the inverse transfer needs blocks of at most one index".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Diagonalizer::total(cols))
    }
}

/// f-sequence family read off a window system: `f(n) = |F_{k_n}|` and
/// `σ_A(n) = {m : A(k_n, F_{k_n}(m)) = 1}` over the rows `k_n` with nonempty windows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub f: GrowthFunction,
    pub family: FSeqFamily,
    /// The rows `k_0 < k_1 < …` carrying nonempty windows.
    pub rows: Vec<usize>,
    pub windows: WindowSystem,
}

pub fn reduce_tau_to_fseq(fam: &ArrayFamily, win: &WindowSystem) -> Result<Reduction> {
    if win.windows.len() != fam.rows() {
        return Err(Error::ShapeMismatch(format!(
            "{} windows for {} rows",
            win.windows.len(),
            fam.rows()
        )));
    }
    let win = WindowSystem::new(win.windows.clone());
    let mut rows = Vec::new();
    for (k, w) in win.windows.iter().enumerate() {
        match w.len() {
            0 => {}
            1 => return Err(Error::WindowTooSmall { row: k, size: 1 }),
            _ => rows.push(k),
        }
    }
    let f: Vec<usize> = rows.iter().map(|&k| win.windows[k].len()).collect();
    let members = fam
        .members()
        .iter()
        .map(|a| {
            rows.iter()
                .map(|&k| {
                    win.windows[k]
                        .iter()
                        .enumerate()
                        .filter(|&(_, &c)| a.at(k, c))
                        .map(|(m, _)| m)
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(Reduction {
        family: FSeqFamily::new(f.clone(), members)?,
        f: GrowthFunction(f),
        rows,
        windows: win,
    })
}

impl Reduction {
    /// `h(k_n) = F_{k_n}(g(n))`; rows without a window take the tail.
    pub fn lift(&self, g: &[usize]) -> Result<Diagonalizer> {
        if g.len() != self.rows.len() {
            return Err(Error::ShapeMismatch(format!(
                "choice has {} indices, reduction has {}",
                g.len(),
                self.rows.len()
            )));
        }
        let mut cols = vec![Column::Tail; self.windows.windows.len()];
        for ((&k, &x), &fx) in self.rows.iter().zip(g).zip(&self.f.0) {
            if x >= fx {
                return Err(Error::Invalid(format!("g chooses {x} below f = {fx}")));
            }
            cols[k] = self.windows.windows[k][x];
        }
        Ok(Diagonalizer::total(cols))
    }
}
