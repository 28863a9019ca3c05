//! Decision procedures and complete witness searches for diagonalizing finite
//! array families: τ-diagonalizers, finite window systems, partial ("semi")
//! diagonalizers and o-diagonalizers.
//!
//! Quantifiers over rows are finitized by a [`QuantMode`]: "for infinitely many
//! n" becomes "for at least `q` rows" and "for all but finitely many n" becomes
//! "with at most `e` exceptional rows". Columns are exact thanks to the tail bit;
//! a choice may name the symbolic [`Column::Tail`] ("some m ≥ C").

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arrays::{ArrayFamily, BinaryArray, Column, GrowthFunction};
use crate::error::{Error, Result};
use crate::search::{bounded_subsets, first_assignment, RowSearch, SearchLimits};

/// How the per-row column quantifiers of the family predicates are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnMode {
    /// Decide "for almost all m" by the tail bit. Under this reading every two
    /// rows are eventually comparable.
    TailExact,
    /// Allow at most this many prefix columns to violate a row comparison.
    PrefixBudget(usize),
}

/// What a window quantifier counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Counting {
    /// Rows: a member is hit in row n when some column of `F_n` hits it.
    #[default]
    Rows,
    /// Individual (row, column) cells of the windows. With finite windows this
    /// is an equally faithful reading of the infinite quantifiers, and it is the
    /// one that matches counting members of a selected cover.
    Cells,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantMode {
    /// Threshold standing in for "infinitely many".
    pub q: usize,
    /// Exception budget standing in for "all but finitely many".
    pub e: usize,
    pub columns: ColumnMode,
    pub counting: Counting,
}

impl Default for QuantMode {
    fn default() -> Self {
        QuantMode {
            q: 1,
            e: 0,
            columns: ColumnMode::TailExact,
            counting: Counting::Rows,
        }
    }
}

impl QuantMode {
    pub fn new(q: usize, e: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::Invalid("q must be at least 1".into()));
        }
        Ok(QuantMode {
            q,
            e,
            ..Self::default()
        })
    }

    pub fn with_columns(mut self, columns: ColumnMode) -> Self {
        self.columns = columns;
        self
    }

    pub fn with_counting(mut self, counting: Counting) -> Self {
        self.counting = counting;
        self
    }
}

/// A total or partial column choice `g`. `None` marks rows outside `dom(g)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagonalizer {
    pub assignment: Vec<Option<Column>>,
}

impl Diagonalizer {
    pub fn total(cols: impl IntoIterator<Item = Column>) -> Self {
        Diagonalizer {
            assignment: cols.into_iter().map(Some).collect(),
        }
    }

    pub fn is_total(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    pub fn domain(&self) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(n, c)| c.map(|_| n))
            .collect()
    }

    /// Singleton windows `{g(n)}` on the domain, empty elsewhere.
    pub fn to_windows(&self) -> WindowSystem {
        WindowSystem {
            windows: self
                .assignment
                .iter()
                .map(|c| c.iter().copied().collect())
                .collect(),
        }
    }
}

/// Per-row finite column sets `F_n`, kept sorted and duplicate free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSystem {
    pub windows: Vec<Vec<Column>>,
}

impl WindowSystem {
    pub fn new(windows: Vec<Vec<Column>>) -> Self {
        let windows = windows
            .into_iter()
            .map(|w| {
                let set: BTreeSet<Column> = w.into_iter().collect();
                set.into_iter().collect()
            })
            .collect();
        WindowSystem { windows }
    }

    pub fn empty(rows: usize) -> Self {
        WindowSystem {
            windows: vec![Vec::new(); rows],
        }
    }

    pub fn max_width(&self) -> usize {
        self.windows.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Which comparison holds for a pair along a diagonalizer or window system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairOrder {
    /// Both `A ≤ B` and `B ≤ A` hold within budget.
    Both,
    FirstBelow,
    SecondBelow,
    Neither,
}

/// Counts behind a window-system verdict, so callers can see which direction
/// of each either/or clause was used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub hits: Vec<usize>,
    /// `(i, j, violations of A_i ≤ A_j, violations of A_j ≤ A_i, order)` for `i < j`.
    pub pairs: Vec<(usize, usize, usize, usize, PairOrder)>,
    pub holds: bool,
}

pub fn is_gamma_family(fam: &ArrayFamily) -> bool {
    fam.members()
        .iter()
        .all(|a| a.tails().iter().all(|&t| t))
}

fn row_violations(a: &BinaryArray, b: &BinaryArray, n: usize) -> Option<usize> {
    // None means infinitely many violations (tail of A is 1 where B's is 0).
    if a.tail(n) && !b.tail(n) {
        return None;
    }
    Some(
        a.row(n)
            .iter()
            .zip(b.row(n))
            .filter(|(&x, &y)| x && !y)
            .count(),
    )
}

fn row_below(a: &BinaryArray, b: &BinaryArray, n: usize, columns: ColumnMode) -> bool {
    match columns {
        ColumnMode::TailExact => !a.tail(n) || b.tail(n),
        ColumnMode::PrefixBudget(em) => row_violations(a, b, n).is_some_and(|v| v <= em),
    }
}

/// The rows `n` on which `A(n,·) ≤ B(n,·)` for almost all columns.
pub fn comparability_set(
    a: &BinaryArray,
    b: &BinaryArray,
    mode: &QuantMode,
) -> Result<BTreeSet<usize>> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!(
            "comparability of {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok((0..a.rows())
        .filter(|&n| row_below(a, b, n, mode.columns))
        .collect())
}

/// τ-family test: every row has infinitely many ones, and per row every two
/// members are eventually comparable.
pub fn is_tau_family(fam: &ArrayFamily, mode: &QuantMode) -> bool {
    let members = fam.members();
    let many_ones = |a: &BinaryArray, n: usize| match mode.columns {
        ColumnMode::TailExact => a.tail(n),
        ColumnMode::PrefixBudget(_) => {
            a.tail(n) || a.row(n).iter().filter(|&&b| b).count() >= mode.q
        }
    };
    if !members
        .iter()
        .all(|a| (0..fam.rows()).all(|n| many_ones(a, n)))
    {
        return false;
    }
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            for n in 0..fam.rows() {
                if !row_below(a, b, n, mode.columns) && !row_below(b, a, n, mode.columns) {
                    return false;
                }
            }
        }
    }
    true
}

fn check_window_shape(fam: &ArrayFamily, win: &WindowSystem) -> Result<()> {
    if win.windows.len() != fam.rows() {
        return Err(Error::ShapeMismatch(format!(
            "{} windows for {} rows",
            win.windows.len(),
            fam.rows()
        )));
    }
    for w in &win.windows {
        if let Some(Column::Index(m)) = w.iter().find(|c| matches!(c, Column::Index(m) if *m >= fam.cols())) {
            return Err(Error::ShapeMismatch(format!(
                "window column {m} outside 0..{}; use \"tail\" for columns >= C",
                fam.cols()
            )));
        }
    }
    Ok(())
}

/// Hit and violation counts contributed by one window in one row.
fn window_counts(
    members: &[BinaryArray],
    n: usize,
    window: &[Column],
    counting: Counting,
) -> (Vec<usize>, Vec<usize>) {
    let k = members.len();
    let mut hits = vec![0; k];
    let mut viol = vec![0; k * k];
    for &col in window {
        let vals: Vec<bool> = members.iter().map(|a| a.at(n, col)).collect();
        for i in 0..k {
            if vals[i] {
                hits[i] += 1;
                for j in 0..k {
                    if !vals[j] {
                        viol[i * k + j] += 1;
                    }
                }
            }
        }
    }
    if counting == Counting::Rows {
        hits.iter_mut().for_each(|h| *h = (*h).min(1));
        viol.iter_mut().for_each(|v| *v = (*v).min(1));
    }
    (hits, viol)
}

/// Evaluates both clauses of finite τ-diagonalization by `win`.
pub fn window_report(
    fam: &ArrayFamily,
    win: &WindowSystem,
    mode: &QuantMode,
) -> Result<WindowReport> {
    check_window_shape(fam, win)?;
    let members = fam.members();
    let k = members.len();
    let mut hits = vec![0; k];
    let mut viol = vec![0; k * k];
    for (n, w) in win.windows.iter().enumerate() {
        let (h, v) = window_counts(members, n, w, mode.counting);
        hits.iter_mut().zip(h).for_each(|(a, b)| *a += b);
        viol.iter_mut().zip(v).for_each(|(a, b)| *a += b);
    }
    let mut pairs = Vec::new();
    let mut holds = hits.iter().all(|&h| h >= mode.q);
    for i in 0..k {
        for j in i + 1..k {
            let (ij, ji) = (viol[i * k + j], viol[j * k + i]);
            let order = match (ij <= mode.e, ji <= mode.e) {
                (true, true) => PairOrder::Both,
                (true, false) => PairOrder::FirstBelow,
                (false, true) => PairOrder::SecondBelow,
                (false, false) => PairOrder::Neither,
            };
            holds &= order != PairOrder::Neither;
            pairs.push((i, j, ij, ji, order));
        }
    }
    Ok(WindowReport { hits, pairs, holds })
}

pub fn is_finitely_tau_diagonalized_by(
    fam: &ArrayFamily,
    win: &WindowSystem,
    mode: &QuantMode,
) -> Result<bool> {
    Ok(window_report(fam, win, mode)?.holds)
}

/// τ-diagonalization by a total `g`.
pub fn is_tau_diagonalized_by(
    fam: &ArrayFamily,
    g: &Diagonalizer,
    mode: &QuantMode,
) -> Result<bool> {
    if !g.is_total() {
        return Err(Error::Invalid(
            "τ-diagonalization needs a total g; use the semi variant for partial ones".into(),
        ));
    }
    is_finitely_tau_diagonalized_by(fam, &g.to_windows(), mode)
}

/// Semi τ-diagonalization: quantifiers relativized to `dom(g)`.
pub fn is_semi_tau_diagonalized_by(
    fam: &ArrayFamily,
    g: &Diagonalizer,
    mode: &QuantMode,
) -> Result<bool> {
    is_finitely_tau_diagonalized_by(fam, &g.to_windows(), mode)
}

/// Candidate windows offered to every row, in search order.
fn column_space(cols: usize) -> Vec<Column> {
    (0..=cols).map(|i| Column::from_index(i, cols)).collect()
}

/// Number of candidates a complete τ-diagonalizer search may visit.
pub fn tau_search_space(fam: &ArrayFamily) -> f64 {
    ((fam.cols() + 1) as f64).powi(fam.rows() as i32)
}

/// Number of candidates a complete window search of width `w` may visit.
pub fn window_search_space(fam: &ArrayFamily, w: usize) -> f64 {
    (bounded_subsets(fam.cols() + 1, w).len() as f64).powi(fam.rows() as i32)
}

struct WindowSearch {
    k: usize,
    rows: usize,
    q: usize,
    e: usize,
    options: Vec<Vec<Column>>,
    /// `[row][option] -> (hits, violations)`
    table: Vec<Vec<(Vec<usize>, Vec<usize>)>>,
    /// Largest hit total member `i` can still collect from rows `n..`.
    suffix_hits: Vec<Vec<usize>>,
}

#[derive(Clone)]
struct Tally {
    hits: Vec<usize>,
    viol: Vec<usize>,
}

impl WindowSearch {
    fn new(fam: &ArrayFamily, mode: &QuantMode, options: Vec<Vec<Column>>) -> Self {
        let members = fam.members();
        let k = members.len();
        let rows = fam.rows();
        let table: Vec<Vec<_>> = (0..rows)
            .map(|n| {
                options
                    .iter()
                    .map(|w| window_counts(members, n, w, mode.counting))
                    .collect()
            })
            .collect();
        let mut suffix_hits = vec![vec![0; k]; rows + 1];
        for n in (0..rows).rev() {
            for i in 0..k {
                let best = table[n].iter().map(|(h, _)| h[i]).max().unwrap_or(0);
                suffix_hits[n][i] = suffix_hits[n + 1][i] + best;
            }
        }
        WindowSearch {
            k,
            rows,
            q: mode.q,
            e: mode.e,
            options,
            table,
            suffix_hits,
        }
    }
}

impl RowSearch for WindowSearch {
    type State = Tally;

    fn rows(&self) -> usize {
        self.rows
    }

    fn options(&self, _row: usize) -> usize {
        self.options.len()
    }

    fn initial(&self) -> Tally {
        Tally {
            hits: vec![0; self.k],
            viol: vec![0; self.k * self.k],
        }
    }

    fn extend(&self, state: &Tally, row: usize, option: usize) -> Option<Tally> {
        let (h, v) = &self.table[row][option];
        let mut next = state.clone();
        for ((hit, &add), &later) in next.hits.iter_mut().zip(h).zip(&self.suffix_hits[row + 1]) {
            *hit += add;
            if *hit + later < self.q {
                return None;
            }
        }
        for (a, b) in next.viol.iter_mut().zip(v) {
            *a += b;
        }
        let k = self.k;
        for i in 0..k {
            for j in i + 1..k {
                if next.viol[i * k + j] > self.e && next.viol[j * k + i] > self.e {
                    return None;
                }
            }
        }
        Some(next)
    }

    fn accept(&self, state: &Tally) -> bool {
        state.hits.iter().all(|&h| h >= self.q)
    }
}

fn run_window_search(
    fam: &ArrayFamily,
    mode: &QuantMode,
    options: Vec<Vec<Column>>,
    limits: &SearchLimits,
) -> Result<Option<Vec<Vec<Column>>>> {
    let search = WindowSearch::new(fam, mode, options);
    Ok(first_assignment(&search, limits)?
        .map(|path| path.into_iter().map(|o| search.options[o].clone()).collect()))
}

/// Lexicographically least total τ-diagonalizer, if any.
pub fn find_tau_diagonalizer(
    fam: &ArrayFamily,
    mode: &QuantMode,
    limits: &SearchLimits,
) -> Result<Option<Diagonalizer>> {
    let options = column_space(fam.cols()).into_iter().map(|c| vec![c]).collect();
    Ok(run_window_search(fam, mode, options, limits)?
        .map(|ws| Diagonalizer::total(ws.into_iter().map(|w| w[0]))))
}

/// Lexicographically least window system with `|F_n| <= w`, if any. Windows are
/// ordered per row as sorted column lists, the empty window first.
pub fn find_finite_tau_diagonalizer(
    fam: &ArrayFamily,
    mode: &QuantMode,
    w: usize,
    limits: &SearchLimits,
) -> Result<Option<WindowSystem>> {
    let space = column_space(fam.cols());
    let options = bounded_subsets(space.len(), w)
        .into_iter()
        .map(|idx| idx.into_iter().map(|i| space[i]).collect())
        .collect();
    Ok(run_window_search(fam, mode, options, limits)?.map(|windows| WindowSystem { windows }))
}

/// Lexicographically least partial diagonalizer; "undefined" sorts before every column.
pub fn find_semi_tau_diagonalizer(
    fam: &ArrayFamily,
    mode: &QuantMode,
    limits: &SearchLimits,
) -> Result<Option<Diagonalizer>> {
    let found = find_finite_tau_diagonalizer(fam, mode, 1, limits)?;
    Ok(found.map(|ws| Diagonalizer {
        assignment: ws.windows.into_iter().map(|w| w.first().copied()).collect(),
    }))
}

/// Hit requirement of an o-diagonalizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OVariant {
    /// Every member is hit in at least one row.
    Basic,
    /// Every member is hit in at least this many rows.
    Infinite(usize),
    /// The hit sets `{n : A(n, g(n)) = 1}` form a centered family.
    Centered,
}

/// Rows on which `g` hits `a`.
pub fn hit_set(a: &BinaryArray, g: &[Column]) -> BTreeSet<usize> {
    g.iter()
        .enumerate()
        .filter(|&(n, &c)| a.at(n, c))
        .map(|(n, _)| n)
        .collect()
}

fn total_columns(fam: &ArrayFamily, g: &Diagonalizer) -> Result<Vec<Column>> {
    if g.assignment.len() != fam.rows() {
        return Err(Error::ShapeMismatch(format!(
            "diagonalizer has {} rows, family has {}",
            g.assignment.len(),
            fam.rows()
        )));
    }
    g.assignment
        .iter()
        .map(|c| c.ok_or_else(|| Error::Invalid("o-diagonalization needs a total g".into())))
        .collect()
}

pub fn is_o_diagonalized_by(
    fam: &ArrayFamily,
    g: &Diagonalizer,
    variant: OVariant,
) -> Result<bool> {
    let cols = total_columns(fam, g)?;
    let sets: Vec<BTreeSet<usize>> = fam.members().iter().map(|a| hit_set(a, &cols)).collect();
    Ok(match variant {
        OVariant::Basic => sets.iter().all(|s| !s.is_empty()),
        OVariant::Infinite(q) => sets.iter().all(|s| s.len() >= q),
        // A finite family is centered exactly when all of it has a common row:
        // that row then witnesses every subfamily.
        OVariant::Centered => {
            sets.is_empty()
                || (0..fam.rows()).any(|n| sets.iter().all(|s| s.contains(&n)))
        }
    })
}

struct OSearch<'a> {
    members: &'a [BinaryArray],
    rows: usize,
    options: Vec<Column>,
    need: usize,
    centered: bool,
    /// Rows `n..` in which member `i` can still be hit.
    suffix_hittable: Vec<Vec<usize>>,
    /// Whether some row `>= n` has a column hitting every member.
    suffix_common: Vec<bool>,
}

#[derive(Clone)]
struct OState {
    hits: Vec<usize>,
    common: bool,
}

impl<'a> OSearch<'a> {
    fn new(fam: &'a ArrayFamily, variant: OVariant) -> Self {
        let members = fam.members();
        let rows = fam.rows();
        let options = column_space(fam.cols());
        let mut suffix_hittable = vec![vec![0; members.len()]; rows + 1];
        let mut suffix_common = vec![false; rows + 1];
        for n in (0..rows).rev() {
            for (i, a) in members.iter().enumerate() {
                let can = options.iter().any(|&c| a.at(n, c));
                suffix_hittable[n][i] = suffix_hittable[n + 1][i] + usize::from(can);
            }
            let common_here = options.iter().any(|&c| members.iter().all(|a| a.at(n, c)));
            suffix_common[n] = suffix_common[n + 1] || common_here;
        }
        let (need, centered) = match variant {
            OVariant::Basic => (1, false),
            OVariant::Infinite(q) => (q, false),
            OVariant::Centered => (0, true),
        };
        OSearch {
            members,
            rows,
            options,
            need,
            centered,
            suffix_hittable,
            suffix_common,
        }
    }
}

impl RowSearch for OSearch<'_> {
    type State = OState;

    fn rows(&self) -> usize {
        self.rows
    }

    fn options(&self, _row: usize) -> usize {
        self.options.len()
    }

    fn initial(&self) -> OState {
        OState {
            hits: vec![0; self.members.len()],
            common: self.members.is_empty(),
        }
    }

    fn extend(&self, state: &OState, row: usize, option: usize) -> Option<OState> {
        let col = self.options[option];
        let mut next = state.clone();
        let mut all = true;
        for (i, a) in self.members.iter().enumerate() {
            let hit = a.at(row, col);
            all &= hit;
            next.hits[i] += usize::from(hit);
            if next.hits[i] + self.suffix_hittable[row + 1][i] < self.need {
                return None;
            }
        }
        next.common |= all;
        if self.centered && !next.common && !self.suffix_common[row + 1] {
            return None;
        }
        Some(next)
    }

    fn accept(&self, state: &OState) -> bool {
        if self.centered {
            state.common
        } else {
            state.hits.iter().all(|&h| h >= self.need)
        }
    }
}

/// Lexicographically least o-diagonalizer for the chosen variant.
pub fn find_o_diagonalizer(
    fam: &ArrayFamily,
    variant: OVariant,
    limits: &SearchLimits,
) -> Result<Option<Diagonalizer>> {
    let search = OSearch::new(fam, variant);
    Ok(first_assignment(&search, limits)?
        .map(|path| Diagonalizer::total(path.into_iter().map(|o| search.options[o]))))
}

/// Windows `F_n = [g0(n), g1(n)]` for `n ∈ s`, empty elsewhere.
pub fn windows_from_bounds(
    fam: &ArrayFamily,
    s: &BTreeSet<usize>,
    g0: &GrowthFunction,
    g1: &GrowthFunction,
) -> Result<WindowSystem> {
    let rows = fam.rows();
    if g0.len() < rows || g1.len() < rows {
        return Err(Error::Precondition(format!(
            "bounds must cover all {rows} rows"
        )));
    }
    let mut windows = vec![Vec::new(); rows];
    for &n in s {
        if n >= rows {
            return Err(Error::Precondition(format!("row {n} outside 0..{rows}")));
        }
        let (lo, hi) = (g0.0[n], g1.0[n]);
        if lo > hi || hi >= fam.cols() {
            return Err(Error::Precondition(format!(
                "row {n}: need g0 <= g1 < C, got [{lo}, {hi}] with C = {}",
                fam.cols()
            )));
        }
        windows[n] = (lo..=hi).map(Column::Index).collect();
    }
    Ok(WindowSystem { windows })
}
