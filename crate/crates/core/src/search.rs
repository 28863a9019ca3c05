//! Complete, deterministic search primitives shared by every witness finder.
//!
//! All searches visit candidates in lexicographic order (row 0 most significant,
//! options in their per-row order) and return the first accepted candidate, so
//! the answer is the lexicographically least witness. Worker threads split the
//! options of the first row; the smallest successful first-row option wins, which
//! keeps results identical for every worker count.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use crate::error::{Error, Result};

/// Default cap on candidate evaluations.
pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum number of partial or complete candidates evaluated before giving up.
    pub cap: u64,
    /// Number of worker threads; 1 runs inline.
    pub workers: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            cap: DEFAULT_CAP,
            workers: 1,
        }
    }
}

impl SearchLimits {
    pub fn with_cap(cap: u64) -> Self {
        SearchLimits {
            cap,
            ..Self::default()
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

struct Meter {
    used: AtomicU64,
    cap: u64,
}

impl Meter {
    fn new(cap: u64) -> Self {
        Meter {
            used: AtomicU64::new(0),
            cap,
        }
    }

    fn tick(&self) -> Result<()> {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.cap {
            Err(Error::CapExceeded { cap: self.cap })
        } else {
            Ok(())
        }
    }
}

/// A row-by-row backtracking problem. `extend` returns `None` when the partial
/// assignment can no longer be completed to an accepted one.
pub trait RowSearch: Sync {
    type State: Clone + Send;

    fn rows(&self) -> usize;
    fn options(&self, row: usize) -> usize;
    fn initial(&self) -> Self::State;
    fn extend(&self, state: &Self::State, row: usize, option: usize) -> Option<Self::State>;
    fn accept(&self, state: &Self::State) -> bool;
}

/// Returns the lexicographically least accepted assignment (one option index per row).
pub fn first_assignment<S: RowSearch>(
    search: &S,
    limits: &SearchLimits,
) -> Result<Option<Vec<usize>>> {
    let meter = Meter::new(limits.cap);
    let rows = search.rows();
    if rows == 0 {
        meter.tick()?;
        let init = search.initial();
        return Ok(search.accept(&init).then(Vec::new));
    }
    let first_options = search.options(0);
    let workers = limits.workers.max(1).min(first_options.max(1));
    if workers <= 1 {
        let mut path = Vec::with_capacity(rows);
        let init = search.initial();
        return dfs(search, &meter, &init, 0, 0..first_options, &mut path, None)
            .map(|found| found.then_some(path));
    }

    let best = AtomicUsize::new(usize::MAX);
    let results: Vec<Result<Option<Vec<usize>>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let meter = &meter;
                let best = &best;
                scope.spawn(move || -> Result<Option<Vec<usize>>> {
                    let init = search.initial();
                    let mut opt = w;
                    while opt < first_options {
                        if best.load(Ordering::Acquire) < opt {
                            return Ok(None);
                        }
                        let mut path = Vec::with_capacity(rows);
                        if dfs(search, meter, &init, 0, opt..opt + 1, &mut path, Some(best))? {
                            best.fetch_min(opt, Ordering::AcqRel);
                            return Ok(Some(path));
                        }
                        opt += workers;
                    }
                    Ok(None)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });

    let mut winner: Option<Vec<usize>> = None;
    let mut failure = None;
    for r in results {
        match r {
            Ok(Some(path)) => {
                if winner.as_ref().is_none_or(|w| path[0] < w[0]) {
                    winner = Some(path);
                }
            }
            Ok(None) => {}
            Err(e) => failure = Some(e),
        }
    }
    match (winner, failure) {
        (Some(w), _) => Ok(Some(w)),
        (None, Some(e)) => Err(e),
        (None, None) => Ok(None),
    }
}

fn dfs<S: RowSearch>(
    search: &S,
    meter: &Meter,
    state: &S::State,
    row: usize,
    range: std::ops::Range<usize>,
    path: &mut Vec<usize>,
    best: Option<&AtomicUsize>,
) -> Result<bool> {
    for opt in range {
        if let Some(best) = best {
            if row > 0 && best.load(Ordering::Relaxed) < path[0] {
                return Ok(false);
            }
        }
        meter.tick()?;
        let Some(next) = search.extend(state, row, opt) else {
            continue;
        };
        path.push(opt);
        if row + 1 == search.rows() {
            if search.accept(&next) {
                return Ok(true);
            }
        } else {
            let width = search.options(row + 1);
            if dfs(search, meter, &next, row + 1, 0..width, path, best)? {
                return Ok(true);
            }
        }
        path.pop();
    }
    Ok(false)
}

/// Plain mixed-radix enumeration with a predicate on complete tuples.
pub fn lex_first<F>(radices: &[usize], limits: &SearchLimits, accept: F) -> Result<Option<Vec<usize>>>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    struct Odometer<'a, F> {
        radices: &'a [usize],
        accept: F,
    }
    impl<F: Fn(&[usize]) -> bool + Sync> RowSearch for Odometer<'_, F> {
        type State = Vec<usize>;
        fn rows(&self) -> usize {
            self.radices.len()
        }
        fn options(&self, row: usize) -> usize {
            self.radices[row]
        }
        fn initial(&self) -> Vec<usize> {
            Vec::with_capacity(self.radices.len())
        }
        fn extend(&self, state: &Vec<usize>, _row: usize, option: usize) -> Option<Vec<usize>> {
            let mut next = state.clone();
            next.push(option);
            Some(next)
        }
        fn accept(&self, state: &Vec<usize>) -> bool {
            (self.accept)(state)
        }
    }
    first_assignment(&Odometer { radices, accept }, limits)
}

/// Fixed-size bit set over `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Bits::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_superset(&self, other: &Bits) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| b & !a == 0)
    }

    /// Lowest index present in `target` but not in `self`.
    pub fn first_missing(&self, target: &Bits) -> Option<usize> {
        self.words
            .iter()
            .zip(&target.words)
            .enumerate()
            .find_map(|(i, (a, t))| {
                let missing = t & !a;
                (missing != 0).then(|| i * 64 + missing.trailing_zeros() as usize)
            })
    }
}

/// Exact minimum set cover by iterative deepening.
///
/// Returns the sorted indices of a smallest subfamily of `candidates` whose union
/// contains `target`, or `None` when even all candidates together miss part of it.
/// Branching always happens on the lowest uncovered element, so each candidate
/// family is visited once per depth.
pub fn minimum_cover(
    target: &Bits,
    candidates: &[Bits],
    limits: &SearchLimits,
) -> Result<Option<Vec<usize>>> {
    let mut everything = Bits::new(target.len());
    for c in candidates {
        everything.union_with(c);
    }
    if !everything.is_superset(target) {
        return Ok(None);
    }
    let meter = Meter::new(limits.cap);
    let covering: Vec<Vec<usize>> = (0..target.len())
        .map(|e| {
            (0..candidates.len())
                .filter(|&c| candidates[c].contains(e))
                .collect()
        })
        .collect();
    for depth in 0..=candidates.len() {
        let mut chosen = Vec::with_capacity(depth);
        if cover_dfs(
            target,
            candidates,
            &covering,
            &Bits::new(target.len()),
            depth,
            &mut chosen,
            &meter,
        )? {
            chosen.sort_unstable();
            return Ok(Some(chosen));
        }
    }
    Ok(None)
}

fn cover_dfs(
    target: &Bits,
    candidates: &[Bits],
    covering: &[Vec<usize>],
    covered: &Bits,
    depth: usize,
    chosen: &mut Vec<usize>,
    meter: &Meter,
) -> Result<bool> {
    meter.tick()?;
    let Some(e) = covered.first_missing(target) else {
        return Ok(true);
    };
    if depth == 0 {
        return Ok(false);
    }
    for &c in &covering[e] {
        let mut next = covered.clone();
        next.union_with(&candidates[c]);
        chosen.push(c);
        if cover_dfs(target, candidates, covering, &next, depth - 1, chosen, meter)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// All subsets of `0..n` with at most `k` elements, as sorted vectors in
/// lexicographic order (the empty set first).
pub fn bounded_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == k {
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
