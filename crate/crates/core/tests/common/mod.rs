//! Independent brute-force oracles and random instance generators.
//!
//! Nothing here calls the library's checkers or searches; predicates are
//! re-derived from their definitions and searches are plain enumerations.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selprin::arrays::{ArrayFamily, BinaryArray, Column};
use selprin::covers::CoverSystem;
use selprin::diagram::{CardinalExpr, CardinalKb, Cell, Diagram, Fact, Grid, PropertyNode};
use selprin::fseq::{FSeqFamily, Slots};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All subsets of `items` with at most `w` elements.
pub fn subsets_upto<T: Clone>(items: &[T], w: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for mask in 1u32..(1 << items.len()) {
        if mask.count_ones() as usize <= w {
            out.push(
                (0..items.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| items[i].clone())
                    .collect(),
            );
        }
    }
    out
}

/// Every tuple of the cartesian product, in any order.
pub fn product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::new();
        for t in &out {
            for x in c {
                let mut t = t.clone();
                t.push(x.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

fn cell(a: &BinaryArray, n: usize, c: Column) -> bool {
    match c {
        Column::Index(m) => a.row(n)[m],
        Column::Tail => a.tails()[n],
    }
}

/// Finite τ-diagonalization by a window system, straight from the definition.
/// With `cells` every (row, column) of a window counts separately; otherwise a
/// row counts once.
pub fn window_holds(fam: &ArrayFamily, windows: &[Vec<Column>], q: usize, e: usize, cells: bool) -> bool {
    let ms = fam.members();
    let hits = |a: &BinaryArray| -> usize {
        windows
            .iter()
            .enumerate()
            .map(|(n, w)| {
                let k = w.iter().filter(|&&c| cell(a, n, c)).count();
                if cells { k } else { usize::from(k > 0) }
            })
            .sum()
    };
    let viol = |a: &BinaryArray, b: &BinaryArray| -> usize {
        windows
            .iter()
            .enumerate()
            .map(|(n, w)| {
                let k = w.iter().filter(|&&c| cell(a, n, c) && !cell(b, n, c)).count();
                if cells { k } else { usize::from(k > 0) }
            })
            .sum()
    };
    ms.iter().all(|a| hits(a) >= q)
        && ms.iter().enumerate().all(|(i, a)| {
            ms[i + 1..]
                .iter()
                .all(|b| viol(a, b) <= e || viol(b, a) <= e)
        })
}

fn columns(cols: usize) -> Vec<Column> {
    (0..cols).map(Column::Index).chain([Column::Tail]).collect()
}

/// Whether some window system of width at most `w` works, by full enumeration.
pub fn finite_tau_exists(fam: &ArrayFamily, q: usize, e: usize, w: usize, cells: bool) -> bool {
    let per_row = subsets_upto(&columns(fam.cols()), w);
    let mut cur = Vec::with_capacity(fam.rows());
    fn rec(
        fam: &ArrayFamily,
        per_row: &[Vec<Column>],
        cur: &mut Vec<Vec<Column>>,
        q: usize,
        e: usize,
        cells: bool,
    ) -> bool {
        if cur.len() == fam.rows() {
            return window_holds(fam, cur, q, e, cells);
        }
        for opt in per_row {
            cur.push(opt.clone());
            if rec(fam, per_row, cur, q, e, cells) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(fam, &per_row, &mut cur, q, e, cells)
}

/// Whether some total `g` works as singleton windows.
pub fn tau_exists(fam: &ArrayFamily, q: usize, e: usize) -> bool {
    let cols = columns(fam.cols());
    product(&vec![cols; fam.rows()])
        .into_iter()
        .any(|g| {
            let ws: Vec<Vec<Column>> = g.into_iter().map(|c| vec![c]).collect();
            window_holds(fam, &ws, q, e, false)
        })
}

/// Every member meets `g` in some row.
pub fn o_diagonalizes(fam: &ArrayFamily, g: &[Column]) -> bool {
    fam.members()
        .iter()
        .all(|a| g.iter().enumerate().any(|(n, &c)| cell(a, n, c)))
}

pub fn o_diag_exists(fam: &ArrayFamily) -> bool {
    product(&vec![columns(fam.cols()); fam.rows()])
        .iter()
        .any(|g| o_diagonalizes(fam, g))
}

pub fn fseq_hits(members: &[Slots], g: &[usize]) -> bool {
    members
        .iter()
        .all(|s| s.iter().zip(g).any(|(slot, x)| slot.contains(x)))
}

/// Lexicographically least diagonalizer of an f-sequence family.
pub fn fseq_o_diag(fam: &FSeqFamily) -> Option<Vec<usize>> {
    let choices: Vec<Vec<usize>> = fam.f().iter().map(|&a| (0..a).collect()).collect();
    let mut all = product(&choices);
    all.sort();
    all.into_iter().find(|g| fseq_hits(fam.members(), g))
}

fn avoids(h: &[usize], g: &[usize]) -> bool {
    h.iter().zip(g).all(|(a, b)| a != b)
}

/// Smallest `Z` from the product of `alphabets` avoiding every tuple of `y`,
/// trying subfamilies by increasing size.
pub fn min_avoiding_family(y: &[Vec<usize>], alphabets: &[usize]) -> usize {
    let choices: Vec<Vec<usize>> = alphabets.iter().map(|&a| (0..a).collect()).collect();
    let cands = product(&choices);
    for size in 0..=cands.len() {
        if combinations(cands.len(), size)
            .iter()
            .any(|pick| y.iter().all(|g| pick.iter().any(|&i| avoids(&cands[i], g))))
        {
            return size;
        }
    }
    unreachable!("the whole product avoids everything when alphabets are >= 2")
}

pub fn naive_e(f: &[usize]) -> usize {
    let choices: Vec<Vec<usize>> = f.iter().map(|&a| (0..a).collect()).collect();
    min_avoiding_family(&product(&choices), f)
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Sfin selection into a τ-cover under `(q, e)`, by enumerating every choice.
pub fn sfin_tau_exists(covers: &[CoverSystem], w: usize, q: usize, e: usize) -> bool {
    let ground = covers[0].ground();
    let opts: Vec<Vec<Vec<usize>>> = covers
        .iter()
        .map(|c| subsets_upto(&(0..c.len()).collect::<Vec<_>>(), w))
        .collect();
    product(&opts).into_iter().any(|choice| {
        let sets: Vec<BTreeSet<usize>> = covers
            .iter()
            .zip(&choice)
            .flat_map(|(c, idx)| idx.iter().map(|&i| c.set(i).into_iter().collect()))
            .collect();
        let inside = |x: usize| sets.iter().filter(|s| s.contains(&x)).count();
        let only = |x: usize, y: usize| sets.iter().filter(|s| s.contains(&x) && !s.contains(&y)).count();
        let union: BTreeSet<usize> = sets.iter().flatten().copied().collect();
        union.len() == ground
            && sets.iter().all(|s| s.len() < ground)
            && (0..ground).all(|x| inside(x) >= q)
            && (0..ground).all(|x| (0..ground).all(|y| x == y || only(x, y) <= e || only(y, x) <= e))
    })
}

pub fn random_array(r: &mut impl Rng, rows: usize, cols: usize, density: f64) -> BinaryArray {
    let bits: Vec<Vec<bool>> = (0..rows)
        .map(|_| (0..cols).map(|_| r.gen_bool(density)).collect())
        .collect();
    let tail: Vec<bool> = (0..rows).map(|_| r.gen_bool(0.5)).collect();
    BinaryArray::from_rows(&bits, &tail).unwrap()
}

pub fn random_family(r: &mut impl Rng, k: usize, rows: usize, cols: usize, density: f64) -> ArrayFamily {
    ArrayFamily::new(rows, cols, (0..k).map(|_| random_array(r, rows, cols, density)).collect()).unwrap()
}

pub fn random_fseq_family(r: &mut impl Rng, f: &[usize], k: usize, density: f64) -> FSeqFamily {
    let members = (0..k)
        .map(|_| {
            f.iter()
                .map(|&a| (0..a).filter(|_| r.gen_bool(density)).collect())
                .collect()
        })
        .collect();
    FSeqFamily::new(f.to_vec(), members).unwrap()
}

/// A γ-cover under exception budget `e`: a cover with no member equal to the
/// ground set where each point misses at most `e` members.
pub fn random_gamma_cover(r: &mut impl Rng, ground: usize, max_sets: usize, e: usize) -> CoverSystem {
    loop {
        let len = r.gen_range(2..=max_sets);
        let full = (1u64 << ground) - 1;
        let sets: Vec<u64> = (0..len).map(|_| r.gen_range(0..full)).collect();
        let misses_ok = (0..ground).all(|x| sets.iter().filter(|&&s| s >> x & 1 == 0).count() <= e);
        let union = sets.iter().fold(0, |a, s| a | s);
        if misses_ok && union == full {
            return CoverSystem::from_masks(ground, sets).unwrap();
        }
    }
}

// ---------------------------------------------------------------------------
// Diagram engine oracle and random instances.

/// Rule fixpoint computed with plain sets; `None` when a cell is both ways.
pub fn naive_matrix(d: &Diagram, kb: &CardinalKb, prior: &Grid) -> Option<Grid> {
    let n = d.nodes.len();
    let mut universe: BTreeSet<CardinalExpr> = BTreeSet::new();
    for f in kb.provable_le.iter().chain(&kb.con_lt) {
        universe.extend(f.lhs.subexpressions());
        universe.extend(f.rhs.subexpressions());
    }
    for p in &d.nodes {
        universe.extend(p.non.subexpressions());
    }
    let u: Vec<CardinalExpr> = universe.into_iter().collect();
    let mut le: HashSet<(CardinalExpr, CardinalExpr)> = HashSet::new();
    for a in &u {
        le.insert((a.clone(), a.clone()));
        if let CardinalExpr::Min(x, y) = a {
            le.insert((a.clone(), (**x).clone()));
            le.insert((a.clone(), (**y).clone()));
        }
        if let CardinalExpr::Max(x, y) = a {
            le.insert(((**x).clone(), a.clone()));
            le.insert(((**y).clone(), a.clone()));
        }
    }
    le.extend(kb.provable_le.iter().map(|f| (f.lhs.clone(), f.rhs.clone())));
    let mut lt: HashSet<(CardinalExpr, CardinalExpr)> =
        kb.con_lt.iter().map(|f| (f.lhs.clone(), f.rhs.clone())).collect();
    loop {
        let before = (le.len(), lt.len());
        for a in &u {
            for b in &u {
                for c in &u {
                    let ab = le.contains(&(a.clone(), b.clone()));
                    if ab && le.contains(&(b.clone(), c.clone())) {
                        le.insert((a.clone(), c.clone()));
                    }
                    if lt.contains(&(a.clone(), b.clone())) && le.contains(&(b.clone(), c.clone())) {
                        lt.insert((a.clone(), c.clone()));
                    }
                    if ab && lt.contains(&(b.clone(), c.clone())) {
                        lt.insert((a.clone(), c.clone()));
                    }
                }
                if let CardinalExpr::Min(x, y) = b {
                    if le.contains(&(a.clone(), (**x).clone())) && le.contains(&(a.clone(), (**y).clone())) {
                        le.insert((a.clone(), b.clone()));
                    }
                }
                if let CardinalExpr::Max(x, y) = a {
                    if le.contains(&((**x).clone(), b.clone())) && le.contains(&((**y).clone(), b.clone())) {
                        le.insert((a.clone(), b.clone()));
                    }
                }
            }
        }
        if (le.len(), lt.len()) == before {
            break;
        }
    }
    if u.iter().any(|a| lt.contains(&(a.clone(), a.clone()))) {
        return None;
    }

    let mut imp = vec![false; n * n];
    for i in 0..n {
        imp[i * n + i] = true;
    }
    for &(a, b) in &d.edges {
        imp[a * n + b] = true;
    }
    for i in 0..n {
        for j in 0..n {
            if prior.get(i, j) == Cell::Implies {
                imp[i * n + j] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if imp[i * n + k] && imp[k * n + j] {
                    imp[i * n + j] = true;
                }
            }
        }
    }
    let mut not = vec![false; n * n];
    for q in 0..n {
        for p in 0..n {
            if prior.get(q, p) == Cell::NotImplies
                || lt.contains(&(d.nodes[p].non.clone(), d.nodes[q].non.clone()))
            {
                not[q * n + p] = true;
            }
        }
    }
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if !not[a * n + b] {
                    continue;
                }
                for c in 0..n {
                    for dd in 0..n {
                        if imp[a * n + c] && imp[dd * n + b] && !not[c * n + dd] {
                            not[c * n + dd] = true;
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
    let mut g = Grid::open(n);
    for k in 0..n * n {
        match (imp[k], not[k]) {
            (true, true) => return None,
            (true, false) => g.set(k / n, k % n, Cell::Implies),
            (false, true) => g.set(k / n, k % n, Cell::NotImplies),
            _ => {}
        }
    }
    Some(g)
}

const MODEL_ATOMS: [&str; 6] = ["p", "t", "b", "s", "d", "od"];

/// Evaluates an expression in an integer model of the atoms.
pub fn eval(e: &CardinalExpr, model: &[u32]) -> u32 {
    match e {
        CardinalExpr::Atom(a) => model[MODEL_ATOMS.iter().position(|x| x == a).unwrap()],
        CardinalExpr::Min(x, y) => eval(x, model).min(eval(y, model)),
        CardinalExpr::Max(x, y) => eval(x, model).max(eval(y, model)),
    }
}

/// A random instance with a hidden ground truth: several integer models of the
/// atoms decide which `≤` facts are provable (true in all models) and which
/// `<` facts are consistent (true in one). A hidden DAG that only climbs in
/// every model decides which implications hold.
pub struct RandomInstance {
    pub diagram: Diagram,
    pub kb: CardinalKb,
    pub prior: Grid,
    /// Hidden true implication relation, row-major.
    pub truth: Vec<bool>,
    /// Facts that could be added later without breaking the ground truth.
    pub spare_le: Vec<Fact>,
    pub spare_lt: Vec<Fact>,
    pub spare_prior: Vec<(usize, usize, Cell)>,
}

pub fn random_instance(r: &mut impl Rng, max_nodes: usize) -> RandomInstance {
    let n = r.gen_range(2..=max_nodes);
    let models: Vec<Vec<u32>> = (0..r.gen_range(1..=4))
        .map(|_| (0..MODEL_ATOMS.len()).map(|_| r.gen_range(1..=4)).collect())
        .collect();
    let atom = |r: &mut dyn rand::RngCore| CardinalExpr::atom(MODEL_ATOMS[r.gen_range(0..MODEL_ATOMS.len())]).unwrap();
    let expr = |r: &mut dyn rand::RngCore| match r.gen_range(0..5) {
        0 => CardinalExpr::min(atom(r), atom(r)),
        1 => CardinalExpr::max(atom(r), atom(r)),
        _ => atom(r),
    };
    let nodes: Vec<PropertyNode> = (0..n)
        .map(|i| PropertyNode {
            serial: i,
            name: format!("P{i}"),
            non: expr(r),
        })
        .collect();
    let all_le = |a: &CardinalExpr, b: &CardinalExpr| models.iter().all(|m| eval(a, m) <= eval(b, m));
    let some_lt = |a: &CardinalExpr, b: &CardinalExpr| models.iter().any(|m| eval(a, m) < eval(b, m));

    // Hidden implications only go forward in a random order and only upward in every model.
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, r.gen_range(0..=i));
    }
    let mut hidden = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let (a, b) = (order[x], order[y]);
            if all_le(&nodes[a].non, &nodes[b].non) && r.gen_bool(0.35) {
                hidden.push((a, b));
            }
        }
    }
    let mut truth = vec![false; n * n];
    for i in 0..n {
        truth[i * n + i] = true;
    }
    for &(a, b) in &hidden {
        truth[a * n + b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if truth[i * n + k] && truth[k * n + j] {
                    truth[i * n + j] = true;
                }
            }
        }
    }
    let edges: Vec<(usize, usize)> = hidden.iter().copied().filter(|_| r.gen_bool(0.7)).collect();

    let mut le_facts = Vec::new();
    let mut lt_facts = Vec::new();
    for _ in 0..r.gen_range(0..10) {
        let (a, b) = (expr(r), expr(r));
        if all_le(&a, &b) {
            le_facts.push(Fact::new(a.clone(), b.clone(), "all models"));
        }
        if some_lt(&a, &b) {
            lt_facts.push(Fact::new(a, b, "some model"));
        }
    }
    let mut prior = Grid::open(n);
    let mut spare_prior = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let c = if truth[i * n + j] { Cell::Implies } else { Cell::NotImplies };
            match r.gen_range(0..10) {
                0 | 1 => prior.set(i, j, c),
                2 => spare_prior.push((i, j, c)),
                _ => {}
            }
        }
    }
    let split_le = le_facts.len() / 2;
    let split_lt = lt_facts.len() / 2;
    let spare_le = le_facts.split_off(split_le);
    let spare_lt = lt_facts.split_off(split_lt);
    RandomInstance {
        diagram: Diagram { nodes, edges },
        kb: CardinalKb {
            provable_le: le_facts,
            con_lt: lt_facts,
        },
        prior,
        truth,
        spare_le,
        spare_lt,
        spare_prior,
    }
}
