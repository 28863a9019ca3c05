//! Finite models of 0/1 arrays indexed by ℕ×ℕ with eventually constant rows,
//! and the generator constructions used to build test families.
//!
//! A [`BinaryArray`] stores an `R×C` prefix plus one tail bit per row giving the
//! value of every column `m >= C`. "For all but finitely many m" and "for
//! infinitely many m" are therefore decided exactly by the tail bit.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A column choice: either a prefix column or the symbolic "some m ≥ C".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Column {
    Index(usize),
    Tail,
}

impl Column {
    /// Enumerates `0..cols` followed by `Tail`; `index` must be `<= cols`.
    pub fn from_index(index: usize, cols: usize) -> Column {
        if index < cols {
            Column::Index(index)
        } else {
            Column::Tail
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Column::Index(m) => write!(f, "{m}"),
            Column::Tail => f.write_str("tail"),
        }
    }
}

impl Serialize for Column {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Column::Index(m) => s.serialize_u64(*m as u64),
            Column::Tail => s.serialize_str("tail"),
        }
    }
}

impl<'de> Deserialize<'de> for Column {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Index(usize),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Index(m) => Ok(Column::Index(m)),
            Raw::Name(s) if s == "tail" => Ok(Column::Tail),
            Raw::Name(s) => Err(serde::de::Error::custom(format!(
                "expected a column index or \"tail\", got {s:?}"
            ))),
        }
    }
}

/// Finite model of an element of {0,1}^(ℕ×ℕ).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryArray {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
    tail: Vec<bool>,
}

impl BinaryArray {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryArray {
            rows,
            cols,
            bits: vec![false; rows * cols],
            tail: vec![false; rows],
        }
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        BinaryArray {
            rows,
            cols,
            bits: vec![true; rows * cols],
            tail: vec![true; rows],
        }
    }

    /// Builds an array from explicit rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<bool>], tail: &[bool]) -> Result<Self> {
        if rows.len() != tail.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} rows but {} tail bits",
                rows.len(),
                tail.len()
            )));
        }
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch(format!(
                "row {bad} has {} columns, expected {cols}",
                rows[bad].len()
            )));
        }
        Ok(BinaryArray {
            rows: rows.len(),
            cols,
            bits: rows.concat(),
            tail: tail.to_vec(),
        })
    }

    /// Parses rows written as strings of `0`/`1`.
    pub fn parse(rows: &[&str], tail: &[u8]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| {
                r.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::Parse(format!("bad bit {other:?}"))),
                    })
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let tail: Vec<bool> = tail.iter().map(|&t| t != 0).collect();
        Self::from_rows(&parsed, &tail)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// `A(n, m)` for any column, reading the tail for `m >= cols`.
    pub fn get(&self, n: usize, m: usize) -> bool {
        if m < self.cols {
            self.bits[n * self.cols + m]
        } else {
            self.tail[n]
        }
    }

    pub fn at(&self, n: usize, col: Column) -> bool {
        match col {
            Column::Index(m) => self.get(n, m),
            Column::Tail => self.tail[n],
        }
    }

    pub fn tail(&self, n: usize) -> bool {
        self.tail[n]
    }

    pub fn tails(&self) -> &[bool] {
        &self.tail
    }

    pub fn set(&mut self, n: usize, m: usize, value: bool) {
        self.bits[n * self.cols + m] = value;
    }

    pub fn set_tail(&mut self, n: usize, value: bool) {
        self.tail[n] = value;
    }

    pub fn row(&self, n: usize) -> &[bool] {
        &self.bits[n * self.cols..(n + 1) * self.cols]
    }

    pub fn row_string(&self, n: usize) -> String {
        self.row(n).iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for BinaryArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in 0..self.rows {
            writeln!(f, "{} | {}", self.row_string(n), u8::from(self.tail[n]))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RawArray {
    rows: usize,
    cols: usize,
    bits: Vec<Vec<u8>>,
    tail: Vec<u8>,
}

impl Serialize for BinaryArray {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawArray {
            rows: self.rows,
            cols: self.cols,
            bits: (0..self.rows)
                .map(|n| self.row(n).iter().map(|&b| u8::from(b)).collect())
                .collect(),
            tail: self.tail.iter().map(|&b| u8::from(b)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryArray {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawArray::deserialize(d)?;
        let bit = |v: u8| match v {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(D::Error::custom(format!("bit must be 0 or 1, got {other}"))),
        };
        if raw.bits.len() != raw.rows || raw.tail.len() != raw.rows {
            return Err(D::Error::custom("bits/tail length does not match rows"));
        }
        let mut bits = Vec::with_capacity(raw.rows * raw.cols);
        for row in &raw.bits {
            if row.len() != raw.cols {
                return Err(D::Error::custom("row length does not match cols"));
            }
            for &b in row {
                bits.push(bit(b)?);
            }
        }
        let tail = raw.tail.into_iter().map(bit).collect::<std::result::Result<_, _>>()?;
        Ok(BinaryArray {
            rows: raw.rows,
            cols: raw.cols,
            bits,
            tail,
        })
    }
}

/// A finite family of equally shaped arrays. Members may repeat.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArrayFamily {
    rows: usize,
    cols: usize,
    members: Vec<BinaryArray>,
}

impl ArrayFamily {
    pub fn new(rows: usize, cols: usize, members: Vec<BinaryArray>) -> Result<Self> {
        if let Some(bad) = members.iter().find(|a| a.shape() != (rows, cols)) {
            return Err(Error::ShapeMismatch(format!(
                "member of shape {:?} in a {rows}x{cols} family",
                bad.shape()
            )));
        }
        Ok(ArrayFamily {
            rows,
            cols,
            members,
        })
    }

    /// Takes the shape from the first member.
    pub fn from_members(members: Vec<BinaryArray>) -> Result<Self> {
        let (rows, cols) = members.first().map_or((0, 0), BinaryArray::shape);
        Self::new(rows, cols, members)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn members(&self) -> &[BinaryArray] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn push(&mut self, a: BinaryArray) -> Result<()> {
        if a.shape() != (self.rows, self.cols) {
            return Err(Error::ShapeMismatch(format!(
                "member of shape {:?} in a {}x{} family",
                a.shape(),
                self.rows,
                self.cols
            )));
        }
        self.members.push(a);
        Ok(())
    }

    pub fn into_members(self) -> Vec<BinaryArray> {
        self.members
    }
}

impl<'de> Deserialize<'de> for ArrayFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            rows: Option<usize>,
            cols: Option<usize>,
            members: Vec<BinaryArray>,
        }
        let raw = Raw::deserialize(d)?;
        let (r0, c0) = raw.members.first().map_or((0, 0), BinaryArray::shape);
        ArrayFamily::new(raw.rows.unwrap_or(r0), raw.cols.unwrap_or(c0), raw.members)
            .map_err(serde::de::Error::custom)
    }
}

/// A finite restriction `f(0..R)` of a function ℕ → ℕ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GrowthFunction(pub Vec<usize>);

impl GrowthFunction {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

/// `A_f(n, m) = 1 iff f(n) <= m`; every tail is 1.
pub fn make_af(f: &GrowthFunction, cols: usize) -> Result<BinaryArray> {
    if cols < f.max() {
        return Err(Error::Precondition(format!(
            "need at least {} columns for f, got {cols}",
            f.max()
        )));
    }
    let mut a = BinaryArray::ones(f.len(), cols);
    for (n, &fn_) in f.0.iter().enumerate() {
        for m in 0..fn_.min(cols) {
            a.set(n, m, false);
        }
    }
    Ok(a)
}

/// Pointwise `max{A, 1 - B}` on bits and tails.
pub fn cmp_array(a: &BinaryArray, b: &BinaryArray) -> Result<BinaryArray> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!(
            "cmp of {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(BinaryArray {
        rows: a.rows,
        cols: a.cols,
        bits: a.bits.iter().zip(&b.bits).map(|(&x, &y)| x || !y).collect(),
        tail: a.tail.iter().zip(&b.tail).map(|(&x, &y)| x || !y).collect(),
    })
}

/// Prefix below `C` of an infinite subset of ℕ; everything at or above `C` is
/// implicitly unknown but the set is infinite, so `χ_{t∖n}` has tail 1.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InfinitePrefix(pub BTreeSet<usize>);

impl InfinitePrefix {
    pub fn full(cols: usize) -> Self {
        InfinitePrefix((0..cols).collect())
    }

    fn chi_without(&self, n: usize, m: usize) -> bool {
        m >= n && self.0.contains(&m)
    }
}

/// Which rows carry `χ_{t∖n}`: the marked rows (even rows, or rows in `s`) or
/// the remaining ones. The other rows are all ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiSide {
    Marked,
    Unmarked,
}

impl TryFrom<u8> for ChiSide {
    type Error = Error;
    fn try_from(ell: u8) -> Result<Self> {
        match ell {
            0 => Ok(ChiSide::Marked),
            1 => Ok(ChiSide::Unmarked),
            other => Err(Error::Invalid(format!("layer must be 0 or 1, got {other}"))),
        }
    }
}

/// A generated array together with the rows whose `χ_{t∖n}` prefix came out
/// all zero (the set has no element in `n..C`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratedArray {
    pub array: BinaryArray,
    pub empty_prefix_rows: Vec<usize>,
}

/// Tower arrays: `χ_{t∖n}` on even rows (layer 0) or odd rows (layer 1), ones elsewhere.
pub fn make_tower_array(
    t: &InfinitePrefix,
    rows: usize,
    cols: usize,
    side: ChiSide,
) -> Result<GeneratedArray> {
    let evens: BTreeSet<usize> = (0..rows).step_by(2).collect();
    make_split_array(t, &evens, rows, cols, side)
}

/// Splitting arrays: `χ_{t∖n}` where `n ∈ s` (layer 0) or `n ∉ s` (layer 1).
pub fn make_split_array(
    t: &InfinitePrefix,
    s: &BTreeSet<usize>,
    rows: usize,
    cols: usize,
    side: ChiSide,
) -> Result<GeneratedArray> {
    if rows == 0 || cols == 0 {
        return Err(Error::Precondition(format!(
            "tower and splitting arrays need R, C >= 1 (got {rows}x{cols})"
        )));
    }
    if let Some(&m) = t.0.iter().find(|&&m| m >= cols) {
        return Err(Error::Precondition(format!(
            "set prefix element {m} is not below C = {cols}"
        )));
    }
    let mut array = BinaryArray::ones(rows, cols);
    let mut empty_prefix_rows = Vec::new();
    for n in 0..rows {
        let chi_row = match side {
            ChiSide::Marked => s.contains(&n),
            ChiSide::Unmarked => !s.contains(&n),
        };
        if !chi_row {
            continue;
        }
        for m in 0..cols {
            array.set(n, m, t.chi_without(n, m));
        }
        if !array.row(n).iter().any(|&b| b) {
            empty_prefix_rows.push(n);
        }
    }
    Ok(GeneratedArray {
        array,
        empty_prefix_rows,
    })
}
