//! The implication diagram between selection properties: bundled data,
//! relation grids, and the derivation engine that rebuilds the table of
//! implications and non-implications with proof traces.

mod cardinal;
mod engine;

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cardinal::{close_cardinal_kb, CardinalExpr, CardinalKb, ClosedKb, Fact, LeWhy, LtWhy, ATOMS};
pub use engine::{
    apply_cardinality_rule, close_implications, compute_matrix, CellDiff, ProofTrace,
    RelationMatrix, Rule, Step,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cell {
    Implies,
    NotImplies,
    Open,
}

impl Cell {
    /// Data-file symbol: `+`, `-` or `?`.
    pub fn symbol(self) -> char {
        match self {
            Cell::Implies => '+',
            Cell::NotImplies => '-',
            Cell::Open => '?',
        }
    }

    /// Display mark: `✓`, `×` or `?`.
    pub fn mark(self) -> char {
        match self {
            Cell::Implies => '✓',
            Cell::NotImplies => '×',
            Cell::Open => '?',
        }
    }

    /// Reads either a data-file symbol or a display mark.
    pub fn from_char(c: char) -> Result<Cell> {
        match c {
            '+' | '✓' => Ok(Cell::Implies),
            '-' | '×' => Ok(Cell::NotImplies),
            '?' => Ok(Cell::Open),
            _ => Err(Error::Parse(format!("unknown cell symbol {c:?}"))),
        }
    }
}

/// A square relation table, row `i` column `j` speaking about "(i) implies (j)".
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    n: usize,
    cells: Vec<Cell>,
}

impl Grid {
    pub fn open(n: usize) -> Self {
        Grid {
            n,
            cells: vec![Cell::Open; n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Cell>>) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::ShapeMismatch(format!(
                "row {i} has {} cells, expected {n}",
                r.len()
            )));
        }
        Ok(Grid {
            n,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    /// One line per row of `+`, `-`, `?` (display marks are accepted too).
    pub fn parse(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| l.chars().map(Cell::from_char).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Grid::from_rows(rows)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Cell {
        self.cells[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Cell) {
        self.cells[i * self.n + j] = c;
    }

    pub fn count(&self, c: Cell) -> usize {
        self.cells.iter().filter(|&&x| x == c).count()
    }

    pub fn rows(&self) -> Vec<Vec<Cell>> {
        self.cells.chunks(self.n.max(1)).map(<[Cell]>::to_vec).collect()
    }

    /// Copy with every masked cell reset to `Open`.
    pub fn blank(&self, mask: &Mask) -> Result<Grid> {
        if mask.n != self.n {
            return Err(Error::ShapeMismatch(format!(
                "mask is {0}x{0}, grid is {1}x{1}",
                mask.n, self.n
            )));
        }
        let mut g = self.clone();
        for (c, &m) in g.cells.iter_mut().zip(&mask.bits) {
            if m {
                *c = Cell::Open;
            }
        }
        Ok(g)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.cells.chunks(self.n.max(1)) {
            let line: String = row.iter().map(|c| c.symbol()).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Boolean mask over a grid, stored as `#` (set) and `.` lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    n: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<Vec<bool>> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.chars()
                    .map(|c| match c {
                        '#' => Ok(true),
                        '.' => Ok(false),
                        _ => Err(Error::Parse(format!("unknown mask symbol {c:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("mask is not square".into()));
        }
        Ok(Mask {
            n,
            bits: rows.into_iter().flatten().collect(),
        })
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn cells(&self) -> Vec<(usize, usize)> {
        (0..self.n * self.n)
            .filter(|&k| self.bits[k])
            .map(|k| (k / self.n, k % self.n))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyNode {
    pub serial: usize,
    pub name: String,
    /// Critical cardinality.
    pub non: CardinalExpr,
}

/// Nodes and implication arrows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub nodes: Vec<PropertyNode>,
    pub edges: Vec<(usize, usize)>,
}

impl Diagram {
    pub fn validate(&self) -> Result<()> {
        if let Some((i, node)) = self.nodes.iter().enumerate().find(|(i, n)| n.serial != *i) {
            return Err(Error::Invalid(format!(
                "node at position {i} has serial {}",
                node.serial
            )));
        }
        let n = self.nodes.len();
        if let Some(&(a, b)) = self.edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::Invalid(format!("edge {a} -> {b} leaves the diagram")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

pub const FIGURE_FILE: &str = "figure1.json";
pub const KB_FILE: &str = "kb.json";
pub const TABLE_FILE: &str = "table2.grid";
pub const FRAMED_FILE: &str = "framed.grid";

/// Everything needed to rebuild and check the table.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub diagram: Diagram,
    pub kb: CardinalKb,
    /// Reference table.
    pub table: Grid,
    /// Cells the reference marks as newly settled.
    pub framed: Mask,
}

impl Bundle {
    /// The data shipped with the crate.
    pub fn bundled() -> Result<Self> {
        Bundle::from_texts(
            include_str!("../../data/figure1.json"),
            include_str!("../../data/kb.json"),
            include_str!("../../data/table2.grid"),
            include_str!("../../data/framed.grid"),
        )
    }

    pub fn load_dir(dir: &Path) -> Result<Self> {
        let read = |name: &str| std::fs::read_to_string(dir.join(name));
        Bundle::from_texts(
            &read(FIGURE_FILE)?,
            &read(KB_FILE)?,
            &read(TABLE_FILE)?,
            &read(FRAMED_FILE)?,
        )
    }

    pub fn from_texts(figure: &str, kb: &str, table: &str, framed: &str) -> Result<Self> {
        let diagram: Diagram = serde_json::from_str(figure)?;
        diagram.validate()?;
        let kb: CardinalKb = serde_json::from_str(kb)?;
        let table = Grid::parse(table)?;
        let framed = Mask::parse(framed)?;
        if table.size() != diagram.len() || framed.n != diagram.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} nodes, table {}x{}, mask {}x{}",
                diagram.len(),
                table.size(),
                table.size(),
                framed.n,
                framed.n
            )));
        }
        Ok(Bundle {
            diagram,
            kb,
            table,
            framed,
        })
    }

    /// The reference table with the framed cells blanked to `Open`.
    pub fn prior(&self) -> Grid {
        self.table
            .blank(&self.framed)
            .expect("shapes checked on load")
    }

    pub fn compute(&self) -> Result<RelationMatrix> {
        compute_matrix(&self.diagram, &self.kb, &self.prior())
    }
}
