use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::cardinal::{close_cardinal_kb, CardinalExpr, CardinalKb, ClosedKb};
use super::{Cell, Diagram, Grid};
use crate::error::{Error, Result};

/// How a single cell was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Rule {
    Diagonal,
    AxiomEdge,
    PriorFact,
    /// `(i, via)` implies and `(via, j)` is an arrow or a prior implication.
    Transitivity { via: usize },
    /// `con(lower < upper)` with `lower = non(j)` and `upper = non(i)`.
    CardinalityRule { lower: CardinalExpr, upper: CardinalExpr },
    /// From the non-implication `from = (a, b)` with `a → i` and `j → b`.
    Propagation { from: (usize, usize) },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub row: usize,
    pub col: usize,
    pub value: Cell,
    pub rule: Rule,
    /// Supporting cardinal derivations, premises first.
    pub detail: Vec<String>,
}

/// Rule applications in dependency order; the last step is the explained cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofTrace {
    pub steps: Vec<Step>,
}

impl ProofTrace {
    pub fn conclusion(&self) -> Option<&Step> {
        self.steps.last()
    }

    pub fn uses_cardinality_rule(&self) -> bool {
        self.steps
            .iter()
            .any(|s| matches!(s.rule, Rule::CardinalityRule { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellDiff {
    pub row: usize,
    pub col: usize,
    pub computed: Cell,
    pub reference: Cell,
}

/// Reflexive-transitive closure of the arrows, row-major.
pub fn close_implications(n: usize, edges: &[(usize, usize)]) -> Vec<bool> {
    let mut reach = vec![false; n * n];
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    for i in 0..n {
        let mut queue = VecDeque::from([i]);
        reach[i * n + i] = true;
        while let Some(k) = queue.pop_front() {
            for &j in &adj[k] {
                if !reach[i * n + j] {
                    reach[i * n + j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    reach
}

/// Every `(Q, P)` with `con(non(P) < non(Q))` derivable, as non-implications.
pub fn apply_cardinality_rule(non: &[CardinalExpr], kb: &ClosedKb) -> Vec<(usize, usize)> {
    let n = non.len();
    (0..n * n)
        .map(|k| (k / n, k % n))
        .filter(|&(q, p)| kb.con_lt(&non[p], &non[q]))
        .collect()
}

/// The derived table together with the rule behind every settled cell.
#[derive(Debug, Clone)]
pub struct RelationMatrix {
    n: usize,
    grid: Grid,
    implies: Vec<Option<Rule>>,
    refutes: Vec<Option<Rule>>,
    diagram: Diagram,
    prior: Grid,
    kb: ClosedKb,
    warnings: Vec<String>,
}

/// Implications are the closure of the arrows and prior implications.
/// Non-implications come from the cardinality rule, then prior facts, then
/// propagation to a fixpoint. A cell that ends up both ways aborts with both
/// traces.
pub fn compute_matrix(diagram: &Diagram, kb: &CardinalKb, prior: &Grid) -> Result<RelationMatrix> {
    diagram.validate()?;
    let n = diagram.len();
    if prior.size() != n {
        return Err(Error::ShapeMismatch(format!(
            "prior facts are {0}x{0} for {n} nodes",
            prior.size()
        )));
    }
    let non: Vec<CardinalExpr> = diagram.nodes.iter().map(|p| p.non.clone()).collect();
    let closed = close_cardinal_kb(kb, &non)?;

    let warnings = diagram
        .edges
        .iter()
        .filter(|&&(a, b)| !closed.le(&non[a], &non[b]))
        .map(|&(a, b)| {
            format!(
                "arrow {a} -> {b}: the knowledge base does not prove non({a}) = {} ≤ non({b}) = {}",
                non[a], non[b]
            )
        })
        .collect();

    let mut base: Vec<Option<Rule>> = vec![None; n * n];
    for &(a, b) in &diagram.edges {
        base[a * n + b] = Some(Rule::AxiomEdge);
    }
    for i in 0..n {
        for j in 0..n {
            if prior.get(i, j) == Cell::Implies && base[i * n + j].is_none() {
                base[i * n + j] = Some(Rule::PriorFact);
            }
        }
    }
    let mut implies: Vec<Option<Rule>> = vec![None; n * n];
    for i in 0..n {
        implies[i * n + i] = Some(Rule::Diagonal);
        let mut queue = VecDeque::from([i]);
        while let Some(k) = queue.pop_front() {
            for j in 0..n {
                if let Some(rule) = &base[k * n + j] {
                    if implies[i * n + j].is_none() {
                        implies[i * n + j] = Some(if k == i {
                            rule.clone()
                        } else {
                            Rule::Transitivity { via: k }
                        });
                        queue.push_back(j);
                    }
                }
            }
        }
    }

    let mut refutes: Vec<Option<Rule>> = vec![None; n * n];
    for (q, p) in apply_cardinality_rule(&non, &closed) {
        refutes[q * n + p] = Some(Rule::CardinalityRule {
            lower: non[p].clone(),
            upper: non[q].clone(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            if prior.get(i, j) == Cell::NotImplies && refutes[i * n + j].is_none() {
                refutes[i * n + j] = Some(Rule::PriorFact);
            }
        }
    }
    let mut queue: VecDeque<(usize, usize)> = (0..n * n)
        .filter(|&k| refutes[k].is_some())
        .map(|k| (k / n, k % n))
        .collect();
    while let Some((a, b)) = queue.pop_front() {
        for c in (0..n).filter(|&c| implies[a * n + c].is_some()) {
            for d in (0..n).filter(|&d| implies[d * n + b].is_some()) {
                if refutes[c * n + d].is_none() {
                    refutes[c * n + d] = Some(Rule::Propagation { from: (a, b) });
                    queue.push_back((c, d));
                }
            }
        }
    }

    let mut grid = Grid::open(n);
    for i in 0..n {
        for j in 0..n {
            match (&implies[i * n + j], &refutes[i * n + j]) {
                (Some(_), None) => grid.set(i, j, Cell::Implies),
                (None, Some(_)) => grid.set(i, j, Cell::NotImplies),
                _ => {}
            }
        }
    }
    let m = RelationMatrix {
        n,
        grid,
        implies,
        refutes,
        diagram: diagram.clone(),
        prior: prior.clone(),
        kb: closed,
        warnings,
    };
    if let Some(k) = (0..n * n).find(|&k| m.implies[k].is_some() && m.refutes[k].is_some()) {
        let (row, col) = (k / n, k % n);
        return Err(Error::Contradiction {
            row,
            col,
            implies: m.render(&m.trace_for(row, col, Cell::Implies)),
            refutes: m.render(&m.trace_for(row, col, Cell::NotImplies)),
        });
    }
    Ok(m)
}

impl RelationMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn get(&self, i: usize, j: usize) -> Cell {
        self.grid.get(i, j)
    }

    pub fn rule(&self, i: usize, j: usize) -> Option<&Rule> {
        match self.get(i, j) {
            Cell::Implies => self.implies[i * self.n + j].as_ref(),
            Cell::NotImplies => self.refutes[i * self.n + j].as_ref(),
            Cell::Open => None,
        }
    }

    pub fn closed_kb(&self) -> &ClosedKb {
        &self.kb
    }

    /// Arrows whose critical cardinalities the knowledge base cannot order.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Non-implications not present among the prior facts.
    pub fn new_nonimplications(&self) -> Vec<(usize, usize)> {
        (0..self.n * self.n)
            .map(|k| (k / self.n, k % self.n))
            .filter(|&(i, j)| {
                self.get(i, j) == Cell::NotImplies && self.prior.get(i, j) != Cell::NotImplies
            })
            .collect()
    }

    pub fn compare_to_table(&self, reference: &Grid) -> Vec<CellDiff> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let reference = if i < reference.size() && j < reference.size() {
                    reference.get(i, j)
                } else {
                    Cell::Open
                };
                if self.get(i, j) != reference {
                    out.push(CellDiff {
                        row: i,
                        col: j,
                        computed: self.get(i, j),
                        reference,
                    });
                }
            }
        }
        out
    }

    /// Trace of the settled cell `(i, j)`; open cells give an empty trace.
    pub fn explain(&self, i: usize, j: usize) -> ProofTrace {
        self.trace_for(i, j, self.get(i, j))
    }

    fn trace_for(&self, i: usize, j: usize, value: Cell) -> ProofTrace {
        let mut steps = Vec::new();
        let mut seen = BTreeSet::new();
        if value != Cell::Open {
            self.collect(i, j, value, &mut steps, &mut seen);
        }
        ProofTrace { steps }
    }

    fn collect(
        &self,
        i: usize,
        j: usize,
        value: Cell,
        steps: &mut Vec<Step>,
        seen: &mut BTreeSet<(usize, usize, bool)>,
    ) {
        if !seen.insert((i, j, value == Cell::Implies)) {
            return;
        }
        let table = if value == Cell::Implies {
            &self.implies
        } else {
            &self.refutes
        };
        let rule = table[i * self.n + j]
            .clone()
            .expect("traces are only requested for derived cells");
        let mut detail = Vec::new();
        match &rule {
            Rule::Transitivity { via } => {
                self.collect(i, *via, Cell::Implies, steps, seen);
                self.collect(*via, j, Cell::Implies, steps, seen);
            }
            Rule::Propagation { from: (a, b) } => {
                self.collect(*a, *b, Cell::NotImplies, steps, seen);
                self.collect(*a, i, Cell::Implies, steps, seen);
                self.collect(j, *b, Cell::Implies, steps, seen);
            }
            Rule::CardinalityRule { lower, upper } => {
                detail = self.kb.explain_lt(lower, upper);
            }
            Rule::Diagonal | Rule::AxiomEdge | Rule::PriorFact => {}
        }
        steps.push(Step {
            row: i,
            col: j,
            value,
            rule,
            detail,
        });
    }

    fn name(&self, i: usize) -> String {
        format!("{} ({i})", self.diagram.nodes[i].name)
    }

    pub fn render(&self, trace: &ProofTrace) -> String {
        let mut out = String::new();
        for s in &trace.steps {
            let (a, b) = (self.name(s.row), self.name(s.col));
            let what = match s.value {
                Cell::Implies => format!("{a} implies {b}"),
                _ => format!("{a} does not imply {b}"),
            };
            let why = match &s.rule {
                Rule::Diagonal => "diagonal axiom".to_string(),
                Rule::AxiomEdge => "arrow of the diagram".to_string(),
                Rule::PriorFact => "prior fact".to_string(),
                Rule::Transitivity { via } => format!("transitivity through ({via})"),
                Rule::CardinalityRule { lower, upper } => format!(
                    "cardinality rule: con({lower} < {upper}) with non({}) = {lower}, non({}) = {upper}",
                    s.col, s.row
                ),
                Rule::Propagation { from: (x, y) } => format!(
                    "propagation: ({x}) does not imply ({y}), ({x}) implies ({}), ({}) implies ({y})",
                    s.row, s.col
                ),
            };
            out.push_str(&format!("({},{}) {}: {what}\n", s.row, s.col, why));
            for line in &s.detail {
                out.push_str(&format!("    {line}\n"));
            }
        }
        out
    }

    /// Re-checks every step of `trace` against the inputs and the steps before
    /// it. Returns the first failing step on error.
    pub fn replay(&self, trace: &ProofTrace) -> std::result::Result<(), String> {
        let n = self.n;
        let mut established: BTreeSet<(usize, usize, bool)> = BTreeSet::new();
        let has = |set: &BTreeSet<(usize, usize, bool)>, i: usize, j: usize, imp: bool| {
            set.contains(&(i, j, imp))
        };
        for (k, s) in trace.steps.iter().enumerate() {
            if s.row >= n || s.col >= n || s.value == Cell::Open {
                return Err(format!("step {k} names an invalid cell"));
            }
            let imp = s.value == Cell::Implies;
            let ok = match &s.rule {
                Rule::Diagonal => imp && s.row == s.col,
                Rule::AxiomEdge => imp && self.diagram.edges.contains(&(s.row, s.col)),
                Rule::PriorFact => self.prior.get(s.row, s.col) == s.value,
                Rule::Transitivity { via } => {
                    imp && has(&established, s.row, *via, true) && has(&established, *via, s.col, true)
                }
                Rule::CardinalityRule { lower, upper } => {
                    !imp
                        && *lower == self.diagram.nodes[s.col].non
                        && *upper == self.diagram.nodes[s.row].non
                        && self.kb.con_lt(lower, upper)
                }
                Rule::Propagation { from: (a, b) } => {
                    !imp
                        && has(&established, *a, *b, false)
                        && has(&established, *a, s.row, true)
                        && has(&established, s.col, *b, true)
                }
            };
            if !ok {
                return Err(format!("step {k} at ({},{}) does not replay", s.row, s.col));
            }
            established.insert((s.row, s.col, imp));
        }
        Ok(())
    }
}
