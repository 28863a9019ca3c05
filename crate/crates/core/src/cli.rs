//! Command-line front end. `run` does all the work and returns the exit code
//! with the captured output, so the binary is a thin shell around it.
//!
//! Exit codes: 0 success or witness found, 2 usage or input error, 3 no
//! witness, 4 verification diff, 5 search cap exceeded, 6 engine contradiction.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arrays::{
    cmp_array, make_af, make_split_array, make_tower_array, ArrayFamily, BinaryArray, ChiSide,
    GrowthFunction, InfinitePrefix,
};
use crate::covers::{self, CoverKind, CoverSystem, FiniteBudget, Principle};
use crate::diag::{self, ColumnMode, Counting, OVariant, QuantMode, WindowSystem};
use crate::diagram::{Bundle, Cell, Grid};
use crate::error::{Error, Result};
use crate::fseq::{self, BlockSpec, FSeqFamily, Slots};
use crate::search::{SearchLimits, DEFAULT_CAP};

/// Environment variable holding the worker count (default 1).
pub const WORKERS_ENV: &str = "SELPRIN_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_WITNESS: i32 = 3;
pub const EXIT_DIFF: i32 = 4;
pub const EXIT_CAP: i32 = 5;
pub const EXIT_CONTRADICTION: i32 = 6;

#[derive(Debug, Parser)]
#[command(name = "selprin", version, about = "Finite models of selection principles for covers")]
struct Cli {
    /// Directory holding figure1.json, kb.json, table2.grid and framed.grid.
    #[arg(long, global = true)]
    bundle_dir: Option<PathBuf>,
    /// Cap on candidate evaluations for every search.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Implication table between the 22 selection properties of the diagram.
    #[command(subcommand)]
    Diagram(DiagramCmd),
    /// Binary arrays, families and their diagonalizers.
    #[command(subcommand)]
    Lab(LabCmd),
    /// f-sequence families, the covering number E_f and the block norm.
    #[command(subcommand)]
    Fseq(FseqCmd),
    /// Finite covers, their classification and selection hypotheses.
    #[command(subcommand)]
    Covers(CoversCmd),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TableFormat {
    Tsv,
    Json,
}

#[derive(Debug, Subcommand)]
enum DiagramCmd {
    /// Print the derived table of implications (✓), non-implications (×) and open cells (?).
    Table {
        #[arg(long, value_enum, default_value_t = TableFormat::Tsv)]
        format: TableFormat,
    },
    /// Derive the table from the arrows, the cardinal knowledge base and the prior
    /// facts, then diff it against the reference table.
    Verify,
    /// Proof trace of one cell, e.g. a cardinality-rule non-implication.
    Explain { i: usize, j: usize },
    /// Count open cells or newly settled (framed) non-implications.
    Count {
        #[arg(long, conflicts_with = "framed", required_unless_present = "framed")]
        open: bool,
        #[arg(long)]
        framed: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ColMode {
    Tail,
    Prefix,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CountMode {
    Rows,
    Cells,
}

#[derive(Debug, Args)]
struct QuantArgs {
    /// Threshold standing in for "infinitely many".
    #[arg(long, default_value_t = 1)]
    q: usize,
    /// Exception budget standing in for "all but finitely many".
    #[arg(long, default_value_t = 0)]
    e: usize,
    #[arg(long, value_enum, default_value_t = ColMode::Tail)]
    col_mode: ColMode,
    /// Prefix violation budget used with --col-mode prefix.
    #[arg(long, default_value_t = 0)]
    e_m: usize,
    #[arg(long, value_enum, default_value_t = CountMode::Rows)]
    counting: CountMode,
}

impl QuantArgs {
    fn mode(&self) -> Result<QuantMode> {
        let columns = match self.col_mode {
            ColMode::Tail => ColumnMode::TailExact,
            ColMode::Prefix => ColumnMode::PrefixBudget(self.e_m),
        };
        let counting = match self.counting {
            CountMode::Rows => Counting::Rows,
            CountMode::Cells => Counting::Cells,
        };
        Ok(QuantMode::new(self.q, self.e)?
            .with_columns(columns)
            .with_counting(counting))
    }
}

#[derive(Debug, Subcommand)]
enum LabCmd {
    /// Generate arrays: the growth array A_f, cmp(A,B), tower and splitting arrays.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Least total τ-diagonalizer g of a family.
    TauDiag {
        family: PathBuf,
        #[command(flatten)]
        quant: QuantArgs,
    },
    /// Least window system of width at most w finitely τ-diagonalizing a family.
    FiniteTauDiag {
        family: PathBuf,
        #[command(flatten)]
        quant: QuantArgs,
        #[arg(long, default_value_t = 2)]
        w: usize,
    },
    /// Least partial g semi τ-diagonalizing a family.
    SemiDiag {
        family: PathBuf,
        #[command(flatten)]
        quant: QuantArgs,
    },
    /// Least o-diagonalizer (basic, infinite:Q or centered).
    ODiag {
        family: PathBuf,
        #[arg(long, default_value = "basic")]
        variant: String,
    },
}

#[derive(Debug, Subcommand)]
enum GenCmd {
    /// A_f: row n is 1 exactly from column f(n) on.
    Af {
        #[arg(long, value_delimiter = ',', required = true)]
        f: Vec<usize>,
        #[arg(long)]
        cols: usize,
    },
    /// cmp(A,B)(n,m) = 1 iff A(n,m) ≤ B(n,m).
    Cmp { a: PathBuf, b: PathBuf },
    /// χ of a set prefix minus n on even (layer 0) or odd (layer 1) rows.
    Tower {
        #[arg(long, value_delimiter = ',')]
        t: Vec<usize>,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 0)]
        layer: u8,
    },
    /// χ of a set prefix minus n on rows in s (layer 0) or outside s (layer 1).
    Split {
        #[arg(long, value_delimiter = ',')]
        t: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        s: Vec<usize>,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 0)]
        layer: u8,
    },
}

#[derive(Debug, Subcommand)]
enum FseqCmd {
    /// Least g with g(n) < f(n) meeting every member of an f-sequence family.
    ODiag { family: PathBuf },
    /// The three conditions of a comparable, non-o-diagonalizable family.
    ThetaCheck {
        family: PathBuf,
        #[arg(long, default_value_t = 0)]
        e: usize,
    },
    /// Exact finite E_f: fewest functions below f everywhere avoiding every function.
    ENumber {
        #[arg(long, value_delimiter = ',', required = true)]
        f: Vec<usize>,
    },
    /// Exact block norm nor(Y); Y defaults to the whole block.
    Nor {
        blocks: PathBuf,
        #[arg(long, default_value_t = 0)]
        block: usize,
        /// JSON list of tuples.
        #[arg(long)]
        y: Option<PathBuf>,
    },
    /// Decreasing chain of slot sets avoiding a list of slaloms.
    Avoid {
        /// JSON list of slaloms, each a list of sets per coordinate.
        slaloms: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        alphabets: Vec<usize>,
    },
    /// Embed an f-sequence family as arrays over a partition of the indices.
    Embed {
        family: PathBuf,
        /// JSON list of blocks; defaults to one index per row.
        #[arg(long)]
        partition: Option<PathBuf>,
        /// Column count; defaults to Σ f.
        #[arg(long)]
        cols: Option<usize>,
    },
    /// Read an f-sequence family off an array family and a window system.
    Reduce { family: PathBuf, windows: PathBuf },
}

#[derive(Debug, Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 1)]
    q: usize,
    #[arg(long, default_value_t = 0)]
    e: usize,
    /// Arity of the k-cover standing in for ω-covers.
    #[arg(long, default_value_t = 2)]
    k: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Result<FiniteBudget> {
        FiniteBudget::new(self.q, self.e, self.k)
    }
}

#[derive(Debug, Subcommand)]
enum CoversCmd {
    /// Which of cover / large / k-cover / τ / γ a finite cover satisfies.
    Classify {
        cover: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Marczewski characteristic function of one point.
    Marczewski {
        cover: PathBuf,
        #[arg(long)]
        x: usize,
    },
    /// Array family Ψ(X) of a sequence of covers.
    Psi {
        covers: PathBuf,
        /// Read each cover as a γ-cover with this exception budget (tails 1).
        #[arg(long)]
        gamma_tails: Option<usize>,
    },
    /// Exhaustive check of S1, Sfin or Ufin on a finite cover sequence.
    Select {
        covers: PathBuf,
        #[arg(long, default_value = "sfin")]
        principle: String,
        #[arg(long, default_value = "o")]
        source: String,
        #[arg(long, default_value = "o")]
        target: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 2)]
        w: usize,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn with_code(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Worker count from the environment, default 1.
pub fn workers_from_env() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&w| w >= 1)
        .unwrap_or(1)
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::Contradiction { .. } | Error::InconsistentKb(_) => EXIT_CONTRADICTION,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let limits = SearchLimits::with_cap(cli.cap).workers(workers_from_env());
    match dispatch(&cli, &limits) {
        Ok(out) => out,
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn json<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn witness<T: Serialize>(found: Option<T>) -> Result<Outcome> {
    Ok(match found {
        Some(w) => Outcome::ok(json(&w)?),
        None => Outcome::with_code(EXIT_NO_WITNESS, "no witness\n".into()),
    })
}

fn parse_variant(s: &str) -> Result<OVariant> {
    match s.to_ascii_lowercase().as_str() {
        "basic" => Ok(OVariant::Basic),
        "centered" => Ok(OVariant::Centered),
        other => other
            .strip_prefix("infinite:")
            .and_then(|q| q.parse().ok())
            .filter(|&q| q >= 1)
            .map(OVariant::Infinite)
            .ok_or_else(|| Error::Invalid(format!("unknown variant {s:?}"))),
    }
}

fn dispatch(cli: &Cli, limits: &SearchLimits) -> Result<Outcome> {
    match &cli.command {
        Command::Diagram(cmd) => {
            let bundle = match &cli.bundle_dir {
                Some(dir) => Bundle::load_dir(dir)?,
                None => Bundle::bundled()?,
            };
            diagram_cmd(cmd, &bundle)
        }
        Command::Lab(cmd) => lab_cmd(cmd, limits),
        Command::Fseq(cmd) => fseq_cmd(cmd, limits),
        Command::Covers(cmd) => covers_cmd(cmd, limits),
    }
}

fn diagram_cmd(cmd: &DiagramCmd, bundle: &Bundle) -> Result<Outcome> {
    let m = bundle.compute()?;
    let mut warn = String::new();
    for w in m.warnings() {
        warn.push_str(&format!("warning: {w}\n"));
    }
    let mut out = match cmd {
        DiagramCmd::Table { format } => Outcome::ok(emit_table(m.grid(), *format)),
        DiagramCmd::Verify => {
            let diff = m.compare_to_table(&bundle.table);
            let mut text = String::new();
            for d in &diff {
                text.push_str(&format!(
                    "({},{}) computed {} reference {}\n",
                    d.row,
                    d.col,
                    d.computed.mark(),
                    d.reference.mark()
                ));
            }
            let fresh = m.new_nonimplications();
            let framed_ok = fresh == bundle.framed.cells()
                && fresh.iter().all(|&(i, j)| m.explain(i, j).uses_cardinality_rule());
            text.push_str(&format!(
                "cells {} differing {} open {} newly settled {} framed match {}\n",
                m.size() * m.size(),
                diff.len(),
                m.grid().count(Cell::Open),
                fresh.len(),
                if framed_ok { "yes" } else { "no" }
            ));
            let code = if diff.is_empty() && framed_ok { EXIT_OK } else { EXIT_DIFF };
            Outcome::with_code(code, text)
        }
        DiagramCmd::Explain { i, j } => {
            let n = m.size();
            if *i >= n || *j >= n {
                return Err(Error::Invalid(format!("serials run from 0 to {}", n - 1)));
            }
            let trace = m.explain(*i, *j);
            if trace.steps.is_empty() {
                Outcome::ok(format!("({i},{j}) is open\n"))
            } else {
                Outcome::ok(m.render(&trace))
            }
        }
        DiagramCmd::Count { open, .. } => {
            let k = if *open {
                m.grid().count(Cell::Open)
            } else {
                m.new_nonimplications().len()
            };
            Outcome::ok(format!("{k}\n"))
        }
    };
    out.stderr = warn;
    Ok(out)
}

/// TSV with a header of serials and ✓/×/? cells, or JSON nested arrays of the same marks.
pub fn emit_table(grid: &Grid, format: TableFormat) -> String {
    let rows = grid.rows();
    match format {
        TableFormat::Tsv => {
            let mut out = String::new();
            let header: Vec<String> = (0..grid.size()).map(|j| j.to_string()).collect();
            out.push_str(&format!("\t{}\n", header.join("\t")));
            for (i, row) in rows.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|c| c.mark().to_string()).collect();
                out.push_str(&format!("{i}\t{}\n", cells.join("\t")));
            }
            out
        }
        TableFormat::Json => {
            let marks: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.iter().map(|c| c.mark().to_string()).collect())
                .collect();
            serde_json::to_string(&marks).expect("strings serialize") + "\n"
        }
    }
}

/// Inverse of [`emit_table`].
pub fn parse_table(text: &str, format: TableFormat) -> Result<Grid> {
    let cell = |s: &str| {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Cell::from_char(c),
            _ => Err(Error::Parse(format!("bad cell {s:?}"))),
        }
    };
    let rows: Vec<Vec<Cell>> = match format {
        TableFormat::Tsv => text
            .lines()
            .skip(1)
            .filter(|l| !l.is_empty())
            .map(|l| l.split('\t').skip(1).map(cell).collect())
            .collect::<Result<_>>()?,
        TableFormat::Json => serde_json::from_str::<Vec<Vec<String>>>(text)?
            .iter()
            .map(|r| r.iter().map(|s| cell(s)).collect())
            .collect::<Result<_>>()?,
    };
    Grid::from_rows(rows)
}

fn lab_cmd(cmd: &LabCmd, limits: &SearchLimits) -> Result<Outcome> {
    match cmd {
        LabCmd::Gen(g) => gen_cmd(g),
        LabCmd::TauDiag { family, quant } => {
            let fam: ArrayFamily = read_json(family)?;
            witness(diag::find_tau_diagonalizer(&fam, &quant.mode()?, limits)?)
        }
        LabCmd::FiniteTauDiag { family, quant, w } => {
            let fam: ArrayFamily = read_json(family)?;
            witness(diag::find_finite_tau_diagonalizer(&fam, &quant.mode()?, *w, limits)?)
        }
        LabCmd::SemiDiag { family, quant } => {
            let fam: ArrayFamily = read_json(family)?;
            witness(diag::find_semi_tau_diagonalizer(&fam, &quant.mode()?, limits)?)
        }
        LabCmd::ODiag { family, variant } => {
            let fam: ArrayFamily = read_json(family)?;
            witness(diag::find_o_diagonalizer(&fam, parse_variant(variant)?, limits)?)
        }
    }
}

fn gen_cmd(cmd: &GenCmd) -> Result<Outcome> {
    let out = match cmd {
        GenCmd::Af { f, cols } => json(&make_af(&GrowthFunction(f.clone()), *cols)?)?,
        GenCmd::Cmp { a, b } => {
            let a: BinaryArray = read_json(a)?;
            let b: BinaryArray = read_json(b)?;
            json(&cmp_array(&a, &b)?)?
        }
        GenCmd::Tower {
            t,
            rows,
            cols,
            layer,
        } => {
            let t = InfinitePrefix(t.iter().copied().collect());
            json(&make_tower_array(&t, *rows, *cols, ChiSide::try_from(*layer)?)?)?
        }
        GenCmd::Split {
            t,
            s,
            rows,
            cols,
            layer,
        } => {
            let t = InfinitePrefix(t.iter().copied().collect());
            let s: BTreeSet<usize> = s.iter().copied().collect();
            json(&make_split_array(&t, &s, *rows, *cols, ChiSide::try_from(*layer)?)?)?
        }
    };
    Ok(Outcome::ok(out))
}

fn fseq_cmd(cmd: &FseqCmd, limits: &SearchLimits) -> Result<Outcome> {
    match cmd {
        FseqCmd::ODiag { family } => {
            let fam: FSeqFamily = read_json(family)?;
            witness(fseq::find_fseq_o_diag(&fam, limits)?)
        }
        FseqCmd::ThetaCheck { family, e } => {
            let fam: FSeqFamily = read_json(family)?;
            let report = fseq::check_theta_witness(&fam, *e, limits)?;
            let code = if report.holds() { EXIT_OK } else { EXIT_NO_WITNESS };
            Ok(Outcome::with_code(code, json(&report)?))
        }
        FseqCmd::ENumber { f } => Ok(Outcome::ok(format!("{}\n", fseq::finite_e(f, limits)?))),
        FseqCmd::Nor { blocks, block, y } => {
            let spec: BlockSpec = read_json(blocks)?;
            let value = match y {
                Some(path) => {
                    let y: Vec<Vec<usize>> = read_json(path)?;
                    fseq::compute_nor(&y, spec.block(*block)?, limits)?
                }
                None => fseq::nor_of_block(&spec, *block, limits)?,
            };
            Ok(Outcome::ok(format!("{value}\n")))
        }
        FseqCmd::Avoid { slaloms, alphabets } => {
            let slaloms: Vec<Slots> = read_json(slaloms)?;
            Ok(Outcome::ok(json(&fseq::avoid_slaloms(alphabets, &slaloms)?)?))
        }
        FseqCmd::Embed {
            family,
            partition,
            cols,
        } => {
            let fam: FSeqFamily = read_json(family)?;
            let partition: Vec<Vec<usize>> = match partition {
                Some(p) => read_json(p)?,
                None => (0..fam.width()).map(|k| vec![k]).collect(),
            };
            let cols = cols.unwrap_or_else(|| fam.f().iter().sum());
            Ok(Outcome::ok(json(&fseq::embed_fseq_as_tau_family(&fam, &partition, cols)?)?))
        }
        FseqCmd::Reduce { family, windows } => {
            let fam: ArrayFamily = read_json(family)?;
            let win: WindowSystem = read_json(windows)?;
            Ok(Outcome::ok(json(&fseq::reduce_tau_to_fseq(&fam, &win)?)?))
        }
    }
}

fn covers_cmd(cmd: &CoversCmd, limits: &SearchLimits) -> Result<Outcome> {
    match cmd {
        CoversCmd::Classify { cover, budget } => {
            let c: CoverSystem = read_json(cover)?;
            Ok(Outcome::ok(json(&covers::classify_cover(&c, &budget.budget()?))?))
        }
        CoversCmd::Marczewski { cover, x } => {
            let c: CoverSystem = read_json(cover)?;
            let bits: String = covers::marczewski(&c, *x)?
                .iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect();
            Ok(Outcome::ok(format!("{bits}\n")))
        }
        CoversCmd::Psi {
            covers: path,
            gamma_tails,
        } => {
            let cs: Vec<CoverSystem> = read_json(path)?;
            let img = covers::psi_image(&cs)?;
            Ok(Outcome::ok(match gamma_tails {
                Some(e) => json(&img.with_gamma_tails(*e)?)?,
                None => json(&img)?,
            }))
        }
        CoversCmd::Select {
            covers: path,
            principle,
            source,
            target,
            budget,
            w,
        } => {
            let cs: Vec<CoverSystem> = read_json(path)?;
            let principle: Principle = principle.parse()?;
            let source: CoverKind = source.parse()?;
            let target: CoverKind = target.parse()?;
            witness(covers::check_selection(
                principle,
                source,
                target,
                &cs,
                &budget.budget()?,
                *w,
                limits,
            )?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("selprin").chain(args.iter().copied()))
    }

    #[test]
    fn count_open_and_framed() {
        assert_eq!(run_args(&["diagram", "count", "--open"]).stdout, "55\n");
        assert_eq!(run_args(&["diagram", "count", "--framed"]).stdout, "21\n");
    }

    #[test]
    fn verify_pristine_bundle() {
        let out = run_args(&["diagram", "verify"]);
        assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
        assert!(out.stdout.contains("differing 0"));
    }

    #[test]
    fn explain_diagonal() {
        let out = run_args(&["diagram", "explain", "0", "0"]);
        assert!(out.stdout.contains("diagonal axiom"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["diagram", "count"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["nope"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).code, EXIT_OK);
    }

    #[test]
    fn table_round_trips() {
        let m = Bundle::bundled().unwrap().compute().unwrap();
        for format in [TableFormat::Tsv, TableFormat::Json] {
            let text = emit_table(m.grid(), format);
            assert_eq!(&parse_table(&text, format).unwrap(), m.grid());
        }
        let tsv = emit_table(m.grid(), TableFormat::Tsv);
        assert_eq!(tsv.lines().count(), 23);
        assert!(tsv.lines().skip(1).all(|l| l.split('\t').count() == 23));
        let toy = Grid::parse("+-\n?+").unwrap();
        assert_eq!(parse_table(&emit_table(&toy, TableFormat::Tsv), TableFormat::Tsv).unwrap(), toy);
    }

    #[test]
    fn variants_parse() {
        assert_eq!(parse_variant("infinite:3").unwrap(), OVariant::Infinite(3));
        assert!(parse_variant("infinite:0").is_err());
        assert!(parse_variant("wide").is_err());
    }
}
