//! Rebuilds the implication table from the diagram, the cardinal knowledge
//! base and the prior facts, then prints the cells it newly settled.

use selprin::diagram::{Bundle, Cell};

fn main() -> selprin::Result<()> {
    let bundle = Bundle::bundled()?;
    let matrix = bundle.compute()?;
    let diffs = matrix.compare_to_table(&bundle.table);
    println!(
        "{} cells, {} differ from the reference, {} open",
        matrix.size() * matrix.size(),
        diffs.len(),
        matrix.grid().count(Cell::Open)
    );
    for (i, j) in matrix.new_nonimplications() {
        let trace = matrix.explain(i, j);
        println!("\n{}", matrix.render(&trace));
    }
    Ok(())
}
