//! Searches for τ-, finite τ-, semi τ- and o-diagonalizers on a small family.

use selprin::arrays::{make_af, ArrayFamily, GrowthFunction};
use selprin::diag::{
    find_finite_tau_diagonalizer, find_o_diagonalizer, find_semi_tau_diagonalizer,
    find_tau_diagonalizer, window_report, OVariant, QuantMode,
};
use selprin::search::SearchLimits;

fn main() -> selprin::Result<()> {
    let limits = SearchLimits::default();
    let fam = ArrayFamily::from_members(vec![
        make_af(&GrowthFunction(vec![0, 2, 3, 3]), 4)?,
        make_af(&GrowthFunction(vec![1, 1, 2, 4]), 4)?,
    ])?;
    let mode = QuantMode::new(2, 0)?;

    println!("tau: {:?}", find_tau_diagonalizer(&fam, &mode, &limits)?);
    println!("semi: {:?}", find_semi_tau_diagonalizer(&fam, &mode, &limits)?);
    if let Some(ws) = find_finite_tau_diagonalizer(&fam, &QuantMode::new(3, 0)?, 2, &limits)? {
        let report = window_report(&fam, &ws, &QuantMode::new(3, 0)?)?;
        println!("windows: {:?}\nhits per member: {:?}", ws.windows, report.hits);
    }
    for variant in [OVariant::Basic, OVariant::Infinite(3), OVariant::Centered] {
        println!("o {variant:?}: {:?}", find_o_diagonalizer(&fam, variant, &limits)?);
    }
    Ok(())
}
