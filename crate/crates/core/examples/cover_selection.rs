//! Classifies small covers and runs an exhaustive selection check.

use selprin::covers::{
    check_selection, classify_cover, psi_image, CoverKind, CoverSystem, FiniteBudget, Principle,
};
use selprin::search::SearchLimits;

fn main() -> selprin::Result<()> {
    let b = FiniteBudget::new(2, 1, 2)?;
    let covers = vec![
        CoverSystem::new(3, &[vec![0, 1], vec![1, 2], vec![0, 2]])?,
        CoverSystem::new(3, &[vec![1, 2], vec![0, 2], vec![0, 1]])?,
    ];
    for (n, c) in covers.iter().enumerate() {
        println!("cover {n}: {:?}", classify_cover(c, &b));
    }

    let found = check_selection(
        Principle::Sfin,
        CoverKind::Gamma,
        CoverKind::Tau,
        &covers,
        &b,
        2,
        &SearchLimits::default(),
    )?;
    match found {
        Some(sel) => println!("Sfin selection {:?} gives {:?}", sel.choices, sel.family),
        None => println!("no Sfin selection"),
    }

    // The same instance seen as a family of arrays, one per point.
    let psi = psi_image(&covers)?;
    println!("psi image: {} arrays of shape {}x{}", psi.family.len(), psi.family.rows(), psi.family.cols());
    Ok(())
}
