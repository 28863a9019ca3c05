//! Moves diagonalizers between f-sequence families and array families.

use selprin::arrays::Column;
use selprin::diag::{find_o_diagonalizer, is_o_diagonalized_by, OVariant, WindowSystem};
use selprin::fseq::{
    embed_fseq_as_tau_family, find_fseq_o_diag, is_fseq_o_diagonalized_by, reduce_tau_to_fseq,
    FSeqFamily,
};
use selprin::search::SearchLimits;

fn main() -> selprin::Result<()> {
    let limits = SearchLimits::default();
    let set = |xs: &[usize]| xs.iter().copied().collect();
    let fam = FSeqFamily::new(
        vec![2, 3],
        vec![vec![set(&[1]), set(&[])], vec![set(&[0]), set(&[2])], vec![set(&[]), set(&[0, 2])]],
    )?;

    // One index per row: the embedding transfers witnesses both ways.
    let emb = embed_fseq_as_tau_family(&fam, &[vec![0], vec![1]], 5)?;
    let g = find_o_diagonalizer(&emb.family, OVariant::Basic, &limits)?.expect("diagonalizable");
    let h = emb.forward(&g)?;
    println!("array witness {:?} -> slot choice {h:?} ({})", g.assignment, is_fseq_o_diagonalized_by(&fam, &h));
    let h = find_fseq_o_diag(&fam, &limits)?.expect("diagonalizable");
    let back = emb.inverse(&h)?;
    println!(
        "slot choice {h:?} -> array witness {:?} ({})",
        back.assignment,
        is_o_diagonalized_by(&emb.family, &back, OVariant::Basic)?
    );

    // Windows of the embedded family read back as an f-sequence family.
    let ws = WindowSystem::new(vec![
        vec![Column::Index(0), Column::Index(1)],
        vec![Column::Index(2), Column::Index(3), Column::Index(4)],
    ]);
    let red = reduce_tau_to_fseq(&emb.family, &ws)?;
    println!("reduced f = {:?}, same family: {}", red.f.0, red.family == fam);
    if let Some(g) = find_fseq_o_diag(&red.family, &limits)? {
        let lifted = red.lift(&g)?;
        println!("lifted {:?} ({})", lifted.assignment, is_o_diagonalized_by(&emb.family, &lifted, OVariant::Basic)?);
    }
    Ok(())
}
