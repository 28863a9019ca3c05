//! Exact sizes of smallest everywhere-different families: finite E and nor.

use selprin::fseq::{finite_e, nor_of_block, BlockSpec};
use selprin::search::SearchLimits;

fn main() -> selprin::Result<()> {
    let limits = SearchLimits::default();
    for f in [vec![2], vec![3], vec![2, 2], vec![3, 3], vec![2, 2, 2]] {
        println!("E{f:?} = {}", finite_e(&f, &limits)?);
    }
    let spec = BlockSpec::new(vec![0, 1, 3, 5], vec![3, 3, 3, 2, 2])?;
    for i in 0..spec.blocks() {
        println!("nor of block {i} {:?} = {}", spec.block(i)?, nor_of_block(&spec, i, &limits)?);
    }
    Ok(())
}
