//! The array generators: growth arrays, cmp, tower and splitting arrays.

use std::collections::BTreeSet;

use selprin::arrays::{
    cmp_array, make_af, make_split_array, make_tower_array, BinaryArray, ChiSide, GrowthFunction,
    InfinitePrefix,
};

fn show(label: &str, a: &BinaryArray) {
    println!("{label}");
    for n in 0..a.rows() {
        println!("  {}", a.row_string(n));
    }
}

fn main() -> selprin::Result<()> {
    let af = make_af(&GrowthFunction(vec![1, 2, 4]), 5)?;
    let ah = make_af(&GrowthFunction(vec![2, 2, 3]), 5)?;
    show("A_f for f = (1,2,4)", &af);
    show("cmp(A_f, A_h) for h = (2,2,3)", &cmp_array(&af, &ah)?);

    let t = InfinitePrefix([1, 3, 4].into_iter().collect());
    show("tower, layer 0", &make_tower_array(&t, 4, 5, ChiSide::Marked)?.array);
    let s: BTreeSet<usize> = [0, 3].into_iter().collect();
    let split = make_split_array(&t, &s, 4, 5, ChiSide::Unmarked)?;
    show("split outside s = {0,3}", &split.array);
    println!("rows with an empty prefix: {:?}", split.empty_prefix_rows);
    Ok(())
}
