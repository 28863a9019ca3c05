//! Builds a decreasing chain of slot sequences avoiding given slaloms.

use selprin::fseq::{avoid_slaloms, Slots};

fn main() -> selprin::Result<()> {
    let alphabets = [4, 5, 3];
    let slalom = |spec: [&[usize]; 3]| -> Slots { spec.iter().map(|s| s.iter().copied().collect()).collect() };
    let slaloms = vec![slalom([&[0], &[1, 2], &[0]]), slalom([&[3], &[0], &[2]])];
    for (i, sigma) in avoid_slaloms(&alphabets, &slaloms)?.iter().enumerate() {
        println!("sigma_{i} = {sigma:?}");
    }
    // Too many excluded values at a coordinate is refused.
    let crowded = vec![slalom([&[0, 1, 2, 3], &[0], &[0]])];
    println!("{}", avoid_slaloms(&alphabets, &crowded).unwrap_err());
    Ok(())
}
