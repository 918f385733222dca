// The two dimensions of the index and their product, from raw indicator
// values.
//
//     cargo run --example ifq2a_scores

use std::error::Error;

use unirank::composite::{qualitative_dimension, quantitative_dimension, score};
use unirank::indicators::IndicatorSet;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // 6 × 6 × 6 papers·citations·h has a cube root of exactly 6
    println!("qnif(6, 6, 6) = {}", quantitative_dimension(6, 6, 6));
    println!(
        "qlif(0.5, 4, 0.125) = {}",
        qualitative_dimension(0.5, 4.0, 0.125)
    );

    // a large output with ordinary impact against a small, highly cited one
    let large = IndicatorSet::from_counts("large", &[12, 9, 8, 6, 5, 5, 4, 3, 2, 2, 1, 0], 4, 1);
    let small = IndicatorSet::from_counts("small", &[40, 22, 15], 3, 2);
    for set in [&large, &small] {
        let s = score(set);
        println!(
            "{:<6} qnif {:>7.3}  qlif {:>6.3}  ifq2a {:>7.3}",
            set.institution_id, s.qnif, s.qlif, s.ifq2a
        );
    }

    // no first-quartile papers annihilates the qualitative side
    let none = IndicatorSet::from_counts("none", &[30, 20, 10], 0, 2);
    println!("without Q1 papers: ifq2a = {}", score(&none).ifq2a);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
