// Rank correlation and top-|S| agreement between ranking systems.
//
//     cargo run --example concordance

use std::collections::BTreeSet;
use std::error::Error;
use std::path::Path;

use unirank::concordance::{
    aggregate_agreement, compare_pair, spearman_rho, Agreement, CompareOptions,
};
use unirank::output::rho3;
use unirank::ranking::{load_external_rankings, RankEntry, RankValue, RankingTable};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let rho = spearman_rho(&[1.0, 2.0, 3.0, 4.0], &[2.0, 1.0, 4.0, 3.0], 3)?;
    println!("rho([1,2,3,4], [2,1,4,3]) = {:?}", rho.value());

    let path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/rankings2013/external_rankings.csv");
    let tables = load_external_rankings(&path)?;
    let ntu = tables.iter().find(|t| t.system_name == "NTU").unwrap();
    let mut agreements = Vec::new();
    for t in tables.iter().filter(|t| t.system_name != "NTU") {
        // treat NTU's Spanish list, re-ranked 1..n, as the national table
        let national = RankingTable {
            entries: ntu
                .entries
                .iter()
                .enumerate()
                .map(|(i, e)| RankEntry {
                    rank: RankValue::Exact(i as u32 + 1),
                    ..e.clone()
                })
                .collect(),
            ..ntu.clone()
        };
        let system: BTreeSet<&str> = national.institutions();
        let pair = compare_pair(t, &national, &system, CompareOptions::default())?;
        println!(
            "{:<8} vs NTU: n = {:>2}  rho = {:>6}  A = {}",
            t.system_name,
            pair.n,
            rho3(pair.rho),
            pair.agreement
        );
        agreements.push(pair.agreement);
    }

    let agg = aggregate_agreement(&agreements)?;
    println!(
        "pooled {}  mean of fractions {:.4}",
        agg.pooled,
        agg.mean_f64()
    );
    println!("unreduced: {}", Agreement::new(2, 6));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
