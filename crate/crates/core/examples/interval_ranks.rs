// Published ranking tables with exact and banded positions.
//
//     cargo run --example interval_ranks

use std::collections::BTreeSet;
use std::error::Error;
use std::path::Path;

use unirank::ranking::{load_external_rankings, restrict_to_system, RankValue};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let band: RankValue = "201-300".parse()?;
    println!(
        "{band} sorts as {} ({})",
        band.effective_rank(),
        band.effective_rank_f64()
    );

    let path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/rankings2013/external_rankings.csv");
    let tables = load_external_rankings(&path)?;
    for t in &tables {
        let exact = t
            .entries
            .iter()
            .filter(|e| matches!(e.rank, RankValue::Exact(_)))
            .count();
        println!(
            "{:<10} {:>2} institutions, {:>2} with exact positions",
            t.system_name,
            t.len(),
            exact
        );
    }

    // positions among a subset, with tied bands sharing a midrank
    let shanghai = tables.iter().find(|t| t.system_name == "Shanghai").unwrap();
    let subset: BTreeSet<&str> =
        ["Barcelona", "Aut Madrid", "Granada", "Valencia", "Zaragoza"].into();
    for e in &restrict_to_system(shanghai, &subset).entries {
        println!(
            "  {:<12} {:>8}  local {}",
            e.institution_id,
            e.rank,
            e.local_rank.unwrap()
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
