// The whole flow the command-line tool runs: validate, rank, compare.
//
//     cargo run --example pipeline

use std::error::Error;
use std::path::Path;

use unirank::app::{cmd_compare, cmd_rank, cmd_validate};
use unirank::config::{Overrides, RunConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let out = tempfile::tempdir()?;
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/demo/unirank.toml");
    let mut cfg = RunConfig::load(&path)?;
    cfg.apply(&Overrides {
        out_dir: Some(out.path().to_path_buf()),
        ..Default::default()
    });

    let report = cmd_validate(&cfg)?;
    print!("{}", report.render());

    let ranked = cmd_rank(&cfg)?;
    println!(
        "\n{} files written, {} field windows skipped",
        ranked.written.len(),
        ranked.skipped.len()
    );

    let compared = cmd_compare(&cfg)?;
    for r in &compared.reports {
        let pooled = r
            .aggregate
            .as_ref()
            .map(|a| a.pooled.to_string())
            .unwrap_or_default();
        println!(
            "{} vs {}: {} pairs, pooled agreement {pooled}",
            r.source_system,
            r.target_system,
            r.pairs.len()
        );
    }

    let sample = out.path().join("concordance_shanghai_vs_i_ugr.csv");
    println!("\n{}", std::fs::read_to_string(sample)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
