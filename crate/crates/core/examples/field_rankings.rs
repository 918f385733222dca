// Ranks every field of the bundled demo corpus over its five-year window.
//
//     cargo run --example field_rankings

use std::error::Error;
use std::path::Path;

use unirank::app::{rank_fields, Inputs, PipelineOptions};
use unirank::config::RunConfig;
use unirank::corpus::build_corpus;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/demo/unirank.toml");
    let cfg = RunConfig::load(&path)?;
    let inputs = Inputs::load(&cfg)?;
    let window = cfg.windows[0];
    let build = build_corpus(&inputs.publications, &inputs.journals, window)?;
    println!(
        "window {window}: {} papers kept, {} outside",
        build.corpus.len(),
        build.dropped_outside_window
    );

    let fields: Vec<&str> = inputs.taxonomy.names().collect();
    let options = PipelineOptions {
        system_name: &cfg.national_system,
        q1_policy: cfg.q1_policy,
        missing_quartile: cfg.missing_quartile,
    };
    let (runs, skipped) = rank_fields(&build.corpus, &inputs.taxonomy, &fields, options)?;
    for run in runs.values() {
        println!(
            "\n{} (top-10% threshold {} citations)",
            run.field, run.threshold.threshold
        );
        for e in run.table.entries.iter().take(5) {
            println!(
                "  {:>3}  {:<16} {:>8.3}",
                e.rank,
                e.institution_id,
                e.score.unwrap_or_default()
            );
        }
    }
    for field in skipped {
        println!("\n{field}: no papers in this window");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
