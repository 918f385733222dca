// Splits institutions of one demo field into the four quantity/quality
// quadrants around the field means.
//
//     cargo run --example quadrants

use std::error::Error;
use std::path::Path;

use unirank::app::{rank_fields, Inputs, PipelineOptions};
use unirank::composite::Quadrant;
use unirank::config::RunConfig;
use unirank::corpus::build_corpus;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/demo/unirank.toml");
    let cfg = RunConfig::load(&path)?;
    let inputs = Inputs::load(&cfg)?;
    let corpus = build_corpus(&inputs.publications, &inputs.journals, cfg.windows[1])?.corpus;
    let options = PipelineOptions {
        system_name: &cfg.national_system,
        q1_policy: cfg.q1_policy,
        missing_quartile: cfg.missing_quartile,
    };
    let (runs, _) = rank_fields(&corpus, &inputs.taxonomy, &["Physics"], options)?;
    let run = &runs["Physics"];

    println!(
        "Physics {}: mean qnif {:.3}, mean qlif {:.3}",
        run.window, run.quadrants.mean_qnif, run.quadrants.mean_qlif
    );
    for quadrant in Quadrant::ALL {
        let members: Vec<&str> = run
            .quadrants
            .labels
            .iter()
            .filter(|(_, &q)| q == quadrant)
            .map(|(id, _)| id.as_str())
            .collect();
        println!("{:<18} {}", quadrant.as_str(), members.join(", "));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
