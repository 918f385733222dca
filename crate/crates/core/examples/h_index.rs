// Per-institution indicators for a small hand-made field.
//
//     cargo run --example h_index

use std::collections::BTreeMap;
use std::error::Error;

use unirank::corpus::{build_corpus, JournalProfile, PublicationRecord, Quartile, TimeWindow};
use unirank::indicators::{compute_indicators, h_index, top10_threshold, IndicatorOptions};

fn journal(id: &str, quartile: u8) -> (String, JournalProfile) {
    let category = "optics".to_string();
    (
        id.to_string(),
        JournalProfile {
            journal_id: id.to_string(),
            categories: [category.clone()].into(),
            quartiles: [((category, 2011), Quartile::new(quartile).unwrap())].into(),
        },
    )
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("h of [10, 8, 5, 4, 3] = {}", h_index(&[10, 8, 5, 4, 3]));
    println!("h of [25, 8, 5, 3, 3] = {}", h_index(&[25, 8, 5, 3, 3]));

    let journals: BTreeMap<_, _> = [journal("Optica", 1), journal("Appl Opt", 3)].into();
    let papers = [
        ("Granada", "Optica", 41),
        ("Granada", "Appl Opt", 12),
        ("Granada", "Appl Opt", 3),
        ("Sevilla", "Optica", 9),
        ("Sevilla", "Optica", 7),
        ("Sevilla", "Appl Opt", 0),
        ("Murcia", "Appl Opt", 5),
    ];
    let records: Vec<PublicationRecord> = papers
        .iter()
        .enumerate()
        .map(|(i, &(inst, journal, citations))| PublicationRecord {
            record_id: format!("p{i}"),
            institution_id: inst.into(),
            year: 2011,
            journal_id: journal.into(),
            citations,
        })
        .collect();

    let corpus = build_corpus(&records, &journals, TimeWindow::new(2011, 2011)?)?.corpus;
    let threshold = top10_threshold("Optics", &corpus);
    println!(
        "top-10% threshold over {} papers: {} citations",
        threshold.pool_size, threshold.threshold
    );

    let field = compute_indicators(&corpus, &threshold, &IndicatorOptions::default())?;
    println!(
        "{:<10} {:>4} {:>4} {:>2} {:>6} {:>6} {:>6}",
        "", "ndoc", "ncit", "h", "%1Q", "acit", "top"
    );
    for s in field.by_institution.values() {
        println!(
            "{:<10} {:>4} {:>4} {:>2} {:>6.3} {:>6.2} {:>6.3}",
            s.institution_id, s.ndoc, s.ncit, s.h, s.pct_q1, s.acit, s.topcit
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
