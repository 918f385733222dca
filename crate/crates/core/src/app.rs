//! The end-to-end pipeline behind the `validate`, `rank`, `quadrant` and
//! `compare` commands. All commands are pure functions of their input files
//! and configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::composite::{classify_quadrants, score_field, IndexScore, QuadrantMap};
use crate::concordance::{load_crosswalk, run_crosswalk, CompareOptions, ConcordanceReport};
use crate::config::{Needs, RunConfig};
use crate::corpus::{
    build_corpus, load_journals, load_publications, unresolved_journals, Corpus, JournalProfile,
    PublicationFormat, PublicationRecord, TimeWindow,
};
use crate::error::{Error, Result};
use crate::indicators::{
    compute_indicators, top10_threshold, FieldCitationThreshold, FieldIndicators, IndicatorOptions,
    MissingPolicy, Q1Policy,
};
use crate::output::{self, slug, write_atomic};
use crate::ranking::{build_ranking, load_external_rankings, RankingTable};
use crate::taxonomy::{assign_fields, field_corpus, load_taxonomy, FieldTaxonomy};

/// Raw inputs shared by every window.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub publications: Vec<PublicationRecord>,
    pub journals: BTreeMap<String, JournalProfile>,
    pub taxonomy: FieldTaxonomy,
}

impl Inputs {
    pub fn load(cfg: &RunConfig) -> Result<Self> {
        let pubs_path = cfg.required("publications", &cfg.publications)?;
        let format = PublicationFormat::from_path(&pubs_path);
        Ok(Inputs {
            publications: load_publications(&pubs_path, format)?,
            journals: load_journals(&cfg.required("journals", &cfg.journals)?)?,
            taxonomy: load_taxonomy(&cfg.required("taxonomy", &cfg.taxonomy)?)?,
        })
    }
}

/// Everything computed for one field in one window.
#[derive(Debug, Clone)]
pub struct FieldRun {
    pub field: String,
    pub window: TimeWindow,
    pub threshold: FieldCitationThreshold,
    pub indicators: FieldIndicators,
    pub scores: BTreeMap<String, IndexScore>,
    pub quadrants: QuadrantMap,
    pub table: RankingTable,
}

#[derive(Debug, Clone, Copy)]
pub struct PipelineOptions<'a> {
    pub system_name: &'a str,
    pub q1_policy: Q1Policy,
    pub missing_quartile: MissingPolicy,
}

/// Runs indicators, index, quadrants and ranking for each of `fields`.
/// Fields are processed in parallel; the result is keyed by field name, so
/// the order of `fields` never affects it. Fields with no scored
/// institution are returned in the second element.
pub fn rank_fields(
    corpus: &Corpus,
    taxonomy: &FieldTaxonomy,
    fields: &[&str],
    options: PipelineOptions<'_>,
) -> Result<(BTreeMap<String, FieldRun>, BTreeSet<String>)> {
    let assignment = assign_fields(corpus, taxonomy);
    let runs: Vec<Result<Option<FieldRun>>> = fields
        .par_iter()
        .map(|&field| {
            let definition = taxonomy
                .get(field)
                .ok_or_else(|| Error::UnknownField(field.to_string()))?;
            let sub = field_corpus(corpus, &assignment, field)?;
            let threshold = top10_threshold(field, &sub);
            let indicators = compute_indicators(
                &sub,
                &threshold,
                &IndicatorOptions {
                    field_categories: Some(definition.categories.clone()),
                    q1_policy: options.q1_policy,
                    missing_quartile: options.missing_quartile,
                },
            )?;
            if indicators.by_institution.is_empty() {
                return Ok(None);
            }
            let scores = score_field(&indicators.by_institution);
            let quadrants = classify_quadrants(&scores);
            let table = build_ranking(&scores, options.system_name, field, Some(corpus.window()));
            Ok(Some(FieldRun {
                field: field.to_string(),
                window: corpus.window(),
                threshold,
                indicators,
                scores,
                quadrants,
                table,
            }))
        })
        .collect();

    let mut out = BTreeMap::new();
    let mut skipped = BTreeSet::new();
    for (field, run) in fields.iter().zip(runs) {
        match run? {
            Some(run) => {
                out.insert(run.field.clone(), run);
            }
            None => {
                skipped.insert(field.to_string());
            }
        }
    }
    Ok((out, skipped))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSummary {
    pub window: TimeWindow,
    pub retained: usize,
    pub dropped_outside_window: usize,
    pub unassigned: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub publications: usize,
    pub journals: usize,
    pub fields: usize,
    pub windows: Vec<WindowSummary>,
    /// `(record_id, journal_id)` pairs whose journal is unknown.
    pub unresolved_journals: Vec<(String, String)>,
    pub ranking_tables: usize,
    pub crosswalk_pairs: usize,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.unresolved_journals.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "publications: {}\njournals: {}\nfields: {}\n",
            self.publications, self.journals, self.fields
        );
        for w in &self.windows {
            out.push_str(&format!(
                "window {}: {} records retained, {} outside window, {} unassigned\n",
                w.window,
                w.retained,
                w.dropped_outside_window,
                w.unassigned.len()
            ));
            for id in &w.unassigned {
                out.push_str(&format!("  unassigned: {id}\n"));
            }
        }
        if self.ranking_tables > 0 || self.crosswalk_pairs > 0 {
            out.push_str(&format!(
                "ranking tables: {}\ncrosswalk pairs: {}\n",
                self.ranking_tables, self.crosswalk_pairs
            ));
        }
        out.push_str(&format!(
            "unresolved journals: {}\n",
            self.unresolved_journals.len()
        ));
        for (record, journal) in &self.unresolved_journals {
            out.push_str(&format!("  record {record} -> journal {journal}\n"));
        }
        out
    }
}

pub fn cmd_validate(cfg: &RunConfig) -> Result<ValidationReport> {
    cfg.validate(Needs::Corpus)?;
    let inputs = Inputs::load(cfg)?;
    let unresolved = unresolved_journals(&inputs.publications, &inputs.journals);
    let resolvable: Vec<PublicationRecord> = inputs
        .publications
        .iter()
        .filter(|r| inputs.journals.contains_key(&r.journal_id))
        .cloned()
        .collect();

    let mut windows = Vec::new();
    for &window in &cfg.windows {
        let build = build_corpus(&resolvable, &inputs.journals, window)?;
        let assignment = assign_fields(&build.corpus, &inputs.taxonomy);
        windows.push(WindowSummary {
            window,
            retained: build.corpus.len(),
            dropped_outside_window: build.dropped_outside_window,
            unassigned: assignment
                .unassigned()
                .into_iter()
                .map(String::from)
                .collect(),
        });
    }

    let mut ranking_tables = 0;
    for p in cfg.external_rankings.iter().chain(&cfg.national_rankings) {
        ranking_tables += load_external_rankings(&cfg.resolve(p))?.len();
    }
    let crosswalk_pairs = match &cfg.crosswalk {
        Some(p) => load_crosswalk(&cfg.resolve(p))?.pairs.len(),
        None => 0,
    };

    Ok(ValidationReport {
        publications: inputs.publications.len(),
        journals: inputs.journals.len(),
        fields: inputs.taxonomy.len(),
        windows,
        unresolved_journals: unresolved,
        ranking_tables,
        crosswalk_pairs,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RankReport {
    pub written: Vec<PathBuf>,
    /// `field (window)` for every field skipped as empty.
    pub skipped: Vec<String>,
    pub missing_quartiles: usize,
    pub empty_windows: Vec<TimeWindow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RankOutputs {
    All,
    QuadrantsOnly,
}

fn pipeline_options(cfg: &RunConfig) -> PipelineOptions<'_> {
    PipelineOptions {
        system_name: &cfg.national_system,
        q1_policy: cfg.q1_policy,
        missing_quartile: cfg.missing_quartile,
    }
}

struct WindowRun {
    window: TimeWindow,
    corpus: Corpus,
    runs: BTreeMap<String, FieldRun>,
    skipped: BTreeSet<String>,
}

fn run_windows(cfg: &RunConfig, inputs: &Inputs) -> Result<Vec<WindowRun>> {
    let fields: Vec<&str> = inputs.taxonomy.names().collect();
    let mut out = Vec::new();
    for &window in &cfg.windows {
        let corpus = build_corpus(&inputs.publications, &inputs.journals, window)?.corpus;
        let (runs, skipped) =
            rank_fields(&corpus, &inputs.taxonomy, &fields, pipeline_options(cfg))?;
        out.push(WindowRun {
            window,
            corpus,
            runs,
            skipped,
        });
    }
    Ok(out)
}

fn rank_outputs(cfg: &RunConfig, which: RankOutputs) -> Result<RankReport> {
    cfg.validate(Needs::Corpus)?;
    let inputs = Inputs::load(cfg)?;
    let meta = cfg.metadata();
    let out_dir = cfg.out_dir();
    std::fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;

    let mut slugs: BTreeMap<String, &str> = BTreeMap::new();
    for name in inputs.taxonomy.names() {
        if let Some(other) = slugs.insert(slug(name), name) {
            return Err(Error::Config(format!(
                "fields '{other}' and '{name}' map to the same file name"
            )));
        }
    }

    let mut report = RankReport::default();
    for WindowRun {
        window,
        corpus,
        runs,
        skipped,
    } in run_windows(cfg, &inputs)?
    {
        if corpus.is_empty() {
            report.empty_windows.push(window);
        }
        let suffix = format!("w{}", window.year_count());
        let window_label = window.to_string();
        for field in skipped {
            report.skipped.push(format!("{field} ({window})"));
        }
        for run in runs.values() {
            report.missing_quartiles += run.indicators.missing_quartiles;
            let stem = format!("{}_{suffix}", slug(&run.field));
            let mut files = vec![(
                format!("quadrants_{stem}.csv"),
                output::quadrants_csv(
                    &meta,
                    &run.field,
                    &window_label,
                    &run.scores,
                    &run.quadrants,
                ),
            )];
            if which == RankOutputs::All {
                files.push((
                    format!("ranking_{stem}.csv"),
                    output::ranking_csv(&meta, &run.table),
                ));
                files.push((
                    format!("indicators_{stem}.csv"),
                    output::indicators_csv(&meta, &run.field, &window_label, &run.indicators),
                ));
            }
            for (name, contents) in files {
                let path = out_dir.join(name);
                write_atomic(&path, &contents)?;
                report.written.push(path);
            }
        }
    }
    report.written.sort();
    Ok(report)
}

/// Per-field ranking, quadrant and indicator files for every window.
pub fn cmd_rank(cfg: &RunConfig) -> Result<RankReport> {
    rank_outputs(cfg, RankOutputs::All)
}

/// Quadrant scatter files only.
pub fn cmd_quadrant(cfg: &RunConfig) -> Result<RankReport> {
    rank_outputs(cfg, RankOutputs::QuadrantsOnly)
}

fn load_system_set(path: &Path) -> Result<BTreeSet<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub written: Vec<PathBuf>,
    pub reports: Vec<ConcordanceReport>,
}

/// All ranking tables a comparison can draw on: external files, plus either
/// the configured national tables or, failing those, the corpus ranked over
/// the first window.
pub fn comparison_tables(cfg: &RunConfig) -> Result<Vec<RankingTable>> {
    let mut tables = Vec::new();
    for p in &cfg.external_rankings {
        tables.extend(load_external_rankings(&cfg.resolve(p))?);
    }
    if cfg.ranks_corpus_for_comparison() {
        let inputs = Inputs::load(cfg)?;
        let window = cfg.windows[0];
        let corpus = build_corpus(&inputs.publications, &inputs.journals, window)?.corpus;
        let fields: Vec<&str> = inputs.taxonomy.names().collect();
        let (runs, _) = rank_fields(&corpus, &inputs.taxonomy, &fields, pipeline_options(cfg))?;
        tables.extend(runs.into_values().map(|r| r.table));
    } else {
        for p in &cfg.national_rankings {
            tables.extend(load_external_rankings(&cfg.resolve(p))?);
        }
    }
    Ok(tables)
}

/// One concordance report per (source system, target system) pair in the
/// crosswalk. Any crosswalk pair without loaded tables fails the command.
pub fn cmd_compare(cfg: &RunConfig) -> Result<CompareReport> {
    cfg.validate(Needs::Comparison)?;
    let crosswalk = load_crosswalk(&cfg.required("crosswalk", &cfg.crosswalk)?)?;
    let tables = comparison_tables(cfg)?;
    let system_set = cfg
        .system_institutions
        .as_ref()
        .map(|p| load_system_set(&cfg.resolve(p)))
        .transpose()?;

    let reports = run_crosswalk(
        &crosswalk,
        &tables,
        system_set.as_ref(),
        CompareOptions {
            min_n: cfg.min_n,
            missing_national: cfg.missing_national,
        },
    )?;
    let unresolved: Vec<String> = reports.iter().flat_map(|r| r.unresolved.clone()).collect();
    if !unresolved.is_empty() {
        return Err(Error::UnresolvedCrosswalk(unresolved));
    }

    let meta = cfg.metadata();
    let out_dir = cfg.out_dir();
    std::fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
    let mut written = Vec::new();
    for report in &reports {
        let path = out_dir.join(format!(
            "concordance_{}_vs_{}.csv",
            slug(&report.source_system),
            slug(&report.target_system)
        ));
        write_atomic(&path, &output::concordance_csv(&meta, report))?;
        written.push(path);
    }
    Ok(CompareReport { written, reports })
}
