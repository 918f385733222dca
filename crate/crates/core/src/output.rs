//! Deterministic CSV serialization of indicators, rankings, quadrant scatter
//! data and concordance reports.
//!
//! Every file starts with `#`-prefixed metadata lines (tool version, config
//! hash, policy choices); all loaders in this crate skip such lines.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::composite::{IndexScore, QuadrantMap};
use crate::concordance::{ConcordanceReport, PairRho};
use crate::error::{Error, Result};
use crate::indicators::FieldIndicators;
use crate::ranking::RankingTable;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Fixed-point decimal rendering. Exact binary ties round half to even;
/// a negative zero result prints without its sign.
pub fn fixed(value: f64, decimals: usize) -> String {
    let s = format!("{value:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

pub fn fraction6(value: f64) -> String {
    fixed(value, 6)
}

pub fn rho3(rho: PairRho) -> String {
    match rho {
        PairRho::Value(r) => fixed(r, 3),
        PairRho::Insufficient => "*".to_string(),
        PairRho::Undefined => "NA".to_string(),
    }
}

/// Header lines shared by every output of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metadata {
    pub config_hash: String,
    pub entries: Vec<(String, String)>,
}

impl Metadata {
    pub fn new(config_hash: impl Into<String>) -> Self {
        Metadata {
            config_hash: config_hash.into(),
            entries: Vec::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    fn render(&self, extra: &[(&str, String)]) -> String {
        let mut out = format!(
            "# unirank {VERSION}\n# config_sha256={}\n",
            self.config_hash
        );
        for (k, v) in &self.entries {
            out.push_str(&format!("# {k}={v}\n"));
        }
        for (k, v) in extra {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out
    }
}

fn csv_body<F>(header: &[&str], fill: F) -> String
where
    F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> csv::Result<()>,
{
    let mut buf = Vec::new();
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut buf);
        w.write_record(header).expect("in-memory write");
        fill(&mut w).expect("in-memory write");
        w.flush().expect("in-memory write");
    }
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn indicators_csv(meta: &Metadata, field: &str, window: &str, ind: &FieldIndicators) -> String {
    let mut out = meta.render(&[
        ("field", field.to_string()),
        ("window", window.to_string()),
        ("missing_quartile_papers", ind.missing_quartiles.to_string()),
    ]);
    out.push_str(&csv_body(
        &[
            "field_name",
            "institution_id",
            "ndoc",
            "ncit",
            "h",
            "pct_q1",
            "acit",
            "topcit",
        ],
        |w| {
            for s in ind.by_institution.values() {
                w.write_record([
                    field,
                    &s.institution_id,
                    &s.ndoc.to_string(),
                    &s.ncit.to_string(),
                    &s.h.to_string(),
                    &fraction6(s.pct_q1),
                    &fraction6(s.acit),
                    &fraction6(s.topcit),
                ])?;
            }
            Ok(())
        },
    ));
    out
}

pub fn ranking_csv(meta: &Metadata, table: &RankingTable) -> String {
    let window = table.window.map(|w| w.to_string()).unwrap_or_default();
    let mut out = meta.render(&[("field", table.field_name.clone()), ("window", window)]);
    out.push_str(&csv_body(
        &[
            "system_name",
            "field_name",
            "institution_id",
            "rank",
            "ifq2a",
        ],
        |w| {
            for e in &table.entries {
                w.write_record([
                    table.system_name.as_str(),
                    &table.field_name,
                    &e.institution_id,
                    &e.rank.to_string(),
                    &e.score.map(fraction6).unwrap_or_default(),
                ])?;
            }
            Ok(())
        },
    ));
    out
}

pub fn quadrants_csv(
    meta: &Metadata,
    field: &str,
    window: &str,
    scores: &BTreeMap<String, IndexScore>,
    quadrants: &QuadrantMap,
) -> String {
    let mut out = meta.render(&[("field", field.to_string()), ("window", window.to_string())]);
    let (mq, ml) = (
        fraction6(quadrants.mean_qnif),
        fraction6(quadrants.mean_qlif),
    );
    out.push_str(&csv_body(
        &[
            "field_name",
            "institution_id",
            "qnif",
            "qlif",
            "ifq2a",
            "quadrant",
            "mean_qnif",
            "mean_qlif",
        ],
        |w| {
            for (id, s) in scores {
                w.write_record([
                    field,
                    id,
                    &fraction6(s.qnif),
                    &fraction6(s.qlif),
                    &fraction6(s.ifq2a),
                    quadrants.labels[id].as_str(),
                    &mq,
                    &ml,
                ])?;
            }
            Ok(())
        },
    ));
    out
}

pub fn concordance_csv(meta: &Metadata, report: &ConcordanceReport) -> String {
    let mut out = meta.render(&[
        ("source_system", report.source_system.clone()),
        ("target_system", report.target_system.clone()),
    ]);
    out.push_str(&csv_body(
        &[
            "source_field",
            "target_field",
            "n",
            "rho",
            "agreement_num",
            "agreement_den",
            "agreement_decimal",
        ],
        |w| {
            for p in &report.pairs {
                w.write_record([
                    p.source_field.as_str(),
                    &p.target_field,
                    &p.n.to_string(),
                    &rho3(p.rho),
                    &p.agreement.numerator.to_string(),
                    &p.agreement.denominator.to_string(),
                    &p.agreement
                        .to_f64()
                        .map(fraction6)
                        .unwrap_or_else(|| "NA".into()),
                ])?;
            }
            Ok(())
        },
    ));
    match &report.aggregate {
        Some(agg) => {
            out.push_str(&format!(
                "# aggregate_pooled={},{}\n",
                agg.pooled,
                agg.pooled.to_f64().map(fraction6).unwrap_or_default()
            ));
            out.push_str(&format!(
                "# aggregate_mean_of_fractions={},{}\n",
                agg.mean_of_fractions,
                fraction6(agg.mean_f64())
            ));
        }
        None => out.push_str("# aggregate_pooled=NA\n# aggregate_mean_of_fractions=NA\n"),
    }
    for p in &report.pairs {
        if !p.missing_national.is_empty() {
            out.push_str(&format!(
                "# missing_national[{} -> {}]={}\n",
                p.source_field,
                p.target_field,
                p.missing_national.join(";")
            ));
        }
    }
    out
}

/// Writes through a temporary file in the destination directory, then
/// renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Lowercase ASCII slug for file names: runs of anything non-alphanumeric
/// collapse to one underscore.
pub fn slug(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for ch in name.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch.to_ascii_lowercase());
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}
