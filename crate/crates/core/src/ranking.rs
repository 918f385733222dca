//! League tables: built from IFQ²A scores, or loaded from external ranking
//! systems that publish exact positions ("89") or intervals ("201-300").

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_rational::Ratio;

use crate::composite::IndexScore;
use crate::concordance::midranks;
use crate::corpus::{column_indices, csv_error, csv_reader, normalize_id, TimeWindow};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankValue {
    Exact(u32),
    Interval { lo: u32, hi: u32 },
}

impl RankValue {
    pub fn exact(position: u32) -> Option<Self> {
        (position >= 1).then_some(RankValue::Exact(position))
    }

    pub fn interval(lo: u32, hi: u32) -> Option<Self> {
        (lo >= 1 && lo <= hi).then_some(RankValue::Interval { lo, hi })
    }

    /// The position itself, or the interval midpoint.
    pub fn effective_rank(&self) -> Ratio<u64> {
        match *self {
            RankValue::Exact(p) => Ratio::from_integer(p.into()),
            RankValue::Interval { lo, hi } => Ratio::new(u64::from(lo) + u64::from(hi), 2),
        }
    }

    pub fn effective_rank_f64(&self) -> f64 {
        match *self {
            RankValue::Exact(p) => p.into(),
            RankValue::Interval { lo, hi } => (f64::from(lo) + f64::from(hi)) / 2.0,
        }
    }

    fn parse_at(raw: &str, line: u64) -> Result<Self> {
        let malformed = || Error::MalformedRank {
            line,
            value: raw.to_string(),
        };
        let number = |s: &str| -> Result<u32> {
            let s = s.trim();
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            s.parse().map_err(|_| malformed())
        };
        match raw.trim().split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi) = (number(lo)?, number(hi)?);
                if lo > hi {
                    return Err(Error::InvertedInterval { line, lo, hi });
                }
                RankValue::interval(lo, hi).ok_or_else(malformed)
            }
            None => RankValue::exact(number(raw)?).ok_or_else(malformed),
        }
    }
}

impl FromStr for RankValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RankValue::parse_at(s, 0)
    }
}

impl fmt::Display for RankValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankValue::Exact(p) => write!(f, "{p}"),
            RankValue::Interval { lo, hi } => write!(f, "{lo}-{hi}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry {
    pub institution_id: String,
    pub rank: RankValue,
    /// IFQ²A value for internally produced tables.
    pub score: Option<f64>,
    /// Midrank position among the entries of a restricted table.
    pub local_rank: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingTable {
    pub system_name: String,
    pub field_name: String,
    pub window: Option<TimeWindow>,
    pub entries: Vec<RankEntry>,
}

impl RankingTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, institution_id: &str) -> Option<&RankEntry> {
        self.entries
            .iter()
            .find(|e| e.institution_id == institution_id)
    }

    pub fn institutions(&self) -> BTreeSet<&str> {
        self.entries
            .iter()
            .map(|e| e.institution_id.as_str())
            .collect()
    }

    /// `system/field`, the key crosswalks resolve against.
    pub fn key(&self) -> String {
        format!("{}/{}", self.system_name, self.field_name)
    }

    fn sort_entries(&mut self) {
        self.entries.sort_by(|a, b| {
            a.rank
                .effective_rank()
                .cmp(&b.rank.effective_rank())
                .then_with(|| a.institution_id.cmp(&b.institution_id))
        });
    }
}

/// Competition ranking ("1,2,2,4") by IFQ²A descending. Tied institutions
/// are listed by id; the listing order never changes a rank value.
pub fn build_ranking(
    scores: &BTreeMap<String, IndexScore>,
    system_name: &str,
    field_name: &str,
    window: Option<TimeWindow>,
) -> RankingTable {
    let mut ordered: Vec<(&String, f64)> = scores.iter().map(|(id, s)| (id, s.ifq2a)).collect();
    ordered.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.0.cmp(b.0))
    });

    let mut entries = Vec::with_capacity(ordered.len());
    let mut rank = 0u32;
    let mut previous: Option<f64> = None;
    for (pos, (id, value)) in ordered.into_iter().enumerate() {
        if previous != Some(value) {
            rank = pos as u32 + 1;
            previous = Some(value);
        }
        entries.push(RankEntry {
            institution_id: id.clone(),
            rank: RankValue::Exact(rank),
            score: Some(value),
            local_rank: None,
        });
    }
    RankingTable {
        system_name: system_name.to_string(),
        field_name: field_name.to_string(),
        window,
        entries,
    }
}

/// Loads every `(system_name, field_name)` table in a ranking file, sorted by
/// key. An optional `ifq2a` column is read back as the entry score, so
/// tables written by the rank command load here too.
pub fn load_external_rankings(path: &Path) -> Result<Vec<RankingTable>> {
    let mut reader = csv_reader(path)?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let [sys, field, inst, rank] = column_indices(
        path,
        &headers,
        ["system_name", "field_name", "institution_id", "rank"],
    )?;
    let score_col = headers.iter().position(|h| h.trim() == "ifq2a");

    let mut tables: BTreeMap<(String, String), RankingTable> = BTreeMap::new();
    for result in reader.records() {
        let row = result.map_err(|e| csv_error(path, e))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let system_name = row[sys].trim().to_string();
        let field_name = row[field].trim().to_string();
        let institution_id = normalize_id(&row[inst]);
        if system_name.is_empty() || field_name.is_empty() || institution_id.is_empty() {
            return Err(Error::parse(
                path,
                line,
                "empty system, field or institution",
            ));
        }
        let rank = RankValue::parse_at(&row[rank], line)?;
        let score = match score_col.map(|c| row[c].trim()) {
            Some(raw) if !raw.is_empty() => Some(raw.parse::<f64>().map_err(|_| {
                Error::parse(path, line, format!("ifq2a: '{raw}' is not a number"))
            })?),
            _ => None,
        };

        let table = tables
            .entry((system_name.clone(), field_name.clone()))
            .or_insert_with(|| RankingTable {
                system_name,
                field_name,
                window: None,
                entries: Vec::new(),
            });
        if table.get(&institution_id).is_some() {
            return Err(Error::DuplicateInstitution {
                system_name: table.system_name.clone(),
                field_name: table.field_name.clone(),
                institution_id,
            });
        }
        table.entries.push(RankEntry {
            institution_id,
            rank,
            score,
            local_rank: None,
        });
    }

    Ok(tables
        .into_values()
        .map(|mut t| {
            t.sort_entries();
            t
        })
        .collect())
}

/// Like [`load_external_rankings`] for a file holding exactly one table.
pub fn load_external_ranking(path: &Path) -> Result<RankingTable> {
    let mut tables = load_external_rankings(path)?;
    match tables.len() {
        1 => Ok(tables.pop().expect("one table")),
        n => Err(Error::MultipleTables(n)),
    }
}

/// Keeps only institutions in `system_institutions`, preserving rank values
/// and order, and attaches a local midrank ordering 1..m.
pub fn restrict_to_system<S: Borrow<str> + Ord>(
    table: &RankingTable,
    system_institutions: &BTreeSet<S>,
) -> RankingTable {
    let mut entries: Vec<RankEntry> = table
        .entries
        .iter()
        .filter(|e| system_institutions.contains(e.institution_id.as_str()))
        .cloned()
        .collect();
    let effective: Vec<f64> = entries
        .iter()
        .map(|e| e.rank.effective_rank_f64())
        .collect();
    for (entry, local) in entries.iter_mut().zip(midranks(&effective)) {
        entry.local_rank = Some(local);
    }
    RankingTable {
        entries,
        ..table.clone()
    }
}
