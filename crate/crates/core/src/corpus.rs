//! Publication and journal ingestion, validation and time windowing.
//!
//! Every downstream computation reads a [`Corpus`]: a windowed set of
//! publication records whose journals all resolve to a loaded
//! [`JournalProfile`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_YEAR: i64 = 1900;
pub const MAX_YEAR: i64 = 2100;

const PUBLICATION_COLUMNS: [&str; 5] = [
    "record_id",
    "institution_id",
    "year",
    "journal_id",
    "citations",
];
const JOURNAL_COLUMNS: [&str; 4] = ["journal_id", "category", "year", "quartile"];

/// Ids are compared byte-exactly after trimming.
pub fn normalize_id(raw: &str) -> String {
    raw.trim().to_string()
}

/// Subject-category codes are trimmed and case-folded before any comparison.
pub fn normalize_category(raw: &str) -> String {
    raw.trim().to_lowercase()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub record_id: String,
    pub institution_id: String,
    pub year: i32,
    pub journal_id: String,
    pub citations: u64,
}

/// JCR quartile, 1 (top) through 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quartile(u8);

impl Quartile {
    pub fn new(value: u8) -> Option<Self> {
        (1..=4).contains(&value).then_some(Quartile(value))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn is_first(self) -> bool {
        self.0 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JournalProfile {
    pub journal_id: String,
    pub categories: BTreeSet<String>,
    pub quartiles: BTreeMap<(String, i32), Quartile>,
}

impl JournalProfile {
    /// Quartile of the journal in `category` for `year`. A missing entry is
    /// an error; callers decide whether to tolerate it.
    pub fn quartile(&self, category: &str, year: i32) -> Result<Quartile> {
        self.quartiles
            .get(&(category.to_string(), year))
            .copied()
            .ok_or_else(|| Error::MissingQuartile {
                journal_id: self.journal_id.clone(),
                category: category.to_string(),
                year,
            })
    }
}

/// Inclusive range of publication years, written `START:END`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TimeWindow {
    start_year: i32,
    end_year: i32,
}

impl TimeWindow {
    pub fn new(start_year: i32, end_year: i32) -> Result<Self> {
        if start_year > end_year {
            return Err(Error::InvalidWindow {
                start: start_year.into(),
                end: end_year.into(),
            });
        }
        Ok(TimeWindow {
            start_year,
            end_year,
        })
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    pub fn end_year(&self) -> i32 {
        self.end_year
    }

    /// Number of years covered, `end - start + 1`.
    pub fn year_count(&self) -> u32 {
        (self.end_year - self.start_year + 1) as u32
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start_year..=self.end_year).contains(&year)
    }

    pub fn is_within(&self, other: &TimeWindow) -> bool {
        other.start_year <= self.start_year && self.end_year <= other.end_year
    }
}

impl fmt::Display for TimeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start_year, self.end_year)
    }
}

impl FromStr for TimeWindow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("window '{s}' is not of the form START:END"));
        let (start, end) = s.split_once(':').ok_or_else(bad)?;
        let start: i32 = start.trim().parse().map_err(|_| bad())?;
        let end: i32 = end.trim().parse().map_err(|_| bad())?;
        TimeWindow::new(start, end)
    }
}

impl TryFrom<String> for TimeWindow {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TimeWindow> for String {
    fn from(w: TimeWindow) -> String {
        w.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PublicationFormat {
    Csv,
    Jsonl,
}

impl PublicationFormat {
    /// `.jsonl` / `.ndjson` select JSON lines; anything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("ndjson") => PublicationFormat::Jsonl,
            _ => PublicationFormat::Csv,
        }
    }
}

/// A windowed, validated set of publications plus the journals they use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    publications: Vec<PublicationRecord>,
    journals: BTreeMap<String, JournalProfile>,
    window: TimeWindow,
}

impl Corpus {
    pub fn publications(&self) -> &[PublicationRecord] {
        &self.publications
    }

    pub fn journals(&self) -> &BTreeMap<String, JournalProfile> {
        &self.journals
    }

    pub fn journal(&self, journal_id: &str) -> Option<&JournalProfile> {
        self.journals.get(journal_id)
    }

    pub fn window(&self) -> TimeWindow {
        self.window
    }

    pub fn len(&self) -> usize {
        self.publications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.publications.is_empty()
    }

    /// Sub-corpus over the records selected by `keep`, with the journal map
    /// restricted to journals those records reference.
    pub(crate) fn project<F>(&self, mut keep: F) -> Corpus
    where
        F: FnMut(&PublicationRecord) -> bool,
    {
        let publications: Vec<_> = self
            .publications
            .iter()
            .filter(|r| keep(r))
            .cloned()
            .collect();
        let journals = publications
            .iter()
            .filter_map(|r| self.journals.get_key_value(&r.journal_id))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Corpus {
            publications,
            journals,
            window: self.window,
        }
    }
}

/// Outcome of [`build_corpus`].
#[derive(Debug, Clone)]
pub struct CorpusBuild {
    pub corpus: Corpus,
    pub dropped_outside_window: usize,
}

impl CorpusBuild {
    /// An empty corpus is a warning, not an error.
    pub fn is_empty(&self) -> bool {
        self.corpus.is_empty()
    }
}

pub fn build_corpus(
    publications: &[PublicationRecord],
    journals: &BTreeMap<String, JournalProfile>,
    window: TimeWindow,
) -> Result<CorpusBuild> {
    let mut seen = HashMap::new();
    for (idx, record) in publications.iter().enumerate() {
        if let Some(first) = seen.insert(record.record_id.as_str(), idx) {
            return Err(Error::DuplicateRecord {
                record_id: record.record_id.clone(),
                first_line: first as u64 + 1,
                second_line: idx as u64 + 1,
            });
        }
    }

    let mut retained = Vec::with_capacity(publications.len());
    let mut dropped = 0;
    for record in publications {
        if !window.contains(record.year) {
            dropped += 1;
            continue;
        }
        if !journals.contains_key(&record.journal_id) {
            return Err(Error::UnknownJournal {
                record_id: record.record_id.clone(),
                journal_id: record.journal_id.clone(),
            });
        }
        retained.push(record.clone());
    }

    Ok(CorpusBuild {
        corpus: Corpus {
            publications: retained,
            journals: journals.clone(),
            window,
        },
        dropped_outside_window: dropped,
    })
}

/// Every `(record_id, journal_id)` whose journal is not in `journals`,
/// regardless of window.
pub fn unresolved_journals(
    publications: &[PublicationRecord],
    journals: &BTreeMap<String, JournalProfile>,
) -> Vec<(String, String)> {
    publications
        .iter()
        .filter(|r| !journals.contains_key(&r.journal_id))
        .map(|r| (r.record_id.clone(), r.journal_id.clone()))
        .collect()
}

pub(crate) fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn csv_reader(path: &Path) -> Result<csv::Reader<File>> {
    Ok(csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(open(path)?))
}

/// Maps each required column to its index in the header row.
pub(crate) fn column_indices<const N: usize>(
    path: &Path,
    headers: &csv::StringRecord,
    required: [&str; N],
) -> Result<[usize; N]> {
    let mut out = [0; N];
    for (slot, name) in out.iter_mut().zip(required) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MissingColumn {
                path: path.to_path_buf(),
                column: name.to_string(),
            })?;
    }
    Ok(out)
}

pub(crate) fn csv_error(path: &Path, err: csv::Error) -> Error {
    let line = err.position().map(|p| p.line()).unwrap_or(0);
    Error::parse(path, line, err.to_string())
}

pub(crate) fn parse_int(path: &Path, line: u64, column: &str, raw: &str) -> Result<i64> {
    raw.trim()
        .parse()
        .map_err(|_| Error::parse(path, line, format!("{column}: '{raw}' is not an integer")))
}

struct RawPublication {
    line: u64,
    record_id: String,
    institution_id: String,
    year: i64,
    journal_id: String,
    citations: i64,
}

fn check_publication(raw: RawPublication) -> Result<PublicationRecord> {
    if raw.citations < 0 {
        return Err(Error::NegativeCitations {
            line: raw.line,
            record_id: raw.record_id,
            value: raw.citations,
        });
    }
    if !(MIN_YEAR..=MAX_YEAR).contains(&raw.year) {
        return Err(Error::YearOutOfRange {
            line: raw.line,
            year: raw.year,
        });
    }
    Ok(PublicationRecord {
        record_id: normalize_id(&raw.record_id),
        institution_id: normalize_id(&raw.institution_id),
        year: raw.year as i32,
        journal_id: normalize_id(&raw.journal_id),
        citations: raw.citations as u64,
    })
}

/// Loads publication records, preserving file order. Line numbers in errors
/// are 1-based file lines (the CSV header is line 1).
pub fn load_publications(path: &Path, format: PublicationFormat) -> Result<Vec<PublicationRecord>> {
    let raw = match format {
        PublicationFormat::Csv => read_publications_csv(path)?,
        PublicationFormat::Jsonl => read_publications_jsonl(path)?,
    };

    let mut seen: HashMap<String, u64> = HashMap::new();
    let mut records = Vec::with_capacity(raw.len());
    for row in raw {
        let line = row.line;
        let record = check_publication(row)?;
        if let Some(&first_line) = seen.get(&record.record_id) {
            return Err(Error::DuplicateRecord {
                record_id: record.record_id,
                first_line,
                second_line: line,
            });
        }
        seen.insert(record.record_id.clone(), line);
        records.push(record);
    }
    Ok(records)
}

fn read_publications_csv(path: &Path) -> Result<Vec<RawPublication>> {
    let mut reader = csv_reader(path)?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let [id, inst, year, journal, cites] = column_indices(path, &headers, PUBLICATION_COLUMNS)?;

    let mut rows = Vec::new();
    for result in reader.records() {
        let row = result.map_err(|e| csv_error(path, e))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        rows.push(RawPublication {
            line,
            record_id: row[id].to_string(),
            institution_id: row[inst].to_string(),
            year: parse_int(path, line, "year", &row[year])?,
            journal_id: row[journal].to_string(),
            citations: parse_int(path, line, "citations", &row[cites])?,
        });
    }
    Ok(rows)
}

fn read_publications_jsonl(path: &Path) -> Result<Vec<RawPublication>> {
    let reader = BufReader::new(open(path)?);
    let mut rows = Vec::new();
    for (idx, text) in reader.lines().enumerate() {
        let line = idx as u64 + 1;
        let text = text.map_err(|e| Error::io(path, e))?;
        if text.trim().is_empty() {
            continue;
        }
        let value: serde_json::Map<String, serde_json::Value> =
            serde_json::from_str(&text).map_err(|e| Error::parse(path, line, e.to_string()))?;

        let text_field = |key: &str| -> Result<String> {
            match value.get(key) {
                Some(serde_json::Value::String(s)) => Ok(s.clone()),
                Some(other) => Err(Error::parse(
                    path,
                    line,
                    format!("{key}: expected a string, got {other}"),
                )),
                None => Err(Error::MissingColumn {
                    path: path.to_path_buf(),
                    column: key.to_string(),
                }),
            }
        };
        let int_field = |key: &str| -> Result<i64> {
            match value.get(key) {
                Some(v) => v.as_i64().ok_or_else(|| {
                    Error::parse(path, line, format!("{key}: '{v}' is not an integer"))
                }),
                None => Err(Error::MissingColumn {
                    path: path.to_path_buf(),
                    column: key.to_string(),
                }),
            }
        };

        rows.push(RawPublication {
            line,
            record_id: text_field("record_id")?,
            institution_id: text_field("institution_id")?,
            year: int_field("year")?,
            journal_id: text_field("journal_id")?,
            citations: int_field("citations")?,
        });
    }
    Ok(rows)
}

/// Writes records in the same layout [`load_publications`] reads.
pub fn write_publications(
    path: &Path,
    records: &[PublicationRecord],
    format: PublicationFormat,
) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    match format {
        PublicationFormat::Csv => {
            // header written by hand so an empty file still loads back
            let mut writer = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(file);
            writer
                .write_record(PUBLICATION_COLUMNS)
                .map_err(|e| csv_error(path, e))?;
            for record in records {
                writer.serialize(record).map_err(|e| csv_error(path, e))?;
            }
            writer.flush().map_err(|e| Error::io(path, e))?;
        }
        PublicationFormat::Jsonl => {
            let mut writer = BufWriter::new(file);
            for record in records {
                let line = serde_json::to_string(record).expect("record serializes");
                writeln!(writer, "{line}").map_err(|e| Error::io(path, e))?;
            }
            writer.flush().map_err(|e| Error::io(path, e))?;
        }
    }
    Ok(())
}

/// Loads `journal_id,category,year,quartile` rows and groups them into one
/// profile per journal.
pub fn load_journals(path: &Path) -> Result<BTreeMap<String, JournalProfile>> {
    let mut reader = csv_reader(path)?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let [jid, cat, year, quart] = column_indices(path, &headers, JOURNAL_COLUMNS)?;

    let mut journals: BTreeMap<String, JournalProfile> = BTreeMap::new();
    let mut source_line: HashMap<(String, String, i32), u64> = HashMap::new();

    for result in reader.records() {
        let row = result.map_err(|e| csv_error(path, e))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);

        let journal_id = normalize_id(&row[jid]);
        let category = normalize_category(&row[cat]);
        if journal_id.is_empty() || category.is_empty() {
            return Err(Error::parse(path, line, "empty journal_id or category"));
        }
        let y = parse_int(path, line, "year", &row[year])?;
        if !(MIN_YEAR..=MAX_YEAR).contains(&y) {
            return Err(Error::YearOutOfRange { line, year: y });
        }
        let y = y as i32;
        let q = parse_int(path, line, "quartile", &row[quart])?;
        let quartile = u8::try_from(q)
            .ok()
            .and_then(Quartile::new)
            .ok_or(Error::QuartileRange { line, value: q })?;

        let profile = journals
            .entry(journal_id.clone())
            .or_insert_with(|| JournalProfile {
                journal_id: journal_id.clone(),
                categories: BTreeSet::new(),
                quartiles: BTreeMap::new(),
            });
        profile.categories.insert(category.clone());

        let key = (category.clone(), y);
        match profile.quartiles.get(&key) {
            Some(&existing) if existing != quartile => {
                let first_line = source_line[&(journal_id.clone(), category.clone(), y)];
                return Err(Error::QuartileConflict {
                    journal_id,
                    category,
                    year: y,
                    first: existing.get(),
                    first_line,
                    second: quartile.get(),
                    second_line: line,
                });
            }
            Some(_) => {}
            None => {
                profile.quartiles.insert(key, quartile);
                source_line.insert((journal_id, category, y), line);
            }
        }
    }
    Ok(journals)
}
