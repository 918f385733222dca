//! Concordance between two ranking systems: Spearman's rho over matched
//! institutions and the top-|S| agreement level, per crosswalk-matched
//! field pair.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use num_rational::Ratio;

use crate::corpus::{column_indices, csv_error, csv_reader};
use crate::error::{Error, Result};
use crate::indicators::MissingPolicy;
use crate::ranking::{restrict_to_system, RankingTable};

pub const DEFAULT_MIN_N: usize = 3;

/// Fractional (average) ranks, 1-based; tied values share the mean of the
/// positions they occupy.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let mean = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = mean;
        }
        start = end;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    (sxx > 0.0 && syy > 0.0).then(|| (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Correlation {
    Rho(f64),
    /// Fewer than `min_n` paired observations.
    Insufficient {
        n: usize,
    },
}

impl Correlation {
    pub fn value(self) -> Option<f64> {
        match self {
            Correlation::Rho(r) => Some(r),
            Correlation::Insufficient { .. } => None,
        }
    }
}

/// Spearman's rho as the Pearson correlation of midranks, so ties (for
/// instance institutions sharing a published interval) are handled exactly.
pub fn spearman_rho(x: &[f64], y: &[f64], min_n: usize) -> Result<Correlation> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < min_n.max(2) {
        return Ok(Correlation::Insufficient { n });
    }
    pearson(&midranks(x), &midranks(y))
        .map(Correlation::Rho)
        .ok_or(Error::ConstantRanks)
}

/// An unreduced fraction: 2/6 stays 2/6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Agreement {
    pub numerator: u64,
    pub denominator: u64,
}

impl Agreement {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        Agreement {
            numerator,
            denominator,
        }
    }

    /// `None` for 0/0.
    pub fn ratio(&self) -> Option<Ratio<u64>> {
        (self.denominator > 0).then(|| Ratio::new(self.numerator, self.denominator))
    }

    pub fn to_f64(&self) -> Option<f64> {
        (self.denominator > 0).then(|| self.numerator as f64 / self.denominator as f64)
    }
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementOutcome {
    pub agreement: Agreement,
    /// Institutions ranked internationally but absent nationally; counted as
    /// non-coinciding.
    pub missing_national: Vec<String>,
}

/// Of the `s` institutions in the (already restricted) international table,
/// how many hold a national rank of `s` or better.
pub fn agreement_level(
    international: &RankingTable,
    national: &RankingTable,
    missing: MissingPolicy,
) -> Result<AgreementOutcome> {
    let s = international.len() as u64;
    let cutoff = Ratio::from_integer(s);
    let mut numerator = 0;
    let mut missing_national = Vec::new();
    for entry in &international.entries {
        match national.get(&entry.institution_id) {
            Some(n) if n.rank.effective_rank() <= cutoff => numerator += 1,
            Some(_) => {}
            None if missing == MissingPolicy::Strict => {
                return Err(Error::MissingNationalRank(entry.institution_id.clone()))
            }
            None => missing_national.push(entry.institution_id.clone()),
        }
    }
    Ok(AgreementOutcome {
        agreement: Agreement::new(numerator, s),
        missing_national,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairRho {
    Value(f64),
    Insufficient,
    /// One side's ranks are all tied.
    Undefined,
}

impl PairRho {
    pub fn value(self) -> Option<f64> {
        match self {
            PairRho::Value(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompareOptions {
    pub min_n: usize,
    pub missing_national: MissingPolicy,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            min_n: DEFAULT_MIN_N,
            missing_national: MissingPolicy::Warn,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcordancePair {
    pub source_field: String,
    pub target_field: String,
    pub n: usize,
    pub rho: PairRho,
    pub agreement: Agreement,
    pub missing_national: Vec<String>,
}

/// Compares one international field table with one national field table.
pub fn compare_pair<S: std::borrow::Borrow<str> + Ord>(
    international: &RankingTable,
    national: &RankingTable,
    system_set: &BTreeSet<S>,
    options: CompareOptions,
) -> Result<ConcordancePair> {
    let restricted = restrict_to_system(international, system_set);
    let (x, y): (Vec<f64>, Vec<f64>) = restricted
        .entries
        .iter()
        .filter_map(|e| {
            national
                .get(&e.institution_id)
                .map(|n| (e.rank.effective_rank_f64(), n.rank.effective_rank_f64()))
        })
        .unzip();
    let n = x.len();
    let rho = match spearman_rho(&x, &y, options.min_n) {
        Ok(Correlation::Rho(r)) => PairRho::Value(r),
        Ok(Correlation::Insufficient { .. }) => PairRho::Insufficient,
        Err(Error::ConstantRanks) => PairRho::Undefined,
        Err(e) => return Err(e),
    };
    let outcome = agreement_level(&restricted, national, options.missing_national)?;
    Ok(ConcordancePair {
        source_field: international.field_name.clone(),
        target_field: national.field_name.clone(),
        n,
        rho,
        agreement: outcome.agreement,
        missing_national: outcome.missing_national,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateAgreement {
    /// Σ numerators / Σ denominators.
    pub pooled: Agreement,
    /// Unweighted mean of the per-pair fractions (0/0 pairs excluded).
    pub mean_of_fractions: Ratio<u64>,
    pub pairs_in_mean: usize,
}

impl AggregateAgreement {
    pub fn mean_f64(&self) -> f64 {
        *self.mean_of_fractions.numer() as f64 / *self.mean_of_fractions.denom() as f64
    }
}

pub fn aggregate_agreement(pairs: &[Agreement]) -> Result<AggregateAgreement> {
    let numerator: u64 = pairs.iter().map(|a| a.numerator).sum();
    let denominator: u64 = pairs.iter().map(|a| a.denominator).sum();
    if denominator == 0 {
        return Err(Error::ZeroDenominator);
    }
    let fractions: Vec<Ratio<u64>> = pairs.iter().filter_map(Agreement::ratio).collect();
    let sum = fractions
        .iter()
        .fold(Ratio::from_integer(0), |acc, f| acc + f);
    Ok(AggregateAgreement {
        pooled: Agreement::new(numerator, denominator),
        mean_of_fractions: sum / Ratio::from_integer(fractions.len() as u64),
        pairs_in_mean: fractions.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CrosswalkPair {
    pub source_system: String,
    pub source_field: String,
    pub target_system: String,
    pub target_field: String,
}

impl CrosswalkPair {
    pub fn source_key(&self) -> String {
        format!("{}/{}", self.source_system, self.source_field)
    }

    pub fn target_key(&self) -> String {
        format!("{}/{}", self.target_system, self.target_field)
    }
}

/// Field matching between ranking systems. One source field may map to
/// several target fields; a source row with an empty target is recorded as
/// unmapped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FieldCrosswalk {
    pub pairs: Vec<CrosswalkPair>,
    pub unmapped: Vec<(String, String)>,
}

impl FieldCrosswalk {
    pub fn new(pairs: Vec<CrosswalkPair>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for p in &pairs {
            if !seen.insert(p) {
                return Err(Error::DuplicateCrosswalkPair(
                    p.source_key(),
                    p.target_key(),
                ));
            }
        }
        Ok(FieldCrosswalk {
            pairs,
            unmapped: Vec::new(),
        })
    }
}

pub fn load_crosswalk(path: &Path) -> Result<FieldCrosswalk> {
    let mut reader = csv_reader(path)?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let [ss, sf, ts, tf] = column_indices(
        path,
        &headers,
        [
            "source_system",
            "source_field",
            "target_system",
            "target_field",
        ],
    )?;
    let mut pairs = Vec::new();
    let mut unmapped = Vec::new();
    for result in reader.records() {
        let row = result.map_err(|e| csv_error(path, e))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let (source_system, source_field) = (row[ss].trim(), row[sf].trim());
        if source_system.is_empty() || source_field.is_empty() {
            return Err(Error::parse(path, line, "empty source system or field"));
        }
        let (target_system, target_field) = (row[ts].trim(), row[tf].trim());
        if target_field.is_empty() {
            unmapped.push((source_system.to_string(), source_field.to_string()));
            continue;
        }
        if target_system.is_empty() {
            return Err(Error::parse(path, line, "empty target system"));
        }
        pairs.push(CrosswalkPair {
            source_system: source_system.to_string(),
            source_field: source_field.to_string(),
            target_system: target_system.to_string(),
            target_field: target_field.to_string(),
        });
    }
    let mut crosswalk = FieldCrosswalk::new(pairs)?;
    crosswalk.unmapped = unmapped;
    Ok(crosswalk)
}

/// All matched pairs between one source system and one target system.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcordanceReport {
    pub source_system: String,
    pub target_system: String,
    pub pairs: Vec<ConcordancePair>,
    /// `source -> target` keys whose tables were not loaded.
    pub unresolved: Vec<String>,
    /// `None` when every pair has an empty international side.
    pub aggregate: Option<AggregateAgreement>,
}

/// Evaluates every crosswalk pair, one report per (source, target) system
/// pair in crosswalk order. Without an explicit `system_set`, a report's
/// system is the union of institutions over the target system's tables.
pub fn run_crosswalk(
    crosswalk: &FieldCrosswalk,
    tables: &[RankingTable],
    system_set: Option<&BTreeSet<String>>,
    options: CompareOptions,
) -> Result<Vec<ConcordanceReport>> {
    let mut by_key: BTreeMap<(&str, &str), &RankingTable> = BTreeMap::new();
    for t in tables {
        if by_key
            .insert((t.system_name.as_str(), t.field_name.as_str()), t)
            .is_some()
        {
            return Err(Error::Config(format!(
                "ranking table {} supplied twice",
                t.key()
            )));
        }
    }

    let mut reports: Vec<ConcordanceReport> = Vec::new();
    let mut resolved = 0;
    for pair in &crosswalk.pairs {
        let idx = match reports.iter().position(|r| {
            r.source_system == pair.source_system && r.target_system == pair.target_system
        }) {
            Some(i) => i,
            None => {
                reports.push(ConcordanceReport {
                    source_system: pair.source_system.clone(),
                    target_system: pair.target_system.clone(),
                    pairs: Vec::new(),
                    unresolved: Vec::new(),
                    aggregate: None,
                });
                reports.len() - 1
            }
        };
        let source = by_key.get(&(pair.source_system.as_str(), pair.source_field.as_str()));
        let target = by_key.get(&(pair.target_system.as_str(), pair.target_field.as_str()));
        let (Some(source), Some(target)) = (source, target) else {
            reports[idx]
                .unresolved
                .push(format!("{} -> {}", pair.source_key(), pair.target_key()));
            continue;
        };
        let derived;
        let set = match system_set {
            Some(s) => s,
            None => {
                derived = tables
                    .iter()
                    .filter(|t| t.system_name == pair.target_system)
                    .flat_map(|t| t.entries.iter().map(|e| e.institution_id.clone()))
                    .collect::<BTreeSet<String>>();
                &derived
            }
        };
        reports[idx]
            .pairs
            .push(compare_pair(source, target, set, options)?);
        resolved += 1;
    }

    if resolved == 0 {
        return Err(Error::UnresolvedCrosswalk(
            reports.into_iter().flat_map(|r| r.unresolved).collect(),
        ));
    }
    for report in &mut reports {
        let agreements: Vec<Agreement> = report.pairs.iter().map(|p| p.agreement).collect();
        report.aggregate = aggregate_agreement(&agreements).ok();
    }
    Ok(reports)
}
