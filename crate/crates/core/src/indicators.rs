//! The six primary bibliometric indicators, computed per institution over a
//! windowed field corpus.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, JournalProfile, PublicationRecord};
use crate::error::{Error, Result};

/// Largest `h` such that at least `h` papers have `h` or more citations.
pub fn h_index(citations: &[u64]) -> u64 {
    let mut sorted = citations.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|&(i, &c)| c > i as u64)
        .count() as u64
}

/// Descending position of the top-10% boundary paper: `ceil(0.10 * n)`.
pub fn top_decile_position(pool_size: usize) -> usize {
    pool_size.div_ceil(10)
}

/// Citation count a paper needs to be among the field's top 10%, pooled
/// across all institutions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldCitationThreshold {
    pub field_name: String,
    pub pool_size: usize,
    pub threshold: u64,
}

impl FieldCitationThreshold {
    pub fn from_citations(field_name: impl Into<String>, citations: &[u64]) -> Self {
        let pool_size = citations.len();
        let threshold = if pool_size == 0 {
            0
        } else {
            let mut sorted = citations.to_vec();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            sorted[top_decile_position(pool_size) - 1]
        };
        FieldCitationThreshold {
            field_name: field_name.into(),
            pool_size,
            threshold,
        }
    }

    /// Papers at or above the threshold are top papers; ties at the boundary
    /// are all included.
    pub fn is_top(&self, citations: u64) -> bool {
        self.pool_size > 0 && citations >= self.threshold
    }
}

pub fn top10_threshold(field_name: &str, field_corpus: &Corpus) -> FieldCitationThreshold {
    let citations: Vec<u64> = field_corpus
        .publications()
        .iter()
        .map(|r| r.citations)
        .collect();
    FieldCitationThreshold::from_citations(field_name, &citations)
}

/// How a multi-category journal is judged first-quartile.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Q1Policy {
    /// Q1 in at least one of the journal's categories that belong to the
    /// field being evaluated.
    #[default]
    AnyRelevant,
    /// Q1 in any of the journal's categories, field or not.
    BestAll,
}

impl fmt::Display for Q1Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Q1Policy::AnyRelevant => "any-relevant",
            Q1Policy::BestAll => "best-all",
        })
    }
}

impl FromStr for Q1Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any-relevant" => Ok(Q1Policy::AnyRelevant),
            "best-all" => Ok(Q1Policy::BestAll),
            other => Err(Error::Config(format!("unknown q1 policy '{other}'"))),
        }
    }
}

/// What to do when a journal lacks a quartile for a needed category-year.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MissingPolicy {
    Strict,
    /// Count as a miss and keep a tally.
    #[default]
    Warn,
}

impl fmt::Display for MissingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MissingPolicy::Strict => "strict",
            MissingPolicy::Warn => "warn",
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct IndicatorOptions {
    /// Categories of the field under evaluation. `None` treats every journal
    /// category as relevant.
    pub field_categories: Option<BTreeSet<String>>,
    pub q1_policy: Q1Policy,
    pub missing_quartile: MissingPolicy,
}

impl IndicatorOptions {
    fn relevant<'a>(&self, journal: &'a JournalProfile) -> Vec<&'a str> {
        match (&self.field_categories, self.q1_policy) {
            (Some(field), Q1Policy::AnyRelevant) => journal
                .categories
                .iter()
                .filter(|c| field.contains(*c))
                .map(String::as_str)
                .collect(),
            _ => journal.categories.iter().map(String::as_str).collect(),
        }
    }

    /// `Ok(Some(true/false))` on a decisive answer, `Ok(None)` when the
    /// answer hinges on a missing quartile under the warn policy.
    fn is_q1(&self, journal: &JournalProfile, record: &PublicationRecord) -> Result<Option<bool>> {
        let mut missing = None;
        for category in self.relevant(journal) {
            match journal.quartile(category, record.year) {
                Ok(q) if q.is_first() => return Ok(Some(true)),
                Ok(_) => {}
                Err(e) => {
                    missing.get_or_insert(e);
                }
            }
        }
        match (missing, self.missing_quartile) {
            (None, _) => Ok(Some(false)),
            (Some(e), MissingPolicy::Strict) => Err(e),
            (Some(_), MissingPolicy::Warn) => Ok(None),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicatorSet {
    pub institution_id: String,
    pub ndoc: u64,
    pub ncit: u64,
    pub h: u64,
    pub pct_q1: f64,
    pub acit: f64,
    pub topcit: f64,
    /// Papers in first-quartile journals (numerator of `pct_q1`).
    pub q1_papers: u64,
    /// Papers at or above the field threshold (numerator of `topcit`).
    pub top_papers: u64,
}

impl IndicatorSet {
    /// Builds the set from per-paper citation counts and the two paper
    /// tallies. Ratios are 0 when `ndoc` is 0.
    pub fn from_counts(
        institution_id: impl Into<String>,
        citations: &[u64],
        q1_papers: u64,
        top_papers: u64,
    ) -> Self {
        let ndoc = citations.len() as u64;
        let ncit: u64 = citations.iter().sum();
        let ratio = |num: u64| {
            if ndoc == 0 {
                0.0
            } else {
                num as f64 / ndoc as f64
            }
        };
        IndicatorSet {
            institution_id: institution_id.into(),
            ndoc,
            ncit,
            h: h_index(citations),
            pct_q1: ratio(q1_papers),
            acit: ratio(ncit),
            topcit: ratio(top_papers),
            q1_papers,
            top_papers,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldIndicators {
    pub by_institution: BTreeMap<String, IndicatorSet>,
    /// Papers whose Q1 status could not be determined (warn policy only).
    pub missing_quartiles: usize,
}

#[derive(Default)]
struct Tally {
    citations: Vec<u64>,
    q1: u64,
    top: u64,
}

/// Indicators for every institution with at least one paper in the field.
/// `threshold` must come from the same field corpus.
pub fn compute_indicators(
    field_corpus: &Corpus,
    threshold: &FieldCitationThreshold,
    options: &IndicatorOptions,
) -> Result<FieldIndicators> {
    let mut tallies: BTreeMap<&str, Tally> = BTreeMap::new();
    let mut missing = 0;
    for record in field_corpus.publications() {
        let journal =
            field_corpus
                .journal(&record.journal_id)
                .ok_or_else(|| Error::UnknownJournal {
                    record_id: record.record_id.clone(),
                    journal_id: record.journal_id.clone(),
                })?;
        let tally = tallies.entry(record.institution_id.as_str()).or_default();
        tally.citations.push(record.citations);
        match options.is_q1(journal, record)? {
            Some(true) => tally.q1 += 1,
            Some(false) => {}
            None => missing += 1,
        }
        if threshold.is_top(record.citations) {
            tally.top += 1;
        }
    }

    let by_institution = tallies
        .into_iter()
        .map(|(id, t)| {
            (
                id.to_string(),
                IndicatorSet::from_counts(id, &t.citations, t.q1, t.top),
            )
        })
        .collect();
    Ok(FieldIndicators {
        by_institution,
        missing_quartiles: missing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_corpus, Quartile, TimeWindow};
    use proptest::prelude::*;

    fn brute_h(c: &[u64]) -> u64 {
        (0..=c.len() as u64)
            .filter(|&h| c.iter().filter(|&&x| x >= h).count() as u64 >= h)
            .max()
            .unwrap()
    }

    #[test]
    fn h_index_examples() {
        assert_eq!(h_index(&[]), 0);
        assert_eq!(h_index(&[0, 0, 0]), 0);
        assert_eq!(brute_h(&[10, 8, 5, 4, 3]), 4);
        assert_eq!(h_index(&[10, 8, 5, 4, 3]), 4);
        assert_eq!(h_index(&[1]), 1);
        assert_eq!(h_index(&[100]), 1);
    }

    #[test]
    fn threshold_examples() {
        let t = FieldCitationThreshold::from_citations("f", &[9, 8, 7, 6, 5, 4, 3, 2, 1, 0]);
        assert_eq!((t.pool_size, t.threshold), (10, 9));
        let t = FieldCitationThreshold::from_citations("f", &[5]);
        assert_eq!(t.threshold, 5);
        let mut pool = vec![20, 17, 17];
        pool.extend(0..12);
        assert_eq!(pool.len(), 15);
        assert_eq!(top_decile_position(15), 2);
        assert_eq!(
            FieldCitationThreshold::from_citations("f", &pool).threshold,
            17
        );
        let empty = FieldCitationThreshold::from_citations("f", &[]);
        assert_eq!((empty.pool_size, empty.threshold), (0, 0));
        assert!(!empty.is_top(0));
    }

    #[test]
    fn ratios() {
        let s = IndicatorSet::from_counts("u", &[9, 0], 0, 1);
        assert_eq!((s.ndoc, s.ncit, s.h), (2, 9, 1));
        assert_eq!(s.acit, 4.5);
        assert_eq!(s.topcit, 0.5);

        let s = IndicatorSet::from_counts("u", &[1, 2, 3, 4, 5, 6, 3, 3], 0, 0);
        assert_eq!(s.ncit, 27);
        assert_eq!(s.acit, 3.375);

        let s = IndicatorSet::from_counts("u", &[1, 1, 1, 1], 2, 0);
        assert_eq!(s.pct_q1, 0.5);

        let s = IndicatorSet::from_counts("u", &[], 0, 0);
        assert_eq!(
            (s.ndoc, s.ncit, s.h, s.acit, s.pct_q1, s.topcit),
            (0, 0, 0, 0.0, 0.0, 0.0)
        );
    }

    fn journal(id: &str, entries: &[(&str, i32, u8)]) -> (String, JournalProfile) {
        (
            id.to_string(),
            JournalProfile {
                journal_id: id.into(),
                categories: entries.iter().map(|e| e.0.to_string()).collect(),
                quartiles: entries
                    .iter()
                    .map(|&(c, y, q)| ((c.to_string(), y), Quartile::new(q).unwrap()))
                    .collect(),
            },
        )
    }

    fn rec(id: &str, inst: &str, journal: &str, citations: u64) -> PublicationRecord {
        PublicationRecord {
            record_id: id.into(),
            institution_id: inst.into(),
            year: 2010,
            journal_id: journal.into(),
            citations,
        }
    }

    #[test]
    fn q1_policies_differ_on_irrelevant_categories() {
        // JX is Q1 only in a category outside the field
        let journals = [
            journal("JX", &[("math", 2010, 3), ("biology", 2010, 1)]),
            journal("JM", &[("math", 2010, 1)]),
        ]
        .into_iter()
        .collect();
        let pubs = vec![rec("a", "U", "JX", 3), rec("b", "U", "JM", 1)];
        let corpus = build_corpus(&pubs, &journals, TimeWindow::new(2010, 2010).unwrap())
            .unwrap()
            .corpus;
        let threshold = top10_threshold("Math", &corpus);
        let mut opts = IndicatorOptions {
            field_categories: Some(["math".to_string()].into()),
            ..Default::default()
        };
        let any = compute_indicators(&corpus, &threshold, &opts).unwrap();
        assert_eq!(any.by_institution["U"].pct_q1, 0.5);

        opts.q1_policy = Q1Policy::BestAll;
        let best = compute_indicators(&corpus, &threshold, &opts).unwrap();
        assert_eq!(best.by_institution["U"].pct_q1, 1.0);
    }

    #[test]
    fn missing_quartile_policies() {
        let journals = [journal("J", &[("math", 2009, 1)])].into_iter().collect();
        let pubs = vec![rec("a", "U", "J", 3), rec("b", "V", "J", 0)];
        let corpus = build_corpus(&pubs, &journals, TimeWindow::new(2010, 2010).unwrap())
            .unwrap()
            .corpus;
        let threshold = top10_threshold("Math", &corpus);
        let mut opts = IndicatorOptions::default();
        let out = compute_indicators(&corpus, &threshold, &opts).unwrap();
        assert_eq!(out.missing_quartiles, 2);
        assert_eq!(out.by_institution["U"].pct_q1, 0.0);
        assert_eq!(out.by_institution["U"].topcit, 1.0);
        assert_eq!(out.by_institution["V"].topcit, 0.0);

        opts.missing_quartile = MissingPolicy::Strict;
        assert!(matches!(
            compute_indicators(&corpus, &threshold, &opts),
            Err(Error::MissingQuartile { year: 2010, .. })
        ));
    }

    #[test]
    fn worked_institution_in_ten_paper_pool() {
        let journals = [journal("J", &[("cs", 2010, 2)])].into_iter().collect();
        let mut pubs: Vec<_> = [8u64, 7, 6, 5, 4, 3, 2, 1]
            .iter()
            .enumerate()
            .map(|(i, &c)| rec(&format!("o{i}"), "Other", "J", c))
            .collect();
        pubs.push(rec("u1", "U", "J", 9));
        pubs.push(rec("u2", "U", "J", 0));
        let corpus = build_corpus(&pubs, &journals, TimeWindow::new(2010, 2010).unwrap())
            .unwrap()
            .corpus;
        let threshold = top10_threshold("CS", &corpus);
        assert_eq!(threshold.threshold, 9);
        let out = compute_indicators(&corpus, &threshold, &IndicatorOptions::default()).unwrap();
        let u = &out.by_institution["U"];
        assert_eq!((u.ndoc, u.ncit, u.h, u.acit, u.topcit), (2, 9, 1, 4.5, 0.5));
        assert_eq!(out.by_institution.values().map(|s| s.ndoc).sum::<u64>(), 10);
    }

    proptest! {
        #[test]
        fn h_index_matches_brute_force(c in prop::collection::vec(0u64..250, 0..200)) {
            prop_assert_eq!(h_index(&c), brute_h(&c));
        }

        #[test]
        fn h_bounded_by_count_and_max(c in prop::collection::vec(0u64..50, 0..60)) {
            let h = h_index(&c);
            prop_assert!(h <= c.len() as u64);
            prop_assert!(h <= c.iter().copied().max().unwrap_or(0));
        }

        #[test]
        fn top_set_never_smaller_than_decile(c in prop::collection::vec(0u64..20, 1..120)) {
            let t = FieldCitationThreshold::from_citations("f", &c);
            let top = c.iter().filter(|&&x| t.is_top(x)).count();
            prop_assert!(top >= top_decile_position(c.len()));
        }
    }
}
