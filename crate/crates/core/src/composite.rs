//! The IFQ²A composite index and quadrant classification.
//!
//! QNIF is the cube root of NDOC × NCIT × H (size-dependent), QLIF the cube
//! root of %1Q × ACIT × TOPCIT (size-independent), and IFQ²A their product.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::indicators::IndicatorSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexScore {
    pub qnif: f64,
    pub qlif: f64,
    pub ifq2a: f64,
}

pub fn quantitative_dimension(ndoc: u64, ncit: u64, h: u64) -> f64 {
    (ndoc as f64 * ncit as f64 * h as f64).cbrt()
}

pub fn qualitative_dimension(pct_q1: f64, acit: f64, topcit: f64) -> f64 {
    (pct_q1 * acit * topcit).cbrt()
}

pub fn score(ind: &IndicatorSet) -> IndexScore {
    let qnif = quantitative_dimension(ind.ndoc, ind.ncit, ind.h);
    let qlif = qualitative_dimension(ind.pct_q1, ind.acit, ind.topcit);
    IndexScore {
        qnif,
        qlif,
        ifq2a: qnif * qlif,
    }
}

pub fn score_field(indicators: &BTreeMap<String, IndicatorSet>) -> BTreeMap<String, IndexScore> {
    indicators
        .iter()
        .map(|(id, ind)| (id.clone(), score(ind)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrant {
    BothOutstanding,
    QuantitativeOnly,
    QualitativeOnly,
    Neither,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [
        Quadrant::BothOutstanding,
        Quadrant::QuantitativeOnly,
        Quadrant::QualitativeOnly,
        Quadrant::Neither,
    ];

    /// At-mean counts as outstanding on that axis.
    pub fn classify(score: &IndexScore, mean_qnif: f64, mean_qlif: f64) -> Self {
        match (score.qnif >= mean_qnif, score.qlif >= mean_qlif) {
            (true, true) => Quadrant::BothOutstanding,
            (true, false) => Quadrant::QuantitativeOnly,
            (false, true) => Quadrant::QualitativeOnly,
            (false, false) => Quadrant::Neither,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Quadrant::BothOutstanding => "both_outstanding",
            Quadrant::QuantitativeOnly => "quantitative_only",
            Quadrant::QualitativeOnly => "qualitative_only",
            Quadrant::Neither => "neither",
        }
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadrantMap {
    pub mean_qnif: f64,
    pub mean_qlif: f64,
    pub labels: BTreeMap<String, Quadrant>,
}

impl QuadrantMap {
    pub fn counts(&self) -> BTreeMap<Quadrant, usize> {
        let mut counts: BTreeMap<Quadrant, usize> = Quadrant::ALL.iter().map(|&q| (q, 0)).collect();
        for q in self.labels.values() {
            *counts.get_mut(q).expect("all quadrants seeded") += 1;
        }
        counts
    }
}

/// Labels each institution against the unweighted means of QNIF and QLIF
/// over the scored population. An empty map yields zero means and no labels.
pub fn classify_quadrants(scores: &BTreeMap<String, IndexScore>) -> QuadrantMap {
    let n = scores.len().max(1) as f64;
    let mean_qnif = scores.values().map(|s| s.qnif).sum::<f64>() / n;
    let mean_qlif = scores.values().map(|s| s.qlif).sum::<f64>() / n;
    let labels = scores
        .iter()
        .map(|(id, s)| (id.clone(), Quadrant::classify(s, mean_qnif, mean_qlif)))
        .collect();
    QuadrantMap {
        mean_qnif,
        mean_qlif,
        labels,
    }
}
