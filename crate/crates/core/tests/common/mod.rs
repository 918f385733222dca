// Shared by several test targets; each uses a different subset.
#![allow(dead_code)]

//! Independent reference implementations and fixture builders for the
//! integration tests. The oracles are deliberately naive: quadratic scans and
//! textbook formulas, sharing no code with the library.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unirank::corpus::{
    build_corpus, Corpus, JournalProfile, PublicationRecord, Quartile, TimeWindow,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

/// Largest h with at least h values >= h, by trying every candidate.
pub fn h_brute(citations: &[u64]) -> u64 {
    (0..=citations.len() as u64)
        .filter(|&h| citations.iter().filter(|&&c| c >= h).count() as u64 >= h)
        .max()
        .unwrap_or(0)
}

/// Top-decile threshold: sort ascending and take the value k places from
/// the top, k being the least integer with 10k >= n.
pub fn threshold_oracle(citations: &[u64]) -> Option<u64> {
    if citations.is_empty() {
        return None;
    }
    let mut sorted = citations.to_vec();
    sorted.sort();
    let n = citations.len();
    let k = (1..=n).find(|k| 10 * k >= n).unwrap();
    Some(sorted[n - k])
}

/// Average ranks by counting: 1 + (values strictly below) + (other equal
/// values) / 2.
pub fn midranks_oracle(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|&v| {
            let below = values.iter().filter(|&&w| w < v).count() as f64;
            let equal = values.iter().filter(|&&w| w == v).count() as f64;
            1.0 + below + (equal - 1.0) / 2.0
        })
        .collect()
}

pub fn pearson_oracle(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

pub fn spearman_oracle(x: &[f64], y: &[f64]) -> f64 {
    pearson_oracle(&midranks_oracle(x), &midranks_oracle(y))
}

/// 1 - 6·Σd²/(n(n²-1)), valid only without ties.
pub fn spearman_closed_form(x: &[f64], y: &[f64]) -> f64 {
    let rx = midranks_oracle(x);
    let ry = midranks_oracle(y);
    let n = x.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b).powi(2)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

pub fn permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    v.shuffle(rng);
    v
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

pub const FIELD_CATEGORY: &str = "test category";
pub const Q1_JOURNAL: &str = "JQ1";
pub const Q3_JOURNAL: &str = "JQ3";
pub const YEAR: i32 = 2010;

/// Two journals in one category: one first-quartile, one third-quartile,
/// for every year 2000..=2020.
pub fn two_journals() -> BTreeMap<String, JournalProfile> {
    [(Q1_JOURNAL, 1), (Q3_JOURNAL, 3)]
        .into_iter()
        .map(|(id, q)| {
            let quartiles = (2000..=2020)
                .map(|y| ((FIELD_CATEGORY.to_string(), y), Quartile::new(q).unwrap()))
                .collect();
            (
                id.to_string(),
                JournalProfile {
                    journal_id: id.to_string(),
                    categories: [FIELD_CATEGORY.to_string()].into(),
                    quartiles,
                },
            )
        })
        .collect()
}

/// One paper per `(institution, citations, in_q1)`.
pub fn records(papers: &[(String, u64, bool)]) -> Vec<PublicationRecord> {
    papers
        .iter()
        .enumerate()
        .map(|(i, (inst, cites, q1))| PublicationRecord {
            record_id: format!("R{i:06}"),
            institution_id: inst.clone(),
            year: YEAR,
            journal_id: if *q1 { Q1_JOURNAL } else { Q3_JOURNAL }.to_string(),
            citations: *cites,
        })
        .collect()
}

pub fn corpus_of(papers: &[(String, u64, bool)]) -> Corpus {
    build_corpus(
        &records(papers),
        &two_journals(),
        TimeWindow::new(YEAR, YEAR).unwrap(),
    )
    .unwrap()
    .corpus
}

/// Random field of `institutions` institutions with 1..=max_papers papers
/// each.
pub fn random_field(
    rng: &mut ChaCha8Rng,
    institutions: usize,
    max_papers: usize,
) -> Vec<(String, u64, bool)> {
    let mut papers = Vec::new();
    for i in 0..institutions {
        for _ in 0..rng.gen_range(1..=max_papers) {
            papers.push((format!("U{i:03}"), rng.gen_range(0..60), rng.gen_bool(0.4)));
        }
    }
    papers
}

/// Copies every regular file of `from` into a fresh directory.
pub fn copy_dir(from: &Path, to: &Path) {
    std::fs::create_dir_all(to).unwrap();
    for entry in std::fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        if entry.file_type().unwrap().is_file() {
            std::fs::copy(entry.path(), to.join(entry.file_name())).unwrap();
        }
    }
}

/// Rewrites a CSV file with its data rows shuffled, keeping comment lines
/// and the header first.
pub fn shuffle_csv_rows(path: &Path, rng: &mut ChaCha8Rng) {
    let text = std::fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let header = lines.iter().position(|l| !l.starts_with('#')).unwrap();
    let head = &lines[..=header];
    let mut rows = lines[header + 1..].to_vec();
    rows.shuffle(rng);
    let mut out = head.join("\n");
    for r in rows {
        out.push('\n');
        out.push_str(r);
    }
    out.push('\n');
    std::fs::write(path, out).unwrap();
}

/// Every file in `dir`, by name, with its bytes.
pub fn read_outputs(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}
