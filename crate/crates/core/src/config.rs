//! Run configuration: one TOML file, paths relative to the file, plus
//! command-line overrides.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::concordance::DEFAULT_MIN_N;
use crate::corpus::TimeWindow;
use crate::error::{Error, Result};
use crate::indicators::{MissingPolicy, Q1Policy};
use crate::output::Metadata;

fn default_min_n() -> usize {
    DEFAULT_MIN_N
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_national_system() -> String {
    "national".to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub publications: Option<PathBuf>,
    pub journals: Option<PathBuf>,
    pub taxonomy: Option<PathBuf>,
    #[serde(default)]
    pub external_rankings: Vec<PathBuf>,
    /// Pre-built national tables; when empty and a corpus is configured,
    /// `compare` ranks the corpus itself over the first window.
    #[serde(default)]
    pub national_rankings: Vec<PathBuf>,
    pub crosswalk: Option<PathBuf>,
    /// One institution id per line; defaults to every institution in the
    /// target system's tables.
    pub system_institutions: Option<PathBuf>,
    #[serde(default)]
    pub windows: Vec<TimeWindow>,
    #[serde(default)]
    pub q1_policy: Q1Policy,
    #[serde(default)]
    pub missing_quartile: MissingPolicy,
    #[serde(default)]
    pub missing_national: MissingPolicy,
    #[serde(default = "default_min_n")]
    pub min_n: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    /// System name written into internally produced ranking tables.
    #[serde(default = "default_national_system")]
    pub national_system: String,
    #[serde(skip)]
    base_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            publications: None,
            journals: None,
            taxonomy: None,
            external_rankings: Vec::new(),
            national_rankings: Vec::new(),
            crosswalk: None,
            system_institutions: None,
            windows: Vec::new(),
            q1_policy: Q1Policy::default(),
            missing_quartile: MissingPolicy::default(),
            missing_national: MissingPolicy::default(),
            min_n: DEFAULT_MIN_N,
            out_dir: default_out_dir(),
            national_system: default_national_system(),
            base_dir: PathBuf::from("."),
        }
    }
}

/// Command-line flags that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub windows: Vec<TimeWindow>,
    pub out_dir: Option<PathBuf>,
    pub min_n: Option<usize>,
    pub q1_policy: Option<Q1Policy>,
    pub strict_quartiles: bool,
}

/// Which inputs a command needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Needs {
    Corpus,
    Comparison,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."))
            .to_path_buf();
        Ok(cfg)
    }

    /// Directory relative paths are resolved against.
    pub fn with_base_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.base_dir = dir.into();
        self
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if !overrides.windows.is_empty() {
            self.windows = overrides.windows.clone();
        }
        if let Some(dir) = &overrides.out_dir {
            // flags are relative to the working directory, not the config
            self.out_dir = std::path::absolute(dir).unwrap_or_else(|_| dir.clone());
        }
        if let Some(n) = overrides.min_n {
            self.min_n = n;
        }
        if let Some(p) = overrides.q1_policy {
            self.q1_policy = p;
        }
        if overrides.strict_quartiles {
            self.missing_quartile = MissingPolicy::Strict;
        }
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.resolve(&self.out_dir)
    }

    pub(crate) fn required(&self, key: &str, path: &Option<PathBuf>) -> Result<PathBuf> {
        path.as_ref()
            .map(|p| self.resolve(p))
            .ok_or_else(|| Error::Config(format!("'{key}' is not set")))
    }

    /// Checks that referenced files exist and the windows are usable.
    pub fn validate(&self, needs: Needs) -> Result<()> {
        let mut paths: Vec<(&str, PathBuf)> = Vec::new();
        let corpus_inputs = [
            ("publications", &self.publications),
            ("journals", &self.journals),
            ("taxonomy", &self.taxonomy),
        ];
        let needs_corpus = needs == Needs::Corpus || self.ranks_corpus_for_comparison();
        if needs_corpus {
            for (key, p) in corpus_inputs {
                paths.push((key, self.required(key, p)?));
            }
            if self.windows.is_empty() {
                return Err(Error::Config("no windows configured".into()));
            }
            let mut lengths = BTreeSet::new();
            for w in &self.windows {
                if !lengths.insert(w.year_count()) {
                    return Err(Error::Config(format!(
                        "two windows share the length {} years; output suffixes would collide",
                        w.year_count()
                    )));
                }
            }
        }
        if needs == Needs::Comparison {
            paths.push(("crosswalk", self.required("crosswalk", &self.crosswalk)?));
            if self.external_rankings.is_empty() && self.national_rankings.is_empty() {
                return Err(Error::Config("no ranking tables configured".into()));
            }
        }
        for p in self.external_rankings.iter().chain(&self.national_rankings) {
            paths.push(("ranking", self.resolve(p)));
        }
        if let Some(p) = &self.system_institutions {
            paths.push(("system_institutions", self.resolve(p)));
        }
        for (key, p) in paths {
            if !p.is_file() {
                return Err(Error::Config(format!(
                    "{key}: {} does not exist",
                    p.display()
                )));
            }
        }
        if self.min_n < 2 {
            return Err(Error::Config("min_n must be at least 2".into()));
        }
        Ok(())
    }

    /// A comparison without national tables ranks the corpus itself, when
    /// one is configured.
    pub fn ranks_corpus_for_comparison(&self) -> bool {
        self.national_rankings.is_empty() && self.publications.is_some()
    }

    /// SHA-256 over the effective configuration, excluding the output
    /// directory so reruns into different directories stay byte-identical.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.out_dir = PathBuf::new();
        let text = toml::to_string(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    /// Output header metadata: config hash and every policy choice.
    pub fn metadata(&self) -> Metadata {
        Metadata::new(self.hash())
            .with("q1_policy", self.q1_policy)
            .with("missing_quartile", self.missing_quartile)
            .with("missing_national", self.missing_national)
            .with("min_n", self.min_n)
            .with("top10_boundary", "inclusive")
            .with("field_counting", "whole")
            .with("rank_ties", "competition")
            .with("interval_ranks", "midpoint")
            .with("spearman_ties", "midrank")
    }
}
