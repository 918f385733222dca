//! Fields as unions of subject categories, and projection of a corpus onto
//! them. Membership uses whole counting: a record in several fields counts
//! fully in each.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::corpus::{column_indices, csv_error, csv_reader, normalize_category, Corpus};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldLevel {
    Field,
    Subfield,
}

impl fmt::Display for FieldLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldLevel::Field => "field",
            FieldLevel::Subfield => "subfield",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDefinition {
    pub level: FieldLevel,
    pub categories: BTreeSet<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FieldTaxonomy {
    fields: BTreeMap<String, FieldDefinition>,
}

impl FieldTaxonomy {
    /// Builds a taxonomy from `(name, level, categories)` triples.
    pub fn new<I, S, C>(fields: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, FieldLevel, C)>,
        S: Into<String>,
        C: IntoIterator,
        C::Item: AsRef<str>,
    {
        let mut out = BTreeMap::new();
        for (name, level, categories) in fields {
            let name = name.into().trim().to_string();
            let categories: BTreeSet<String> = categories
                .into_iter()
                .map(|c| normalize_category(c.as_ref()))
                .filter(|c| !c.is_empty())
                .collect();
            if categories.is_empty() {
                return Err(Error::EmptyCategorySet(name));
            }
            if out.contains_key(&name) {
                return Err(Error::DuplicateField(name));
            }
            out.insert(name, FieldDefinition { level, categories });
        }
        Ok(FieldTaxonomy { fields: out })
    }

    pub fn fields(&self) -> &BTreeMap<String, FieldDefinition> {
        &self.fields
    }

    pub fn get(&self, name: &str) -> Option<&FieldDefinition> {
        self.fields.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.fields.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn all_categories(&self) -> BTreeSet<&str> {
        self.fields
            .values()
            .flat_map(|f| f.categories.iter().map(String::as_str))
            .collect()
    }
}

/// Loads `field_name,level,category` rows. A field's rows may be spread
/// anywhere in the file; declaring the same field with two different levels
/// is a duplicate-field error, and a field whose only rows have a blank
/// category has an empty category set.
pub fn load_taxonomy(path: &Path) -> Result<FieldTaxonomy> {
    let mut reader = csv_reader(path)?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let [name_col, level_col, cat_col] =
        column_indices(path, &headers, ["field_name", "level", "category"])?;

    let mut order: Vec<String> = Vec::new();
    let mut defs: BTreeMap<String, (FieldLevel, Vec<String>)> = BTreeMap::new();
    for result in reader.records() {
        let row = result.map_err(|e| csv_error(path, e))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let name = row[name_col].trim().to_string();
        if name.is_empty() {
            return Err(Error::parse(path, line, "empty field_name"));
        }
        let level = match row[level_col].trim().to_lowercase().as_str() {
            "field" => FieldLevel::Field,
            "subfield" => FieldLevel::Subfield,
            other => {
                return Err(Error::parse(
                    path,
                    line,
                    format!("level '{other}' is neither 'field' nor 'subfield'"),
                ))
            }
        };
        match defs.get_mut(&name) {
            Some((existing, _)) if *existing != level => return Err(Error::DuplicateField(name)),
            Some((_, cats)) => cats.push(row[cat_col].to_string()),
            None => {
                order.push(name.clone());
                defs.insert(name, (level, vec![row[cat_col].to_string()]));
            }
        }
    }

    FieldTaxonomy::new(order.into_iter().map(|name| {
        let (level, cats) = defs.remove(&name).expect("recorded above");
        (name, level, cats)
    }))
}

/// Field membership of every record in a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldAssignment {
    by_record: BTreeMap<String, BTreeSet<String>>,
    field_names: BTreeSet<String>,
}

impl FieldAssignment {
    pub fn fields_of(&self, record_id: &str) -> Option<&BTreeSet<String>> {
        self.by_record.get(record_id)
    }

    pub fn records(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.by_record
    }

    pub fn field_names(&self) -> &BTreeSet<String> {
        &self.field_names
    }

    /// Record ids that matched no field, sorted.
    pub fn unassigned(&self) -> Vec<&str> {
        self.by_record
            .iter()
            .filter(|(_, f)| f.is_empty())
            .map(|(id, _)| id.as_str())
            .collect()
    }

    pub fn members(&self, field: &str) -> BTreeSet<&str> {
        self.by_record
            .iter()
            .filter(|(_, f)| f.contains(field))
            .map(|(id, _)| id.as_str())
            .collect()
    }
}

/// A record belongs to a field iff its journal's categories intersect the
/// field's categories.
pub fn assign_fields(corpus: &Corpus, taxonomy: &FieldTaxonomy) -> FieldAssignment {
    let by_record = corpus
        .publications()
        .iter()
        .map(|record| {
            let fields = corpus
                .journal(&record.journal_id)
                .map(|journal| {
                    taxonomy
                        .fields
                        .iter()
                        .filter(|(_, def)| !def.categories.is_disjoint(&journal.categories))
                        .map(|(name, _)| name.clone())
                        .collect()
                })
                .unwrap_or_default();
            (record.record_id.clone(), fields)
        })
        .collect();
    FieldAssignment {
        by_record,
        field_names: taxonomy.fields.keys().cloned().collect(),
    }
}

/// The sub-corpus of records assigned to `field`. May be empty.
pub fn field_corpus(corpus: &Corpus, assignment: &FieldAssignment, field: &str) -> Result<Corpus> {
    if !assignment.field_names.contains(field) {
        return Err(Error::UnknownField(field.to_string()));
    }
    Ok(corpus.project(|r| {
        assignment
            .by_record
            .get(&r.record_id)
            .is_some_and(|f| f.contains(field))
    }))
}
