//! Dataset CSV files and their schemas.
//!
//! A dataset file is comma-separated text with a header row of column names.
//! The schema is a TOML file with one `[[columns]]` table per column:
//!
//! ```toml
//! [[columns]]
//! name = "color"
//! kind = "categorical"
//! levels = ["red", "green", "blue"]   # optional; inferred when omitted
//!
//! [[columns]]
//! name = "age"
//! kind = "numerical"
//! ```
//!
//! Without explicit levels, categorical levels are taken in order of first
//! appearance. Missing values are rejected.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use bistochastic::{AttributeColumn, ColumnData, Dataset};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Categorical,
    Numerical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: ColumnKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemaSpec {
    pub columns: Vec<ColumnSpec>,
}

impl SchemaSpec {
    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let schema: SchemaSpec = toml::from_str(text).map_err(|source| CliError::Toml {
            path: path.into(),
            source,
        })?;
        schema.check().map_err(|message| CliError::Parse {
            path: path.into(),
            line: 0,
            message,
        })?;
        Ok(schema)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(path, &text)
    }

    fn check(&self) -> std::result::Result<(), String> {
        for (i, c) in self.columns.iter().enumerate() {
            if self.columns[..i].iter().any(|o| o.name == c.name) {
                return Err(format!("duplicate column `{}`", c.name));
            }
            if let Some(levels) = &c.levels {
                if c.kind == ColumnKind::Numerical {
                    return Err(format!("numerical column `{}` cannot list levels", c.name));
                }
                for (j, l) in levels.iter().enumerate() {
                    if levels[..j].contains(l) {
                        return Err(format!("column `{}` repeats level `{l}`", c.name));
                    }
                }
            }
        }
        Ok(())
    }

    /// Schema with explicit levels describing `ds` exactly.
    pub fn of(ds: &Dataset) -> Self {
        let columns = ds
            .columns()
            .iter()
            .map(|c| ColumnSpec {
                name: c.name().into(),
                kind: if c.is_categorical() {
                    ColumnKind::Categorical
                } else {
                    ColumnKind::Numerical
                },
                levels: c.levels().map(<[String]>::to_vec),
            })
            .collect();
        Self { columns }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("schema serializes")
    }
}

pub fn load_dataset(path: &Path, schema: &SchemaSpec) -> Result<Dataset> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_dataset(path, file, schema)
}

/// Parses CSV from `reader`; `path` is only used in error messages.
pub fn read_dataset<R: Read>(path: &Path, reader: R, schema: &SchemaSpec) -> Result<Dataset> {
    let csv_err = |source| CliError::Csv {
        path: path.into(),
        source,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(String::from)
        .collect();

    let by_name: HashMap<&str, usize> = header
        .iter()
        .enumerate()
        .map(|(i, h)| (h.as_str(), i))
        .collect();
    for h in &header {
        if !schema.columns.iter().any(|c| &c.name == h) {
            return Err(CliError::UnexpectedColumn {
                path: path.into(),
                column: h.clone(),
            });
        }
    }
    let positions = schema
        .columns
        .iter()
        .map(|c| {
            by_name
                .get(c.name.as_str())
                .copied()
                .ok_or_else(|| CliError::MissingColumn {
                    path: path.into(),
                    column: c.name.clone(),
                })
        })
        .collect::<Result<Vec<usize>>>()?;

    let mut builders: Vec<ColumnBuilder> = schema.columns.iter().map(ColumnBuilder::new).collect();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let number = i + 1;
        for (b, &pos) in builders.iter_mut().zip(&positions) {
            let cell = record.get(pos).unwrap_or("");
            b.push(path, number, cell)?;
        }
    }
    let columns = builders
        .into_iter()
        .map(|b| b.finish())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| CliError::model(path.display().to_string(), e))?;
    Dataset::new(columns).map_err(|e| CliError::model(path.display().to_string(), e))
}

struct ColumnBuilder<'a> {
    spec: &'a ColumnSpec,
    levels: Vec<String>,
    index: HashMap<String, usize>,
    codes: Vec<usize>,
    values: Vec<f64>,
}

impl<'a> ColumnBuilder<'a> {
    fn new(spec: &'a ColumnSpec) -> Self {
        let levels = spec.levels.clone().unwrap_or_default();
        let index = levels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Self {
            spec,
            levels,
            index,
            codes: Vec::new(),
            values: Vec::new(),
        }
    }

    fn push(&mut self, path: &Path, record: usize, cell: &str) -> Result<()> {
        let column = || self.spec.name.clone();
        match self.spec.kind {
            ColumnKind::Numerical => {
                let trimmed = cell.trim();
                if trimmed.is_empty() {
                    return Err(CliError::MissingValue {
                        path: path.into(),
                        record,
                        column: column(),
                    });
                }
                let v = trimmed
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::UnparseableCell {
                        path: path.into(),
                        record,
                        column: column(),
                        value: cell.into(),
                    })?;
                self.values.push(v);
            }
            ColumnKind::Categorical => {
                if cell.is_empty() {
                    return Err(CliError::MissingValue {
                        path: path.into(),
                        record,
                        column: column(),
                    });
                }
                let code = match self.index.get(cell) {
                    Some(&c) => c,
                    None if self.spec.levels.is_some() => {
                        return Err(CliError::UnknownLevel {
                            path: path.into(),
                            record,
                            column: column(),
                            value: cell.into(),
                        })
                    }
                    None => {
                        self.levels.push(cell.into());
                        self.index.insert(cell.into(), self.levels.len() - 1);
                        self.levels.len() - 1
                    }
                };
                self.codes.push(code);
            }
        }
        Ok(())
    }

    fn finish(self) -> bistochastic::Result<AttributeColumn> {
        match self.spec.kind {
            ColumnKind::Numerical => AttributeColumn::numerical(&self.spec.name, self.values),
            ColumnKind::Categorical => {
                AttributeColumn::categorical(&self.spec.name, self.levels, self.codes)
            }
        }
    }
}

pub fn save_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_dataset(path, ds, file)
}

/// Writes the header and records. Numbers use the shortest decimal form
/// that parses back to the same `f64`.
pub fn write_dataset<W: Write>(path: &Path, ds: &Dataset, writer: W) -> Result<()> {
    let csv_err = |source| CliError::Csv {
        path: path.into(),
        source,
    };
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(ds.columns().iter().map(AttributeColumn::name))
        .map_err(csv_err)?;
    let mut row = Vec::with_capacity(ds.column_count());
    for i in 0..ds.record_count() {
        row.clear();
        for c in ds.columns() {
            row.push(match c.data() {
                ColumnData::Categorical { levels, codes } => levels[codes[i]].clone(),
                ColumnData::Numerical(v) => v[i].to_string(),
            });
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
