//! Typed attribute columns.
//!
//! A categorical column with `r` levels is anonymized by an `r×r` matrix; a
//! numerical column of `N` records treats the individuals themselves as
//! categories and needs an `N×N` matrix.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Categorical {
        levels: Vec<String>,
        codes: Vec<usize>,
    },
    Numerical(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributeColumn {
    name: String,
    data: ColumnData,
}

impl AttributeColumn {
    /// Levels must be distinct and every code must index a level.
    pub fn categorical(
        name: impl Into<String>,
        levels: Vec<String>,
        codes: Vec<usize>,
    ) -> Result<Self> {
        let name = name.into();
        for (i, l) in levels.iter().enumerate() {
            if levels[..i].contains(l) {
                return Err(Error::InvalidColumn(format!(
                    "`{name}`: duplicate level `{l}`"
                )));
            }
        }
        if let Some((row, &c)) = codes.iter().enumerate().find(|(_, &c)| c >= levels.len()) {
            return Err(Error::InvalidColumn(format!(
                "`{name}`: record {row} has code {c} but only {} levels",
                levels.len()
            )));
        }
        Ok(Self {
            name,
            data: ColumnData::Categorical { levels, codes },
        })
    }

    pub fn numerical(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if let Some(row) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidColumn(format!(
                "`{name}`: record {row} is not finite"
            )));
        }
        Ok(Self {
            name,
            data: ColumnData::Numerical(values),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn data(&self) -> &ColumnData {
        &self.data
    }

    pub fn len(&self) -> usize {
        match &self.data {
            ColumnData::Categorical { codes, .. } => codes.len(),
            ColumnData::Numerical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_categorical(&self) -> bool {
        matches!(self.data, ColumnData::Categorical { .. })
    }

    /// Size of the matrix that anonymizes this column: the level count for
    /// categorical data, the record count for numerical data.
    pub fn domain_size(&self) -> usize {
        match &self.data {
            ColumnData::Categorical { levels, .. } => levels.len(),
            ColumnData::Numerical(v) => v.len(),
        }
    }

    pub fn levels(&self) -> Option<&[String]> {
        match &self.data {
            ColumnData::Categorical { levels, .. } => Some(levels),
            ColumnData::Numerical(_) => None,
        }
    }

    pub fn codes(&self) -> Option<&[usize]> {
        match &self.data {
            ColumnData::Categorical { codes, .. } => Some(codes),
            ColumnData::Numerical(_) => None,
        }
    }

    pub fn values(&self) -> Option<&[f64]> {
        match &self.data {
            ColumnData::Numerical(v) => Some(v),
            ColumnData::Categorical { .. } => None,
        }
    }

    /// Same column metadata, new data of the same kind.
    pub(crate) fn with_codes(&self, codes: Vec<usize>) -> Self {
        let ColumnData::Categorical { levels, .. } = &self.data else {
            unreachable!("with_codes on numerical column");
        };
        Self {
            name: self.name.clone(),
            data: ColumnData::Categorical {
                levels: levels.clone(),
                codes,
            },
        }
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        Self {
            name: self.name.clone(),
            data: ColumnData::Numerical(values),
        }
    }
}

/// Columns sharing one record count.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<AttributeColumn>,
    record_count: usize,
}

impl Dataset {
    pub fn new(columns: Vec<AttributeColumn>) -> Result<Self> {
        let record_count = columns.first().map_or(0, AttributeColumn::len);
        for (i, c) in columns.iter().enumerate() {
            if c.len() != record_count {
                return Err(Error::InvalidColumn(format!(
                    "`{}` has {} records, expected {record_count}",
                    c.name(),
                    c.len()
                )));
            }
            if columns[..i].iter().any(|o| o.name() == c.name()) {
                return Err(Error::InvalidColumn(format!(
                    "duplicate column name `{}`",
                    c.name()
                )));
            }
        }
        Ok(Self {
            columns,
            record_count,
        })
    }

    pub fn columns(&self) -> &[AttributeColumn] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&AttributeColumn> {
        self.columns.iter().find(|c| c.name() == name)
    }

    pub fn into_columns(self) -> Vec<AttributeColumn> {
        self.columns
    }

    pub fn record_count(&self) -> usize {
        self.record_count
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }
}
