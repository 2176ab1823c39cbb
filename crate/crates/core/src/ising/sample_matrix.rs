use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::Encoding;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnRole {
    Element,
    Decision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub label: String,
    pub role: ColumnRole,
    /// Declared response codes, ascending.
    pub categories: Vec<i32>,
}

impl Column {
    pub fn new(label: impl Into<String>, role: ColumnRole, mut categories: Vec<i32>) -> Self {
        categories.sort_unstable();
        categories.dedup();
        Self {
            label: label.into(),
            role,
            categories,
        }
    }
}

/// Respondents by variables with discrete codes; `None` marks a missing cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMatrix {
    columns: Vec<Column>,
    n_rows: usize,
    cells: Vec<Option<i32>>,
}

impl SampleMatrix {
    /// `cells` is row-major. Every present code must be declared by its column.
    pub fn new(columns: Vec<Column>, cells: Vec<Option<i32>>) -> Result<Self> {
        let n_cols = columns.len();
        if n_cols == 0 {
            return Err(Error::contract("sample matrix needs at least one column"));
        }
        if cells.len() % n_cols != 0 {
            return Err(Error::contract(format!(
                "{} cells do not fill rows of {n_cols} columns",
                cells.len()
            )));
        }
        let n_rows = cells.len() / n_cols;
        for (idx, cell) in cells.iter().enumerate() {
            if let Some(v) = cell {
                let col = &columns[idx % n_cols];
                if col.categories.binary_search(v).is_err() {
                    return Err(Error::contract(format!(
                        "row {} column '{}': code {v} not among {:?}",
                        idx / n_cols,
                        col.label,
                        col.categories
                    )));
                }
            }
        }
        Ok(Self { columns, n_rows, cells })
    }

    /// Complete binary data in the given coding, one label per column.
    pub(crate) fn from_binary_rows(labels: Vec<String>, encoding: Encoding, cells: Vec<Option<i32>>) -> Self {
        let columns = labels
            .into_iter()
            .map(|l| Column::new(l, ColumnRole::Element, encoding.alphabet().to_vec()))
            .collect();
        Self::new(columns, cells).expect("sampler output is well-formed")
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, c: usize) -> &Column {
        &self.columns[c]
    }

    pub fn labels(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.label.as_str()).collect()
    }

    pub fn column_index(&self, label: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.label == label)
    }

    pub fn set_role(&mut self, c: usize, role: ColumnRole) {
        self.columns[c].role = role;
    }

    pub fn set_label(&mut self, c: usize, label: impl Into<String>) {
        self.columns[c].label = label.into();
    }

    pub fn indices_with_role(&self, role: ColumnRole) -> Vec<usize> {
        (0..self.n_cols()).filter(|&c| self.columns[c].role == role).collect()
    }

    pub fn get(&self, r: usize, c: usize) -> Option<i32> {
        self.cells[r * self.n_cols() + c]
    }

    pub fn row(&self, r: usize) -> &[Option<i32>] {
        let k = self.n_cols();
        &self.cells[r * k..(r + 1) * k]
    }

    pub fn column_values(&self, c: usize) -> impl Iterator<Item = Option<i32>> + '_ {
        (0..self.n_rows).map(move |r| self.get(r, c))
    }

    /// Distinct codes actually present in a column.
    pub fn observed_categories(&self, c: usize) -> Vec<i32> {
        let mut seen: Vec<i32> = self.column_values(c).flatten().collect();
        seen.sort_unstable();
        seen.dedup();
        seen
    }

    /// Rows with no missing cell among `cols`.
    pub fn complete_rows(&self, cols: &[usize]) -> Vec<usize> {
        (0..self.n_rows)
            .filter(|&r| cols.iter().all(|&c| self.get(r, c).is_some()))
            .collect()
    }

    /// Header of labels, one respondent per line, missing cells empty.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        w.write_record(self.columns.iter().map(|c| c.label.as_str()))?;
        for r in 0..self.n_rows {
            w.write_record(self.row(r).iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the CSV form; categories are the codes observed per column and
    /// every column is tagged as an element.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let labels: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let k = labels.len();
        let mut cells = Vec::new();
        for (r, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() != k {
                return Err(Error::schema(format!("row {}", r + 1), format!("expected {k} fields")));
            }
            for (c, field) in rec.iter().enumerate() {
                let field = field.trim();
                if field.is_empty() {
                    cells.push(None);
                } else {
                    let v = field.parse::<i32>().map_err(|_| {
                        Error::schema(
                            format!("row {} column '{}'", r + 1, labels[c]),
                            format!("'{field}' is not an integer"),
                        )
                    })?;
                    cells.push(Some(v));
                }
            }
        }
        let mut cats = vec![Vec::new(); k];
        for (idx, v) in cells.iter().enumerate() {
            if let Some(v) = v {
                cats[idx % k].push(*v);
            }
        }
        let columns = labels
            .into_iter()
            .zip(cats)
            .map(|(l, c)| Column::new(l, ColumnRole::Element, c))
            .collect();
        Self::new(columns, cells)
    }
}

/// Maps binary columns between -1/+1 and 0/1 coding, column by column.
pub fn recode(sample: &SampleMatrix, target: Encoding) -> Result<SampleMatrix> {
    let k = sample.n_cols();
    let mut maps = Vec::with_capacity(k);
    for col in sample.columns() {
        let source = if col.categories == Encoding::PlusMinusOne.alphabet() {
            Encoding::PlusMinusOne
        } else if col.categories == Encoding::ZeroOne.alphabet() {
            Encoding::ZeroOne
        } else {
            return Err(Error::contract(format!(
                "column '{}' is not binary-coded: {:?}",
                col.label, col.categories
            )));
        };
        maps.push(source);
    }
    let cells = sample
        .cells
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            v.map(|x| match (maps[idx % k], target) {
                (Encoding::PlusMinusOne, Encoding::ZeroOne) => (x + 1) / 2,
                (Encoding::ZeroOne, Encoding::PlusMinusOne) => 2 * x - 1,
                _ => x,
            })
        })
        .collect();
    let columns = sample
        .columns
        .iter()
        .map(|c| Column {
            categories: target.alphabet().to_vec(),
            ..c.clone()
        })
        .collect();
    SampleMatrix::new(columns, cells)
}
