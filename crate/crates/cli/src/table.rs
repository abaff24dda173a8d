//! In-memory CSV tables with round-trip float formatting.

use crate::error::Result;

/// A named CSV file held in memory until the run completes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub bytes: Vec<u8>,
}

pub struct TableWriter {
    name: String,
    inner: csv::Writer<Vec<u8>>,
}

impl TableWriter {
    pub fn new(name: &str, header: &[&str]) -> Result<Self> {
        let mut inner = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        inner.write_record(header)?;
        Ok(TableWriter { name: name.to_string(), inner })
    }

    pub fn row(&mut self, fields: &[Field<'_>]) -> Result<()> {
        self.inner.write_record(fields.iter().map(Field::render))?;
        Ok(())
    }

    pub fn finish(self) -> Result<Table> {
        let bytes = self.inner.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(Table { name: self.name, bytes })
    }
}

pub enum Field<'a> {
    Text(&'a str),
    Int(i64),
    Float(f64),
}

impl Field<'_> {
    fn render(&self) -> String {
        match self {
            Field::Text(s) => s.to_string(),
            Field::Int(i) => i.to_string(),
            // shortest string that parses back to the same f64, exponent form when very small or large
            Field::Float(v) => format!("{v:?}"),
        }
    }
}
