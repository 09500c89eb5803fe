//! Row output in CSV or JSON lines with a fixed column order.

use std::io::Write;

use serde_json::{Map, Value};

use crate::config::Format;

pub struct Table<W: Write> {
    out: W,
    format: Format,
    columns: &'static [&'static str],
}

impl<W: Write> Table<W> {
    pub fn new(
        mut out: W,
        format: Format,
        columns: &'static [&'static str],
    ) -> std::io::Result<Self> {
        if format == Format::Csv {
            writeln!(out, "{}", columns.join(","))?;
        }
        Ok(Self {
            out,
            format,
            columns,
        })
    }

    pub fn row(&mut self, values: Vec<Value>) -> std::io::Result<()> {
        debug_assert_eq!(values.len(), self.columns.len());
        match self.format {
            Format::Csv => {
                let cells: Vec<String> = values.iter().map(csv_cell).collect();
                writeln!(self.out, "{}", cells.join(","))
            }
            Format::JsonLines => {
                let map: Map<String, Value> = self
                    .columns
                    .iter()
                    .map(|c| c.to_string())
                    .zip(values)
                    .collect();
                writeln!(self.out, "{}", Value::Object(map))
            }
        }
    }

    pub fn finish(mut self) -> std::io::Result<()> {
        self.out.flush()
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        // arrays become space-separated cells
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}
