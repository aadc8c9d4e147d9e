use serde::Serialize;

use super::Artifact;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Long-format CSV accumulated in memory.
pub(crate) struct CsvTable {
    writer: csv::Writer<Vec<u8>>,
}

impl CsvTable {
    pub(crate) fn new(header: &[&str]) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).map_err(csv_error)?;
        Ok(Self { writer })
    }

    pub(crate) fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(csv_error)
    }

    pub(crate) fn finish(self, file_name: &str) -> Result<Artifact> {
        let bytes = self.writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        let contents = String::from_utf8(bytes).expect("csv fields are UTF-8");
        Ok(Artifact::new(file_name, contents))
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Shortest round-trip decimal form.
pub(crate) fn num(x: f64) -> String {
    format!("{x}")
}

#[derive(Serialize)]
struct Bundle<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(flatten)]
    data: &'a T,
}

pub(crate) fn json_artifact<T: Serialize>(file_name: &str, command: &str, data: &T) -> Result<Artifact> {
    let bundle = Bundle { schema_version: SCHEMA_VERSION, command, data };
    let mut text = serde_json::to_string_pretty(&bundle)?;
    text.push('\n');
    Ok(Artifact::new(file_name, text))
}
