use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Tsv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Tsv => "tsv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    /// A ratio with a zero denominator.
    Undefined,
}

impl Cell {
    pub fn ratio(v: Option<f64>) -> Self {
        v.map_or(Cell::Undefined, Cell::Float)
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Undefined => Value::Null,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v:.6}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Undefined => f.write_str("undefined"),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// A report table rendered as CSV, TSV or JSON.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Delimited text starts with a `# config_hash=` comment line; JSON
    /// carries the hash as a field.
    pub fn render(&self, format: Format, config_hash: &str) -> String {
        match format {
            Format::Csv | Format::Tsv => {
                let delimiter = if format == Format::Csv { b',' } else { b'\t' };
                let mut w = csv::WriterBuilder::new()
                    .delimiter(delimiter)
                    .from_writer(Vec::new());
                w.write_record(&self.columns).expect("in-memory write");
                for row in &self.rows {
                    w.write_record(row.iter().map(|c| c.to_string()))
                        .expect("in-memory write");
                }
                let body = String::from_utf8(w.into_inner().expect("in-memory write"))
                    .expect("utf-8 cells");
                format!("# config_hash={config_hash}\n{body}")
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.to_json()));
                        Value::Object(obj.collect())
                    })
                    .collect();
                let doc = json!({ "config_hash": config_hash, "rows": rows });
                serde_json::to_string_pretty(&doc).expect("json rendering") + "\n"
            }
        }
    }
}

/// Prefixes a tab-separated interchange file with the config hash.
pub fn stamp_tsv(config_hash: &str, body: &str) -> String {
    format!("# config_hash={config_hash}\n{body}")
}

/// Pretty JSON of `value` with a `config_hash` field added.
pub fn stamp_json<T: Serialize>(config_hash: &str, value: &T) -> Result<String> {
    let mut doc = serde_json::Map::new();
    doc.insert("config_hash".into(), json!(config_hash));
    match serde_json::to_value(value)? {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("value".into(), other);
        }
    }
    Ok(serde_json::to_string_pretty(&Value::Object(doc))? + "\n")
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub config_hash: String,
    pub seed: u64,
    /// File name to SHA-256 of its contents.
    pub outputs: BTreeMap<String, String>,
}

/// `manifest.json`: the outputs of every command run into a directory.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub commands: BTreeMap<String, ManifestEntry>,
}

/// Collects the files one command writes and records them in the manifest.
pub struct OutputDir {
    dir: PathBuf,
    command: &'static str,
    entry: ManifestEntry,
}

impl OutputDir {
    pub fn create(dir: &Path, command: &'static str, config_hash: &str, seed: u64) -> Result<Self> {
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            command,
            entry: ManifestEntry {
                config_hash: config_hash.to_string(),
                seed,
                outputs: BTreeMap::new(),
            },
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.path(name);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        self.entry
            .outputs
            .insert(name.to_string(), sha256_hex(contents.as_bytes()));
        log::info!("wrote {}", path.display());
        Ok(path)
    }

    pub fn write_table(&mut self, stem: &str, table: &Table, format: Format) -> Result<PathBuf> {
        let name = format!("{stem}.{}", format.extension());
        self.write(&name, &table.render(format, &self.entry.config_hash))
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let text = stamp_json(&self.entry.config_hash, value)?;
        self.write(name, &text)
    }

    /// Merges this command's entry into `manifest.json`.
    pub fn finish(self) -> Result<()> {
        let path = self.dir.join("manifest.json");
        let mut manifest: Manifest = match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text)
                .with_context(|| format!("malformed manifest {}", path.display()))?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Manifest::default(),
            Err(e) => return Err(e).with_context(|| format!("cannot read {}", path.display())),
        };
        manifest
            .commands
            .insert(self.command.to_string(), self.entry);
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Table {
        let mut t = Table::new(&["name", "n", "ratio"]);
        t.push(vec!["a,b".into(), 3usize.into(), Cell::ratio(Some(0.5))]);
        t.push(vec!["c".into(), 0usize.into(), Cell::ratio(None)]);
        t
    }

    #[test]
    fn csv_quotes_and_flags_undefined() {
        let text = table().render(Format::Csv, "h");
        assert_eq!(
            text,
            "# config_hash=h\nname,n,ratio\n\"a,b\",3,0.500000\nc,0,undefined\n"
        );
    }

    #[test]
    fn tsv_uses_tabs() {
        let text = table().render(Format::Tsv, "h");
        assert!(text.contains("name\tn\tratio\na,b\t3\t0.500000\n"));
    }

    #[test]
    fn json_rows_are_objects() {
        let v: Value = serde_json::from_str(&table().render(Format::Json, "h")).unwrap();
        assert_eq!(v["config_hash"], "h");
        assert_eq!(v["rows"][0]["n"], 3);
        assert!(v["rows"][1]["ratio"].is_null());
    }

    #[test]
    fn manifest_merges_commands() {
        let dir = tempfile::tempdir().unwrap();
        for cmd in ["label", "train"] {
            let mut out = OutputDir::create(dir.path(), cmd, "h", 1).unwrap();
            out.write(&format!("{cmd}.txt"), cmd).unwrap();
            out.finish().unwrap();
        }
        let m: Manifest =
            serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
                .unwrap();
        assert_eq!(m.commands.len(), 2);
        assert_eq!(
            m.commands["label"].outputs["label.txt"],
            sha256_hex(b"label")
        );
    }
}
