//! Self-describing tables: a `#` metadata block, a header line and rows.

use serde::Serialize;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = concat!("otto ", env!("CARGO_PKG_VERSION"));

/// One output table in deterministic row order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Flag(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Num(v) => write!(f, "{v}"),
            Cell::Flag(b) => write!(f, "{b}"),
        }
    }
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn header(&self) -> String {
        self.columns.join(",")
    }
}

/// `# key=value` metadata lines shared by CSV and text outputs.
pub fn metadata(cfg: &RunConfig) -> String {
    let mut out = format!(
        "# schema_version={SCHEMA_VERSION}\n# tool_version={TOOL_VERSION}\n# config_sha256={}\n",
        cfg.sha256()
    );
    for line in cfg.canonical().lines() {
        out.push_str("# config: ");
        out.push_str(line);
        out.push('\n');
    }
    out
}

pub fn csv(cfg: &RunConfig, table: &Table) -> String {
    let mut out = metadata(cfg);
    out.push_str(&table.header());
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonDoc<'a, T: Serialize> {
    schema_version: u32,
    tool_version: &'static str,
    config_sha256: String,
    config: std::collections::BTreeMap<&'a str, &'a str>,
    #[serde(flatten)]
    body: &'a T,
}

/// JSON mirror: the same provenance fields next to the flattened `body`.
pub fn json<T: Serialize>(cfg: &RunConfig, body: &T) -> String {
    let mut config: std::collections::BTreeMap<&str, &str> = cfg.entries().collect();
    config.insert("command", cfg.command().as_str());
    let doc = JsonDoc {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION,
        config_sha256: cfg.sha256(),
        config,
        body,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

/// Parses a CSV written by [`csv`]: returns metadata `key=value` pairs, the
/// header columns and the data rows as strings.
pub fn parse_csv(text: &str) -> (Vec<(String, String)>, Vec<String>, Vec<Vec<String>>) {
    let mut meta = Vec::new();
    let mut lines = text.lines().peekable();
    while let Some(line) = lines.next_if(|l| l.starts_with('#')) {
        let body = line.trim_start_matches('#').trim();
        let body = body.strip_prefix("config: ").unwrap_or(body);
        if let Some((k, v)) = body.split_once('=') {
            meta.push((k.to_string(), v.to_string()));
        }
    }
    let header = lines
        .next()
        .map(|h| h.split(',').map(str::to_string).collect())
        .unwrap_or_default();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (meta, header, rows)
}
