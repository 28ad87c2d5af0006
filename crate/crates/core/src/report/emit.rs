//! Report rendering: aligned text, CSV and versioned JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::racs::Regime;

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: &str = "player,method,value,stderr,rel_error_pct";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Domain(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub player: String,
    pub method: String,
    pub value: f64,
    pub stderr: Option<f64>,
    pub rel_error_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlayerInfo {
    pub id: String,
    /// Exact probability as `a/b`.
    pub p: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vulns: Option<u64>,
}

/// Cells for text mode.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TextTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub t_e: f64,
    pub regime: Option<Regime>,
    pub rows: Vec<Row>,
    pub players: Vec<PlayerInfo>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<serde_json::Value>,
    #[serde(skip)]
    pub title: Vec<String>,
    #[serde(skip)]
    pub table: TextTable,
    /// Text-mode lines after the table (summaries, timings, footnotes).
    #[serde(skip)]
    pub footer: Vec<String>,
}

impl Report {
    pub fn new(t_e: f64, regime: Option<Regime>, players: Vec<PlayerInfo>) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            t_e,
            regime,
            rows: Vec::new(),
            players,
            warnings: Vec::new(),
            extra: None,
            title: Vec::new(),
            table: TextTable::default(),
            footer: Vec::new(),
        }
    }
}

/// Six significant digits; scientific outside `[1e-4, 1e6)`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn pct(x: Option<f64>) -> String {
    x.map(|v| format!("{:+.2}%", v))
        .unwrap_or_else(|| "-".into())
}

fn render_table(report: &Report, color: bool) -> String {
    let t = &report.table;
    let cols = t.headers.len();
    let mut widths: Vec<usize> = t.headers.iter().map(|h| h.chars().count()).collect();
    for row in &t.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for line in &report.title {
        out.push_str(line);
        out.push('\n');
    }
    let header: Vec<String> = (0..cols)
        .map(|c| format!("{:<w$}", t.headers[c], w = widths[c]))
        .collect();
    let header = header.join("  ");
    if color {
        let _ = writeln!(out, "\x1b[1m{}\x1b[0m", header.trim_end());
    } else {
        let _ = writeln!(out, "{}", header.trim_end());
    }
    let rule: usize = widths.iter().sum::<usize>() + 2 * cols.saturating_sub(1);
    let _ = writeln!(out, "{}", "-".repeat(rule));
    for row in &t.rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                if c == 0 {
                    format!("{:<w$}", cell, w = widths[c])
                } else {
                    format!("{:>w$}", cell, w = widths[c])
                }
            })
            .collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    for line in &report.footer {
        out.push_str(line);
        out.push('\n');
    }
    for w in &report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_csv(report: &Report) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_field(&r.player),
            csv_field(&r.method),
            r.value,
            opt(r.stderr),
            opt(r.rel_error_pct)
        );
    }
    out
}

pub fn emit(report: &Report, format: Format, color: bool) -> Result<String> {
    Ok(match format {
        Format::Table => render_table(report, color),
        Format::Csv => render_csv(report),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s
        }
    })
}

/// Whether text output should use ANSI styling.
pub fn color_enabled() -> bool {
    use std::io::IsTerminal;
    std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal()
}
