use std::fmt::Write as _;
use std::fs;

use serde::Serialize;

use crate::{Format, GlobalArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Inconclusive,
    Violation,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violation => 2,
            Status::Inconclusive => 3,
        }
    }

    /// The worse of two statuses; violations dominate.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Violation, _) | (_, Status::Violation) => Status::Violation,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Ok,
        }
    }
}

#[derive(Serialize)]
pub struct ReportDocument<P: Serialize, R: Serialize> {
    pub command: String,
    pub parameters: P,
    pub status: Status,
    pub results: R,
}

/// Rows of a plain table; the first row is the header.
#[derive(Default)]
pub struct Table {
    pub title: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { rows: vec![header.iter().map(|s| s.to_string()).collect()], ..Default::default() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn render(&self, command: &str, status: Status) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{command}: {}", serde_json::to_value(status).expect("status").as_str().unwrap_or(""));
        for line in &self.title {
            let _ = writeln!(out, "{line}");
        }
        let cols = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..cols)
            .map(|c| self.rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
            .collect();
        if self.rows.len() > 1 {
            for row in &self.rows {
                let cells: Vec<String> = row
                    .iter()
                    .enumerate()
                    .map(|(c, s)| if c == 0 { format!("{s:<w$}", w = widths[c]) } else { format!("{s:>w$}", w = widths[c]) })
                    .collect();
                let _ = writeln!(out, "{}", cells.join("  ").trim_end());
            }
        }
        for note in &self.notes {
            let _ = writeln!(out, "{note}");
        }
        out
    }
}

pub fn emit<P: Serialize, R: Serialize>(
    args: &GlobalArgs,
    doc: &ReportDocument<P, R>,
    table: impl FnOnce() -> Table,
) -> std::io::Result<Status> {
    let text = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("report documents serialize");
            s.push('\n');
            s
        }
        Format::Table => table().render(&doc.command, doc.status),
    };
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(doc.status)
}

pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}
