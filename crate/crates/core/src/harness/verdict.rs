use std::fmt;

use serde::{Deserialize, Serialize};

use crate::harness::registry::TheoremId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Inconclusive => "inconclusive",
            Status::Fail => "fail",
        })
    }
}

impl Status {
    /// Worst of a set: any fail, else any inconclusive, else pass.
    pub fn aggregate(it: impl IntoIterator<Item = Status>) -> Status {
        it.into_iter().max().unwrap_or(Status::Pass)
    }
}

/// One check: what was observed against which threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub check: String,
    pub observed: f64,
    pub threshold: f64,
    pub status: Status,
}

/// Numeric table written as CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: vec![] }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub id: TheoremId,
    pub status: Status,
    pub evidence: Vec<Evidence>,
    pub notes: Vec<String>,
    pub runtime_ms: u128,
    pub config_hash: String,
    /// `(param, value)` tables backing the evidence.
    #[serde(skip)]
    pub tables: Vec<Table>,
    /// `(r, partial integral)` scans.
    #[serde(skip)]
    pub scans: Vec<Table>,
}
