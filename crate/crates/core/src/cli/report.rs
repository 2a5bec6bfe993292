use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    ResidualNonzero,
    Experimental,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::ResidualNonzero => "residual_nonzero",
            Status::Experimental => "experimental",
            Status::Error => "error",
        }
    }

    pub fn fails(self) -> bool {
        matches!(self, Status::ResidualNonzero | Status::Error)
    }
}

/// One report line. Rationals inside `summary` and `details` are always
/// rendered as `p/q` strings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub id: String,
    pub status: Status,
    pub residual_order: Option<u32>,
    pub seed: Option<u64>,
    pub ms: u64,
    pub summary: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
}

impl Entry {
    pub fn new(id: impl Into<String>, status: Status, summary: impl Into<String>) -> Self {
        Entry { id: id.into(), status, residual_order: None, seed: None, ms: 0, summary: summary.into(), details: Vec::new() }
    }

    pub fn order(mut self, k: u32) -> Self {
        self.residual_order = Some(k);
        self
    }

    pub fn seed(mut self, s: u64) -> Self {
        self.seed = Some(s);
        self
    }

    pub fn details(mut self, d: Vec<String>) -> Self {
        self.details = d;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub version: u32,
    pub tasks: Vec<Entry>,
}

impl Default for Report {
    fn default() -> Self {
        Report { version: 1, tasks: Vec::new() }
    }
}

impl Report {
    pub fn success(&self) -> bool {
        !self.tasks.iter().any(|e| e.status.fails())
    }

    pub fn exit_code(&self) -> i32 {
        if self.success() {
            0
        } else {
            1
        }
    }

    /// Copy with all timing fields zeroed.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for e in &mut r.tasks {
            e.ms = 0;
        }
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(r).expect("report serializes"),
        Format::Text => emit_text(r),
    }
}

fn emit_text(r: &Report) -> String {
    let head = ["id", "status", "order", "seed", "ms"];
    let rows: Vec<[String; 5]> = r
        .tasks
        .iter()
        .map(|e| {
            [
                e.id.clone(),
                e.status.as_str().to_string(),
                e.residual_order.map_or("-".into(), |k| k.to_string()),
                e.seed.map_or("-".into(), |s| s.to_string()),
                e.ms.to_string(),
            ]
        })
        .collect();
    let mut width = head.map(str::len);
    for row in &rows {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut s = String::new();
    let line = |cells: [&str; 5]| {
        let mut l = String::new();
        for (i, c) in cells.iter().enumerate() {
            let _ = write!(l, "{:<w$}  ", c, w = width[i]);
        }
        l
    };
    let _ = writeln!(s, "{}summary", line(head));
    for (row, e) in rows.iter().zip(&r.tasks) {
        let cells = [row[0].as_str(), row[1].as_str(), row[2].as_str(), row[3].as_str(), row[4].as_str()];
        let _ = writeln!(s, "{}{}", line(cells), e.summary);
        for d in &e.details {
            let _ = writeln!(s, "    {d}");
        }
    }
    let failed = r.tasks.iter().filter(|e| e.status.fails()).count();
    let _ = writeln!(s, "{} task(s), {} failing", r.tasks.len(), failed);
    s
}
