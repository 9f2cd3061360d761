use std::path::Path;

use serde::Serialize;

use crate::stats::round3;
use crate::{Error, Result};

/// Largest accepted gap between a stored Ave and the recomputed rounded mean.
pub const AVE_TOLERANCE: f64 = 0.0005;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeaderboardRow {
    pub entry: String,
    pub eval_set: String,
    pub haspi_like: f64,
    pub hasqi_like: f64,
    pub ave: f64,
    /// Free-form tag; `baseline` rows are left out of team comparisons.
    pub role: Option<String>,
}

impl LeaderboardRow {
    pub fn is_baseline(&self) -> bool {
        self.role.as_deref() == Some("baseline")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowCheck {
    /// Mean rounded to 3 decimals.
    pub recomputed: f64,
    /// Stored Ave minus the exact mean.
    pub difference: f64,
    pub flagged: bool,
}

struct Columns {
    entry: usize,
    eval_set: Option<usize>,
    haspi: usize,
    hasqi: usize,
    ave: usize,
    role: Option<usize>,
}

fn csv_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn columns(header: &csv::StringRecord, path: &Path) -> Result<Columns> {
    let find = |names: &[&str]| header.iter().position(|h| names.contains(&h.trim()));
    let need = |names: &[&str]| {
        find(names)
            .ok_or_else(|| csv_err(path, 1, format!("missing column {}", names.join(" or "))))
    };
    Ok(Columns {
        entry: need(&["entry", "scene"])?,
        eval_set: find(&["eval_set"]),
        haspi: need(&["haspi_like", "haspi"])?,
        hasqi: need(&["hasqi_like", "hasqi"])?,
        ave: need(&["ave"])?,
        role: find(&["role"]),
    })
}

/// Parses a score table. Rows without an `eval_set` column take
/// `default_set`; `path` only labels errors.
pub fn parse_leaderboard(
    text: &str,
    path: &Path,
    default_set: &str,
) -> Result<Vec<LeaderboardRow>> {
    if text.trim().is_empty() {
        return Err(csv_err(path, 0, "empty file"));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| csv_err(path, 1, e.to_string()))?
        .clone();
    let cols = columns(&header, path)?;
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            csv_err(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| rec.get(i).unwrap_or("").trim();
        let number = |i: usize, name: &str| -> Result<f64> {
            let v: f64 = field(i).parse().map_err(|_| {
                csv_err(
                    path,
                    line,
                    format!("{name}: '{}' is not a number", field(i)),
                )
            })?;
            if !(0.0..=1.0).contains(&v) {
                return Err(csv_err(path, line, format!("{name}: {v} outside [0, 1]")));
            }
            Ok(v)
        };
        let entry = field(cols.entry).to_string();
        if entry.is_empty() {
            return Err(csv_err(path, line, "empty entry id"));
        }
        rows.push(LeaderboardRow {
            entry,
            eval_set: cols
                .eval_set
                .map(|i| field(i).to_string())
                .filter(|s| !s.is_empty())
                .unwrap_or_else(|| default_set.to_string()),
            haspi_like: number(cols.haspi, "haspi")?,
            hasqi_like: number(cols.hasqi, "hasqi")?,
            ave: number(cols.ave, "ave")?,
            role: cols
                .role
                .map(|i| field(i).to_string())
                .filter(|s| !s.is_empty()),
        });
    }
    if rows.is_empty() {
        return Err(csv_err(path, 1, "no data rows"));
    }
    Ok(rows)
}

/// Reads a score table; the eval set defaults to the file stem.
pub fn read_leaderboard(path: impl AsRef<Path>) -> Result<Vec<LeaderboardRow>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e).at_path(path))?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("scores");
    parse_leaderboard(&text, path, stem)
}

/// Recomputes each Ave as the mean of the two scores. A row is flagged when
/// its stored Ave is further than [`AVE_TOLERANCE`] from the exact mean, so
/// either rounding direction of a half-way value is accepted.
pub fn verify_rows(rows: &[LeaderboardRow]) -> Vec<RowCheck> {
    rows.iter()
        .map(|r| {
            let mean = (r.haspi_like + r.hasqi_like) / 2.0;
            let difference = r.ave - mean;
            let recomputed = round3(mean);
            RowCheck {
                recomputed,
                difference,
                flagged: difference.abs() > AVE_TOLERANCE + 1e-9,
            }
        })
        .collect()
}

/// Team of an entry id: the id without trailing lowercase variant letters
/// (`E28d` belongs to `E28`).
pub fn team_of(entry: &str) -> &str {
    entry.trim_end_matches(|c: char| c.is_ascii_lowercase())
}

/// Highest-Ave entry of every team within an eval set, baselines excluded,
/// in order of each team's first appearance. Ties keep the earlier row.
pub fn best_per_team<'a>(rows: &'a [LeaderboardRow], eval_set: &str) -> Vec<&'a LeaderboardRow> {
    let mut best: Vec<&LeaderboardRow> = Vec::new();
    for r in rows
        .iter()
        .filter(|r| r.eval_set == eval_set && !r.is_baseline())
    {
        match best
            .iter_mut()
            .find(|b| team_of(&b.entry) == team_of(&r.entry))
        {
            Some(b) if r.ave > b.ave => *b = r,
            Some(_) => {}
            None => best.push(r),
        }
    }
    best
}

/// Writes rows with their Ave recomputed, in the input column layout.
pub fn write_leaderboard(path: impl AsRef<Path>, rows: &[LeaderboardRow]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.into()).at_path(path))?;
    let io = |e: csv::Error| Error::Io(e.into()).at_path(path);
    w.write_record(["entry", "eval_set", "haspi", "hasqi", "ave", "role"])
        .map_err(io)?;
    for (r, c) in rows.iter().zip(verify_rows(rows)) {
        w.write_record([
            r.entry.clone(),
            r.eval_set.clone(),
            format!("{:.3}", r.haspi_like),
            format!("{:.3}", r.hasqi_like),
            format!("{:.3}", c.recomputed),
            r.role.clone().unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e).at_path(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "entry,eval_set,haspi,hasqi,ave,role\n\
        A1,Eval1,0.266,0.128,0.197,baseline\n\
        A2,Eval1,0.5,0.3,0.4,\n\
        A2x,Eval1,0.6,0.3,0.45,\n\
        A3,Eval1,0.2,0.1,0.2,\n";

    fn rows() -> Vec<LeaderboardRow> {
        parse_leaderboard(SAMPLE, Path::new("t.csv"), "x").unwrap()
    }

    #[test]
    fn parses_and_flags() {
        let r = rows();
        assert_eq!(r.len(), 4);
        assert!(r[0].is_baseline());
        let checks = verify_rows(&r);
        assert_eq!(checks[0].recomputed, 0.197);
        assert_eq!(checks.iter().filter(|c| c.flagged).count(), 1);
        assert!(checks[3].flagged);
    }

    #[test]
    fn half_unit_gap_is_tolerated() {
        let text = "scene,haspi_like,hasqi_like,ave\na,0.729,0.316,0.522\n";
        let r = parse_leaderboard(text, Path::new("t.csv"), "set").unwrap();
        assert_eq!(r[0].eval_set, "set");
        assert!(!verify_rows(&r)[0].flagged);
    }

    #[test]
    fn teams() {
        assert_eq!(team_of("E28d"), "E28");
        assert_eq!(team_of("E29r"), "E29");
        assert_eq!(team_of("E02"), "E02");
        let r = rows();
        let best: Vec<&str> = best_per_team(&r, "Eval1")
            .iter()
            .map(|r| r.entry.as_str())
            .collect();
        assert_eq!(best, ["A2x", "A3"]);
    }

    #[test]
    fn malformed_input_reports_the_line() {
        let p = Path::new("bad.csv");
        let err = parse_leaderboard(
            "entry,haspi,hasqi,ave\na,0.1,0.2,0.15\nb,zero,0.2,0.1\n",
            p,
            "s",
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("bad.csv") && err.contains("line 3"), "{err}");
        let err = parse_leaderboard("entry,haspi,hasqi,ave\na,0.1,0.2\n", p, "s")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 2"), "{err}");
        let err = parse_leaderboard("", p, "s").unwrap_err().to_string();
        assert!(err.contains("bad.csv") && err.contains("empty"), "{err}");
        assert!(parse_leaderboard("entry,haspi,ave\n", p, "s").is_err());
    }

    #[test]
    fn written_output_verifies_clean() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_leaderboard(&p, &rows()).unwrap();
        let again = read_leaderboard(&p).unwrap();
        assert!(verify_rows(&again).iter().all(|c| !c.flagged));
        assert_eq!(again[0].role.as_deref(), Some("baseline"));
    }
}
