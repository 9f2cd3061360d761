use std::fmt::Write;
use std::path::Path;

use clarity_core::harness::{
    best_per_team, parse_leaderboard, read_leaderboard, team_of, verify_rows, write_leaderboard,
    LeaderboardRow,
};
use clarity_core::stats::pearson;
use clarity_core::Result;

pub const BUNDLED: &str = "bundled";
const BUNDLED_TABLE: &str = include_str!("../data/leaderboard.csv");

fn correlation_line(label: &str, rows: &[&LeaderboardRow]) -> String {
    let names: Vec<&str> = rows.iter().map(|r| r.entry.as_str()).collect();
    let h: Vec<f64> = rows.iter().map(|r| r.haspi_like).collect();
    let q: Vec<f64> = rows.iter().map(|r| r.hasqi_like).collect();
    match pearson(&h, &q) {
        Ok(r) => format!(
            "{label}: r = {r:.4} over {} entries ({})\n",
            rows.len(),
            names.join(", ")
        ),
        Err(e) => format!("{label}: not available ({e})\n"),
    }
}

/// Builds the report text; writes the checked rows to `out` when given.
pub fn run(scores: &[impl AsRef<Path>], table: Option<&str>, out: Option<&Path>) -> Result<String> {
    let mut rows = Vec::new();
    match table {
        Some(BUNDLED) => rows.extend(parse_leaderboard(
            BUNDLED_TABLE,
            Path::new("leaderboard.csv"),
            "leaderboard",
        )?),
        Some(path) => rows.extend(read_leaderboard(path)?),
        None => {}
    }
    for s in scores {
        rows.extend(read_leaderboard(s)?);
    }
    let checks = verify_rows(&rows);

    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<10} {:<10} {:>7} {:>7} {:>7} {:>10} {:>8}  status",
        "entry", "eval_set", "haspi", "hasqi", "ave", "recomputed", "diff"
    );
    for (r, c) in rows.iter().zip(&checks) {
        let _ = writeln!(
            text,
            "{:<10} {:<10} {:>7.3} {:>7.3} {:>7.3} {:>10.3} {:>+8.4}  {}",
            r.entry,
            r.eval_set,
            r.haspi_like,
            r.hasqi_like,
            r.ave,
            c.recomputed,
            c.difference,
            if c.flagged { "FLAG" } else { "ok" }
        );
    }
    let flagged = checks.iter().filter(|c| c.flagged).count();
    let _ = writeln!(text, "rows: {}  flagged: {flagged}", rows.len());

    let mut sets: Vec<&str> = Vec::new();
    for r in &rows {
        if !sets.contains(&r.eval_set.as_str()) {
            sets.push(&r.eval_set);
        }
    }
    for set in sets {
        let best = best_per_team(&rows, set);
        if best.len() < 3 {
            continue;
        }
        text.push_str(&correlation_line(
            &format!("best-entry correlation [{set}]"),
            &best,
        ));
        let primary: Vec<&LeaderboardRow> = rows
            .iter()
            .filter(|r| r.eval_set == set && !r.is_baseline() && team_of(&r.entry) == r.entry)
            .collect();
        let differs = primary.len() != best.len()
            || primary.iter().zip(&best).any(|(a, b)| a.entry != b.entry);
        if primary.len() >= 3 && differs {
            text.push_str(&correlation_line(
                &format!("primary-entry correlation [{set}]"),
                &primary,
            ));
        }
    }
    if let Some(out) = out {
        write_leaderboard(out, &rows)?;
    }
    Ok(text)
}
