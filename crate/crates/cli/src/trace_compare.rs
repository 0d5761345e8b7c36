//! Compare two trace CSVs step by step within an energy tolerance.

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub step: usize,
    pub energy: f64,
    pub success_prob: f64,
    pub norm: f64,
    pub gamma: f64,
}

pub fn parse_trace_csv(path: &str, text: &str) -> Result<Vec<TraceRow>, CliError> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if idx == 0 {
            if line != crate::output::TRACE_HEADER {
                return Err(CliError::Config {
                    path: path.to_string(),
                    line: Some(1),
                    message: format!("unexpected header '{line}'"),
                });
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(CliError::Config {
                path: path.to_string(),
                line: Some(idx + 1),
                message: format!("expected 5 columns, found {}", fields.len()),
            });
        }
        let bad = |what: &str| CliError::Config {
            path: path.to_string(),
            line: Some(idx + 1),
            message: format!("bad {what}"),
        };
        rows.push(TraceRow {
            step: fields[0].parse().map_err(|_| bad("step"))?,
            energy: fields[1].parse().map_err(|_| bad("energy"))?,
            success_prob: fields[2].parse().map_err(|_| bad("success probability"))?,
            norm: fields[3].parse().map_err(|_| bad("norm"))?,
            gamma: fields[4].parse().map_err(|_| bad("gamma"))?,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct CompareOutcome {
    pub rows_compared: usize,
    pub worst_gap: f64,
    pub worst_step: usize,
    pub within_tolerance: bool,
    pub length_mismatch: Option<(usize, usize)>,
}

pub fn compare(a: &[TraceRow], b: &[TraceRow], tol_mev: f64) -> CompareOutcome {
    let n = a.len().min(b.len());
    let mut worst_gap = 0.0;
    let mut worst_step = 0;
    for i in 0..n {
        let gap = (a[i].energy - b[i].energy).abs();
        if gap > worst_gap {
            worst_gap = gap;
            worst_step = a[i].step;
        }
    }
    let length_mismatch = if a.len() != b.len() { Some((a.len(), b.len())) } else { None };
    CompareOutcome {
        rows_compared: n,
        worst_gap,
        worst_step,
        within_tolerance: worst_gap <= tol_mev && length_mismatch.is_none(),
        length_mismatch,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSV: &str = "step,energy_MeV,success_prob,norm,gamma\n0,12.25,1,1,0.02\n1,5.5,0.3,0.9,0.02\n";

    #[test]
    fn round_trip_and_compare() {
        let rows = parse_trace_csv("a.csv", CSV).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].energy, 5.5);
        let out = compare(&rows, &rows, 1e-12);
        assert!(out.within_tolerance);
        let mut other = rows.clone();
        other[1].energy += 0.5;
        let out = compare(&rows, &other, 0.1);
        assert!(!out.within_tolerance);
        assert_eq!(out.worst_step, 1);
        assert!((out.worst_gap - 0.5).abs() < 1e-12);
    }

    #[test]
    fn marker_lines_are_skipped() {
        let text = format!("{CSV}# incomplete\n");
        let rows = parse_trace_csv("a.csv", &text).unwrap();
        assert_eq!(rows.len(), 2);
    }

    #[test]
    fn bad_header_rejected() {
        assert!(parse_trace_csv("a.csv", "x,y\n").is_err());
    }
}
