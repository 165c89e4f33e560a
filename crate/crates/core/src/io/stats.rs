//! Descriptive statistics in the layout of an SPSS "Statistics" table.

use std::fmt::Write as _;

use thiserror::Error;

/// Sample statistics; `stddev` uses the `n - 1` divisor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatsSummary {
    pub n_valid: usize,
    pub n_missing: usize,
    pub mean: f64,
    pub sem: f64,
    pub stddev: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("sample {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
}

/// Single-pass (Welford) mean and variance.
pub fn descriptive_stats(samples: &[f64]) -> Result<StatsSummary, StatsError> {
    if samples.len() < 2 {
        return Err(StatsError::TooFewSamples(samples.len()));
    }
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        if !x.is_finite() {
            return Err(StatsError::NonFinite { index: i, value: x });
        }
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    let n = samples.len();
    let variance = m2 / (n - 1) as f64;
    let stddev = variance.sqrt();
    Ok(StatsSummary { n_valid: n, n_missing: 0, mean, sem: stddev / (n as f64).sqrt(), stddev, variance })
}

/// Fixed decimals without the leading zero of a pure fraction (`.04708`).
pub fn spss_number(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    let s = if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    };
    if let Some(rest) = s.strip_prefix("0.") {
        format!(".{rest}")
    } else if let Some(rest) = s.strip_prefix("-0.") {
        format!("-.{rest}")
    } else {
        s
    }
}

const LABEL_WIDTH: usize = 20;
const COLUMN_WIDTH: usize = 13;

type Cell = dyn Fn(&StatsSummary) -> String;

/// Statistics table for CP runtime, CP fitness and PSO fitness.
///
/// Means print with 4 decimals, standard error and deviation with 5,
/// variance with 3.
pub fn render_stats(runtime: &StatsSummary, cp_fit: &StatsSummary, pso_fit: &StatsSummary) -> String {
    let cols = [runtime, cp_fit, pso_fit];
    let mut out = String::new();
    let _ = write!(out, "{:LABEL_WIDTH$}", "");
    for title in ["CP Runtime", "Fitness CP", "Fitness PSO"] {
        let _ = write!(out, "{title:>COLUMN_WIDTH$}");
    }
    out.push('\n');
    let rows: [(&str, &Cell); 6] = [
        ("N Valid", &|s| s.n_valid.to_string()),
        ("N Missing", &|s| s.n_missing.to_string()),
        ("Mean", &|s| spss_number(s.mean, 4)),
        ("Std. Error of Mean", &|s| spss_number(s.sem, 5)),
        ("Std. Deviation", &|s| spss_number(s.stddev, 5)),
        ("Variance", &|s| spss_number(s.variance, 3)),
    ];
    for (label, cell) in rows {
        let _ = write!(out, "{label:LABEL_WIDTH$}");
        for s in cols {
            let _ = write!(out, "{:>COLUMN_WIDTH$}", cell(s));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_samples() {
        let s = descriptive_stats(&[5.0; 4]).unwrap();
        assert_eq!((s.mean, s.stddev, s.variance, s.sem), (5.0, 0.0, 0.0, 0.0));
        assert_eq!(s.n_valid, 4);
        assert_eq!(s.n_missing, 0);
    }

    #[test]
    fn sem_is_half_sd_for_four_samples() {
        let s = descriptive_stats(&[40.7, 40.75, 40.8, 40.87]).unwrap();
        assert!((s.sem - s.stddev / 2.0).abs() < 1e-15);
        assert!((s.variance - s.stddev * s.stddev).abs() <= 1e-9 * s.variance);
    }

    #[test]
    fn too_few_samples() {
        assert_eq!(descriptive_stats(&[1.0]), Err(StatsError::TooFewSamples(1)));
        assert!(matches!(descriptive_stats(&[1.0, f64::NAN]), Err(StatsError::NonFinite { index: 1, .. })));
    }

    #[test]
    fn spss_formatting() {
        assert_eq!(spss_number(0.09416, 5), ".09416");
        assert_eq!(spss_number(40.78, 4), "40.7800");
        // .09416 squared displays as .009
        assert_eq!(spss_number(0.09416f64.powi(2), 3), ".009");
        assert_eq!(spss_number(0.0, 3), ".000");
        assert_eq!(spss_number(-1e-9, 3), ".000");
        assert_eq!(spss_number(-0.25, 2), "-.25");
    }

    #[test]
    fn table_layout() {
        let a = descriptive_stats(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let z = descriptive_stats(&[2.0; 4]).unwrap();
        let t = render_stats(&a, &z, &z);
        assert!(t.ends_with('\n'));
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[1].split_whitespace().collect::<Vec<_>>(), ["N", "Valid", "4", "4", "4"]);
        assert!(lines[6].ends_with(".000"));
        assert_eq!(render_stats(&a, &z, &z), t);
    }
}
