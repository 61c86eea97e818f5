//! CSV and JSON emission. Numbers carry 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use ekac_core::{FitReport, MomentReport, StatBundle};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::runner::Prepared;

/// 17 significant digits, `.` as decimal separator.
pub fn num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub config_sha256: String,
    pub seed: u64,
}

impl Provenance {
    pub fn of(p: &Prepared) -> Provenance {
        Provenance { config_sha256: p.config.hash(), seed: p.config.seed }
    }

    fn csv_header(&self) -> String {
        format!("# config_sha256={}\n# seed={}\n", self.config_sha256, self.seed)
    }
}

pub fn moments_csv(report: &MomentReport, prov: &Provenance) -> String {
    let mut out = prov.csv_header();
    out.push_str("m,M_m,C_m,ratio,predicted\n");
    for r in &report.rows {
        let _ = writeln!(out, "{},{},{},{},{}", r.m, num(r.moment), num(r.c_m), num(r.ratio), num(r.predicted));
    }
    out
}

pub fn histogram_csv(fit: &FitReport, prov: &Provenance) -> String {
    let mut out = prov.csv_header();
    out.push_str("bin_lo,bin_hi,count\n");
    for (lo, hi, c) in fit.histogram.rows() {
        let _ = writeln!(out, "{},{},{c}", num(lo), num(hi));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowStats {
    pub z: f64,
    pub primes: usize,
    pub means: Vec<f64>,
    pub kappa: Vec<Vec<f64>>,
    pub frak_m: f64,
    pub frak_k: f64,
    pub a_q: f64,
    pub b_q: f64,
}

impl From<&StatBundle> for WindowStats {
    fn from(b: &StatBundle) -> Self {
        WindowStats {
            z: b.window.z(),
            primes: b.window.len(),
            means: b.means.clone(),
            kappa: b.kappa.clone(),
            frak_m: b.frak_m,
            frak_k: b.frak_k,
            a_q: b.a_q,
            b_q: b.b_q,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsSummary {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub polynomial: String,
    pub functions: Vec<String>,
    pub x: u64,
    pub scale: f64,
    pub chosen_z: f64,
    pub truncation_reach: f64,
    pub eta: Option<f64>,
    pub truncated: WindowStats,
    pub full: WindowStats,
}

impl StatsSummary {
    pub fn of(p: &Prepared) -> StatsSummary {
        StatsSummary {
            provenance: Provenance::of(p),
            polynomial: p.q.to_string(),
            functions: p.gs.iter().map(|g| g.name().to_string()).collect(),
            x: p.x(),
            scale: p.model.scale(),
            chosen_z: p.z,
            truncation_reach: p.truncation_reach(),
            eta: p.eta(),
            truncated: (&p.truncated).into(),
            full: (&p.full).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitSummary {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub n: u64,
    pub ks: f64,
    pub approximate: bool,
    /// Raw sample moments `E[v^k]`, `k = 1..4`, of the normalized values.
    pub sample_moments: [f64; 4],
    pub center: f64,
    pub scale: f64,
    /// `A_Q` over the truncated window minus `A_Q` over all primes up to x.
    pub center_shift: f64,
    /// `B_Q` over the truncated window divided by `B_Q` over all primes up to x.
    pub scale_ratio: f64,
}

impl FitSummary {
    pub fn of(p: &Prepared, fit: &FitReport) -> FitSummary {
        FitSummary {
            provenance: Provenance::of(p),
            n: fit.n,
            ks: fit.ks,
            approximate: fit.approximate,
            sample_moments: fit.moments,
            center: p.full.a_q,
            scale: p.full.b_q,
            center_shift: p.truncated.a_q - p.full.a_q,
            scale_ratio: p.truncated.b_q / p.full.b_q,
        }
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("summaries always serialize") + "\n"
}

pub fn write(path: &Path, content: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, content).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.5), "-2.5000000000000000e0");
        assert_eq!(num(0.0), "0");
        assert_eq!(num(1234567.0).parse::<f64>().unwrap(), 1234567.0);
    }
}
