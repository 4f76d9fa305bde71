//! Work-distribution emission: exact atoms for small chains, FFT
//! reconstruction for any size.

use crate::csv_out::{fmt_f64, write_header_comments};
use crate::Result;
use quench_core::work::{self, WorkDistribution, KERNEL_WIDTH_BINS, L_EXACT_MAX, MERGE_TOL};
use quench_core::{ModelParams, QuenchSetup};
use std::io::Write;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdfMethod {
    Exact,
    Fft,
}

impl FromStr for PdfMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(PdfMethod::Exact),
            "fft" => Ok(PdfMethod::Fft),
            other => Err(format!("method must be 'exact' or 'fft', got '{other}'")),
        }
    }
}

impl std::fmt::Display for PdfMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PdfMethod::Exact => "exact",
            PdfMethod::Fft => "fft",
        })
    }
}

#[derive(Debug, Clone)]
pub struct PdfConfig {
    pub gamma: f64,
    pub beta: f64,
    pub l: usize,
    pub dh: f64,
    pub h0: f64,
    pub d: f64,
    pub method: PdfMethod,
    pub samples: usize,
    pub wmax: Option<f64>,
}

pub fn run_pdf(cfg: &PdfConfig) -> Result<WorkDistribution> {
    let params = ModelParams::new(cfg.l, cfg.gamma, cfg.d)?;
    let setup = QuenchSetup::new(params, cfg.h0, cfg.h0 + cfg.dh, cfg.beta)?;
    match cfg.method {
        PdfMethod::Exact => Ok(work::work_pdf_exact(&setup)?),
        PdfMethod::Fft => Ok(work::work_pdf_fft(&setup, cfg.samples, cfg.wmax)?),
    }
}

/// Emits the distribution as CSV: `work,probability` for exact atoms,
/// `bin_center,density` for histograms, with the reconstruction grids in
/// the header.
pub fn write_pdf_csv<W: Write>(
    out: &mut W,
    cfg: &PdfConfig,
    dist: &WorkDistribution,
) -> Result<()> {
    let mut entries = vec![
        ("gamma", cfg.gamma.to_string()),
        ("beta", cfg.beta.to_string()),
        ("L", cfg.l.to_string()),
        ("dh", cfg.dh.to_string()),
        ("h0", cfg.h0.to_string()),
        ("D", cfg.d.to_string()),
        ("method", cfg.method.to_string()),
    ];
    match dist {
        WorkDistribution::Exact { .. } => {
            entries.push(("l_exact_max", L_EXACT_MAX.to_string()));
            entries.push(("merge_tol", MERGE_TOL.to_string()));
        }
        WorkDistribution::Histogram {
            bin_width, kernel_sigma, u_spacing, n_samples, w_max, ..
        } => {
            entries.push(("n_samples", n_samples.to_string()));
            entries.push(("w_max", w_max.to_string()));
            entries.push(("bin_width", bin_width.to_string()));
            entries.push(("kernel_sigma", kernel_sigma.to_string()));
            entries.push(("kernel_width_bins", KERNEL_WIDTH_BINS.to_string()));
            entries.push(("u_spacing", u_spacing.to_string()));
        }
    }
    write_header_comments(out, "pdf", &entries)?;
    match dist {
        WorkDistribution::Exact { atoms } => {
            writeln!(out, "work,probability")?;
            for a in atoms {
                writeln!(out, "{},{}", fmt_f64(a.w), fmt_f64(a.p))?;
            }
        }
        WorkDistribution::Histogram { first_center, bin_width, masses, .. } => {
            writeln!(out, "bin_center,density")?;
            for (j, &q) in masses.iter().enumerate() {
                let w = first_center + j as f64 * bin_width;
                writeln!(out, "{},{}", fmt_f64(w), fmt_f64(q / bin_width))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_csv_probability_sums_to_one() {
        let cfg = PdfConfig {
            gamma: 0.5,
            beta: 1.0,
            l: 8,
            dh: 0.3,
            h0: 0.7,
            d: 0.2,
            method: PdfMethod::Exact,
            samples: 1 << 16,
            wmax: None,
        };
        let dist = run_pdf(&cfg).unwrap();
        assert!((dist.total_probability() - 1.0).abs() < 1e-12);
        let mut buf = Vec::new();
        write_pdf_csv(&mut buf, &cfg, &dist).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let total: f64 = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("work"))
            .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_rejects_large_l() {
        let cfg = PdfConfig {
            gamma: 0.5,
            beta: 1.0,
            l: 2000,
            dh: 0.01,
            h0: 0.8,
            d: 0.0,
            method: PdfMethod::Exact,
            samples: 1 << 16,
            wmax: None,
        };
        let err = run_pdf(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("FFT"));
    }

    #[test]
    fn fft_histogram_integrates_to_one() {
        let cfg = PdfConfig {
            gamma: 0.5,
            beta: 5.0,
            l: 64,
            dh: 0.05,
            h0: 0.9,
            d: 0.4,
            method: PdfMethod::Fft,
            samples: 1 << 12,
            wmax: None,
        };
        let dist = run_pdf(&cfg).unwrap();
        assert!((dist.total_probability() - 1.0).abs() < 1e-6);
        let mut buf = Vec::new();
        write_pdf_csv(&mut buf, &cfg, &dist).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("# kernel_sigma="));
        assert!(text.contains("bin_center,density"));
    }

    #[test]
    fn fft_surfaces_aliasing_error() {
        let cfg = PdfConfig {
            gamma: 0.5,
            beta: 0.5,
            l: 6,
            dh: 1.6,
            h0: 0.2,
            d: 0.0,
            method: PdfMethod::Fft,
            samples: 1 << 12,
            wmax: Some(2.0),
        };
        let err = run_pdf(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("increase w_max"));
    }
}
