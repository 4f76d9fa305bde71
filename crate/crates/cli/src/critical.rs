//! Critical-line detection from local minima of `d<W>/dh0` and `dSigma^2/dh0`.
//!
//! For each D the observables are evaluated over the h0 grid, differenced
//! centrally on the grid itself (no extra evaluations), and every strict
//! interior local minimum of each derivative is refined by a three-point
//! parabola. The deepest minimum is reported; all candidates stay
//! available, ranked by depth. The theory line is h_c = 1 for D < gamma/2
//! and h_c = sqrt(4 D^2 - gamma^2 + 1) above.

use crate::config::GridSpec;
use crate::csv_out::{fmt_f64, write_header_comments};
use crate::{CliError, Result};
use quench_core::{work, ModelParams, QuenchSetup};
use rayon::prelude::*;
use std::io::Write;

#[derive(Debug, Clone)]
pub struct CriticalConfig {
    pub gamma: f64,
    pub beta: f64,
    pub l: usize,
    pub dh: f64,
    pub h0: GridSpec,
    pub d: GridSpec,
    pub workers: usize,
    /// Keep every detected minimum in the output, not just the deepest.
    pub all_minima: bool,
}

/// A refined local minimum of a derivative curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    /// Sub-grid location from the parabola through the minimum and its
    /// neighbors.
    pub h0: f64,
    /// Derivative value at the grid minimum; more negative is deeper.
    pub depth: f64,
}

/// Detected minima for one D, for both observables.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalEstimate {
    pub d: f64,
    /// Location of the deepest local minimum of `d<W>/dh0`, absent when
    /// the scan found none.
    pub h_star_mean: Option<f64>,
    /// Location of the deepest local minimum of `dSigma^2/dh0`.
    pub h_star_var: Option<f64>,
    pub h_theory: f64,
    /// All minima of `d<W>/dh0`, deepest first.
    pub minima_mean: Vec<Minimum>,
    /// All minima of `dSigma^2/dh0`, deepest first.
    pub minima_var: Vec<Minimum>,
}

/// h_c(D): the critical point below the gapless threshold, the DM-induced
/// critical line above it.
pub fn h_theory(d: f64, gamma: f64) -> f64 {
    if d.abs() < gamma.abs() / 2.0 {
        1.0
    } else {
        (4.0 * d * d - gamma * gamma + 1.0).sqrt()
    }
}

pub fn critical_scan(cfg: &CriticalConfig) -> Result<Vec<CriticalEstimate>> {
    cfg.h0.validate("h0")?;
    cfg.d.validate("D")?;
    let n_h0 = cfg.h0.len();
    if n_h0 < 7 {
        return Err(CliError::Config(format!(
            "h0: need at least 7 grid points to flank a derivative minimum, got {n_h0}"
        )));
    }
    let h0_values = cfg.h0.values();
    let d_values = cfg.d.values();
    let points: Vec<(f64, f64)> = d_values
        .iter()
        .flat_map(|&d| h0_values.iter().map(move |&h0| (d, h0)))
        .collect();
    // the scan only needs <W> and Sigma^2, so it avoids the full sweep row
    let pool = crate::thread_pool(cfg.workers)?;
    let moments = pool.install(|| {
        points
            .par_iter()
            .map(|&(d, h0)| -> crate::Result<(f64, f64)> {
                let params = ModelParams::new(cfg.l, cfg.gamma, d)?;
                let setup = QuenchSetup::new(params, h0, h0 + cfg.dh, cfg.beta)?;
                Ok(work::mean_and_variance(&setup)?)
            })
            .collect::<crate::Result<Vec<_>>>()
    })?;

    let mut out = Vec::new();
    for (slice, &d) in moments.chunks(n_h0).zip(d_values.iter()) {
        let mut d_mean = Vec::with_capacity(n_h0 - 2);
        let mut d_var = Vec::with_capacity(n_h0 - 2);
        for i in 1..n_h0 - 1 {
            let dx = h0_values[i + 1] - h0_values[i - 1];
            d_mean.push((slice[i + 1].0 - slice[i - 1].0) / dx);
            d_var.push((slice[i + 1].1 - slice[i - 1].1) / dx);
        }
        let xs = &h0_values[1..n_h0 - 1];
        let minima_mean = find_minima(xs, &d_mean);
        let minima_var = find_minima(xs, &d_var);
        out.push(CriticalEstimate {
            d,
            h_star_mean: minima_mean.first().map(|m| m.h0),
            h_star_var: minima_var.first().map(|m| m.h0),
            h_theory: h_theory(d, cfg.gamma),
            minima_mean,
            minima_var,
        });
    }
    Ok(out)
}

/// Strict interior local minima of `ys` over `xs`, parabola-refined,
/// deepest first. A flat or monotone curve yields none; nothing is
/// fabricated.
fn find_minima(xs: &[f64], ys: &[f64]) -> Vec<Minimum> {
    let mut minima = Vec::new();
    for i in 1..ys.len() - 1 {
        if ys[i] < ys[i - 1] && ys[i] < ys[i + 1] {
            minima.push(Minimum { h0: refine_parabola(xs, ys, i), depth: ys[i] });
        }
    }
    minima.sort_by(|a, b| a.depth.partial_cmp(&b.depth).unwrap());
    minima
}

/// Vertex of the parabola through (x_{i-1}, y_{i-1}), (x_i, y_i),
/// (x_{i+1}, y_{i+1}) for a uniform grid.
fn refine_parabola(xs: &[f64], ys: &[f64], i: usize) -> f64 {
    let dx = 0.5 * (xs[i + 1] - xs[i - 1]);
    let denom = ys[i - 1] - 2.0 * ys[i] + ys[i + 1];
    if denom <= 0.0 {
        return xs[i];
    }
    let shift = 0.5 * dx * (ys[i - 1] - ys[i + 1]) / denom;
    xs[i] + shift.clamp(-dx, dx)
}

pub fn write_critical_csv<W: Write>(
    out: &mut W,
    cfg: &CriticalConfig,
    estimates: &[CriticalEstimate],
) -> Result<()> {
    write_header_comments(
        out,
        "critical",
        &[
            ("gamma", cfg.gamma.to_string()),
            ("beta", cfg.beta.to_string()),
            ("L", cfg.l.to_string()),
            ("dh", cfg.dh.to_string()),
            ("h0", cfg.h0.to_string()),
            ("D", cfg.d.to_string()),
            ("all_minima", cfg.all_minima.to_string()),
            ("minima_ranking", "depth; deepest reported as h_star".to_string()),
            ("refinement", "3-point parabola on the derivative grid".to_string()),
        ],
    )?;
    let mut header = "D,h_star_mean,h_star_var,h_theory".to_string();
    if cfg.all_minima {
        header.push_str(",minima_mean,minima_var");
    }
    writeln!(out, "{header}")?;
    for e in estimates {
        let fmt_opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        let mut line = format!(
            "{},{},{},{}",
            fmt_f64(e.d),
            fmt_opt(e.h_star_mean),
            fmt_opt(e.h_star_var),
            fmt_f64(e.h_theory),
        );
        if cfg.all_minima {
            let join = |ms: &[Minimum]| {
                ms.iter()
                    .map(|m| format!("{}@{}", fmt_f64(m.h0), fmt_f64(m.depth)))
                    .collect::<Vec<_>>()
                    .join(";")
            };
            line.push(',');
            line.push_str(&join(&e.minima_mean));
            line.push(',');
            line.push_str(&join(&e.minima_var));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}
