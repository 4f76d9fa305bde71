//! Deterministic grids of observables over (h0, D) at fixed gamma, beta, L.

use crate::config::GridSpec;
use crate::csv_out::{fmt_f64, write_header_comments};
use crate::{thread_pool, Result};
use quench_core::{entropy, thermo, work, ModelParams, QuenchSetup};
use rayon::prelude::*;
use std::io::Write;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub gamma: f64,
    pub beta: f64,
    pub l: usize,
    pub dh: f64,
    pub h0: GridSpec,
    pub d: GridSpec,
    pub workers: usize,
    /// Emit a delta_F column.
    pub emit_delta_f: bool,
}

/// One grid point of observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub h0: f64,
    pub hf: f64,
    pub d: f64,
    pub gamma: f64,
    pub beta: f64,
    pub l: usize,
    pub mean_work: f64,
    pub variance: f64,
    pub s_irr: f64,
    /// Central-difference derivatives along the h0 axis; present only on
    /// interior points of an h0 grid.
    pub d_mean_dh0: Option<f64>,
    pub d_var_dh0: Option<f64>,
    pub delta_f: Option<f64>,
}

/// Evaluates every (D, h0) grid point, D-major, h0-minor, in deterministic
/// grid order. Points are computed in parallel but collected in order, so
/// the output is identical for any worker count.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.h0.validate("h0")?;
    cfg.d.validate("D")?;
    let h0_values = cfg.h0.values();
    let d_values = cfg.d.values();
    let points: Vec<(f64, f64)> = d_values
        .iter()
        .flat_map(|&d| h0_values.iter().map(move |&h0| (d, h0)))
        .collect();

    let pool = thread_pool(cfg.workers)?;
    let mut rows = pool.install(|| {
        points
            .par_iter()
            .map(|&(d, h0)| evaluate_point(cfg, d, h0))
            .collect::<Result<Vec<SweepRow>>>()
    })?;

    // derivatives along h0 within each D slice
    let n = h0_values.len();
    if n >= 3 {
        for slice in rows.chunks_mut(n) {
            let means: Vec<f64> = slice.iter().map(|r| r.mean_work).collect();
            let vars: Vec<f64> = slice.iter().map(|r| r.variance).collect();
            for i in 1..n - 1 {
                let dx = slice[i + 1].h0 - slice[i - 1].h0;
                slice[i].d_mean_dh0 = Some((means[i + 1] - means[i - 1]) / dx);
                slice[i].d_var_dh0 = Some((vars[i + 1] - vars[i - 1]) / dx);
            }
        }
    }
    Ok(rows)
}

fn evaluate_point(cfg: &SweepConfig, d: f64, h0: f64) -> Result<SweepRow> {
    let params = ModelParams::new(cfg.l, cfg.gamma, d)?;
    let setup = QuenchSetup::new(params, h0, h0 + cfg.dh, cfg.beta)?;
    let (mean_work, variance) = work::mean_and_variance(&setup)?;
    let s_irr = entropy::irr_entropy(&setup)?.s_irr;
    let delta_f = cfg.emit_delta_f.then(|| thermo::delta_free_energy(&setup));
    Ok(SweepRow {
        h0,
        hf: h0 + cfg.dh,
        d,
        gamma: cfg.gamma,
        beta: cfg.beta,
        l: cfg.l,
        mean_work,
        variance,
        s_irr,
        d_mean_dh0: None,
        d_var_dh0: None,
        delta_f,
    })
}

/// Streams rows as CSV with the effective configuration echoed in header
/// comments. The optional derivative and delta_F columns appear only when
/// enabled; non-interior points leave the derivative cells empty.
pub fn write_sweep_csv<W: Write>(out: &mut W, cfg: &SweepConfig, rows: &[SweepRow]) -> Result<()> {
    write_header_comments(
        out,
        "sweep",
        &[
            ("gamma", cfg.gamma.to_string()),
            ("beta", cfg.beta.to_string()),
            ("L", cfg.l.to_string()),
            ("dh", cfg.dh.to_string()),
            ("h0", cfg.h0.to_string()),
            ("D", cfg.d.to_string()),
            ("delta_f", cfg.emit_delta_f.to_string()),
        ],
    )?;
    let derivatives = cfg.h0.len() >= 3;
    let mut header = "h0,hf,D,gamma,beta,L,mean_work,variance,s_irr".to_string();
    if derivatives {
        header.push_str(",d_mean_dh0,d_var_dh0");
    }
    if cfg.emit_delta_f {
        header.push_str(",delta_F");
    }
    writeln!(out, "{header}")?;
    for r in rows {
        let mut line = format!(
            "{},{},{},{},{},{},{},{},{}",
            fmt_f64(r.h0),
            fmt_f64(r.hf),
            fmt_f64(r.d),
            fmt_f64(r.gamma),
            fmt_f64(r.beta),
            r.l,
            fmt_f64(r.mean_work),
            fmt_f64(r.variance),
            fmt_f64(r.s_irr),
        );
        if derivatives {
            line.push(',');
            if let Some(v) = r.d_mean_dh0 {
                line.push_str(&fmt_f64(v));
            }
            line.push(',');
            if let Some(v) = r.d_var_dh0 {
                line.push_str(&fmt_f64(v));
            }
        }
        if cfg.emit_delta_f {
            line.push(',');
            if let Some(v) = r.delta_f {
                line.push_str(&fmt_f64(v));
            }
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}
