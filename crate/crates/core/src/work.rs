//! Work statistics of the sudden quench: characteristic function, analytic
//! moments, cumulants, the full work distribution, and fluctuation-theorem
//! checks.
//!
//! Under the two-point measurement protocol each (k, -k) block contributes
//! six work atoms. From |00>: w = 2 eps -+ 2 epsf with weights p00 cos^2
//! theta / p00 sin^2 theta; from |11> the mirrored pair; the two cross
//! states are eigenstates of both Hamiltonians and contribute w = 0. The
//! characteristic function is the product over k > 0 of the brackets
//!
//!   e^{2(iu+beta)eps} [e^{-2iu epsf} cos^2 theta + e^{2iu epsf} sin^2 theta]
//! + e^{-2(iu+beta)eps} [e^{-2iu epsf} sin^2 theta + e^{2iu epsf} cos^2 theta]
//! + e^{4 beta D sin k} + e^{-4 beta D sin k}
//!
//! each divided by its block partition function; the cross terms lose
//! their u dependence algebraically (a cancellation the test suite
//! re-derives from the unsimplified expression).

use crate::error::{Error, Result};
use crate::model::{self, ModeEntry, QuenchSetup};
use crate::numeric::{complex_log_sum_exp, gibbs_ratios};
use crate::thermo::{self, mode_log_weights};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Largest chain for which the exact atom enumeration is offered
/// (6^(L/2) atoms before merging).
pub const L_EXACT_MAX: usize = 16;

/// Atoms closer than this (in work units) are merged by probability
/// addition; far below any physical level spacing at exact-enumeration
/// sizes.
pub const MERGE_TOL: f64 = 1e-9;

/// Gaussian regularization width of the FFT reconstruction, in bins. The
/// damped characteristic function falls to exp(-(2.5 pi)^2 / 2) ~ 4e-14 at
/// the edge of the u window, so truncation ringing stays far below the
/// 1e-6 accuracy target for any sample count.
pub const KERNEL_WIDTH_BINS: f64 = 2.5;

/// Probability floor below which forward atoms are not matched in the
/// Crooks comparison.
pub const CROOKS_FLOOR: f64 = 1e-14;

/// chi(u) at a single point, with the log form as the primary result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharFnValue {
    /// Conjugate variable to work.
    pub u: Complex64,
    /// exp(log_value); may overflow to infinity for strongly imaginary u.
    pub value: Complex64,
    /// Sum over modes of the principal-branch log of each normalized
    /// bracket. Exactly zero at u = 0.
    pub log_value: Complex64,
}

/// One atom of the exact work distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkAtom {
    pub w: f64,
    pub p: f64,
    /// Exact log-probability; `p` underflows near beta = 100 long before
    /// this does.
    pub log_p: f64,
}

/// The work distribution, either as exact atoms or as a binned density
/// reconstructed from chi(u).
#[derive(Debug, Clone, PartialEq)]
pub enum WorkDistribution {
    /// Sorted atoms (w, p) from the per-mode convolution.
    Exact { atoms: Vec<WorkAtom> },
    /// Uniform histogram of the kernel-smoothed work measure.
    Histogram {
        /// Center of bin 0; bin j is centered at `first_center + j * bin_width`.
        first_center: f64,
        bin_width: f64,
        /// Probability mass per bin, nonnegative, summing to 1.
        masses: Vec<f64>,
        /// Standard deviation of the Gaussian regularization kernel.
        kernel_sigma: f64,
        /// Spacing of the u grid the characteristic function was sampled on.
        u_spacing: f64,
        n_samples: usize,
        w_max: f64,
    },
}

impl WorkDistribution {
    pub fn total_probability(&self) -> f64 {
        match self {
            Self::Exact { atoms } => atoms.iter().map(|a| a.p).sum(),
            Self::Histogram { masses, .. } => masses.iter().sum(),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Exact { atoms } => atoms.iter().map(|a| a.p * a.w).sum(),
            Self::Histogram { first_center, bin_width, masses, .. } => masses
                .iter()
                .enumerate()
                .map(|(j, &q)| q * (first_center + j as f64 * bin_width))
                .sum(),
        }
    }

    /// Variance of the work. For histograms the known kernel variance is
    /// subtracted back out, so the value estimates the variance of the
    /// underlying (unsmoothed) distribution.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        match self {
            Self::Exact { atoms } => {
                atoms.iter().map(|a| a.p * (a.w - mean).powi(2)).sum()
            }
            Self::Histogram { first_center, bin_width, masses, kernel_sigma, .. } => {
                let raw: f64 = masses
                    .iter()
                    .enumerate()
                    .map(|(j, &q)| {
                        let w = first_center + j as f64 * bin_width;
                        q * (w - mean).powi(2)
                    })
                    .sum();
                raw - kernel_sigma * kernel_sigma
            }
        }
    }
}

/// Result of the Crooks-relation comparison between the forward and
/// reverse exact distributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrooksReport {
    /// max |ln p_F(W) - ln p_R(-W) - beta (W - dF)| over compared atoms.
    pub max_abs_deviation: f64,
    /// Number of forward atoms above the probability floor.
    pub n_compared: usize,
}

/// A numerically differentiated cumulant with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cumulant {
    pub order: usize,
    pub value: f64,
    /// Richardson consistency gap plus a roundoff floor; the analytic
    /// K1/K2 agree with `value` well within this.
    pub error_estimate: f64,
}

// --- characteristic function -------------------------------------------

/// chi(u) for arbitrary complex u, evaluated per mode in log space.
///
/// Each mode contributes ln(bracket) - ln(block partition); the product
/// over k > 0 becomes a fixed-order sum of logs. chi(0) = 1 exactly.
/// Imaginary parts of u up to beta are always representable; an exponent
/// that still fails to stay finite reports the offending mode.
pub fn char_fn(setup: &QuenchSetup, u: Complex64) -> Result<CharFnValue> {
    let table = model::build_mode_table(setup)?;
    char_fn_with_table(setup, &table, u)
}

/// [`char_fn`] against a prebuilt mode table.
pub fn char_fn_with_table(
    setup: &QuenchSetup,
    table: &model::ModeTable,
    u: Complex64,
) -> Result<CharFnValue> {
    if u == Complex64::new(0.0, 0.0) {
        return Ok(CharFnValue {
            u,
            value: Complex64::new(1.0, 0.0),
            log_value: Complex64::new(0.0, 0.0),
        });
    }
    let beta = setup.beta();
    let iu = Complex64::new(-u.im, u.re);
    let mut log_value = Complex64::new(0.0, 0.0);
    for (index, e) in table.iter().enumerate() {
        let mode_log = mode_log_bracket(e, beta, iu)
            - crate::numeric::log_block_sum(2.0 * beta * e.eps0, 4.0 * beta * e.dsin);
        if !mode_log.re.is_finite() && mode_log.re != f64::NEG_INFINITY {
            return Err(Error::CharFnOverflow { index, k: e.k });
        }
        if !mode_log.im.is_finite() {
            return Err(Error::CharFnOverflow { index, k: e.k });
        }
        log_value += mode_log;
    }
    Ok(CharFnValue { u, value: log_value.exp(), log_value })
}

fn mode_log_bracket(e: &ModeEntry, beta: f64, iu: Complex64) -> Complex64 {
    let c2 = e.theta.cos().powi(2);
    let s2 = e.theta.sin().powi(2);
    let b = 4.0 * beta * e.dsin;
    // (iu + beta) 2 eps0 and iu 2 epsf
    let zp = (iu + beta) * (2.0 * e.eps0);
    let f = iu * (2.0 * e.epsf);
    complex_log_sum_exp(&[
        (zp - f, c2),
        (zp + f, s2),
        (-zp - f, s2),
        (-zp + f, c2),
        (Complex64::new(b, 0.0), 1.0),
        (Complex64::new(-b, 0.0), 1.0),
    ])
}

/// chi evaluated on a batch of real u values.
///
/// For real u every per-mode bracket is a convex combination of phases, so
/// the product can be formed directly from normalized Gibbs weights with no
/// overflow risk. Used by the FFT reconstruction.
pub fn char_fn_real_batch(setup: &QuenchSetup, us: &[f64]) -> Result<Vec<Complex64>> {
    let table = model::build_mode_table(setup)?;
    let modes = real_mode_terms(&table, setup.beta());
    Ok(us.iter().map(|&u| char_fn_real_from_terms(&modes, u)).collect())
}

/// Per-mode data for the real-u fast path: normalized weights and the two
/// work gaps.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RealModeTerm {
    p00: f64,
    p11: f64,
    p_cross: f64,
    c2: f64,
    s2: f64,
    /// 2 eps0 - 2 epsf
    w_minus: f64,
    /// 2 eps0 + 2 epsf
    w_plus: f64,
}

pub(crate) fn real_mode_terms(table: &model::ModeTable, beta: f64) -> Vec<RealModeTerm> {
    table
        .iter()
        .map(|e| {
            let (logw, logz) = mode_log_weights(e.eps0, e.dsin, beta);
            RealModeTerm {
                p00: (logw[0] - logz).exp(),
                p11: (logw[3] - logz).exp(),
                p_cross: (logw[1] - logz).exp() + (logw[2] - logz).exp(),
                c2: e.theta.cos().powi(2),
                s2: e.theta.sin().powi(2),
                w_minus: 2.0 * e.eps0 - 2.0 * e.epsf,
                w_plus: 2.0 * e.eps0 + 2.0 * e.epsf,
            }
        })
        .collect()
}

pub(crate) fn char_fn_real_from_terms(modes: &[RealModeTerm], u: f64) -> Complex64 {
    let mut chi = Complex64::new(1.0, 0.0);
    for m in modes {
        let em = Complex64::cis(u * m.w_minus);
        let ep = Complex64::cis(u * m.w_plus);
        let fwd = em * m.c2 + ep * m.s2;
        chi *= m.p00 * fwd + m.p11 * fwd.conj() + m.p_cross;
    }
    chi
}

// --- analytic mean and variance ----------------------------------------

/// Per-mode averaged work and variance:
///
/// ```text
/// <w>_k   = 2 (h0 - hf) cos phi_k sinh(2 beta eps_k) / (cosh 2 beta eps_k
///           + cosh 4 beta D sin k)
/// sigma^2 = 4 (h0 - hf)^2 cosh(2 beta eps_k) / (same denominator) - <w>_k^2
/// ```
///
/// with the hyperbolic ratios evaluated in scaled form.
pub fn mode_mean_var(
    k: f64,
    h0: f64,
    hf: f64,
    gamma: f64,
    d: f64,
    beta: f64,
) -> Result<(f64, f64)> {
    let phi = model::bogoliubov_angle(k, h0, gamma)?;
    Ok(mode_mean_var_with_angle(phi, k, h0, hf, gamma, d, beta))
}

/// Same as [`mode_mean_var`] with a caller-supplied Bogoliubov angle; the
/// verification suite feeds the naive principal-branch angle through here
/// as a negative control.
pub fn mode_mean_var_with_angle(
    phi: f64,
    k: f64,
    h0: f64,
    hf: f64,
    gamma: f64,
    d: f64,
    beta: f64,
) -> (f64, f64) {
    let eps = model::epsilon(k, h0, gamma);
    let (rs, rc) = gibbs_ratios(2.0 * beta * eps, 4.0 * beta * d * k.sin());
    let dh = h0 - hf;
    let mean = 2.0 * dh * phi.cos() * rs;
    let var = 4.0 * dh * dh * rc - mean * mean;
    (mean, var)
}

/// `(<W>, Sigma^2)`: fixed-order sums of the per-mode terms over k > 0.
pub fn mean_and_variance(setup: &QuenchSetup) -> Result<(f64, f64)> {
    let gamma = setup.params().gamma();
    let d = setup.params().d();
    let mut mean = 0.0;
    let mut var = 0.0;
    for k in model::k_grid(setup.params()) {
        let (m, v) = mode_mean_var(k, setup.h0(), setup.hf(), gamma, d, setup.beta())?;
        mean += m;
        var += v;
    }
    Ok((mean, var))
}

// --- numerical cumulants ------------------------------------------------

/// First `n_max` cumulants of the work distribution by central finite
/// differences of ln chi on a symmetric real-u stencil with one Richardson
/// extrapolation step.
///
/// The step is (machine epsilon)^(1/(n+2)) scaled by 1 / sqrt(K2) (from the
/// analytic variance) and capped so the per-mode phases stay well inside
/// the principal branch. ln chi(-u) = conj ln chi(u) is used, so only
/// three evaluations at u in {h/2, h, 2h} are needed.
pub fn cumulants_numeric(setup: &QuenchSetup, n_max: usize) -> Result<Vec<Cumulant>> {
    assert!((1..=4).contains(&n_max), "cumulants are supported up to order 4");
    let (_, var) = mean_and_variance(setup)?;
    let table = model::build_mode_table(setup)?;
    if setup.delta_h() == 0.0 {
        // no work is done; ln chi vanishes identically
        return Ok((1..=n_max)
            .map(|order| Cumulant { order, value: 0.0, error_estimate: 0.0 })
            .collect());
    }
    let u_scale = 1.0 / var.sqrt().max(f64::MIN_POSITIVE);
    // keep every per-mode phase small: |u| * max_k (2 eps0 + 2 epsf) << pi
    let span = table
        .iter()
        .map(|e| 2.0 * e.eps0 + 2.0 * e.epsf)
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let cap = 0.05 / span;
    // scale of roundoff in ln chi: ulps of the per-mode log magnitudes
    let log_scale: f64 = table
        .iter()
        .map(|e| 2.0 * setup.beta() * e.eps0 + (4.0 * setup.beta() * e.dsin).abs())
        .sum::<f64>()
        .max(1.0);
    let eps_g = 1e-15 * log_scale;

    let mut out = Vec::with_capacity(n_max);
    for order in 1..=n_max {
        let h = (f64::EPSILON.powf(1.0 / (order as f64 + 2.0)) * u_scale).min(cap);
        if h == 0.0 || !h.is_finite() {
            return Err(Error::StepUnderflow { u_scale });
        }
        let g = |u: f64| -> Result<Complex64> {
            Ok(char_fn_with_table(setup, &table, Complex64::new(u, 0.0))?.log_value)
        };
        let g_half = g(0.5 * h)?;
        let g_one = g(h)?;
        let g_two = g(2.0 * h)?;
        let est_h = stencil(order, h, g_one, g_two);
        let est_half = stencil(order, 0.5 * h, g_half, g_one);
        let value = (4.0 * est_half - est_h) / 3.0;
        let error_estimate =
            (est_half - est_h).abs() / 3.0 + eps_g / h.powi(order as i32) * 16.0;
        out.push(Cumulant { order, value, error_estimate });
    }
    Ok(out)
}

/// O(h^2) central estimate of K_n from ln chi at u = h and u = 2h, using
/// that Re ln chi is even and Im ln chi is odd in u.
fn stencil(order: usize, h: f64, g_h: Complex64, g_2h: Complex64) -> f64 {
    match order {
        1 => g_h.im / h,
        2 => -2.0 * g_h.re / (h * h),
        3 => (2.0 * g_h.im - g_2h.im) / (h * h * h),
        4 => -2.0 * (4.0 * g_h.re - g_2h.re) / (h * h * h * h),
        _ => unreachable!(),
    }
}

// --- exact work distribution -------------------------------------------

/// The six raw atoms of one mode, as (work, log-probability). Atoms with
/// vanishing weight (cos or sin theta exactly zero) come out at -inf.
pub fn mode_work_atoms(
    k: f64,
    h0: f64,
    hf: f64,
    gamma: f64,
    d: f64,
    beta: f64,
) -> Result<[(f64, f64); 6]> {
    let eps0 = model::epsilon(k, h0, gamma);
    let epsf = model::epsilon(k, hf, gamma);
    let phi0 = model::bogoliubov_angle(k, h0, gamma)?;
    let phif = model::bogoliubov_angle(k, hf, gamma)?;
    let theta = 0.5 * (phif - phi0);
    let (logw, logz) = mode_log_weights(eps0, d * k.sin(), beta);
    let lc2 = 2.0 * theta.cos().abs().ln();
    let ls2 = 2.0 * theta.sin().abs().ln();
    let w_minus = 2.0 * eps0 - 2.0 * epsf;
    let w_plus = 2.0 * eps0 + 2.0 * epsf;
    Ok([
        (w_minus, logw[0] - logz + lc2),
        (w_plus, logw[0] - logz + ls2),
        (-w_minus, logw[3] - logz + lc2),
        (-w_plus, logw[3] - logz + ls2),
        (0.0, logw[1] - logz),
        (0.0, logw[2] - logz),
    ])
}

/// Exact work distribution by convolving the per-mode atoms.
///
/// Only offered for L <= [`L_EXACT_MAX`]; larger chains get an explicit
/// error pointing at [`work_pdf_fft`]. Atoms are carried in log space so
/// the reverse-process probabilities stay meaningful at beta = 100.
pub fn work_pdf_exact(setup: &QuenchSetup) -> Result<WorkDistribution> {
    Ok(WorkDistribution::Exact { atoms: exact_atoms(setup)? })
}

pub(crate) fn exact_atoms(setup: &QuenchSetup) -> Result<Vec<WorkAtom>> {
    let l = setup.params().l();
    if l > L_EXACT_MAX {
        return Err(Error::ExactTooLarge { l, max: L_EXACT_MAX });
    }
    let gamma = setup.params().gamma();
    let d = setup.params().d();
    let mut dist: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    for k in model::k_grid(setup.params()) {
        let atoms = mode_work_atoms(k, setup.h0(), setup.hf(), gamma, d, setup.beta())?;
        let mut next = Vec::with_capacity(dist.len() * 6);
        for &(w, logp) in &dist {
            for &(mw, mlogp) in &atoms {
                let lp = logp + mlogp;
                if lp > f64::NEG_INFINITY {
                    next.push((w + mw, lp));
                }
            }
        }
        dist = merge_atoms(next);
    }
    Ok(dist
        .into_iter()
        .map(|(w, log_p)| WorkAtom { w, p: log_p.exp(), log_p })
        .collect())
}

/// Sorts atoms by work value and merges clusters whose consecutive raw
/// values sit within [`MERGE_TOL`]. Cluster membership depends only on the
/// value gaps, so the forward and reverse processes (exact negations of
/// each other) merge identically. Each cluster is replaced by its
/// probability-weighted mean.
fn merge_atoms(mut atoms: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut out = Vec::with_capacity(atoms.len());
    let mut i = 0;
    while i < atoms.len() {
        let mut j = i + 1;
        while j < atoms.len() && atoms[j].0 - atoms[j - 1].0 <= MERGE_TOL {
            j += 1;
        }
        if j == i + 1 {
            out.push(atoms[i]);
        } else {
            let cluster = &atoms[i..j];
            let m = cluster.iter().map(|a| a.1).fold(f64::NEG_INFINITY, f64::max);
            let mut norm = 0.0;
            let mut wsum = 0.0;
            for &(w, lp) in cluster {
                let v = (lp - m).exp();
                norm += v;
                wsum += v * w;
            }
            out.push((wsum / norm, m + norm.ln()));
        }
        i = j;
    }
    out
}

// --- FFT reconstruction --------------------------------------------------

/// Reconstructs a binned work density from chi(u) for chains of any size.
///
/// chi is sampled on the conjugate grid u_m = m pi / w_max,
/// m = -n/2 .. n/2 - 1, damped by a Gaussian kernel of width
/// [`KERNEL_WIDTH_BINS`] bins, and inverted by a discrete Fourier
/// transform. The result is the kernel-smoothed work measure binned on
/// [-w_max, w_max); the kernel width is recorded in the histogram and its
/// variance is subtracted back out by [`WorkDistribution::variance`].
///
/// `w_max` defaults to the spectral bound sum_k (2 eps0 + 2 epsf) plus
/// padding; if the caller passes a value too small for the actual support,
/// mass lands in the boundary bins and the reconstruction errors out
/// rather than silently aliasing.
pub fn work_pdf_fft(
    setup: &QuenchSetup,
    n_samples: usize,
    w_max: Option<f64>,
) -> Result<WorkDistribution> {
    if n_samples < 1024 || !n_samples.is_power_of_two() {
        return Err(Error::BadSampleCount(n_samples));
    }
    let table = model::build_mode_table(setup)?;
    let w_bound: f64 = table.iter().map(|e| 2.0 * e.eps0 + 2.0 * e.epsf).sum();
    let w_max = w_max.unwrap_or(1.05 * w_bound + 1.0);
    let n = n_samples;
    let bin_width = 2.0 * w_max / n as f64;
    let sigma = KERNEL_WIDTH_BINS * bin_width;
    let du = PI / w_max;

    let modes = real_mode_terms(&table, setup.beta());
    let half = (n / 2) as i64;
    let mut buf: Vec<Complex64> = (0..n as i64)
        .map(|idx| {
            let m = idx - half;
            let u = m as f64 * du;
            let damp = (-0.5 * (u * sigma) * (u * sigma)).exp();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            char_fn_real_from_terms(&modes, u) * (damp * sign)
        })
        .collect();

    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let inv_n = 1.0 / n as f64;
    let masses: Vec<f64> = buf
        .iter()
        .enumerate()
        .map(|(j, z)| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            (sign * z.re * inv_n).max(0.0)
        })
        .collect();

    // wrap-around lands mass next to the +-w_max cut; a clean
    // reconstruction keeps the outermost bins empty because the auto
    // padding leaves the support well inside the window
    let band = (n / 512).max(8);
    let boundary_mass: f64 =
        masses[..band].iter().sum::<f64>() + masses[n - band..].iter().sum::<f64>();
    if boundary_mass > 1e-8 {
        return Err(Error::Aliasing { boundary_mass });
    }
    let total: f64 = masses.iter().sum();
    assert!(
        (total - 1.0).abs() <= 1e-6,
        "reconstructed histogram integrates to {total}, expected 1"
    );

    Ok(WorkDistribution::Histogram {
        first_center: -w_max,
        bin_width,
        masses,
        kernel_sigma: sigma,
        u_spacing: du,
        n_samples: n,
        w_max,
    })
}

/// Pushes the exact atoms through the same Gaussian kernel the FFT route
/// applies: each atom becomes a normal density of width `sigma` sampled at
/// the bin centers and scaled by the bin width, which is what the
/// conjugate-grid transform produces (exactly, by Poisson summation, for
/// sigma of a few bins). This is the independent reference the
/// reconstruction is compared against.
pub fn kernel_binned_reference(
    atoms: &[WorkAtom],
    first_center: f64,
    bin_width: f64,
    n_bins: usize,
    sigma: f64,
) -> Vec<f64> {
    let mut masses = vec![0.0; n_bins];
    let norm = bin_width / (sigma * (2.0 * PI).sqrt());
    let band = (12.0 * sigma / bin_width).ceil() as i64 + 1;
    for a in atoms {
        if a.p == 0.0 {
            continue;
        }
        let center_bin = ((a.w - first_center) / bin_width).round() as i64;
        let lo = (center_bin - band).max(0);
        let hi = (center_bin + band).min(n_bins as i64 - 1);
        for j in lo..=hi {
            let w = first_center + j as f64 * bin_width;
            let z = (w - a.w) / sigma;
            masses[j as usize] += a.p * norm * (-0.5 * z * z).exp();
        }
    }
    masses
}

/// Total-variation distance between two binned mass vectors.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

// --- Crooks relation ------------------------------------------------------

/// Checks the detailed fluctuation theorem
/// ln p_F(W) - ln p_R(-W) = beta (W - dF) atom by atom.
///
/// Forward atoms below [`CROOKS_FLOOR`] are skipped; a forward atom above
/// the floor with no reverse partner at -W is a structural failure.
pub fn crooks_check(setup: &QuenchSetup) -> Result<CrooksReport> {
    let forward = exact_atoms(setup)?;
    let mut reverse = exact_atoms(&setup.reversed())?;
    reverse.sort_by(|a, b| a.w.partial_cmp(&b.w).unwrap());
    let df = thermo::delta_free_energy(setup);
    let beta = setup.beta();

    let mut max_dev = 0.0f64;
    let mut n_compared = 0;
    for atom in &forward {
        if atom.p <= CROOKS_FLOOR {
            continue;
        }
        let target = -atom.w;
        let idx = reverse.partition_point(|r| r.w < target);
        let candidate = [idx.wrapping_sub(1), idx]
            .into_iter()
            .filter(|&i| i < reverse.len())
            .min_by(|&i, &j| {
                (reverse[i].w - target)
                    .abs()
                    .partial_cmp(&(reverse[j].w - target).abs())
                    .unwrap()
            });
        let partner = match candidate {
            Some(i) if (reverse[i].w - target).abs() <= 1e-8 => &reverse[i],
            _ => return Err(Error::MissingReverseAtom { w: atom.w, p: atom.p }),
        };
        let dev = atom.log_p - partner.log_p - beta * (atom.w - df);
        max_dev = max_dev.max(dev.abs());
        n_compared += 1;
    }
    Ok(CrooksReport { max_abs_deviation: max_dev, n_compared })
}
