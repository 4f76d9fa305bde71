//! Chain parameters, the positive-wave-vector grid, and the single-mode
//! spectral quantities every other module consumes.
//!
//! For an even chain of length L with periodic boundary conditions the
//! allowed wave vectors are odd multiples of pi/L; the positive half,
//! k_n = (2n-1) pi / L for n = 1..L/2, carries all the information since
//! each observable decomposes into (k, -k) blocks. Neither 0 nor pi ever
//! appears on the grid, so sin k > 0 on every mode.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Static description of the chain: size, anisotropy, DM strength.
///
/// Energies are measured in units of the exchange coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    l: usize,
    gamma: f64,
    d: f64,
}

impl ModelParams {
    /// Requires an even `l >= 2` and `gamma` in [-1, 1]. The DM strength is
    /// unrestricted apart from finiteness.
    pub fn new(l: usize, gamma: f64, d: f64) -> Result<Self> {
        if l < 2 || l % 2 != 0 {
            return Err(Error::InvalidLength(l));
        }
        if !gamma.is_finite() || !(-1.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidAnisotropy(gamma));
        }
        if !d.is_finite() {
            return Err(Error::InvalidDmStrength(d));
        }
        Ok(Self { l, gamma, d })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// Same chain with a different length.
    pub fn with_length(&self, l: usize) -> Result<Self> {
        Self::new(l, self.gamma, self.d)
    }
}

/// One full experiment: chain, initial and final field, inverse temperature.
///
/// The quench amplitude `hf - h0` is always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchSetup {
    params: ModelParams,
    h0: f64,
    hf: f64,
    beta: f64,
}

impl QuenchSetup {
    pub fn new(params: ModelParams, h0: f64, hf: f64, beta: f64) -> Result<Self> {
        if !h0.is_finite() {
            return Err(Error::InvalidField(h0));
        }
        if !hf.is_finite() {
            return Err(Error::InvalidField(hf));
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidBeta(beta));
        }
        Ok(Self { params, h0, hf, beta })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn h0(&self) -> f64 {
        self.h0
    }

    pub fn hf(&self) -> f64 {
        self.hf
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta_h(&self) -> f64 {
        self.hf - self.h0
    }

    /// The time-reversed experiment: initial state thermal at `hf`, quench
    /// back to `h0`.
    pub fn reversed(&self) -> Self {
        Self { params: self.params, h0: self.hf, hf: self.h0, beta: self.beta }
    }
}

/// Positive wave vectors k_n = (2n-1) pi / L, n = 1..L/2, strictly increasing.
pub fn k_grid(params: &ModelParams) -> Vec<f64> {
    let l = params.l() as f64;
    (1..=params.l() / 2)
        .map(|n| (2 * n - 1) as f64 * PI / l)
        .collect()
}

/// Single-particle dispersion eps_k(h) = sqrt((h - cos k)^2 + gamma^2 sin^2 k).
#[inline]
pub fn epsilon(k: f64, h: f64, gamma: f64) -> f64 {
    (h - k.cos()).hypot(gamma * k.sin())
}

/// Quasiparticle energy zeta_k(h) = eps_k(h) + 2 D sin k.
///
/// Negative values signal the gapless phase (|D| > gamma/2 for some k).
#[inline]
pub fn zeta(k: f64, h: f64, gamma: f64, d: f64) -> f64 {
    epsilon(k, h, gamma) + 2.0 * d * k.sin()
}

/// Bogoliubov angle phi_k in (-pi, pi], fixed by
/// eps cos phi = h - cos k and eps sin phi = gamma sin k.
///
/// This is the two-argument arctangent; the bare principal-branch arctan
/// loses the quadrant whenever h < cos k (see
/// [`bogoliubov_angle_principal`]). Errors with [`Error::GaplessMode`] when
/// both components vanish, which on the wave-vector grid requires gamma = 0
/// and h = cos k to machine precision.
#[inline]
pub fn bogoliubov_angle(k: f64, h: f64, gamma: f64) -> Result<f64> {
    let x = h - k.cos();
    let y = gamma * k.sin();
    if x == 0.0 && y == 0.0 {
        return Err(Error::GaplessMode { k });
    }
    Ok(y.atan2(x))
}

/// Principal-branch arctan form of the Bogoliubov angle.
///
/// Kept exclusively as a negative control: the brute-force oracle suite must
/// reject it for h < cos k. Never used by the production formulas.
#[inline]
pub fn bogoliubov_angle_principal(k: f64, h: f64, gamma: f64) -> f64 {
    (gamma * k.sin() / (h - k.cos())).atan()
}

/// Everything a mode contributes to the quench: dispersions and Bogoliubov
/// angles for both fields, the connecting angle theta, and D sin k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEntry {
    /// Wave vector in (0, pi).
    pub k: f64,
    /// Pre-quench dispersion eps_k(h0).
    pub eps0: f64,
    /// Post-quench dispersion eps_k(hf).
    pub epsf: f64,
    /// Pre-quench quasiparticle energy zeta_k(h0).
    pub zeta0: f64,
    /// Post-quench quasiparticle energy zeta_k(hf).
    pub zetaf: f64,
    /// Pre-quench Bogoliubov angle.
    pub phi0: f64,
    /// Post-quench Bogoliubov angle.
    pub phif: f64,
    /// theta_k = (phif - phi0) / 2, the rotation connecting pre- and
    /// post-quench quasiparticles. Only cos^2 and sin^2 of theta are ever
    /// observable, so a 2 pi branch jump in phif - phi0 is harmless.
    pub theta: f64,
    /// D sin k. The DM term enters every formula through this combination.
    pub dsin: f64,
}

/// Per-mode cache for one quench, in strictly increasing k order.
///
/// Immutable after construction and safe to share across workers.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTable {
    entries: Vec<ModeEntry>,
}

impl ModeTable {
    pub fn entries(&self) -> &[ModeEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ModeEntry> {
        self.entries.iter()
    }
}

/// Builds the per-mode cache for `setup`. Pure function of its input.
pub fn build_mode_table(setup: &QuenchSetup) -> Result<ModeTable> {
    let params = setup.params();
    let gamma = params.gamma();
    let d = params.d();
    let entries = k_grid(params)
        .into_iter()
        .map(|k| {
            let phi0 = bogoliubov_angle(k, setup.h0(), gamma)?;
            let phif = bogoliubov_angle(k, setup.hf(), gamma)?;
            let sin_k = k.sin();
            Ok(ModeEntry {
                k,
                eps0: epsilon(k, setup.h0(), gamma),
                epsf: epsilon(k, setup.hf(), gamma),
                zeta0: zeta(k, setup.h0(), gamma, d),
                zetaf: zeta(k, setup.hf(), gamma, d),
                phi0,
                phif,
                theta: 0.5 * (phif - phi0),
                dsin: d * sin_k,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModeTable { entries })
}
