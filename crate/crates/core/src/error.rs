use thiserror::Error;

/// Errors surfaced by the library.
///
/// Gap-closing grid hits are a hard error rather than a silent NaN: a NaN
/// would propagate through the fixed-order mode sums and poison whole sweeps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("chain length must be an even integer >= 2, got {0}")]
    InvalidLength(usize),
    #[error("anisotropy must lie in [-1, 1] and be finite, got {0}")]
    InvalidAnisotropy(f64),
    #[error("DM strength must be finite, got {0}")]
    InvalidDmStrength(f64),
    #[error("transverse field must be finite, got {0}")]
    InvalidField(f64),
    #[error("inverse temperature must be positive and finite, got {0}")]
    InvalidBeta(f64),
    #[error("gapless mode at k = {k}: h - cos k and gamma*sin k both vanish")]
    GaplessMode { k: f64 },
    #[error("exact enumeration is limited to L <= {max}, got L = {l}; use the FFT reconstruction instead")]
    ExactTooLarge { l: usize, max: usize },
    #[error("characteristic function overflowed at mode {index} (k = {k})")]
    CharFnOverflow { index: usize, k: f64 },
    #[error("cumulant step size underflowed (u scale {u_scale})")]
    StepUnderflow { u_scale: f64 },
    #[error("sample count must be a power of two >= 1024, got {0}")]
    BadSampleCount(usize),
    #[error("boundary bins hold {boundary_mass:.3e} probability; increase w_max")]
    Aliasing { boundary_mass: f64 },
    #[error("no reverse atom matches forward work {w:.6e} (p = {p:.3e})")]
    MissingReverseAtom { w: f64, p: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
