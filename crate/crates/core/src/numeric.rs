//! Overflow-safe building blocks shared by the thermodynamic sums.
//!
//! Everything here exists because the low-temperature regime (beta = 100)
//! pushes naive `exp`/`cosh` past the f64 range near argument 710.

use num_complex::Complex64;
use std::f64::consts::LN_2;

/// ln cosh x = |x| + ln(1 + e^(-2|x|)) - ln 2, finite for any finite x.
#[inline]
pub fn log_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// ln(e^a + e^b) without overflow.
#[inline]
pub fn log_sum_exp2(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY && b == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if a >= b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

/// ln sum_i e^(x_i), summed in slice order after subtracting the maximum.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// ln sum_i w_i e^(z_i) for complex exponents and nonnegative weights.
///
/// The maximum real part is subtracted before exponentiating, so any finite
/// exponent is representable. Returns the principal branch; a sum that
/// cancels to zero yields -inf in the real part.
pub fn complex_log_sum_exp(terms: &[(Complex64, f64)]) -> Complex64 {
    let m = terms
        .iter()
        .filter(|(_, w)| *w > 0.0)
        .map(|(z, _)| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return Complex64::new(f64::NEG_INFINITY, 0.0);
    }
    let mut s = Complex64::new(0.0, 0.0);
    for &(z, w) in terms {
        if w > 0.0 {
            s += (z - m).exp() * w;
        }
    }
    s.ln() + m
}

/// ln(2 cosh a + 2 cosh b): log of the four-state block partition function
/// with a = 2*beta*eps and b = 4*beta*D*sin k.
///
/// Evaluated through |b| so the result is bitwise invariant under D -> -D.
#[inline]
pub fn log_block_sum(a: f64, b: f64) -> f64 {
    let babs = b.abs();
    log_sum_exp(&[a, -a, babs, -babs])
}

/// (sinh a / (cosh a + cosh b), cosh a / (cosh a + cosh b)) for a >= 0.
///
/// Numerator and denominator are both scaled by 2 e^(-max(a,|b|)), keeping
/// every exponent nonpositive; safe at beta = 100.
#[inline]
pub fn gibbs_ratios(a: f64, b: f64) -> (f64, f64) {
    debug_assert!(a >= 0.0);
    let babs = b.abs();
    let m = a.max(babs);
    let ep = (a - m).exp();
    let em = (-a - m).exp();
    let fp = (babs - m).exp();
    let fm = (-babs - m).exp();
    let denom = ep + em + fp + fm;
    ((ep - em) / denom, (ep + em) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_cosh_matches_naive_in_range() {
        for &x in &[0.0, 0.3, -1.7, 5.0, -20.0] {
            assert!((log_cosh(x) - x.cosh().ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn log_cosh_large_argument() {
        // naive cosh overflows near 710; the stable form is |x| - ln 2 there
        let x = 5.0e4;
        assert!((log_cosh(x) - (x - LN_2)).abs() < 1e-12);
        assert!(log_cosh(-x).is_finite());
    }

    #[test]
    fn lse_agrees_with_naive() {
        let xs = [0.1f64, -2.0, 1.3, 0.0];
        let naive: f64 = xs.iter().map(|x: &f64| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&xs) - naive).abs() < 1e-14);
    }

    #[test]
    fn lse_extremes() {
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY; 3]), f64::NEG_INFINITY);
        let big = log_sum_exp(&[1000.0, 999.0]);
        assert!((big - (1000.0 + 1.0f64.exp().recip().ln_1p())).abs() < 1e-12);
    }

    #[test]
    fn gibbs_ratios_match_naive() {
        for &(a, b) in &[(0.5, 0.2), (3.0, -2.5), (0.0, 1.0)] {
            let (rs, rc) = gibbs_ratios(a, b);
            let denom = a.cosh() + b.cosh();
            assert!((rs - a.sinh() / denom).abs() < 1e-15);
            assert!((rc - a.cosh() / denom).abs() < 1e-15);
        }
    }

    #[test]
    fn gibbs_ratios_no_overflow() {
        let (rs, rc) = gibbs_ratios(800.0, 400.0);
        assert!((rs - 1.0).abs() < 1e-12 && (rc - 1.0).abs() < 1e-12);
        let (rs, rc) = gibbs_ratios(400.0, 800.0);
        assert!(rs.abs() < 1e-150 && rc.abs() < 1e-150);
    }

    #[test]
    fn complex_lse_matches_naive() {
        let terms = [
            (Complex64::new(0.2, 1.1), 0.7),
            (Complex64::new(-0.4, -2.0), 0.3),
            (Complex64::new(1.0, 0.0), 1.0),
        ];
        let naive: Complex64 = terms.iter().map(|&(z, w)| z.exp() * w).sum();
        let diff = (complex_log_sum_exp(&terms) - naive.ln()).norm();
        assert!(diff < 1e-14);
    }
}
