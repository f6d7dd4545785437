//! Numerical toolkit for the tripartite parity-CHSH inequality: tight
//! quantum bounds from correlation-tensor singular values, device-independent
//! randomness certification, and monogamy verification on four-qubit states.

// The dense kernels contract small fixed-size tensors; index loops mirror the
// summation notation and stay readable where iterator chains would not.
#![allow(clippy::needless_range_loop)]

pub mod bell;
pub mod error;
pub mod linalg;
pub mod monogamy;
pub mod npa;
pub mod optim;
pub mod pauli;
pub mod randomness;

pub use error::{Error, Result};

/// Formats a float to `digits` significant digits, choosing plain decimal
/// notation when the exponent is moderate and scientific notation otherwise,
/// and trimming trailing zeros either way (the behavior of printf's %g).
/// Keeps CSV and CLI output compact and reproducible.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    // Exponent after rounding to the requested precision, so values like
    // 0.9999999 at 3 digits format as "1" rather than "1.000".
    let rounded: f64 = format!("{:.*e}", digits - 1, x)
        .parse()
        .expect("valid float");
    let exp = rounded.abs().log10().floor() as i32;
    if (-4..digits as i32).contains(&exp) {
        let frac = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{rounded:.frac$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{:.*e}", digits - 1, rounded);
        let (mantissa, e) = s.split_once('e').expect("exponent present");
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{e}")
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_sig;

    #[test]
    fn fmt_sig_formats_like_g() {
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(0.125, 12), "0.125");
        assert_eq!(fmt_sig(3.0, 12), "3");
        assert_eq!(fmt_sig(-2.5, 6), "-2.5");
        assert_eq!(fmt_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(fmt_sig(2.0_f64.sqrt(), 12), "1.41421356237");
        assert_eq!(fmt_sig(1e-7, 12), "1e-7");
        assert_eq!(fmt_sig(-1.5e13, 6), "-1.5e13");
        assert_eq!(fmt_sig(123456.0, 12), "123456");
        assert_eq!(fmt_sig(0.9999999, 3), "1");
        assert_eq!(fmt_sig(0.0001, 12), "0.0001");
        assert_eq!(fmt_sig(0.00001, 12), "1e-5");
    }
}
