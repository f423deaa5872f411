//! Floating-point helpers shared by the mean evaluators.
//!
//! Everything here works in the log domain so that arguments spanning many
//! decades neither overflow nor lose their relative precision.

/// Relative distance below which the difference-quotient means switch to
/// their midpoint series.
pub const NEAR_DIAGONAL: f64 = 1e-8;

/// `x^t` for positive `x`, computed as `exp(t ln x)`.
#[inline]
pub fn pow(x: f64, t: f64) -> f64 {
    if t == 1.0 {
        x
    } else {
        (t * x.ln()).exp()
    }
}

/// `ln(x / y)` for positive arguments, accurate when `x` and `y` are close
/// and safe when their quotient would overflow.
#[inline]
pub fn log_ratio(x: f64, y: f64) -> f64 {
    let q = x / y;
    if q.is_normal() {
        if (q - 1.0).abs() < 0.5 {
            ((x - y) / y).ln_1p()
        } else {
            q.ln()
        }
    } else {
        x.ln() - y.ln()
    }
}

/// `ln |e^a - 1|`, finite for every nonzero finite `a`.
#[inline]
pub fn ln_abs_expm1(a: f64) -> f64 {
    if a > 1.0 {
        a + (-(-a).exp()).ln_1p()
    } else {
        a.exp_m1().abs().ln()
    }
}

/// `(e^a - 1) / a`, or its logarithm where the quotient would overflow.
/// Returns `(value, is_log)`.
#[inline]
pub fn expm1_quotient(a: f64) -> (f64, bool) {
    if a.abs() < 700.0 {
        (a.exp_m1() / a, false)
    } else {
        (ln_abs_expm1(a) - a.abs().ln(), true)
    }
}

/// `y e^a` for positive `y`, finite whenever the product is.
#[inline]
pub fn scale_exp(y: f64, a: f64) -> f64 {
    if a.abs() < 700.0 {
        y * a.exp()
    } else {
        (y.ln() + a).exp()
    }
}

/// `ln(1 + e^a)` without overflow.
#[inline]
pub fn softplus(a: f64) -> f64 {
    a.max(0.0) + (-a.abs()).exp().ln_1p()
}

/// True when `x` and `y` are within the near-diagonal band.
#[inline]
pub fn near_diagonal(x: f64, y: f64) -> bool {
    (x - y).abs() <= NEAR_DIAGONAL * x.max(y)
}

/// Midpoint `(x + y) / 2` and half relative difference `(x - y) / (x + y)`.
#[inline]
pub fn midpoint_offset(x: f64, y: f64) -> (f64, f64) {
    let a = 0.5 * x + 0.5 * y;
    (a, (x - y) / (x + y))
}

/// Relative discrepancy `|a - b| / scale`.
#[inline]
pub fn rel_diff(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.abs()
}
