//! Means on the whole real line and the translative counterpart of the
//! projective pair construction.

use std::fmt;
use std::sync::Arc;

use super::{wrap, TParam, TRange};
use crate::error::{MeanError, Result};
use crate::means::MeanFn;

/// Largest `|x|` accepted by [`translative_conjugate`]; `e^x` overflows
/// shortly beyond.
pub const EXP_ARG_LIMIT: f64 = 700.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RealFlags {
    pub symmetric: bool,
    pub translative: bool,
    pub monotone: bool,
}

type RealEvaluator = dyn Fn(f64, f64) -> Result<f64> + Send + Sync;

/// A mean of two real arguments. Evaluation can fail with a range error.
#[derive(Clone)]
pub struct RealMeanFn {
    eval: Arc<RealEvaluator>,
    flags: RealFlags,
    label: String,
}

impl RealMeanFn {
    pub fn new<F>(label: impl Into<String>, flags: RealFlags, f: F) -> Self
    where
        F: Fn(f64, f64) -> Result<f64> + Send + Sync + 'static,
    {
        RealMeanFn {
            eval: Arc::new(f),
            flags,
            label: label.into(),
        }
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        (self.eval)(x, y)
    }

    pub fn flags(&self) -> RealFlags {
        self.flags
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for RealMeanFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealMeanFn")
            .field("label", &self.label)
            .field("flags", &self.flags)
            .finish()
    }
}

/// `(x + y) / 2` on the reals.
pub fn arithmetic_real() -> RealMeanFn {
    let flags = RealFlags {
        symmetric: true,
        translative: true,
        monotone: true,
    };
    RealMeanFn::new("arithmetic", flags, |x, y| Ok(0.5 * x + 0.5 * y))
}

/// `N(x, y) = log M(e^x, e^y)`. Translative exactly when `M` is homogeneous.
///
/// Arguments beyond `±700` are rejected. For homogeneous `M` both
/// exponents are shifted by their midpoint before exponentiating.
pub fn translative_conjugate(m: &MeanFn) -> RealMeanFn {
    let mf = m.flags();
    let flags = RealFlags {
        symmetric: mf.symmetric,
        translative: mf.homogeneous,
        monotone: mf.monotone,
    };
    let mm = m.clone();
    let homogeneous = mf.homogeneous;
    RealMeanFn::new(format!("conj:{}", wrap(m.label())), flags, move |x, y| {
        if !(x.abs() <= EXP_ARG_LIMIT && y.abs() <= EXP_ARG_LIMIT) {
            return Err(MeanError::Range(format!(
                "conjugate arguments must lie in [-{EXP_ARG_LIMIT}, {EXP_ARG_LIMIT}], got ({x}, {y})"
            )));
        }
        Ok(if homogeneous {
            // x - c = d, y - c = -d
            let c = 0.5 * x + 0.5 * y;
            let d = 0.5 * (x - y);
            c + mm.eval(d.exp(), (-d).exp()).ln()
        } else {
            mm.eval(x.exp(), y.exp()).ln()
        })
    })
}

/// A pair `(K, L)` of real-argument means with its invariant mean.
#[derive(Clone, Debug)]
pub struct TranslativePair {
    pub k: RealMeanFn,
    pub l: RealMeanFn,
    pub target: RealMeanFn,
    pub t: f64,
}

impl TranslativePair {
    pub fn apply(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        Ok((self.k.eval(x, y)?, self.l.eval(x, y)?))
    }

    /// `|N(K, L) - N|` at `(x, y)`, absolute since values may be zero.
    pub fn invariance_residual(&self, x: f64, y: f64) -> Result<f64> {
        let (k, l) = self.apply(x, y)?;
        Ok((self.target.eval(k, l)? - self.target.eval(x, y)?).abs())
    }
}

fn require_translative(n: &RealMeanFn) -> Result<()> {
    let f = n.flags();
    if f.symmetric && f.translative && f.monotone {
        Ok(())
    } else {
        Err(MeanError::Domain(format!(
            "`{}` must be declared symmetric, translative and monotone",
            n.label()
        )))
    }
}

/// `N_t(x, y) = (N(x, y) - N(tx, ty)) / (1 - t)` for `-1 < t < 1`.
pub fn translative_base(n: &RealMeanFn, t: f64) -> Result<RealMeanFn> {
    let t = TParam::new(t, TRange::Open)?.value();
    require_translative(n)?;
    let nn = n.clone();
    Ok(RealMeanFn::new(
        format!("nt:{}:{t}", wrap(n.label())),
        RealFlags {
            symmetric: true,
            translative: true,
            monotone: false,
        },
        move |x, y| Ok((nn.eval(x, y)? - nn.eval(t * x, t * y)?) / (1.0 - t)),
    ))
}

/// `K_t = t x + (1 - t) N_t`, `L_t = t y + (1 - t) N_t`, which satisfy
/// `N(K_t, L_t) = N` for monotone, translative, symmetric `N`.
///
/// Evaluated through the translative identity around the midpoint, which
/// keeps every argument of `N` within `|t| max(|x|, |y|)`.
pub fn translative_pair(n: &RealMeanFn, t: f64) -> Result<TranslativePair> {
    let t = TParam::new(t, TRange::Open)?.value();
    require_translative(n)?;
    let flags = RealFlags {
        symmetric: false,
        translative: true,
        monotone: false,
    };
    // With d = (y - x)/2 translativity gives
    // N(tx, ty) = t(x + y)/2 + N(-td, td), hence
    // K = N(x, y) - td - N(-td, td) and L = N(x, y) + td - N(-td, td).
    let split = move |n: &RealMeanFn, x: f64, y: f64| -> Result<(f64, f64)> {
        let td = t * (0.5 * (y - x));
        Ok((n.eval(x, y)? - n.eval(-td, td)?, td))
    };
    let (n1, n2) = (n.clone(), n.clone());
    let k = RealMeanFn::new(format!("k:{t}"), flags, move |x, y| {
        let (base, td) = split(&n1, x, y)?;
        Ok(base - td)
    });
    let l = RealMeanFn::new(format!("l:{t}"), flags, move |x, y| {
        let (base, td) = split(&n2, x, y)?;
        Ok(base + td)
    });
    Ok(TranslativePair {
        k,
        l,
        target: n.clone(),
        t,
    })
}
