//! Means of `n` variables, and why the two-variable construction does not
//! carry over: the invariance survives but mean-ness does not.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complement::{wrap, TParam, TRange};
use crate::error::{MeanError, Result};
use crate::num::{pow, rel_diff};
use crate::verify::{log_grid, log_uniform, scan, ScanConfig, ScanReport};

type NaryEvaluator = dyn Fn(&[f64]) -> f64 + Send + Sync;

#[derive(Clone)]
pub struct NaryMeanFn {
    eval: Arc<NaryEvaluator>,
    arity: usize,
    label: String,
}

impl NaryMeanFn {
    pub fn new<F>(label: impl Into<String>, arity: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        NaryMeanFn {
            eval: Arc::new(f),
            arity,
            label: label.into(),
        }
    }

    /// Panics if `xs.len()` differs from the arity.
    pub fn eval(&self, xs: &[f64]) -> f64 {
        assert_eq!(
            xs.len(),
            self.arity,
            "arity mismatch evaluating {}",
            self.label
        );
        (self.eval)(xs)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn arithmetic(n: usize) -> Self {
        NaryMeanFn::new("arithmetic", n, |xs| {
            xs.iter().sum::<f64>() / xs.len() as f64
        })
    }

    pub fn geometric(n: usize) -> Self {
        NaryMeanFn::new("geometric", n, |xs| {
            (xs.iter().map(|x| x.ln()).sum::<f64>() / xs.len() as f64).exp()
        })
    }
}

impl fmt::Debug for NaryMeanFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NaryMeanFn")
            .field("label", &self.label)
            .field("arity", &self.arity)
            .finish()
    }
}

fn check_arities(m: &NaryMeanFn, cs: &[NaryMeanFn]) -> Result<()> {
    if m.arity < 2 {
        return Err(MeanError::Domain(format!(
            "arity must be at least 2, got {}",
            m.arity
        )));
    }
    if cs.len() != m.arity {
        return Err(MeanError::Domain(format!(
            "need {} inner means, got {}",
            m.arity,
            cs.len()
        )));
    }
    if let Some(c) = cs.iter().find(|c| c.arity != m.arity) {
        return Err(MeanError::Domain(format!(
            "`{}` has arity {}, expected {}",
            c.label, c.arity, m.arity
        )));
    }
    Ok(())
}

/// `M(x) / M(C_1(x)^t, ..., C_n(x)^t)`, i.e. `N_t^{1-t}`, together with the
/// powered inner means.
fn scale_factor(m: &NaryMeanFn, cs: &[NaryMeanFn], t: f64, xs: &[f64]) -> (f64, Vec<f64>) {
    let powered: Vec<f64> = cs.iter().map(|c| pow(c.eval(xs), t)).collect();
    (m.eval(xs) / m.eval(&powered), powered)
}

/// `N_t = (M / M(C_1^t, ..., C_n^t))^{1/(1-t)}` for `0 < t < 1`.
pub fn nary_general_base(m: &NaryMeanFn, cs: &[NaryMeanFn], t: f64) -> Result<NaryMeanFn> {
    let t = TParam::new(t, TRange::Unit)?.value();
    check_arities(m, cs)?;
    let (mm, cc) = (m.clone(), cs.to_vec());
    let inner: Vec<String> = cs.iter().map(|c| wrap(&c.label)).collect();
    Ok(NaryMeanFn::new(
        format!("nt:{}:[{}]:{t}", wrap(&m.label), inner.join(",")),
        m.arity,
        move |xs| pow(scale_factor(&mm, &cc, t, xs).0, 1.0 / (1.0 - t)),
    ))
}

/// The functions `K_i = C_i^t N_t^{1-t}`, which satisfy
/// `M(K_1, ..., K_n) = M` but need not be means when `n > 2`.
pub fn nary_general_tuple(m: &NaryMeanFn, cs: &[NaryMeanFn], t: f64) -> Result<Vec<NaryMeanFn>> {
    let t = TParam::new(t, TRange::Unit)?.value();
    check_arities(m, cs)?;
    Ok((0..cs.len())
        .map(|i| {
            let (mm, cc) = (m.clone(), cs.to_vec());
            NaryMeanFn::new(format!("k{}", i + 1), m.arity, move |xs| {
                let (f, powered) = scale_factor(&mm, &cc, t, xs);
                powered[i] * f
            })
        })
        .collect())
}

/// `|M(K_1(x), ..., K_n(x)) - M(x)| / M(x)`.
pub fn nary_invariance_residual(m: &NaryMeanFn, ks: &[NaryMeanFn], xs: &[f64]) -> f64 {
    let images: Vec<f64> = ks.iter().map(|k| k.eval(xs)).collect();
    let rhs = m.eval(xs);
    rel_diff(m.eval(&images), rhs, rhs)
}

/// `M = C_1 = A`, `C_2 = ... = C_n = G`.
pub fn counterexample_config(n: usize) -> (NaryMeanFn, Vec<NaryMeanFn>) {
    let a = NaryMeanFn::arithmetic(n);
    let mut cs = vec![a.clone()];
    cs.extend(std::iter::repeat_n(NaryMeanFn::geometric(n), n - 1));
    (a, cs)
}

/// `K_t(1, x, ..., x) / max(1, x, ..., x)` for the configuration of
/// [`counterexample_config`]. Exceeds 1 for large `x` and tends to `n - 1`.
pub fn counterexample_ratio(n: usize, t: f64, x: f64) -> Result<f64> {
    if n < 3 {
        return Err(MeanError::Parameter(format!("need n >= 3, got {n}")));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(MeanError::Parameter(format!("x must be positive, got {x}")));
    }
    let (m, cs) = counterexample_config(n);
    let k1 = nary_general_tuple(&m, &cs, t)?.swap_remove(0);
    let mut xs = vec![x; n];
    xs[0] = 1.0;
    Ok(k1.eval(&xs) / x.max(1.0))
}

/// Mean-ness scan for `n`-ary functions: the ray `lo * (1, x, ..., x)` for
/// `x` log-spaced on `[1, hi/lo]`, its reflection `hi * (1, 1/x, ...)`, and
/// `10 * points^2` log-uniform random vectors. Witness is the full vector.
pub fn check_nary_meanness(f: &NaryMeanFn, cfg: &ScanConfig) -> ScanReport {
    let n = f.arity;
    let ray = log_grid(
        1.0,
        cfg.hi / cfg.lo,
        cfg.points_per_axis * cfg.points_per_axis,
    );
    let mut vectors: Vec<Vec<f64>> = Vec::new();
    for &x in &ray {
        let mut up = vec![cfg.lo * x; n];
        up[0] = cfg.lo;
        vectors.push(up);
        let mut down = vec![cfg.hi / x; n];
        down[0] = cfg.hi;
        vectors.push(down);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..10 * cfg.points_per_axis * cfg.points_per_axis {
        vectors.push(
            (0..n)
                .map(|_| log_uniform(&mut rng, cfg.lo, cfg.hi))
                .collect(),
        );
    }
    scan(
        "mean",
        cfg.rel_tol,
        vectors.len(),
        |i| {
            let xs = &vectors[i];
            let v = f.eval(xs);
            if !(v.is_finite() && v > 0.0) {
                return f64::INFINITY;
            }
            let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = xs.iter().cloned().fold(0.0, f64::max);
            ((lo - v) / lo).max((v - hi) / hi)
        },
        |i| vectors[i].clone(),
    )
}
