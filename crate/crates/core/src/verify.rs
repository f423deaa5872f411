//! Numeric verification scans: mean-ness, trace criteria, monotonicity,
//! invariance and declared flags.
//!
//! Every scan evaluates a deterministic sample set (a log-spaced grid, a
//! seeded log-uniform random supplement and probes at extreme ratios) and
//! reduces it to the single worst signed violation. Violations are relative,
//! so a report passes exactly when `worst_violation <= rel_tol`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complement::MeanPair;
use crate::error::{MeanError, Result};
use crate::means::{Flags, MeanFn};

/// Scaling factors used by the homogeneity checks.
pub const LAMBDAS: [f64; 4] = [1e-3, 1.0, 7.5, 1e3];

#[derive(Clone, Debug, PartialEq)]
pub struct ScanConfig {
    pub lo: f64,
    pub hi: f64,
    pub points_per_axis: usize,
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            lo: 1e-6,
            hi: 1e6,
            points_per_axis: 64,
            rel_tol: 1e-11,
            seed: 0,
        }
    }
}

impl ScanConfig {
    pub fn new(lo: f64, hi: f64, points_per_axis: usize, rel_tol: f64, seed: u64) -> Result<Self> {
        let cfg = ScanConfig {
            lo,
            hi,
            points_per_axis,
            rel_tol,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0 && self.lo < self.hi && self.hi.is_finite()) {
            return Err(MeanError::Parameter(format!(
                "scan domain must satisfy 0 < lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.points_per_axis < 8 {
            return Err(MeanError::Parameter(format!(
                "need at least 8 points per axis, got {}",
                self.points_per_axis
            )));
        }
        if self.rel_tol.is_nan() || self.rel_tol < 0.0 {
            return Err(MeanError::Parameter(format!(
                "tolerance must be nonnegative, got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }

    pub fn with_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn grid(&self) -> Vec<f64> {
        log_grid(self.lo, self.hi, self.points_per_axis)
    }

    /// All `points_per_axis^2` grid pairs, row-major in `x`.
    pub fn grid_pairs(&self) -> Vec<(f64, f64)> {
        let g = self.grid();
        g.iter()
            .flat_map(|&x| g.iter().map(move |&y| (x, y)))
            .collect()
    }

    /// `10 * points_per_axis^2` log-uniform pairs drawn from `seed`.
    pub fn random_pairs(&self) -> Vec<(f64, f64)> {
        let n = 10 * self.points_per_axis * self.points_per_axis;
        random_pairs(self.seed, n, self.lo, self.hi)
    }

    /// Pairs with ratio `10^k`, `k = 1..=12`, in both orders, centred on the
    /// geometric centre of the domain. Ratios wider than the domain are
    /// skipped.
    pub fn extreme_pairs(&self) -> Vec<(f64, f64)> {
        let centre = (self.lo.ln() + self.hi.ln()) / 2.0;
        let span = self.hi.ln() - self.lo.ln();
        let mut out = Vec::new();
        for k in 1..=12 {
            let half = k as f64 * std::f64::consts::LN_10 / 2.0;
            if 2.0 * half > span * (1.0 + 1e-12) {
                break;
            }
            let big = (centre + half).exp().min(self.hi);
            let small = (centre - half).exp().max(self.lo);
            out.push((big, small));
            out.push((small, big));
        }
        out
    }

    /// Grid, random supplement and extreme probes, in that order.
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        let mut v = self.grid_pairs();
        v.extend(self.random_pairs());
        v.extend(self.extreme_pairs());
        v
    }

    /// Log-spaced trace arguments covering every ratio the 2-D domain
    /// contains, `[lo/hi, hi/lo]`, with `points_per_axis^2` points.
    pub fn trace_points(&self) -> Vec<f64> {
        let r = self.hi / self.lo;
        log_grid(1.0 / r, r, self.points_per_axis * self.points_per_axis)
    }
}

/// `n >= 2` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let (a, b) = (lo.ln(), hi.ln());
    (a + (b - a) * rng.gen::<f64>()).exp()
}

/// `n` pairs with both coordinates log-uniform on `[lo, hi]`.
pub fn random_pairs(seed: u64, n: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (log_uniform(&mut rng, lo, hi), log_uniform(&mut rng, lo, hi)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub check: String,
    pub passed: bool,
    pub worst_violation: f64,
    pub witness: Vec<f64>,
    #[serde(rename = "samples")]
    pub samples_checked: usize,
    pub rel_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ScanReport {
    /// Starts a sequential report; feed it with [`observe`](Self::observe).
    pub fn start(check: &str, rel_tol: f64) -> Self {
        ScanReport {
            check: check.to_string(),
            passed: true,
            worst_violation: f64::NEG_INFINITY,
            witness: Vec::new(),
            samples_checked: 0,
            rel_tol,
            detail: None,
        }
    }

    pub fn observe(&mut self, violation: f64, witness: &[f64]) {
        let v = if violation.is_nan() {
            f64::INFINITY
        } else {
            violation
        };
        self.samples_checked += 1;
        if v > self.worst_violation || self.witness.is_empty() {
            self.worst_violation = v;
            self.witness = witness.to_vec();
        }
    }

    pub fn finish(mut self) -> Self {
        if self.samples_checked == 0 {
            self.worst_violation = 0.0;
        }
        self.passed = self.worst_violation <= self.rel_tol;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// Evaluates `violation` for every index in parallel and keeps the worst.
/// Ties go to the lowest index, so the result does not depend on how the
/// work is split.
pub fn scan<V, W>(check: &str, rel_tol: f64, n: usize, violation: V, witness: W) -> ScanReport
where
    V: Fn(usize) -> f64 + Sync,
    W: Fn(usize) -> Vec<f64>,
{
    let (worst, idx) = (0..n)
        .into_par_iter()
        .map(|i| {
            let v = violation(i);
            (if v.is_nan() { f64::INFINITY } else { v }, i)
        })
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let mut report = ScanReport::start(check, rel_tol);
    report.samples_checked = n;
    if n > 0 {
        report.worst_violation = worst;
        report.witness = witness(idx);
    }
    report.finish()
}

/// Signed relative excursion of `value` outside `[min(x,y), max(x,y)]`;
/// negative inside the interval.
pub fn mean_excursion(x: f64, y: f64, value: f64) -> f64 {
    if !(value.is_finite() && value > 0.0) {
        return f64::INFINITY;
    }
    let (lo, hi) = (x.min(y), x.max(y));
    ((lo - value) / lo).max((value - hi) / hi)
}

fn pair_witness(pairs: &[(f64, f64)]) -> impl Fn(usize) -> Vec<f64> + '_ {
    move |i| vec![pairs[i].0, pairs[i].1]
}

pub fn check_meanness(f: &MeanFn, cfg: &ScanConfig) -> ScanReport {
    check_meanness_on(f, &cfg.pairs(), cfg.rel_tol)
}

pub fn check_meanness_on(f: &MeanFn, pairs: &[(f64, f64)], rel_tol: f64) -> ScanReport {
    scan(
        "mean",
        rel_tol,
        pairs.len(),
        |i| {
            let (x, y) = pairs[i];
            mean_excursion(x, y, f.eval(x, y))
        },
        pair_witness(pairs),
    )
}

/// Divided-difference criterion on the trace: `0 <= (m(x) - 1)/(x - 1) <= 1`
/// for `x != 1`, and `m(1) = 1`.
pub fn check_trace_meanness(f: &MeanFn, cfg: &ScanConfig) -> Result<ScanReport> {
    f.require(
        Flags {
            homogeneous: true,
            ..Flags::NONE
        },
        "the trace criterion",
    )?;
    let mut xs = cfg.trace_points();
    xs.retain(|x| (x - 1.0).abs() > 1e-9);
    xs.push(1.0);
    Ok(scan(
        "trace",
        cfg.rel_tol,
        xs.len(),
        |i| {
            let x = xs[i];
            let m = f.eval(x, 1.0);
            if !(m.is_finite() && m > 0.0) {
                return f64::INFINITY;
            }
            if x == 1.0 {
                return (m - 1.0).abs();
            }
            let dd = (m - 1.0) / (x - 1.0);
            (-dd).max(dd - 1.0)
        },
        |i| vec![xs[i], 1.0],
    ))
}

/// Adjacent-point check that the trace is nondecreasing on a log grid.
/// A pass certifies monotonicity only for symmetric functions; a failure
/// disproves it for any homogeneous one.
pub fn check_monotone_trace(f: &MeanFn, cfg: &ScanConfig) -> Result<ScanReport> {
    f.require(
        Flags {
            homogeneous: true,
            ..Flags::NONE
        },
        "the monotone-trace check",
    )?;
    let xs = cfg.trace_points();
    let m: Vec<f64> = xs.par_iter().map(|&x| f.eval(x, 1.0)).collect();
    Ok(scan(
        "monotone",
        cfg.rel_tol,
        xs.len() - 1,
        |i| (m[i] - m[i + 1]) / m[i + 1],
        |i| vec![xs[i], xs[i + 1]],
    ))
}

/// `M(K(x,y), L(x,y)) = M(x,y)` over the sample set.
pub fn check_invariance(pair: &MeanPair, cfg: &ScanConfig) -> ScanReport {
    check_invariance_on(pair, &cfg.pairs(), cfg.rel_tol)
}

pub fn check_invariance_on(pair: &MeanPair, pairs: &[(f64, f64)], rel_tol: f64) -> ScanReport {
    scan(
        "invariance",
        rel_tol,
        pairs.len(),
        |i| {
            let (x, y) = pairs[i];
            pair.invariance_residual(x, y)
        },
        pair_witness(pairs),
    )
}

pub fn check_symmetry(f: &MeanFn, cfg: &ScanConfig) -> ScanReport {
    let pairs = cfg.pairs();
    scan(
        "symmetric",
        cfg.rel_tol,
        pairs.len(),
        |i| {
            let (x, y) = pairs[i];
            (f.eval(x, y) - f.eval(y, x)).abs() / x.max(y)
        },
        pair_witness(&pairs),
    )
}

/// `F(λx, λy) = λ F(x, y)` for each `λ` in [`LAMBDAS`]; witness `[x, y, λ]`.
pub fn check_homogeneity(f: &MeanFn, cfg: &ScanConfig) -> ScanReport {
    let pairs = cfg.pairs();
    let k = LAMBDAS.len();
    scan(
        "homogeneous",
        cfg.rel_tol,
        pairs.len() * k,
        |i| {
            let (x, y) = pairs[i / k];
            let l = LAMBDAS[i % k];
            (f.eval(l * x, l * y) - l * f.eval(x, y)).abs() / (l * x.max(y))
        },
        |i| vec![pairs[i / k].0, pairs[i / k].1, LAMBDAS[i % k]],
    )
}

/// Pair dominance: `x1 <= x2, y1 <= y2` implies `F(x1,y1) <= F(x2,y2)`.
/// Compares grid neighbours along both axes and random pairs with their
/// log-uniform upward perturbations. Witness `[x1, y1, x2, y2]`.
pub fn check_monotone(f: &MeanFn, cfg: &ScanConfig) -> ScanReport {
    let g = cfg.grid();
    let n = g.len();
    let mut comparisons: Vec<[f64; 4]> = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            if i + 1 < n {
                comparisons.push([g[i], g[j], g[i + 1], g[j]]);
            }
            if j + 1 < n {
                comparisons.push([g[i], g[j], g[i], g[j + 1]]);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6d6f_6e6f);
    for (x, y) in cfg.random_pairs() {
        let dx = log_uniform(&mut rng, 1e-9, 1.0) * rng.gen_range(0..2) as f64;
        let dy = log_uniform(&mut rng, 1e-9, 1.0) * rng.gen_range(0..2) as f64;
        comparisons.push([x, y, x * (1.0 + dx), y * (1.0 + dy)]);
    }
    scan(
        "monotone",
        cfg.rel_tol,
        comparisons.len(),
        |i| {
            let [x1, y1, x2, y2] = comparisons[i];
            let (a, b) = (f.eval(x1, y1), f.eval(x2, y2));
            (a - b) / b
        },
        |i| comparisons[i].to_vec(),
    )
}

/// Strict inequalities `min < F < max` on off-diagonal pairs whose ratio
/// lies in `[1.01, 1e3]`; outside that band distinct values may round onto
/// the bounds. A sample on or past a bound scores `1`.
pub fn check_strict(f: &MeanFn, cfg: &ScanConfig) -> ScanReport {
    let pairs: Vec<(f64, f64)> = cfg
        .pairs()
        .into_iter()
        .filter(|&(x, y)| {
            let r = x.max(y) / x.min(y);
            (1.01..=1e3).contains(&r)
        })
        .collect();
    scan(
        "strict",
        cfg.rel_tol,
        pairs.len(),
        |i| {
            let (x, y) = pairs[i];
            let (lo, hi) = (x.min(y), x.max(y));
            let v = f.eval(x, y);
            if v > lo && v < hi {
                -(v - lo).min(hi - v) / hi
            } else {
                1.0
            }
        },
        pair_witness(&pairs),
    )
}

/// Validates each declared flag in the order symmetric, homogeneous,
/// monotone, strict, and returns the first report that fails. `detail`
/// names the flag.
pub fn check_flags(f: &MeanFn, cfg: &ScanConfig) -> ScanReport {
    let flags = f.flags();
    type Check = fn(&MeanFn, &ScanConfig) -> ScanReport;
    let checks: [(bool, &str, Check); 4] = [
        (flags.symmetric, "symmetric", check_symmetry),
        (flags.homogeneous, "homogeneous", check_homogeneity),
        (flags.monotone, "monotone", check_monotone),
        (flags.strict, "strict", check_strict),
    ];
    let mut combined = ScanReport::start("flags", cfg.rel_tol);
    let mut checked = Vec::new();
    for (declared, name, check) in checks {
        if !declared {
            continue;
        }
        let r = check(f, cfg);
        if !r.passed {
            return ScanReport {
                check: "flags".into(),
                ..r
            }
            .with_detail(name);
        }
        checked.push(name);
        combined.samples_checked += r.samples_checked;
        if r.worst_violation > combined.worst_violation || combined.witness.is_empty() {
            combined.worst_violation = r.worst_violation;
            combined.witness = r.witness;
        }
    }
    let mut out = combined.finish();
    out.detail = Some(checked.join(","));
    out
}
