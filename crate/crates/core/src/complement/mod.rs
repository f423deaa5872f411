//! Complementary pairs: explicit means `K`, `L` with `M(K, L) = M`.
//!
//! All constructions share one shape. For a homogeneous `M` and any positive
//! `u = C^t`, `v = D^t`, scaling both by `f = M(x, y) / M(u, v)` gives
//! `M(u f, v f) = M(x, y)`. The constructors below differ only in how `u`
//! and `v` are chosen. The factor `f` is evaluated directly rather than via
//! the base mean raised to `1 - t`, so the invariance holds to rounding.

pub mod translative;

use std::fmt;

use crate::error::{MeanError, Result};
use crate::means::{logarithmic, Classical, Flags, MeanFn};
use crate::num::{pow, rel_diff};
use crate::projective::{complement_cone, projective_mean, ConeSet};

pub use translative::{
    arithmetic_real, translative_base, translative_conjugate, translative_pair, RealFlags,
    RealMeanFn, TranslativePair,
};

/// Admissible range of the exponent `t`; each constructor uses its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TRange {
    /// `-1 < t < 1`
    Open,
    /// `0 < t < 1`
    Unit,
    /// `-1 <= t <= 1`, `t != 0`
    LogPair,
}

impl fmt::Display for TRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TRange::Open => "(-1, 1)",
            TRange::Unit => "(0, 1)",
            TRange::LogPair => "[-1, 1] without 0",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TParam(f64);

impl TParam {
    pub fn new(t: f64, range: TRange) -> Result<Self> {
        let ok = match range {
            TRange::Open => t > -1.0 && t < 1.0,
            TRange::Unit => t > 0.0 && t < 1.0,
            TRange::LogPair => (-1.0..=1.0).contains(&t) && t != 0.0,
        };
        if ok {
            Ok(TParam(t))
        } else {
            Err(MeanError::Parameter(format!("t = {t} is outside {range}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Wraps a sub-expression label in parentheses when it is compound.
pub(crate) fn wrap(label: &str) -> String {
    if label.contains(':') {
        format!("({label})")
    } else {
        label.to_string()
    }
}

/// A mean-type mapping `(K, L)` together with the mean `M` it is claimed to
/// leave invariant.
#[derive(Clone, Debug)]
pub struct MeanPair {
    k: MeanFn,
    l: MeanFn,
    target: MeanFn,
    t: Option<f64>,
    label: String,
    description: String,
}

impl MeanPair {
    /// An explicitly given pair, e.g. `(A, H)` with target `G`.
    pub fn explicit(k: MeanFn, l: MeanFn, target: MeanFn) -> Self {
        let label = format!(
            "pairof:{}:{}:{}",
            wrap(k.label()),
            wrap(l.label()),
            wrap(target.label())
        );
        let description = format!(
            "K = {}, L = {}, claimed invariant mean M = {}",
            k.label(),
            l.label(),
            target.label()
        );
        MeanPair {
            k,
            l,
            target,
            t: None,
            label,
            description,
        }
    }

    fn built(
        k: MeanFn,
        l: MeanFn,
        target: MeanFn,
        t: f64,
        label: String,
        description: String,
    ) -> Self {
        let k = k.with_label(format!("k:({label})"));
        let l = l.with_label(format!("l:({label})"));
        MeanPair {
            k,
            l,
            target,
            t: Some(t),
            label,
            description,
        }
    }

    pub fn k(&self) -> &MeanFn {
        &self.k
    }

    pub fn l(&self) -> &MeanFn {
        &self.l
    }

    pub fn target(&self) -> &MeanFn {
        &self.target
    }

    pub fn t(&self) -> Option<f64> {
        self.t
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Closed-form description of the construction.
    pub fn description(&self) -> &str {
        &self.description
    }

    /// One step of the mean-type mapping.
    #[inline]
    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        (self.k.eval(x, y), self.l.eval(x, y))
    }

    /// `|M(K, L) - M| / M` at `(x, y)`; infinite if anything is not finite.
    pub fn invariance_residual(&self, x: f64, y: f64) -> f64 {
        let (k, l) = self.apply(x, y);
        let lhs = self.target.eval(k, l);
        let rhs = self.target.eval(x, y);
        let r = rel_diff(lhs, rhs, rhs);
        if r.is_finite() {
            r
        } else {
            f64::INFINITY
        }
    }
}

impl fmt::Display for MeanPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

const SYM_HOM: Flags = Flags {
    symmetric: true,
    homogeneous: true,
    monotone: false,
    strict: false,
};

const SYM_HOM_MONO: Flags = Flags {
    monotone: true,
    ..SYM_HOM
};

/// Flags of `P^t g` for a symmetric homogeneous `g`: whatever `P` has.
fn projective_factor_flags(a: &ConeSet) -> Flags {
    Flags {
        symmetric: a.declared_asymmetric(),
        homogeneous: a.declared_cone(),
        monotone: false,
        strict: false,
    }
}

/// `K = t P_A^t (x - y)/(x^t - y^t)`, `L = t P_{A'}^t (x - y)/(x^t - y^t)`,
/// complementary with respect to the logarithmic mean for
/// `t ∈ [-1, 1] \ {0}`.
///
/// Uses `t (x - y)/(x^t - y^t) = L(x, y) / L(x^t, y^t)`, which is finite
/// on the diagonal. At `t = ±1` the pair degenerates to projections.
pub fn log_pair(t: f64, a: &ConeSet) -> Result<MeanPair> {
    let t = TParam::new(t, TRange::LogPair)?.value();
    let p = projective_mean(a);
    let q = projective_mean(&complement_cone(a));
    let factor = move |x: f64, y: f64| logarithmic(x, y) / logarithmic(pow(x, t), pow(y, t));
    let flags = projective_factor_flags(a);
    let k = MeanFn::new("k", flags, move |x, y| pow(p.eval(x, y), t) * factor(x, y));
    let l = MeanFn::new("l", flags, move |x, y| pow(q.eval(x, y), t) * factor(x, y));
    let label = format!("logpair:{t}:{}", a.label());
    let description = format!(
        "K(x,y) = t P_A(x,y)^t (x - y)/(x^t - y^t), L(x,y) = t P_A'(x,y)^t (x - y)/(x^t - y^t) \
         with A = {}, t = {t}; invariant mean: logarithmic",
        a.label()
    );
    Ok(MeanPair::built(
        k,
        l,
        Classical::Logarithmic.to_mean(),
        t,
        label,
        description,
    ))
}

/// `M_t(x, y) = (M(x, y) / M(x^t, y^t))^{1/(1-t)}` for `-1 < t < 1`.
///
/// Needs `M` symmetric and homogeneous; the result is a mean whenever `M` is
/// also monotone, but that is not checked here.
pub fn self_complement_base(m: &MeanFn, t: f64) -> Result<MeanFn> {
    let t = TParam::new(t, TRange::Open)?.value();
    m.require(SYM_HOM, "the self-complementary base")?;
    let mm = m.clone();
    let e = 1.0 / (1.0 - t);
    Ok(MeanFn::new(
        format!("mt:{}:{t}", wrap(m.label())),
        SYM_HOM,
        move |x, y| {
            let ratio = mm.eval(x, y) / mm.eval(pow(x, t), pow(y, t));
            pow(ratio, e)
        },
    ))
}

/// `K = P_A^t M_t^{1-t}`, `L = P_{A'}^t M_t^{1-t}` for a symmetric,
/// homogeneous, monotone `M` and `-1 < t < 1`.
pub fn xy_pair(m: &MeanFn, t: f64, a: &ConeSet) -> Result<MeanPair> {
    let t = TParam::new(t, TRange::Open)?.value();
    m.require(SYM_HOM_MONO, "the projective pair construction")?;
    let p = projective_mean(a);
    let q = projective_mean(&complement_cone(a));
    let mm = m.clone();
    // M_t^{1-t}
    let factor = move |x: f64, y: f64| mm.eval(x, y) / mm.eval(pow(x, t), pow(y, t));
    let f2 = factor.clone();
    let flags = projective_factor_flags(a);
    let k = MeanFn::new("k", flags, move |x, y| pow(p.eval(x, y), t) * factor(x, y));
    let l = MeanFn::new("l", flags, move |x, y| pow(q.eval(x, y), t) * f2(x, y));
    let label = format!("xy:{}:{t}:{}", wrap(m.label()), a.label());
    let description = format!(
        "K(x,y) = P_A(x,y)^t M_t(x,y)^(1-t), L(x,y) = P_A'(x,y)^t M_t(x,y)^(1-t), \
         M_t = (M(x,y)/M(x^t,y^t))^(1/(1-t)) with M = {}, A = {}, t = {t}",
        m.label(),
        a.label()
    );
    Ok(MeanPair::built(k, l, m.clone(), t, label, description))
}

fn check_general_inputs(m: &MeanFn, t: f64) -> Result<f64> {
    let t = TParam::new(t, TRange::Unit)?.value();
    m.require(SYM_HOM_MONO, "the general construction")?;
    Ok(t)
}

/// `N_t(x, y) = (M(x, y) / M(C^t(x, y), D^t(x, y)))^{1/(1-t)}` for
/// `0 < t < 1`. Not a mean in general; run a mean-ness scan if it matters.
pub fn general_base(m: &MeanFn, c: &MeanFn, d: &MeanFn, t: f64) -> Result<MeanFn> {
    let t = check_general_inputs(m, t)?;
    let (mm, cc, dd) = (m.clone(), c.clone(), d.clone());
    let e = 1.0 / (1.0 - t);
    let flags = Flags {
        symmetric: c.flags().symmetric && d.flags().symmetric,
        homogeneous: c.flags().homogeneous && d.flags().homogeneous,
        monotone: false,
        strict: false,
    };
    Ok(MeanFn::new(
        format!(
            "nt:{}:{}:{}:{t}",
            wrap(m.label()),
            wrap(c.label()),
            wrap(d.label())
        ),
        flags,
        move |x, y| {
            let u = pow(cc.eval(x, y), t);
            let v = pow(dd.eval(x, y), t);
            pow(mm.eval(x, y) / mm.eval(u, v), e)
        },
    ))
}

/// `K_t = C^t N_t^{1-t}`, `L_t = D^t N_t^{1-t}`: means complementary to a
/// symmetric, homogeneous, monotone `M` for arbitrary means `C`, `D` and
/// `0 < t < 1`, whether or not `N_t` itself is a mean.
pub fn general_pair(m: &MeanFn, c: &MeanFn, d: &MeanFn, t: f64) -> Result<MeanPair> {
    let t = check_general_inputs(m, t)?;
    let flags = Flags {
        symmetric: c.flags().symmetric && d.flags().symmetric,
        homogeneous: c.flags().homogeneous && d.flags().homogeneous,
        monotone: false,
        strict: false,
    };
    let component = |first: bool| {
        let (mm, cc, dd) = (m.clone(), c.clone(), d.clone());
        MeanFn::new("", flags, move |x, y| {
            let u = pow(cc.eval(x, y), t);
            let v = pow(dd.eval(x, y), t);
            let f = mm.eval(x, y) / mm.eval(u, v);
            if first {
                u * f
            } else {
                v * f
            }
        })
    };
    let label = format!(
        "pair:{}:{}:{}:{t}",
        wrap(m.label()),
        wrap(c.label()),
        wrap(d.label())
    );
    let description = format!(
        "K(x,y) = C(x,y)^t N_t(x,y)^(1-t), L(x,y) = D(x,y)^t N_t(x,y)^(1-t), \
         N_t = (M(x,y)/M(C(x,y)^t, D(x,y)^t))^(1/(1-t)) with M = {}, C = {}, D = {}, t = {t}",
        m.label(),
        c.label(),
        d.label()
    );
    Ok(MeanPair::built(
        component(true),
        component(false),
        m.clone(),
        t,
        label,
        description,
    ))
}
