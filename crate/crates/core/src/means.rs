//! The mean abstraction and the classical catalog.

use std::fmt;
use std::sync::Arc;

use crate::error::{MeanError, Result};
use crate::num::{expm1_quotient, log_ratio, midpoint_offset, near_diagonal, scale_exp, softplus};

/// Properties a mean claims to have. These are declarations; the
/// [`verify`](crate::verify) scans are what check them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub symmetric: bool,
    pub homogeneous: bool,
    pub monotone: bool,
    pub strict: bool,
}

impl Flags {
    pub const NONE: Flags = Flags {
        symmetric: false,
        homogeneous: false,
        monotone: false,
        strict: false,
    };

    pub const ALL: Flags = Flags {
        symmetric: true,
        homogeneous: true,
        monotone: true,
        strict: true,
    };

    /// Symmetric, homogeneous and monotone but not strict (min, max).
    pub const LATTICE: Flags = Flags {
        strict: false,
        ..Flags::ALL
    };

    /// Homogeneous and monotone only (the coordinate projections).
    pub const PROJECTION: Flags = Flags {
        symmetric: false,
        homogeneous: true,
        monotone: true,
        strict: false,
    };
}

type Evaluator = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// A bivariate function of positive arguments, carrying declared property
/// flags and a label.
///
/// Cloning is cheap: the evaluator is shared. Evaluators must be pure, so a
/// `MeanFn` can be evaluated from any number of threads.
#[derive(Clone)]
pub struct MeanFn {
    eval: Arc<Evaluator>,
    flags: Flags,
    label: String,
}

impl MeanFn {
    pub fn new<F>(label: impl Into<String>, flags: Flags, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        MeanFn {
            eval: Arc::new(f),
            flags,
            label: label.into(),
        }
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Same evaluator, different declared flags.
    pub fn with_flags(mut self, flags: Flags) -> Self {
        self.flags = flags;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Errors unless every property set in `needed` is declared.
    pub fn require(&self, needed: Flags, what: &str) -> Result<()> {
        let have = self.flags;
        let missing: Vec<&str> = [
            (needed.symmetric && !have.symmetric, "symmetric"),
            (needed.homogeneous && !have.homogeneous, "homogeneous"),
            (needed.monotone && !have.monotone, "monotone"),
            (needed.strict && !have.strict, "strict"),
        ]
        .into_iter()
        .filter_map(|(miss, name)| miss.then_some(name))
        .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(MeanError::Domain(format!(
                "{what} needs a {} mean, `{}` is not declared so",
                missing.join(", "),
                self.label
            )))
        }
    }
}

impl fmt::Debug for MeanFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeanFn")
            .field("label", &self.label)
            .field("flags", &self.flags)
            .finish()
    }
}

impl fmt::Display for MeanFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Classical {
    Arithmetic,
    Geometric,
    Harmonic,
    Logarithmic,
    Min,
    Max,
    Proj1,
    Proj2,
    /// Power mean of order `p`; `p = 0` is the geometric mean.
    Power(f64),
}

impl Classical {
    /// The parameter-free members of the catalog.
    pub const BASIC: [Classical; 8] = [
        Classical::Arithmetic,
        Classical::Geometric,
        Classical::Harmonic,
        Classical::Logarithmic,
        Classical::Min,
        Classical::Max,
        Classical::Proj1,
        Classical::Proj2,
    ];

    pub fn name(&self) -> String {
        match self {
            Classical::Arithmetic => "arithmetic".into(),
            Classical::Geometric => "geometric".into(),
            Classical::Harmonic => "harmonic".into(),
            Classical::Logarithmic => "logarithmic".into(),
            Classical::Min => "min".into(),
            Classical::Max => "max".into(),
            Classical::Proj1 => "proj1".into(),
            Classical::Proj2 => "proj2".into(),
            Classical::Power(p) => format!("power:{p}"),
        }
    }

    pub fn parse(name: &str) -> Result<Classical> {
        Ok(match name {
            "arithmetic" => Classical::Arithmetic,
            "geometric" => Classical::Geometric,
            "harmonic" => Classical::Harmonic,
            "logarithmic" => Classical::Logarithmic,
            "min" => Classical::Min,
            "max" => Classical::Max,
            "proj1" => Classical::Proj1,
            "proj2" => Classical::Proj2,
            _ => match name.strip_prefix("power:") {
                Some(p) => {
                    let p: f64 = p.parse().map_err(|_| {
                        MeanError::Parameter(format!("power order `{p}` is not a number"))
                    })?;
                    if !p.is_finite() {
                        return Err(MeanError::Parameter(format!(
                            "power order must be finite, got {p}"
                        )));
                    }
                    Classical::Power(p)
                }
                None => return Err(MeanError::Unknown(name.to_string())),
            },
        })
    }

    pub fn flags(&self) -> Flags {
        match self {
            Classical::Min | Classical::Max => Flags::LATTICE,
            Classical::Proj1 | Classical::Proj2 => Flags::PROJECTION,
            _ => Flags::ALL,
        }
    }

    pub fn to_mean(self) -> MeanFn {
        let label = self.name();
        let flags = self.flags();
        match self {
            Classical::Arithmetic => MeanFn::new(label, flags, arithmetic),
            Classical::Geometric => MeanFn::new(label, flags, geometric),
            Classical::Harmonic => MeanFn::new(label, flags, harmonic),
            Classical::Logarithmic => MeanFn::new(label, flags, logarithmic),
            Classical::Min => MeanFn::new(label, flags, f64::min),
            Classical::Max => MeanFn::new(label, flags, f64::max),
            Classical::Proj1 => MeanFn::new(label, flags, |x, _| x),
            Classical::Proj2 => MeanFn::new(label, flags, |_, y| y),
            Classical::Power(0.0) => MeanFn::new(label, flags, geometric),
            Classical::Power(p) => MeanFn::new(label, flags, move |x, y| power(p, x, y)),
        }
    }
}

/// Looks up a catalog mean by its identifier (`"arithmetic"`, `"power:0.5"`, ...).
pub fn classical(name: &str) -> Result<MeanFn> {
    Classical::parse(name).map(Classical::to_mean)
}

pub fn arithmetic(x: f64, y: f64) -> f64 {
    0.5 * x + 0.5 * y
}

pub fn geometric(x: f64, y: f64) -> f64 {
    x.sqrt() * y.sqrt()
}

pub fn harmonic(x: f64, y: f64) -> f64 {
    2.0 / (1.0 / x + 1.0 / y)
}

/// `(x - y) / (ln x - ln y)`, with the midpoint series `a (1 - d^2 / 3)`
/// inside the near-diagonal band.
pub fn logarithmic(x: f64, y: f64) -> f64 {
    if near_diagonal(x, y) {
        let (a, d) = midpoint_offset(x, y);
        return a * (1.0 - d * d / 3.0);
    }
    match expm1_quotient(log_ratio(x, y)) {
        (q, false) => y * q,
        (ln_q, true) => scale_exp(y, ln_q),
    }
}

/// Power mean of nonzero order `p`.
pub fn power(p: f64, x: f64, y: f64) -> f64 {
    let pz = p * log_ratio(x, y);
    // ln((e^{pz} + 1) / 2)
    let ln_half_sum = if pz.abs() < 1.0 {
        (0.5 * pz.exp_m1()).ln_1p()
    } else {
        softplus(pz) - std::f64::consts::LN_2
    };
    scale_exp(y, ln_half_sum / p)
}

/// Parameters of a Stolarsky mean; `r != s` and both nonzero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StolarskyParams {
    r: f64,
    s: f64,
}

impl StolarskyParams {
    pub fn new(r: f64, s: f64) -> Result<Self> {
        if !r.is_finite() || !s.is_finite() {
            return Err(MeanError::Parameter(format!(
                "stolarsky parameters must be finite, got ({r}, {s})"
            )));
        }
        if r == s {
            return Err(MeanError::Parameter(format!(
                "stolarsky parameters must differ, got r = s = {r}"
            )));
        }
        if r == 0.0 || s == 0.0 {
            return Err(MeanError::Parameter(format!(
                "stolarsky parameters must be nonzero, got ({r}, {s})"
            )));
        }
        Ok(StolarskyParams { r, s })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s(&self) -> f64 {
        self.s
    }
}

/// `STO_{r,s}(x, y) = ((s/r) (x^r - y^r) / (x^s - y^s))^{1/(r-s)}`.
pub fn stolarsky(params: StolarskyParams) -> MeanFn {
    let StolarskyParams { r, s } = params;
    MeanFn::new(format!("stolarsky:{r}:{s}"), Flags::ALL, move |x, y| {
        stolarsky_eval(r, s, x, y)
    })
}

fn stolarsky_eval(r: f64, s: f64, x: f64, y: f64) -> f64 {
    if near_diagonal(x, y) {
        // STO_{r,s} = a (1 + (r + s - 3) d^2 / 6) + O(d^4)
        let (a, d) = midpoint_offset(x, y);
        return a * (1.0 + (r + s - 3.0) * d * d / 6.0);
    }
    let z = log_ratio(x, y);
    let ln_ratio = match (expm1_quotient(r * z), expm1_quotient(s * z)) {
        // ((s/r) (e^{rz} - 1)/(e^{sz} - 1)) = (rz quotient) / (sz quotient)
        ((a, false), (b, false)) => (a / b).ln(),
        ((a, la), (b, lb)) => {
            let a = if la { a } else { a.ln() };
            let b = if lb { b } else { b.ln() };
            a - b
        }
    };
    scale_exp(y, ln_ratio / (r - s))
}

/// The restriction `f(x) = F(x, 1)` of a homogeneous function.
#[derive(Clone, Debug)]
pub struct TraceFn {
    mean: MeanFn,
}

impl TraceFn {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.mean.eval(x, 1.0)
    }

    pub fn mean(&self) -> &MeanFn {
        &self.mean
    }

    /// Rebuilds `F(x, y) = y f(x / y)`.
    pub fn reconstruct(&self, x: f64, y: f64) -> f64 {
        y * self.eval(x / y)
    }
}

pub fn trace_of(mean: &MeanFn) -> Result<TraceFn> {
    if !mean.flags().homogeneous {
        return Err(MeanError::Domain(format!(
            "the trace does not determine `{}`: it is not declared homogeneous",
            mean.label()
        )));
    }
    Ok(TraceFn { mean: mean.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn m(name: &str) -> MeanFn {
        classical(name).unwrap()
    }

    #[test]
    fn catalog_values() {
        assert_eq!(m("arithmetic").eval(1.0, 3.0), 2.0);
        assert_relative_eq!(m("harmonic").eval(1.0, 4.0), 1.6, max_relative = 1e-15);
        assert_relative_eq!(
            m("logarithmic").eval(2.0, 1.0),
            1.0 / std::f64::consts::LN_2,
            max_relative = 1e-15
        );
        assert_relative_eq!(m("logarithmic").eval(5.0, 5.0), 5.0, max_relative = 1e-15);
        assert_eq!(m("geometric").eval(4.0, 9.0), 6.0);
        assert_eq!(m("proj1").eval(3.0, 5.0), 3.0);
        assert_eq!(m("proj2").eval(3.0, 5.0), 5.0);
        assert_eq!(m("min").eval(3.0, 5.0), 3.0);
        assert_eq!(m("max").eval(3.0, 5.0), 5.0);
    }

    #[test]
    fn catalog_flags() {
        assert_eq!(m("logarithmic").flags(), Flags::ALL);
        let p1 = m("proj1").flags();
        assert!(p1.homogeneous && p1.monotone && !p1.symmetric && !p1.strict);
        assert!(!m("min").flags().strict);
    }

    #[test]
    fn unknown_identifier() {
        assert!(matches!(classical("quadratic"), Err(MeanError::Unknown(_))));
        assert!(matches!(classical("power:x"), Err(MeanError::Parameter(_))));
    }

    #[test]
    fn power_mean_orders() {
        let x = 3.0;
        let y = 7.0;
        assert_relative_eq!(m("power:1").eval(x, y), 5.0, max_relative = 1e-15);
        assert_relative_eq!(
            m("power:2").eval(x, y),
            ((9.0 + 49.0) / 2.0f64).sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            m("power:-1").eval(x, y),
            harmonic(x, y),
            max_relative = 1e-15
        );
        assert_eq!(m("power:0").eval(x, y), geometric(x, y));
        assert_relative_eq!(
            m("power:0.5").eval(x, y),
            ((x.sqrt() + y.sqrt()) / 2.0).powi(2),
            max_relative = 1e-15
        );
    }

    #[test]
    fn logarithmic_series_matches_ratio_form_at_the_band_edge() {
        // Just outside the band the ratio form is used, just inside the
        // series; both must agree with a high-precision reference.
        for x in [1.0f64 + 0.9e-8, 1.0 + 1.1e-8, 1.0 + 1e-6] {
            let d = (x - 1.0) / (x + 1.0);
            let a = (x + 1.0) / 2.0;
            // d / atanh(d) = 1 - d^2/3 - 4 d^4 / 45 - ...
            let reference = a * (1.0 - d * d / 3.0 - 4.0 * d.powi(4) / 45.0);
            assert_relative_eq!(logarithmic(x, 1.0), reference, max_relative = 1e-15);
        }
    }

    #[test]
    fn stolarsky_examples() {
        let sto = |r, s| stolarsky(StolarskyParams::new(r, s).unwrap());
        assert_relative_eq!(
            sto(1.5, 0.5).eval(1.0, 4.0),
            7.0 / 3.0,
            max_relative = 1e-14
        );
        // Heronian form (x + sqrt(xy) + y) / 3
        let (x, y) = (2.0f64, 11.0f64);
        assert_relative_eq!(
            sto(1.5, 0.5).eval(x, y),
            (x + (x * y).sqrt() + y) / 3.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(sto(2.0, 1.0).eval(1.0, 3.0), 2.0, max_relative = 1e-15);
        assert_relative_eq!(sto(0.7, -0.3).eval(6.0, 6.0), 6.0, max_relative = 1e-15);
        // STO_{r,-r} is the geometric mean
        assert_relative_eq!(
            sto(1.3, -1.3).eval(x, y),
            (x * y).sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn stolarsky_series_matches_direct_formula() {
        let (r, s) = (3.0, 1.0);
        let direct = |x: f64, y: f64| {
            ((s / r) * (x.powf(r) - y.powf(r)) / (x.powf(s) - y.powf(s))).powf(1.0 / (r - s))
        };
        for x in [1.0 + 2e-9, 1.0 + 5e-9] {
            let near = stolarsky_eval(r, s, x, 1.0);
            let (a, d) = midpoint_offset(x, 1.0);
            assert_relative_eq!(near, a * (1.0 + d * d / 6.0), max_relative = 1e-15);
        }
        assert_relative_eq!(
            stolarsky_eval(r, s, 1.5, 1.0),
            direct(1.5, 1.0),
            max_relative = 1e-14
        );
    }

    #[test]
    fn stolarsky_parameter_errors() {
        assert!(StolarskyParams::new(1.0, 1.0).is_err());
        assert!(StolarskyParams::new(0.0, 1.0).is_err());
        assert!(StolarskyParams::new(1.0, 0.0).is_err());
        assert!(StolarskyParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn traces() {
        assert_eq!(trace_of(&m("arithmetic")).unwrap().eval(3.0), 2.0);
        assert_eq!(trace_of(&m("geometric")).unwrap().eval(4.0), 2.0);
        for name in ["arithmetic", "logarithmic", "harmonic", "proj2", "power:3"] {
            assert_eq!(trace_of(&m(name)).unwrap().eval(1.0), 1.0, "{name}");
        }
        let not_homogeneous = MeanFn::new("x", Flags::NONE, |x, _| x);
        assert!(matches!(
            trace_of(&not_homogeneous),
            Err(MeanError::Domain(_))
        ));
    }

    #[test]
    fn require_lists_missing_flags() {
        let err = m("proj1").require(Flags::LATTICE, "test").unwrap_err();
        assert!(err.to_string().contains("symmetric"));
        assert!(m("arithmetic").require(Flags::ALL, "test").is_ok());
    }
}
