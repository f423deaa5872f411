//! Generalized projective means `P_A`, which pick `x` on a set `A` of
//! off-diagonal pairs and `y` elsewhere.

use std::fmt;
use std::sync::Arc;

use crate::error::{MeanError, Result};
use crate::means::{Flags, MeanFn};
use crate::verify::ScanReport;

type Membership = dyn Fn(f64, f64) -> bool + Send + Sync;

/// A subset of the off-diagonal positive quadrant given by a membership
/// predicate. The predicate must be pure.
///
/// The `declared_*` flags are claims; [`check_asymmetric`] and
/// [`check_cone`] test them on samples.
#[derive(Clone)]
pub struct ConeSet {
    membership: Arc<Membership>,
    declared_asymmetric: bool,
    declared_cone: bool,
    label: String,
}

impl ConeSet {
    pub fn new<F>(label: impl Into<String>, asymmetric: bool, cone: bool, f: F) -> Self
    where
        F: Fn(f64, f64) -> bool + Send + Sync + 'static,
    {
        ConeSet {
            membership: Arc::new(f),
            declared_asymmetric: asymmetric,
            declared_cone: cone,
            label: label.into(),
        }
    }

    /// Off-diagonal membership; the diagonal never belongs to the set.
    #[inline]
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x != y && (self.membership)(x, y)
    }

    pub fn declared_asymmetric(&self) -> bool {
        self.declared_asymmetric
    }

    pub fn declared_cone(&self) -> bool {
        self.declared_cone
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The whole off-diagonal quadrant; `P_A` is the first projection.
    pub fn full() -> Self {
        ConeSet::new("full", false, true, |_, _| true)
    }

    /// The empty set; `P_A` is the second projection.
    pub fn empty() -> Self {
        ConeSet::new("empty", false, true, |_, _| false)
    }

    /// `{x < y}`; `P_A` is `min`.
    pub fn lower() -> Self {
        ConeSet::new("lower", true, true, |x, y| x < y)
    }

    /// `{x > y}`; `P_A` is `max`.
    pub fn upper() -> Self {
        ConeSet::new("upper", true, true, |x, y| x > y)
    }

    /// `{x < y}` below the line `x + y = 2` and `{x > y}` above it:
    /// asymmetric but not closed under scaling.
    pub fn mixed() -> Self {
        ConeSet::new("mixed", true, false, |x, y| {
            if x + y < 2.0 {
                x < y
            } else {
                x > y
            }
        })
    }

    /// Looks up a built-in set by name. A trailing `'` takes the complement,
    /// so `lower'` is the complement of `lower`.
    pub fn builtin(name: &str) -> Result<Self> {
        if let Some(inner) = name.strip_suffix('\'') {
            return Ok(complement_cone(&ConeSet::builtin(inner)?));
        }
        match name {
            "full" => Ok(ConeSet::full()),
            "empty" => Ok(ConeSet::empty()),
            "lower" => Ok(ConeSet::lower()),
            "upper" => Ok(ConeSet::upper()),
            "mixed" => Ok(ConeSet::mixed()),
            _ => Err(MeanError::Unknown(format!("cone `{name}`"))),
        }
    }

    pub const BUILTIN_NAMES: [&'static str; 5] = ["full", "empty", "lower", "upper", "mixed"];
}

impl fmt::Debug for ConeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConeSet")
            .field("label", &self.label)
            .field("declared_asymmetric", &self.declared_asymmetric)
            .field("declared_cone", &self.declared_cone)
            .finish()
    }
}

/// `A' = X \ A`. Asymmetry and the cone property both survive complements.
pub fn complement_cone(a: &ConeSet) -> ConeSet {
    let inner = a.membership.clone();
    let label = match a.label.as_str() {
        "full" => "empty".to_string(),
        "empty" => "full".to_string(),
        "lower" => "upper".to_string(),
        "upper" => "lower".to_string(),
        other => match other.strip_suffix('\'') {
            Some(base) => base.to_string(),
            None => format!("{other}'"),
        },
    };
    ConeSet::new(
        label,
        a.declared_asymmetric,
        a.declared_cone,
        move |x, y| !inner(x, y),
    )
}

/// `P_A(x, y) = x` if `(x, y) ∈ A`, else `y`; `P_A(x, x) = x`.
pub fn projective_mean(a: &ConeSet) -> MeanFn {
    let set = a.clone();
    let flags = Flags {
        symmetric: a.declared_asymmetric,
        homogeneous: a.declared_cone,
        monotone: false,
        strict: false,
    };
    MeanFn::new(format!("proj:{}", a.label), flags, move |x, y| {
        if set.contains(x, y) {
            x
        } else {
            y
        }
    })
}

fn off_diagonal(samples: &[(f64, f64)]) -> impl Iterator<Item = &(f64, f64)> {
    samples.iter().filter(|(x, y)| x != y)
}

/// `{P_A(x, y), P_{A'}(x, y)} = {x, y}` at every off-diagonal sample.
pub fn check_exchange_property(a: &ConeSet, samples: &[(f64, f64)]) -> ScanReport {
    let p = projective_mean(a);
    let q = projective_mean(&complement_cone(a));
    let mut report = ScanReport::start("exchange", 0.0);
    for &(x, y) in off_diagonal(samples) {
        let (u, v) = (p.eval(x, y), q.eval(x, y));
        let scale = x.max(y);
        let straight = ((u - x).abs()).max((v - y).abs()) / scale;
        let crossed = ((u - y).abs()).max((v - x).abs()) / scale;
        report.observe(straight.min(crossed), &[x, y]);
    }
    report.finish()
}

/// Exactly one of `(x, y)`, `(y, x)` belongs to the set, at every sample.
pub fn check_asymmetric(a: &ConeSet, samples: &[(f64, f64)]) -> ScanReport {
    let mut report = ScanReport::start("asymmetric", 0.0);
    for &(x, y) in off_diagonal(samples) {
        let ok = a.contains(x, y) != a.contains(y, x);
        report.observe(if ok { 0.0 } else { 1.0 }, &[x, y]);
    }
    report.finish()
}

/// Membership is unchanged by each scaling factor in `lambdas`.
pub fn check_cone(a: &ConeSet, samples: &[(f64, f64)], lambdas: &[f64]) -> ScanReport {
    let mut report = ScanReport::start("cone", 0.0);
    for &(x, y) in off_diagonal(samples) {
        let inside = a.contains(x, y);
        for &l in lambdas {
            let ok = a.contains(l * x, l * y) == inside;
            report.observe(if ok { 0.0 } else { 1.0 }, &[x, y, l]);
        }
    }
    report.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs() -> Vec<(f64, f64)> {
        let mut v = Vec::new();
        for i in 1..30 {
            for j in 1..30 {
                v.push((0.13 * i as f64, 0.17 * j as f64));
            }
        }
        v
    }

    #[test]
    fn catalog_identities() {
        let samples = pairs();
        let p1 = projective_mean(&ConeSet::full());
        let p2 = projective_mean(&ConeSet::empty());
        let lo = projective_mean(&ConeSet::lower());
        let hi = projective_mean(&ConeSet::upper());
        for &(x, y) in &samples {
            assert_eq!(p1.eval(x, y), x);
            assert_eq!(p2.eval(x, y), if x == y { x } else { y });
            assert_eq!(lo.eval(x, y), x.min(y));
            assert_eq!(hi.eval(x, y), x.max(y));
        }
        assert_eq!(hi.eval(3.0, 5.0), 5.0);
    }

    #[test]
    fn complements() {
        let samples = pairs();
        let lower_c = projective_mean(&complement_cone(&ConeSet::lower()));
        let full_c = projective_mean(&complement_cone(&ConeSet::full()));
        let mixed = ConeSet::mixed();
        let mixed_cc = complement_cone(&complement_cone(&mixed));
        for &(x, y) in &samples {
            assert_eq!(lower_c.eval(x, y), x.max(y));
            if x != y {
                assert_eq!(full_c.eval(x, y), y);
            }
            assert_eq!(mixed_cc.contains(x, y), mixed.contains(x, y));
        }
        assert_eq!(complement_cone(&ConeSet::lower()).label(), "upper");
        assert_eq!(complement_cone(&mixed).label(), "mixed'");
        assert_eq!(mixed_cc.label(), "mixed");
    }

    #[test]
    fn diagonal_is_identity() {
        for name in ConeSet::BUILTIN_NAMES {
            let p = projective_mean(&ConeSet::builtin(name).unwrap());
            assert_eq!(p.eval(1.7, 1.7), 1.7);
        }
    }

    #[test]
    fn exchange_property_examples() {
        assert!(check_exchange_property(&ConeSet::lower(), &[(2.0, 7.0)]).passed);
        assert!(check_exchange_property(&ConeSet::full(), &[(2.0, 7.0)]).passed);
        assert!(check_exchange_property(&ConeSet::mixed(), &pairs()).passed);
    }

    #[test]
    fn flag_witnesses() {
        let samples = pairs();
        let lambdas = [1e-3, 0.5, 7.5, 1e3];
        assert!(check_asymmetric(&ConeSet::mixed(), &samples).passed);
        assert!(!check_asymmetric(&ConeSet::full(), &samples).passed);
        assert!(check_cone(&ConeSet::lower(), &samples, &lambdas).passed);
        let r = check_cone(&ConeSet::mixed(), &samples, &lambdas);
        assert!(!r.passed);
        let (x, y, l) = (r.witness[0], r.witness[1], r.witness[2]);
        assert!((x + y < 2.0) != (l * x + l * y < 2.0));
    }

    #[test]
    fn unknown_cone() {
        assert!(ConeSet::builtin("diagonal").is_err());
        assert_eq!(ConeSet::builtin("lower'").unwrap().label(), "upper");
    }
}
