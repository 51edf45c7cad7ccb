//! The meridian profile `(f, g)` and the directrix `phi`.
//!
//! In the normalized pipeline `g` is never supplied: it is derived from `f`
//! through `g' = -1/(2 f')`, so `-2 f' g' = 1` holds by construction and the
//! meridians are parameterized by arc length.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::function::{ScalarFunction, SharedFn};
use crate::jet::Jet;
use crate::numeric::{adaptive_simpson, Interval};

/// Smallest admissible `f` and `|f'|` at validation samples.
pub const MIN_MAGNITUDE: f64 = 1e-9;
/// Absolute tolerance of the quadrature defining `g`.
pub const G_QUADRATURE_TOL: f64 = 1e-10;
/// `phi'^2 + phi^2` below this is a degenerate directrix point.
pub const DEGENERATE_SPEED_SQ: f64 = 1e-12;

/// Normalized meridian profile: `f` on `domain`, with `g` derived from `f`.
#[derive(Debug, Clone)]
pub struct ProfileCurve {
    f: SharedFn,
    domain: Interval,
    g_origin: f64,
}

impl ProfileCurve {
    /// `g_origin` is the value of `g` at the left endpoint of `domain`.
    pub fn new(f: SharedFn, domain: Interval, g_origin: f64) -> Self {
        ProfileCurve { f, domain, g_origin }
    }

    pub fn from_expr(f: &str, domain: Interval, g_origin: f64) -> Result<Self> {
        Ok(Self::new(Arc::new(Expr::parse(f, "u")?), domain, g_origin))
    }

    pub fn f(&self) -> &SharedFn {
        &self.f
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn g_origin(&self) -> f64 {
        self.g_origin
    }

    /// Same `f`, restricted to a sub-interval; `g` keeps its values.
    pub fn restrict(&self, domain: Interval) -> Result<Self> {
        let g_origin = self.g(domain.start)?;
        Ok(ProfileCurve { f: self.f.clone(), domain, g_origin })
    }

    /// `(f, f', f'', f''')` at `u`.
    pub fn f_jet(&self, u: f64) -> Result<Jet> {
        self.domain.check("u", u)?;
        self.f.jet(u)
    }

    pub fn g_prime(&self, u: f64) -> Result<f64> {
        let j = self.f_jet(u)?;
        if j.d1 == 0.0 {
            return Err(Error::ProfileInvariant(format!("f' vanishes at u = {u}")));
        }
        Ok(-0.5 / j.d1)
    }

    /// `g(u) = g_origin + integral of -1/(2 f'(t)) from the left endpoint to u`.
    pub fn g(&self, u: f64) -> Result<f64> {
        self.domain.check("u", u)?;
        let a = self.domain.start;
        if u == a {
            return Ok(self.g_origin);
        }
        let sign = self.derivative_sign()?;
        let integrand = |t: f64| -> Result<f64> {
            let d1 = self.f.jet(t)?.d1;
            if d1.abs() < MIN_MAGNITUDE || d1.signum() != sign {
                return Err(Error::ProfileInvariant(format!(
                    "f' changes sign or vanishes at u = {t} inside the integration range"
                )));
            }
            Ok(-0.5 / d1)
        };
        // coarse scan so that a sign change between quadrature nodes is not missed
        for i in 1..=64 {
            integrand(a + (u - a) * i as f64 / 64.0)?;
        }
        Ok(self.g_origin + adaptive_simpson(integrand, a, u, G_QUADRATURE_TOL)?)
    }

    /// Meridian curvature `f''/f'` (arc-length form).
    pub fn kappa_m(&self, u: f64) -> Result<f64> {
        let j = self.f_jet(u)?;
        if j.d1 == 0.0 {
            return Err(Error::ProfileInvariant(format!("f' vanishes at u = {u}")));
        }
        Ok(j.d2 / j.d1)
    }

    /// Sign of `f'` at the left endpoint. Either sign is admissible.
    pub fn derivative_sign(&self) -> Result<f64> {
        let d1 = self.f.jet(self.domain.start)?.d1;
        if d1 == 0.0 || !d1.is_finite() {
            return Err(Error::ProfileInvariant(format!("f' vanishes at the left endpoint u = {}", self.domain.start)));
        }
        Ok(d1.signum())
    }
}

/// Which profile predicate failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    /// `f(u) > 0`
    Positivity,
    /// `f'(u) != 0`
    NonVanishingDerivative,
    /// `-f' g' > 0`
    Orientation,
    /// `-2 f' g' = 1`
    Normalization,
    /// the function could not be evaluated
    Evaluation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub predicate: Predicate,
    pub u: f64,
    pub value: f64,
}

/// Result of sampling the profile predicates. Violations are listed per
/// predicate (positivity first), each at its first failing sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub samples: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

type Check<'a> = (Predicate, Box<dyn Fn(f64) -> Result<(bool, f64)> + 'a>);

fn run_checks(domain: Interval, samples: usize, checks: &[Check<'_>]) -> Result<ValidationReport> {
    if samples < 2 {
        return Err(Error::InvalidArgument("validation needs at least two samples".into()));
    }
    let grid = domain.linspace(samples);
    let mut violations = Vec::new();
    for (predicate, check) in checks {
        for &u in &grid {
            match check(u) {
                Ok((true, _)) => {}
                Ok((false, value)) => {
                    violations.push(Violation { predicate: *predicate, u, value });
                    break;
                }
                Err(_) => {
                    violations.push(Violation { predicate: Predicate::Evaluation, u, value: f64::NAN });
                    break;
                }
            }
        }
    }
    Ok(ValidationReport { samples, violations })
}

/// Checks `f > 0` and `f' != 0` on a uniform grid of `samples` points of the
/// profile domain (endpoints included).
pub fn validate_profile(p: &ProfileCurve, samples: usize) -> Result<ValidationReport> {
    let checks: Vec<Check<'_>> = vec![
        (
            Predicate::Positivity,
            Box::new(|u| {
                let f = p.f.jet(u)?.value;
                Ok((f > MIN_MAGNITUDE, f))
            }),
        ),
        (
            Predicate::NonVanishingDerivative,
            Box::new(|u| {
                let d = p.f.jet(u)?.d1;
                Ok((d.abs() >= MIN_MAGNITUDE, d))
            }),
        ),
    ];
    run_checks(p.domain, samples, &checks)
}

/// A profile with a freely supplied `g`, used only for validation and for
/// the general meridian curvature formula.
#[derive(Debug, Clone)]
pub struct UnnormalizedProfile {
    pub f: SharedFn,
    pub g: SharedFn,
    pub domain: Interval,
}

impl UnnormalizedProfile {
    pub fn validate(&self, samples: usize, normalization_tol: f64) -> Result<ValidationReport> {
        let checks: Vec<Check<'_>> = vec![
            (
                Predicate::Positivity,
                Box::new(|u| {
                    let f = self.f.jet(u)?.value;
                    Ok((f > MIN_MAGNITUDE, f))
                }),
            ),
            (
                Predicate::NonVanishingDerivative,
                Box::new(|u| {
                    let d = self.f.jet(u)?.d1;
                    Ok((d.abs() >= MIN_MAGNITUDE, d))
                }),
            ),
            (
                Predicate::Orientation,
                Box::new(|u| {
                    let w = -self.f.jet(u)?.d1 * self.g.jet(u)?.d1;
                    Ok((w > 0.0, w))
                }),
            ),
            (
                Predicate::Normalization,
                Box::new(|u| {
                    let r = -2.0 * self.f.jet(u)?.d1 * self.g.jet(u)?.d1 - 1.0;
                    Ok((r.abs() <= normalization_tol, r))
                }),
            ),
        ];
        run_checks(self.domain, samples, &checks)
    }

    /// `(f' g'' - g' f'') / (-2 f' g')^{3/2}`.
    pub fn kappa_m(&self, u: f64) -> Result<f64> {
        self.domain.check("u", u)?;
        let f = self.f.jet(u)?;
        let g = self.g.jet(u)?;
        let e = -2.0 * f.d1 * g.d1;
        if e <= 0.0 {
            return Err(Error::ProfileInvariant(format!("-f' g' <= 0 at u = {u}")));
        }
        Ok((f.d1 * g.d2 - g.d1 * f.d2) / e.powf(1.5))
    }
}

/// The directrix `w1 = phi(v), w2 = v` on `domain`.
#[derive(Debug, Clone)]
pub struct Directrix {
    phi: SharedFn,
    domain: Interval,
}

/// Directrix quantities at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectrixPoint {
    pub phi: Jet,
    /// `sqrt(phi'^2 + phi^2)`
    pub speed: f64,
    pub kappa: f64,
    /// `d kappa / dv`
    pub kappa_dot: f64,
}

impl Directrix {
    pub fn new(phi: SharedFn, domain: Interval) -> Self {
        Directrix { phi, domain }
    }

    pub fn from_expr(phi: &str, domain: Interval) -> Result<Self> {
        Ok(Self::new(Arc::new(Expr::parse(phi, "v")?), domain))
    }

    pub fn phi(&self) -> &SharedFn {
        &self.phi
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn restrict(&self, domain: Interval) -> Self {
        Directrix { phi: self.phi.clone(), domain }
    }

    pub fn phi_jet(&self, v: f64) -> Result<Jet> {
        self.domain.check("v", v)?;
        self.phi.jet(v)
    }

    pub fn point(&self, v: f64) -> Result<DirectrixPoint> {
        let p0 = self.phi_jet(v)?;
        let speed_sq = p0.d1 * p0.d1 + p0.value * p0.value;
        if speed_sq < DEGENERATE_SPEED_SQ {
            return Err(Error::DegenerateDirectrix { v });
        }
        let p1 = p0.derivative();
        let p2 = p1.derivative();
        let num = p0 * p2 - p1 * p1 * 2.0 - p0 * p0;
        let den = (p1 * p1 + p0 * p0).powf(1.5).map_err(|e| Error::Domain { op: e.op, t: v })?;
        let kappa = num / den;
        Ok(DirectrixPoint { phi: p0, speed: speed_sq.sqrt(), kappa: kappa.value, kappa_dot: kappa.d1 })
    }

    /// `(phi phi'' - 2 phi'^2 - phi^2) / (phi'^2 + phi^2)^{3/2}`.
    pub fn kappa(&self, v: f64) -> Result<f64> {
        Ok(self.point(v)?.kappa)
    }
}
