//! Integration of the autonomous profile equation `f' = y(f)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::function::{ScalarFunction, SharedFn};
use crate::jet::Jet;
use crate::numeric::Interval;
use crate::ode::{rk4_step, HermiteTrack};
use crate::profile::MIN_MAGNITUDE;

/// Step-doubling discrepancy above which integration stops: the solution is
/// approaching a singularity of `y` faster than the step can resolve.
pub const LOCAL_ERROR_LIMIT: f64 = 1e-12;

/// A profile `f` obtained by integrating `f' = y(f)` from `f(u0) = f0`.
///
/// As a [`ScalarFunction`] it reports `f` from the interpolant and the
/// derivatives from the equation: `f' = y(f)`, `f'' = y'(f) y(f)`,
/// `f''' = (y''(f) y(f) + y'(f)^2) y(f)`.
#[derive(Debug, Clone)]
pub struct AutonomousProfile {
    y: SharedFn,
    track: HermiteTrack,
    realized: Interval,
    step: f64,
    truncation: Option<String>,
}

impl AutonomousProfile {
    pub fn realized(&self) -> Interval {
        self.realized
    }

    pub fn requested_step(&self) -> f64 {
        self.step
    }

    /// Why integration stopped before the end of the requested range.
    pub fn truncation(&self) -> Option<&str> {
        self.truncation.as_deref()
    }

    pub fn track(&self) -> &HermiteTrack {
        &self.track
    }

    pub fn value(&self, u: f64) -> Result<f64> {
        self.interp(u).map(|x| x[0])
    }

    fn interp(&self, u: f64) -> Result<[f64; 4]> {
        self.track.eval(u).ok_or(Error::OutOfDomain {
            what: "u",
            value: u,
            start: self.realized.start,
            end: self.realized.end,
        })
    }

    /// The same samples viewed through the raw derivatives of the
    /// interpolant instead of the equation.
    pub fn interpolant(self: &Arc<Self>) -> RawInterpolant {
        RawInterpolant(self.clone())
    }
}

impl ScalarFunction for AutonomousProfile {
    fn jet(&self, u: f64) -> Result<Jet> {
        let f = self.interp(u)?[0];
        let y = self.y.jet(f)?;
        Ok(Jet::new(f, y.value, y.d1 * y.value, (y.d2 * y.value + y.d1 * y.d1) * y.value))
    }

    fn describe(&self) -> String {
        format!("f' = y(f) with y = {}", self.y.describe())
    }
}

/// Value and derivatives of the quintic interpolant itself.
#[derive(Debug, Clone)]
pub struct RawInterpolant(Arc<AutonomousProfile>);

impl ScalarFunction for RawInterpolant {
    fn jet(&self, u: f64) -> Result<Jet> {
        let [f, d1, d2, d3] = self.0.interp(u)?;
        Ok(Jet::new(f, d1, d2, d3))
    }

    fn describe(&self) -> String {
        format!("interpolant of {}", self.0.describe())
    }
}

fn node(y: &dyn ScalarFunction, f: f64, sign: f64) -> std::result::Result<[f64; 3], String> {
    let j = y.jet(f).map_err(|e| e.to_string())?;
    if !j.is_finite() {
        return Err(format!("y is not finite at f = {f}"));
    }
    if j.value.abs() < MIN_MAGNITUDE || j.value.signum() != sign {
        return Err(format!("y crosses zero near f = {f}"));
    }
    Ok([f, j.value, j.d1 * j.value])
}

/// Classical RK4 for `f' = y(f)` from the left end of `u_range` with
/// `f(start) = f0`, using the largest step not exceeding `step` that divides
/// the range evenly. Integration stops early, with a truncation note, when
/// `y` leaves its domain, approaches zero, or the step-doubling estimate
/// exceeds [`LOCAL_ERROR_LIMIT`].
pub fn integrate_autonomous(y: SharedFn, f0: f64, u_range: Interval, step: f64) -> Result<AutonomousProfile> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!("step {step} must be positive")));
    }
    let y0 = y.jet(f0)?.value;
    if y0 == 0.0 || !y0.is_finite() {
        return Err(Error::Integration(format!("y(f0) = {y0} at f0 = {f0}: f' would vanish")));
    }
    let sign = y0.signum();
    let n = ((u_range.width() / step).ceil() as usize).max(1);
    let h = u_range.width() / n as f64;
    let rhs = |_t: f64, s: [f64; 1]| -> Result<[f64; 1]> { Ok([y.jet(s[0])?.value]) };

    let mut ts = vec![u_range.start];
    let mut xs = vec![node(y.as_ref(), f0, sign).map_err(Error::Integration)?];
    let mut truncation = None;
    for i in 0..n {
        let t = u_range.start + i as f64 * h;
        let t_next = if i + 1 == n { u_range.end } else { u_range.start + (i + 1) as f64 * h };
        let f = xs[i][0];
        let attempt = (|| -> Result<f64> {
            let full = rk4_step(&rhs, t, [f], h)?;
            let half = rk4_step(&rhs, t, [f], 0.5 * h)?;
            let two = rk4_step(&rhs, t + 0.5 * h, half, 0.5 * h)?;
            if (full[0] - two[0]).abs() > LOCAL_ERROR_LIMIT * two[0].abs().max(1.0) {
                return Err(Error::Integration("step-doubling estimate exceeded the local limit".into()));
            }
            Ok(two[0])
        })();
        let next = match attempt {
            Ok(f) if f > MIN_MAGNITUDE => node(y.as_ref(), f, sign),
            Ok(f) => Err(format!("f = {f} is no longer positive")),
            Err(e) => Err(e.to_string()),
        };
        match next {
            Ok(x) => {
                ts.push(t_next);
                xs.push(x);
            }
            Err(reason) => {
                truncation = Some(format!("stopped at u = {t}: {reason}"));
                break;
            }
        }
    }
    if ts.len() < 2 {
        return Err(Error::Integration(format!(
            "no step could be taken from f0 = {f0}: {}",
            truncation.unwrap_or_default()
        )));
    }
    let realized = Interval::new(u_range.start, *ts.last().unwrap())?;
    Ok(AutonomousProfile { y, track: HermiteTrack::new(ts, xs)?, realized, step, truncation })
}
