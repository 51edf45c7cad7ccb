//! Directrices of constant curvature `kappa = b`.
//!
//! For `b < 0` the constant `phi = -1/b` works. For `b > 0` the curve is
//! obtained from the initial-value problem
//! `phi phi'' = 2 phi'^2 + phi^2 + b (phi'^2 + phi^2)^{3/2}`,
//! `phi(v0) = 1`, `phi'(v0) = 0`, with `v0` the midpoint of the range.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::function::{Constant, ScalarFunction};
use crate::jet::Jet;
use crate::numeric::Interval;
use crate::ode::{rk4_step, HermiteTrack};
use crate::profile::{Directrix, DEGENERATE_SPEED_SQ};

pub const DIRECTRIX_STEP: f64 = 1e-3;
/// Step-doubling discrepancy at which the integration is cut off.
pub const DIRECTRIX_LOCAL_LIMIT: f64 = 1e-11;
/// `|phi'|` beyond which the integration is cut off.
pub const DIRECTRIX_SLOPE_LIMIT: f64 = 1e2;

/// A constant-curvature directrix and, if the requested range could not be
/// covered, the reason.
#[derive(Debug, Clone)]
pub struct KappaDirectrix {
    pub directrix: Directrix,
    pub truncation: Option<String>,
}

#[derive(Debug, Clone)]
struct IvpCurve {
    b: f64,
    track: HermiteTrack,
}

fn rhs(b: f64, phi: f64, dphi: f64) -> f64 {
    let s = (dphi * dphi + phi * phi).sqrt();
    (2.0 * dphi * dphi + phi * phi + b * s * s * s) / phi
}

impl ScalarFunction for IvpCurve {
    /// `phi, phi'` from the interpolant, `phi''` and `phi'''` from the
    /// equation.
    fn jet(&self, v: f64) -> Result<Jet> {
        let [phi, dphi, _, _] = self.track.eval(v).ok_or_else(|| {
            let (start, end) = self.track.span();
            Error::OutOfDomain { what: "v", value: v, start, end }
        })?;
        let b = self.b;
        let s = (dphi * dphi + phi * phi).sqrt();
        let num = 2.0 * dphi * dphi + phi * phi + b * s * s * s;
        let ddphi = num / phi;
        let dn_dphi = 2.0 * phi + 3.0 * b * s * phi;
        let dn_ddphi = 4.0 * dphi + 3.0 * b * s * dphi;
        let dddphi = (dn_dphi * phi - num) / (phi * phi) * dphi + dn_ddphi / phi * ddphi;
        Ok(Jet::new(phi, dphi, ddphi, dddphi))
    }

    fn describe(&self) -> String {
        format!("constant-curvature directrix kappa = {}", self.b)
    }
}

/// Integrates from `v0` towards `v_end`; returns the nodes after `v0` and the
/// reason for stopping early, if any.
fn sweep(b: f64, v0: f64, v_end: f64, step: f64) -> (Vec<f64>, Vec<[f64; 3]>, Option<String>) {
    let f = |_v: f64, s: [f64; 2]| -> Result<[f64; 2]> {
        let a = rhs(b, s[0], s[1]);
        if a.is_finite() {
            Ok([s[1], a])
        } else {
            Err(Error::Integration("directrix equation is singular".into()))
        }
    };
    let width = (v_end - v0).abs();
    let (mut vs, mut xs) = (Vec::new(), Vec::new());
    if width == 0.0 {
        return (vs, xs, None);
    }
    let n = ((width / step).ceil() as usize).max(1);
    let h = (v_end - v0) / n as f64;
    let mut state = [1.0, 0.0];
    for i in 0..n {
        let v = v0 + i as f64 * h;
        let next = (|| -> Result<[f64; 2]> {
            let full = rk4_step(&f, v, state, h)?;
            let half = rk4_step(&f, v, state, 0.5 * h)?;
            let two = rk4_step(&f, v + 0.5 * h, half, 0.5 * h)?;
            let diff = (full[0] - two[0]).abs().max((full[1] - two[1]).abs());
            if diff > DIRECTRIX_LOCAL_LIMIT {
                return Err(Error::Integration(format!("step-doubling estimate {diff:e} too large")));
            }
            Ok(two)
        })();
        let reason = match next {
            Err(e) => Some(e.to_string()),
            Ok(s) if !(s[0] > 0.0) || s[1].abs() > DIRECTRIX_SLOPE_LIMIT => Some("slope blows up".to_string()),
            Ok(s) if s[0] * s[0] + s[1] * s[1] < DEGENERATE_SPEED_SQ => Some("degenerate point".to_string()),
            Ok(s) => {
                state = s;
                vs.push(if i + 1 == n { v_end } else { v0 + (i + 1) as f64 * h });
                xs.push([s[0], s[1], rhs(b, s[0], s[1])]);
                None
            }
        };
        if let Some(r) = reason {
            return (vs, xs, Some(format!("stopped at v = {v}: {r}")));
        }
    }
    (vs, xs, None)
}

/// A directrix with `kappa == b` on `v_range`, or on the largest part of it
/// the initial-value problem reaches.
pub fn constant_kappa_directrix(b: f64, v_range: Interval) -> Result<KappaDirectrix> {
    constant_kappa_directrix_with_step(b, v_range, DIRECTRIX_STEP)
}

pub fn constant_kappa_directrix_with_step(b: f64, v_range: Interval, step: f64) -> Result<KappaDirectrix> {
    if b == 0.0 || !b.is_finite() {
        return Err(Error::InvalidArgument("directrix curvature b must be nonzero".into()));
    }
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("step {step} must be positive")));
    }
    if b < 0.0 {
        return Ok(KappaDirectrix {
            directrix: Directrix::new(Arc::new(Constant(-1.0 / b)), v_range),
            truncation: None,
        });
    }
    let v0 = 0.5 * (v_range.start + v_range.end);
    let (lv, lx, lr) = sweep(b, v0, v_range.start, step);
    let (rv, rx, rr) = sweep(b, v0, v_range.end, step);
    let mut vs: Vec<f64> = lv.into_iter().rev().collect();
    let mut xs: Vec<[f64; 3]> = lx.into_iter().rev().collect();
    vs.push(v0);
    xs.push([1.0, 0.0, rhs(b, 1.0, 0.0)]);
    vs.extend(rv);
    xs.extend(rx);
    if vs.len() < 2 {
        return Err(Error::Integration("directrix integration made no progress".into()));
    }
    let realized = Interval::new(vs[0], *vs.last().unwrap())?;
    let truncation = match (lr, rr) {
        (None, None) => None,
        (l, r) => Some([l, r].into_iter().flatten().collect::<Vec<_>>().join("; ")),
    };
    let curve = IvpCurve { b, track: HermiteTrack::new(vs, xs)? };
    Ok(KappaDirectrix { directrix: Directrix::new(Arc::new(curve), realized), truncation })
}
