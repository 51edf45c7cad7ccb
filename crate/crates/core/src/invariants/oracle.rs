//! Finite-difference oracle.
//!
//! The frame fields are sampled as `Vec4`-valued functions of `(u, v)` and
//! differentiated by central differences; the invariants are then read off
//! as Minkowski inner products. Nothing here calls the closed forms in the
//! parent module.

use std::f64::consts::FRAC_1_SQRT_2;

use super::InvariantRecord;
use crate::error::{Error, Result};
use crate::minkowski::Vec4;
use crate::surface::{
    normal_basis_at, normal_frame_at, tangent_frame_at, LocalGeometry, MeridianSurface, CLASSIFY_TOL,
};

pub const DEFAULT_STEP: f64 = 1e-4;

fn check_stencil(s: &MeridianSurface, u: f64, v: f64, h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("oracle step {h} must be positive")));
    }
    let (ud, vd) = (s.u_domain(), s.v_domain());
    for (what, x, d) in [("u", u, ud), ("v", v, vd)] {
        for p in [x - 2.0 * h, x + 2.0 * h] {
            if !d.contains(p) {
                return Err(Error::OutOfDomain { what, value: p, start: d.start, end: d.end });
            }
        }
    }
    Ok(())
}

/// Central differences of a vector field along `u` and `v`.
fn central<const N: usize, F>(field: F, u: f64, v: f64, h: f64) -> Result<([Vec4; N], [Vec4; N])>
where
    F: Fn(f64, f64) -> Result<[Vec4; N]>,
{
    let (up, um) = (field(u + h, v)?, field(u - h, v)?);
    let (vp, vm) = (field(u, v + h)?, field(u, v - h)?);
    let r = 0.5 / h;
    Ok((std::array::from_fn(|i| (up[i] - um[i]) * r), std::array::from_fn(|i| (vp[i] - vm[i]) * r)))
}

/// Oracle output: the record plus the numerical mean curvature vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEvaluation {
    pub record: InvariantRecord,
    /// `(sigma(x,x) + sigma(y,y)) / 2` with `sigma` the normal part of the
    /// numerical `D_x x`, `D_y y`.
    pub mean_curvature: Vec4,
    /// `<H, l>` of the numerical mean curvature vector; zero when `b` points
    /// along `H`.
    pub h_l: f64,
}

/// Frame fields `x, y, b, l` at `(u, v)`; the sign of `<H, H>` must match
/// `epsilon` so that the stencil does not straddle a sign change.
fn geometric_frame(s: &MeridianSurface, u: f64, v: f64, epsilon: i8) -> Result<[Vec4; 4]> {
    let l = s.local(u, v)?;
    let nf = normal_frame_at(&l, CLASSIFY_TOL)?;
    if nf.epsilon != epsilon {
        return Err(Error::MarginallyTrapped { u, v });
    }
    let t = tangent_frame_at(&l);
    Ok([t.x, t.y, nf.b, nf.l])
}

pub fn oracle_evaluation(s: &MeridianSurface, u: f64, v: f64, h: f64) -> Result<OracleEvaluation> {
    check_stencil(s, u, v, h)?;
    let centre = s.local(u, v)?;
    let nf = normal_frame_at(&centre, CLASSIFY_TOL)?;
    let eps = nf.epsilon;
    let [x, y, b, l] = geometric_frame(s, u, v, eps)?;

    let (du, dv) = central(|a, c| geometric_frame(s, a, c, eps), u, v, h)?;
    // x = (z_u + z_v/(fW))/sqrt2, y = (-z_u + z_v/(fW))/sqrt2
    let cv = FRAC_1_SQRT_2 / (centre.f.value * centre.speed);
    let along_x = |i: usize| du[i] * FRAC_1_SQRT_2 + dv[i] * cv;
    let along_y = |i: usize| du[i] * (-FRAC_1_SQRT_2) + dv[i] * cv;
    let (dxx, dxy, dxb) = (along_x(0), along_x(1), along_x(2));
    let (dyy, dyb) = (along_y(1), along_y(2));

    let dot = |a: Vec4, b: Vec4| a.dot(b);
    let nu1 = dot(dxx, b);
    let nu2 = dot(dyy, b);
    let mu = dot(dxy, l);

    let (n1, n2) = (nf.n1, nf.n2);
    let normal = |w: Vec4| n1 * dot(w, n1) - n2 * dot(w, n2);
    let (sxx, sxy, syy) = (normal(dxx), normal(dxy), normal(dyy));
    let hv = (sxx + syy) * 0.5;
    let hh = dot(hv, hv);

    let record = InvariantRecord {
        gamma1: dot(dxx, y),
        gamma2: dot(dyy, x),
        nu1,
        nu2,
        lambda: dot(dxy, b),
        mu,
        beta1: dot(dxb, l),
        beta2: dot(dyb, l),
        gauss: dot(sxx, syy) - dot(sxy, sxy),
        k: -4.0 * nu1 * nu2 * mu * mu,
        varkappa: (nu1 - nu2) * mu,
        h_norm: hh.abs().sqrt(),
        h_n1: dot(hv, n1),
        h_n2: -dot(hv, n2),
        epsilon: if hh >= 0.0 { 1 } else { -1 },
    };
    Ok(OracleEvaluation { record, mean_curvature: hv, h_l: dot(hv, l) })
}

/// Numerical counterpart of [`super::eight_invariants`].
pub fn oracle_invariants(s: &MeridianSurface, u: f64, v: f64, h: f64) -> Result<InvariantRecord> {
    Ok(oracle_evaluation(s, u, v, h)?.record)
}

/// Coefficients of a vector in the frame `(X, Y, n1, n2)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Decomposition {
    pub x: f64,
    pub y: f64,
    pub n1: f64,
    pub n2: f64,
}

impl Decomposition {
    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.n1, self.n2]
    }

    fn of(w: Vec4, frame: &[Vec4; 4]) -> Self {
        let [bx, by, n1, n2] = *frame;
        // <n2, n2> = -1
        Decomposition { x: w.dot(bx), y: w.dot(by), n1: w.dot(n1), n2: -w.dot(n2) }
    }
}

/// Numerical ambient derivatives of the frame `(X, Y, n1, n2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondFundamental {
    /// `<D_X X, n1>, <D_X X, n2>`
    pub xx: [f64; 2],
    /// `<D_X Y, n1>, <D_X Y, n2>`
    pub xy: [f64; 2],
    /// `<D_Y Y, n1>, <D_Y Y, n2>`
    pub yy: [f64; 2],
    /// Frame coefficients of the derivatives listed in [`Self::NAMES`].
    pub derivatives: [Decomposition; 8],
}

impl SecondFundamental {
    pub const NAMES: [&'static str; 8] = ["D_X X", "D_X Y", "D_Y X", "D_Y Y", "D_X n1", "D_Y n1", "D_X n2", "D_Y n2"];
}

fn moving_frame(s: &MeridianSurface, u: f64, v: f64) -> Result<[Vec4; 4]> {
    let l = s.local(u, v)?;
    let t = tangent_frame_at(&l);
    let (n1, n2) = normal_basis_at(&l);
    Ok([t.big_x, t.big_y, n1, n2])
}

/// Central-difference derivatives of `X, Y, n1, n2` along `X` and `Y`. The
/// normals exist at flat points too, so no classification is required.
pub fn oracle_second_fundamental(s: &MeridianSurface, u: f64, v: f64, h: f64) -> Result<SecondFundamental> {
    check_stencil(s, u, v, h)?;
    let centre = s.local(u, v)?;
    let frame = moving_frame(s, u, v)?;
    let (du, dv) = central(|a, c| moving_frame(s, a, c), u, v, h)?;
    // X = z_u is unit, Y = z_v/(fW)
    let cy = 1.0 / (centre.f.value * centre.speed);
    let along_x = |i: usize| du[i];
    let along_y = |i: usize| dv[i] * cy;
    let ds = [along_x(0), along_x(1), along_y(0), along_y(1), along_x(2), along_y(2), along_x(3), along_y(3)];
    let derivatives = ds.map(|w| Decomposition::of(w, &frame));
    let (n1, n2) = (frame[2], frame[3]);
    let inner = |w: Vec4| [w.dot(n1), w.dot(n2)];
    Ok(SecondFundamental { xx: inner(ds[0]), xy: inner(ds[1]), yy: inner(ds[3]), derivatives })
}

/// The frame coefficients predicted by the derivative formulas, in the
/// order of [`SecondFundamental::NAMES`].
pub fn derivative_formulas(l: &LocalGeometry) -> [Decomposition; 8] {
    let d = |x, y, n1, n2| Decomposition { x, y, n1, n2 };
    let r = l.f.d1 / l.f.value;
    let kf = l.kappa / l.f.value;
    let km = l.kappa_m;
    [
        d(0.0, 0.0, 0.0, -km),
        d(0.0, 0.0, 0.0, 0.0),
        d(0.0, r, 0.0, 0.0),
        d(-r, 0.0, kf, -r),
        d(0.0, 0.0, 0.0, 0.0),
        d(0.0, -kf, 0.0, 0.0),
        d(-km, 0.0, 0.0, 0.0),
        d(0.0, -r, 0.0, 0.0),
    ]
}
