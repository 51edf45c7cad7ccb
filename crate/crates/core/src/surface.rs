//! The meridian surface
//! `z(u,v) = f phi cos v e1 + f phi sin v e2 + (f phi^2/2 + g) xi1 + f xi2`
//! and its tangent, normal and geometric frame fields.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::minkowski::Vec4;
use crate::numeric::Interval;
use crate::profile::{validate_profile, Directrix, ProfileCurve, DEGENERATE_SPEED_SQ};

/// Default tolerance of [`MeridianSurface::classify_point`].
pub const CLASSIFY_TOL: f64 = 1e-9;
/// Samples used when a surface validates its profile and directrix.
pub const VALIDATION_SAMPLES: usize = 257;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointCase {
    /// `kappa = 0`: the surface lies in a hyperplane.
    HyperplanarFlat,
    /// `kappa_m = 0`: a developable ruled surface.
    DevelopableRuledFlat,
    /// `<H, H> = 0` with `kappa kappa_m != 0`.
    MarginallyTrapped,
    General,
}

impl PointCase {
    pub fn label(self) -> &'static str {
        match self {
            PointCase::HyperplanarFlat => "HyperplanarFlat",
            PointCase::DevelopableRuledFlat => "DevelopableRuledFlat",
            PointCase::MarginallyTrapped => "MarginallyTrapped",
            PointCase::General => "General",
        }
    }
}

impl fmt::Display for PointCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Unit tangents `X, Y` and principal tangents `x = (X+Y)/sqrt2`,
/// `y = (-X+Y)/sqrt2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentFrame {
    pub big_x: Vec4,
    pub big_y: Vec4,
    pub x: Vec4,
    pub y: Vec4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFrame {
    pub n1: Vec4,
    pub n2: Vec4,
    /// Unit normal along the mean curvature vector.
    pub b: Vec4,
    pub l: Vec4,
    /// Sign of `<H, H>`.
    pub epsilon: i8,
}

/// Every scalar the closed forms need at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalGeometry {
    pub u: f64,
    pub v: f64,
    /// `(f, f', f'', f''')`
    pub f: Jet,
    pub g1: f64,
    pub g2: f64,
    /// `(phi, phi', phi'', phi''')`
    pub phi: Jet,
    /// `sqrt(phi'^2 + phi^2)`
    pub speed: f64,
    pub kappa: f64,
    pub kappa_dot: f64,
    pub kappa_m: f64,
    /// `f f'' + f'^2`
    pub p: f64,
    /// `d/du (f f'' + f'^2) = f f''' + 3 f' f''`
    pub p_dot: f64,
    /// `kappa^2 f'^2 - (f f'' + f'^2)^2`, whose sign is that of `<H, H>`.
    pub disc: f64,
}

impl LocalGeometry {
    pub fn classify(&self, tol: f64) -> PointCase {
        if self.kappa.abs() <= tol {
            PointCase::HyperplanarFlat
        } else if self.kappa_m.abs() <= tol {
            PointCase::DevelopableRuledFlat
        } else {
            let scale = (self.kappa * self.f.d1).abs().max(self.p.abs()).max(tol);
            if self.disc.abs() <= tol * scale * scale {
                PointCase::MarginallyTrapped
            } else {
                PointCase::General
            }
        }
    }

    pub fn epsilon(&self) -> i8 {
        if self.disc >= 0.0 {
            1
        } else {
            -1
        }
    }
}

#[derive(Debug, Clone)]
pub struct MeridianSurface {
    profile: ProfileCurve,
    directrix: Directrix,
}

impl MeridianSurface {
    /// Validates the profile (`f > 0`, `f' != 0`) and the directrix
    /// (`phi'^2 + phi^2 != 0`) on uniform grids before accepting them.
    pub fn new(profile: ProfileCurve, directrix: Directrix) -> Result<Self> {
        let report = validate_profile(&profile, VALIDATION_SAMPLES)?;
        if let Some(v) = report.first_violation() {
            return Err(Error::ProfileInvariant(format!("{:?} fails at u = {} (value {})", v.predicate, v.u, v.value)));
        }
        for v in directrix.domain().linspace(VALIDATION_SAMPLES) {
            let p = directrix.phi_jet(v)?;
            if p.d1 * p.d1 + p.value * p.value < DEGENERATE_SPEED_SQ {
                return Err(Error::DegenerateDirectrix { v });
            }
        }
        Ok(MeridianSurface { profile, directrix })
    }

    pub fn profile(&self) -> &ProfileCurve {
        &self.profile
    }

    pub fn directrix(&self) -> &Directrix {
        &self.directrix
    }

    pub fn u_domain(&self) -> Interval {
        self.profile.domain()
    }

    pub fn v_domain(&self) -> Interval {
        self.directrix.domain()
    }

    pub fn local(&self, u: f64, v: f64) -> Result<LocalGeometry> {
        let f = self.profile.f_jet(u)?;
        if f.d1 == 0.0 {
            return Err(Error::ProfileInvariant(format!("f' vanishes at u = {u}")));
        }
        let d = self.directrix.point(v)?;
        let g1 = -0.5 / f.d1;
        let g2 = f.d2 / (2.0 * f.d1 * f.d1);
        let p = f.value * f.d2 + f.d1 * f.d1;
        let p_dot = f.value * f.d3 + 3.0 * f.d1 * f.d2;
        let kf = d.kappa * f.d1;
        Ok(LocalGeometry {
            u,
            v,
            f,
            g1,
            g2,
            phi: d.phi,
            speed: d.speed,
            kappa: d.kappa,
            kappa_dot: d.kappa_dot,
            kappa_m: f.d2 / f.d1,
            p,
            p_dot,
            disc: kf * kf - p * p,
        })
    }

    /// `z(u, v)` in e-coordinates.
    pub fn embed(&self, u: f64, v: f64) -> Result<Vec4> {
        let f = self.profile.f_jet(u)?.value;
        let phi = self.directrix.phi_jet(v)?.value;
        let g = self.profile.g(u)?;
        let (s, c) = v.sin_cos();
        Ok(Vec4::from_pseudo(f * phi * c, f * phi * s, 0.5 * f * phi * phi + g, f))
    }

    /// The coordinate derivatives `(z_u, z_v)`.
    pub fn partials(&self, u: f64, v: f64) -> Result<(Vec4, Vec4)> {
        Ok(partials_at(&self.local(u, v)?))
    }

    pub fn tangent_frame(&self, u: f64, v: f64) -> Result<TangentFrame> {
        Ok(tangent_frame_at(&self.local(u, v)?))
    }

    /// `(E, F, G) = (-2 f' g', 0, f^2 (phi'^2 + phi^2))`.
    pub fn first_fundamental_form(&self, u: f64, v: f64) -> Result<(f64, f64, f64)> {
        let f = self.profile.f_jet(u)?;
        let phi = self.directrix.phi_jet(v)?;
        let g1 = -0.5 / f.d1;
        Ok((-2.0 * f.d1 * g1, 0.0, f.value * f.value * (phi.d1 * phi.d1 + phi.value * phi.value)))
    }

    /// The normals `n1, n2`, defined at every regular point.
    pub fn normal_basis(&self, u: f64, v: f64) -> Result<(Vec4, Vec4)> {
        Ok(normal_basis_at(&self.local(u, v)?))
    }

    /// Full normal frame including `b, l`. Requires a General point.
    pub fn normal_frame(&self, u: f64, v: f64) -> Result<NormalFrame> {
        normal_frame_at(&self.local(u, v)?, CLASSIFY_TOL)
    }

    pub fn classify_point(&self, u: f64, v: f64, tol: f64) -> Result<PointCase> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!("classification tolerance {tol} must be positive")));
        }
        Ok(self.local(u, v)?.classify(tol))
    }
}

pub fn partials_at(l: &LocalGeometry) -> (Vec4, Vec4) {
    let (f, phi) = (l.f, l.phi);
    let (s, c) = l.v.sin_cos();
    let zu =
        Vec4::from_pseudo(f.d1 * phi.value * c, f.d1 * phi.value * s, 0.5 * f.d1 * phi.value * phi.value + l.g1, f.d1);
    let zv = Vec4::from_pseudo(
        f.value * (phi.d1 * c - phi.value * s),
        f.value * (phi.d1 * s + phi.value * c),
        f.value * phi.value * phi.d1,
        0.0,
    );
    (zu, zv)
}

pub fn tangent_frame_at(l: &LocalGeometry) -> TangentFrame {
    let (zu, zv) = partials_at(l);
    let big_x = zu;
    let big_y = zv * (1.0 / (l.f.value * l.speed));
    TangentFrame { big_x, big_y, x: (big_x + big_y) * FRAC_1_SQRT_2, y: (big_y - big_x) * FRAC_1_SQRT_2 }
}

pub fn normal_basis_at(l: &LocalGeometry) -> (Vec4, Vec4) {
    let (f1, phi) = (l.f.d1, l.phi);
    let (s, c) = l.v.sin_cos();
    let n1 = Vec4::from_pseudo(phi.d1 * s + phi.value * c, -phi.d1 * c + phi.value * s, phi.value * phi.value, 0.0)
        * (1.0 / l.speed);
    let n2 =
        Vec4::from_pseudo(phi.value * c, phi.value * s, (f1 * phi.value * phi.value - 2.0 * l.g1) / (2.0 * f1), 1.0)
            * (-f1);
    (n1, n2)
}

pub fn normal_frame_at(l: &LocalGeometry, tol: f64) -> Result<NormalFrame> {
    let (n1, n2) = normal_basis_at(l);
    match l.classify(tol) {
        PointCase::General => {}
        PointCase::MarginallyTrapped => return Err(Error::MarginallyTrapped { u: l.u, v: l.v }),
        case => return Err(Error::FlatPoint { u: l.u, v: l.v, case, n1, n2 }),
    }
    let kf = l.kappa * l.f.d1;
    let epsilon = l.epsilon();
    let (b, lv) = if epsilon > 0 {
        let r = 1.0 / l.disc.sqrt();
        ((n1 * kf - n2 * l.p) * r, (n1 * l.p - n2 * kf) * r)
    } else {
        let r = 1.0 / (-l.disc).sqrt();
        ((n1 * kf - n2 * l.p) * (-r), (n2 * kf - n1 * l.p) * r)
    };
    Ok(NormalFrame { n1, n2, b, l: lv, epsilon })
}
