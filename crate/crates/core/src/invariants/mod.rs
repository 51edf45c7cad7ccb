//! Closed-form invariants of meridian surfaces of parabolic type, and a
//! finite-difference oracle ([`oracle`]) that recomputes them from the frame
//! fields.

pub mod oracle;

pub use oracle::{
    derivative_formulas, oracle_evaluation, oracle_invariants, oracle_second_fundamental, Decomposition,
    OracleEvaluation, SecondFundamental, DEFAULT_STEP,
};

use std::f64::consts::SQRT_2;

use crate::error::Result;
use crate::surface::{normal_frame_at, LocalGeometry, MeridianSurface, CLASSIFY_TOL};

/// The invariants of the surface at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantRecord {
    pub gamma1: f64,
    pub gamma2: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub lambda: f64,
    pub mu: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Gauss curvature.
    pub gauss: f64,
    pub k: f64,
    /// Curvature of the normal connection.
    pub varkappa: f64,
    pub h_norm: f64,
    /// Coefficients of `H = h_n1 n1 + h_n2 n2`.
    pub h_n1: f64,
    pub h_n2: f64,
    pub epsilon: i8,
}

impl InvariantRecord {
    /// `(gamma1, gamma2, nu1, nu2, lambda, mu, beta1, beta2)`
    pub fn eight(&self) -> [f64; 8] {
        [self.gamma1, self.gamma2, self.nu1, self.nu2, self.lambda, self.mu, self.beta1, self.beta2]
    }

    pub const EIGHT_NAMES: [&'static str; 8] = ["gamma1", "gamma2", "nu1", "nu2", "lambda", "mu", "beta1", "beta2"];

    /// Residuals of the consistency identities, in the order
    /// `gamma1 + gamma2`, `nu1 - nu2`, `varkappa`, `k + 4 nu1 nu2 mu^2`,
    /// `K - eps (nu1 nu2 - lambda^2 + mu^2)`.
    pub fn identity_residuals(&self) -> [f64; 5] {
        let e = self.epsilon as f64;
        [
            self.gamma1 + self.gamma2,
            self.nu1 - self.nu2,
            self.varkappa,
            self.k + 4.0 * self.nu1 * self.nu2 * self.mu * self.mu,
            self.gauss - e * (self.nu1 * self.nu2 - self.lambda * self.lambda + self.mu * self.mu),
        ]
    }

    pub const IDENTITY_NAMES: [&'static str; 5] =
        ["gamma1+gamma2", "nu1-nu2", "varkappa", "k+4nu1nu2mu^2", "K-eps(nu1nu2-lambda^2+mu^2)"];
}

/// `K = -f''/f`.
pub fn gauss_curvature(s: &MeridianSurface, u: f64) -> Result<f64> {
    let f = s.profile().f_jet(u)?;
    Ok(-f.d2 / f.value)
}

/// `k = -kappa_m^2 kappa^2 / f^2`.
pub fn invariant_k(s: &MeridianSurface, u: f64, v: f64) -> Result<f64> {
    let l = s.local(u, v)?;
    Ok(-(l.kappa_m * l.kappa_m) * (l.kappa * l.kappa) / (l.f.value * l.f.value))
}

/// Mean curvature at a General point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCurvature {
    pub h_n1: f64,
    pub h_n2: f64,
    pub norm: f64,
    pub epsilon: i8,
}

fn require_general(l: &LocalGeometry) -> Result<()> {
    normal_frame_at(l, CLASSIFY_TOL).map(|_| ())
}

fn mean_curvature_at(l: &LocalGeometry) -> MeanCurvature {
    let (f, f1) = (l.f.value, l.f.d1);
    let epsilon = l.epsilon();
    MeanCurvature {
        h_n1: l.kappa / (2.0 * f),
        h_n2: -l.p / (2.0 * f * f1),
        norm: (epsilon as f64 * l.disc / (4.0 * f * f * f1 * f1)).sqrt(),
        epsilon,
    }
}

/// `H = kappa/(2f) n1 - (f f'' + f'^2)/(2 f f') n2` and its norm.
pub fn mean_curvature(s: &MeridianSurface, u: f64, v: f64) -> Result<MeanCurvature> {
    let l = s.local(u, v)?;
    require_general(&l)?;
    Ok(mean_curvature_at(&l))
}

/// Closed-form record at a prepared point. The caller guarantees a General
/// point.
pub fn eight_invariants_at(l: &LocalGeometry) -> InvariantRecord {
    let (f, f1, f2) = (l.f.value, l.f.d1, l.f.d2);
    let (kappa, p) = (l.kappa, l.p);
    let eps = l.epsilon() as f64;
    let root = (eps * l.disc).sqrt();

    let gamma1 = f1 / (SQRT_2 * f);
    let nu = root / (2.0 * f * f1);
    let (nu1, nu2) = (nu, nu);
    let lambda = eps * (kappa * kappa * f1 * f1 + f * f * f2 * f2 - f1.powi(4)) / (2.0 * f * f1 * root);
    let mu = eps * kappa * f2 / root;
    // d/du (p / f')
    let q = (l.p_dot * f1 - p * f2) / (f1 * f1);
    let pre = f1 * f1 / (SQRT_2 * eps * l.disc);
    let twist = l.kappa_dot * p / (f * f1 * l.speed);
    let beta1 = -pre * (kappa * q - twist);
    let beta2 = pre * (kappa * q + twist);
    let mc = mean_curvature_at(l);

    InvariantRecord {
        gamma1,
        gamma2: -gamma1,
        nu1,
        nu2,
        lambda,
        mu,
        beta1,
        beta2,
        gauss: -f2 / f,
        k: -(l.kappa_m * l.kappa_m) * (kappa * kappa) / (f * f),
        varkappa: (nu1 - nu2) * mu,
        h_norm: mc.norm,
        h_n1: mc.h_n1,
        h_n2: mc.h_n2,
        epsilon: mc.epsilon,
    }
}

/// All closed-form invariants at a General point.
pub fn eight_invariants(s: &MeridianSurface, u: f64, v: f64) -> Result<InvariantRecord> {
    let l = s.local(u, v)?;
    require_general(&l)?;
    Ok(eight_invariants_at(&l))
}

/// `(nu1 - nu2) mu`, identically zero for these surfaces.
pub fn normal_connection_curvature(s: &MeridianSurface, u: f64, v: f64) -> Result<f64> {
    Ok(eight_invariants(s, u, v)?.varkappa)
}

/// Invariants at every point of a list, with non-General points reported as
/// their case instead of an error.
pub fn classify_and_evaluate(
    s: &MeridianSurface,
    u: f64,
    v: f64,
    tol: f64,
) -> Result<std::result::Result<InvariantRecord, crate::surface::PointCase>> {
    let l = s.local(u, v)?;
    match l.classify(tol) {
        crate::surface::PointCase::General => Ok(Ok(eight_invariants_at(&l))),
        case => Ok(Err(case)),
    }
}
