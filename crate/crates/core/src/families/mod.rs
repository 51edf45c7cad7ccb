//! Generators for the classified families of meridian surfaces.

mod autonomous;
mod directrix;
mod spec;

pub use autonomous::{integrate_autonomous, AutonomousProfile, RawInterpolant, LOCAL_ERROR_LIMIT};
pub use directrix::{constant_kappa_directrix, constant_kappa_directrix_with_step, KappaDirectrix, DIRECTRIX_STEP};
pub use spec::{Branch, FamilySpec, ARCSIN_CAP_MARGIN};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::function::{ScalarFunction, SharedFn};
use crate::numeric::Interval;
use crate::profile::{Directrix, ProfileCurve, MIN_MAGNITUDE};
use crate::surface::MeridianSurface;

/// Tolerance of the directrix curvature check.
pub const KAPPA_TOL: f64 = 1e-8;
/// Samples of the directrix curvature check.
pub const KAPPA_SAMPLES: usize = 101;
/// Relative tolerance of the defining second-order relation.
pub const RELATION_TOL: f64 = 1e-6;
/// Samples used to trim closed-form profiles and to measure residuals.
pub const PROFILE_SAMPLES: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerateOptions {
    pub step: f64,
    /// How often the step may be halved when the defining relation fails.
    pub max_halvings: u32,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        GenerateOptions { step: 1e-3, max_halvings: 4 }
    }
}

/// `y(t)` of an ODE family as a scalar function.
#[derive(Debug, Clone, Copy)]
struct FamilyRhs(FamilySpec);

impl ScalarFunction for FamilyRhs {
    fn jet(&self, t: f64) -> Result<crate::jet::Jet> {
        self.0.y_jet(t)
    }

    fn describe(&self) -> String {
        format!("y of {}", self.0)
    }
}

#[derive(Debug, Clone)]
pub enum ProfileSource {
    ClosedForm(String),
    Ode {
        solution: Arc<AutonomousProfile>,
        /// Final step size.
        step: f64,
        /// Richardson estimate of the global error in `f`.
        error_estimate: f64,
    },
}

#[derive(Debug, Clone)]
pub struct GeneratedSurface {
    pub surface: MeridianSurface,
    pub spec: FamilySpec,
    pub source: ProfileSource,
    pub requested: Interval,
    pub realized: Interval,
    pub truncation: Option<String>,
    /// Largest relative residual of the defining relation, measured on the
    /// raw interpolant for ODE families.
    pub relation_residual: f64,
}

impl GeneratedSurface {
    pub fn is_truncated(&self) -> bool {
        self.truncation.is_some()
    }

    /// For ODE families, the surface whose `f` derivatives come from the
    /// quintic interpolant instead of the equation `f' = y(f)`.
    pub fn interpolant_surface(&self) -> Result<Option<MeridianSurface>> {
        match &self.source {
            ProfileSource::ClosedForm(_) => Ok(None),
            ProfileSource::Ode { solution, .. } => {
                let f: SharedFn = Arc::new(solution.interpolant());
                let profile = ProfileCurve::new(f, self.realized, self.surface.profile().g_origin());
                Ok(Some(MeridianSurface::new(profile, self.surface.directrix().clone())?))
            }
        }
    }
}

fn check_directrix(spec: &FamilySpec, directrix: &Directrix) -> Result<()> {
    let Some(b) = spec.required_kappa() else { return Ok(()) };
    for v in directrix.domain().linspace(KAPPA_SAMPLES) {
        let kappa = directrix.kappa(v)?;
        if !((kappa - b).abs() <= KAPPA_TOL) {
            return Err(Error::SpecMismatch(format!(
                "{} needs kappa = {b} but the directrix has kappa = {kappa} at v = {v}",
                spec.name()
            )));
        }
    }
    Ok(())
}

/// Longest run of grid points on which `f > 0` and `|f'| >= 1e-9`.
fn valid_run(f: &dyn ScalarFunction, range: Interval) -> Option<Interval> {
    let grid = range.linspace(PROFILE_SAMPLES);
    let ok: Vec<bool> = grid
        .iter()
        .map(|&u| matches!(f.jet(u), Ok(j) if j.value > MIN_MAGNITUDE && j.d1.abs() >= MIN_MAGNITUDE))
        .collect();
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for i in 0..=grid.len() {
        match (ok.get(i).copied().unwrap_or(false), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if best.is_none_or(|(a, b)| i - 1 - s > b - a) {
                    best = Some((s, i - 1));
                }
                start = None;
            }
            _ => {}
        }
    }
    match best {
        Some((a, b)) if b > a => Interval::new(grid[a], grid[b]).ok(),
        _ => None,
    }
}

fn max_relation_residual(spec: &FamilySpec, f: &dyn ScalarFunction, range: Interval) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for u in range.linspace(PROFILE_SAMPLES) {
        let j = f.jet(u)?;
        worst = worst.max(spec.relation_residual(j.value, j.d1, j.d2));
    }
    Ok(worst)
}

/// Builds the surface of `spec` over `u_range` with the given directrix.
/// `f0` is the initial value `f(u_range.start)` of the ODE families and is
/// ignored by the closed-form ones.
pub fn generate(spec: &FamilySpec, f0: f64, u_range: Interval, directrix: &Directrix) -> Result<GeneratedSurface> {
    generate_with(spec, f0, u_range, directrix, GenerateOptions::default())
}

pub fn generate_with(
    spec: &FamilySpec,
    f0: f64,
    u_range: Interval,
    directrix: &Directrix,
    options: GenerateOptions,
) -> Result<GeneratedSurface> {
    spec.validate()?;
    check_directrix(spec, directrix)?;
    if spec.is_ode() {
        generate_ode(spec, f0, u_range, directrix, options)
    } else {
        generate_closed(spec, u_range, directrix)
    }
}

fn generate_closed(spec: &FamilySpec, u_range: Interval, directrix: &Directrix) -> Result<GeneratedSurface> {
    if let FamilySpec::ParallelA { sign: Branch::Minus, .. } = spec {
        return Err(Error::InvalidSpec("sign=- gives f < 0; only sign=+ yields a profile".into()));
    }
    let text = spec.closed_form_f().expect("closed-form family");
    let f: SharedFn = Arc::new(Expr::parse(&text, "u")?);
    let realized = valid_run(f.as_ref(), u_range).ok_or_else(|| {
        Error::ProfileInvariant(format!("no sub-range of [{}, {}] has f > 0 and f' != 0", u_range.start, u_range.end))
    })?;
    let truncation = (realized != u_range)
        .then(|| format!("trimmed to [{}, {}] where f > 0 and f' != 0", realized.start, realized.end));
    let g_origin = spec.closed_form_g(realized.start).unwrap_or(0.0);
    let relation_residual = max_relation_residual(spec, f.as_ref(), realized)?;
    let surface = MeridianSurface::new(ProfileCurve::new(f, realized, g_origin), directrix.clone())?;
    Ok(GeneratedSurface {
        surface,
        spec: *spec,
        source: ProfileSource::ClosedForm(text),
        requested: u_range,
        realized,
        truncation,
        relation_residual,
    })
}

fn generate_ode(
    spec: &FamilySpec,
    f0: f64,
    u_range: Interval,
    directrix: &Directrix,
    options: GenerateOptions,
) -> Result<GeneratedSurface> {
    if !(f0 > 0.0) {
        return Err(Error::InvalidArgument(format!("f0 = {f0} must be positive")));
    }
    let y: SharedFn = Arc::new(FamilyRhs(*spec));
    let mut step = options.step;
    let mut coarse = Arc::new(integrate_autonomous(y.clone(), f0, u_range, step)?);
    loop {
        let fine = Arc::new(integrate_autonomous(y.clone(), f0, u_range, 0.5 * step)?);
        let common = coarse.realized().end.min(fine.realized().end);
        let mut error_estimate: f64 = 0.0;
        for (&u, x) in coarse.track().nodes().iter().zip(coarse.track().values()) {
            if u <= common {
                error_estimate = error_estimate.max((fine.value(u)? - x[0]).abs() * 16.0 / 15.0);
            }
        }
        let realized = fine.realized();
        let raw = fine.interpolant();
        let relation_residual = max_relation_residual(spec, &raw, realized)?;
        let halvings = (options.step / step).log2().round() as u32;
        if relation_residual <= RELATION_TOL || halvings >= options.max_halvings {
            let truncation = fine.truncation().map(str::to_string);
            let profile = ProfileCurve::new(fine.clone(), realized, 0.0);
            let surface = MeridianSurface::new(profile, directrix.clone())?;
            return Ok(GeneratedSurface {
                surface,
                spec: *spec,
                source: ProfileSource::Ode { solution: fine, step: 0.5 * step, error_estimate },
                requested: u_range,
                realized,
                truncation,
                relation_residual,
            });
        }
        step *= 0.5;
        coarse = fine;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::Constant;
    use crate::invariants::{eight_invariants, gauss_curvature};
    use std::f64::consts::PI;

    fn range(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn unit_directrix() -> Directrix {
        Directrix::new(Arc::new(Constant(1.0)), range(0.0, 2.0 * PI))
    }

    #[test]
    fn constant_gauss_example() {
        let spec: FamilySpec = "constant-gauss K=1 alpha=1 beta=0".parse().unwrap();
        let g = generate(&spec, 1.0, range(0.1, 1.4), &unit_directrix()).unwrap();
        assert!(!g.is_truncated());
        for u in g.realized.linspace(50) {
            assert!((gauss_curvature(&g.surface, u).unwrap() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn constant_gauss_is_trimmed() {
        // f' = -sin u vanishes at the left end
        let spec: FamilySpec = "constant-gauss K=1 alpha=1 beta=0".parse().unwrap();
        let g = generate(&spec, 1.0, range(0.0, 1.4), &unit_directrix()).unwrap();
        assert!(g.is_truncated());
        assert!(g.realized.start > 0.0 && g.realized.end == 1.4);
    }

    #[test]
    fn parallel_a_example() {
        let spec: FamilySpec = "parallel-a c=1 d=1 a=0 sign=+".parse().unwrap();
        let g = generate(&spec, 1.0, range(0.0, 3.0), &unit_directrix()).unwrap();
        let p = g.surface.profile();
        assert!((p.g(3.0).unwrap() + 16.0 / 3.0).abs() < 1e-9);
        let r = eight_invariants(&g.surface, 0.0, 0.0).unwrap();
        assert!(r.beta1.abs() < 1e-12 && r.beta2.abs() < 1e-12);
        let minus: FamilySpec = "parallel-a c=1 d=1 a=0 sign=-".parse().unwrap();
        assert!(matches!(generate(&minus, 1.0, range(0.0, 3.0), &unit_directrix()), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn parallel_b_example() {
        let spec: FamilySpec = "parallel-b a=1 c=1 b=-1".parse().unwrap();
        let g = generate(&spec, 1.0, range(0.0, 1.0), &unit_directrix()).unwrap();
        let raw = g.interpolant_surface().unwrap().unwrap();
        for u in g.realized.linspace(50) {
            let j = raw.profile().f_jet(u).unwrap();
            let ratio = (j.value * j.d2 + j.d1 * j.d1) / j.d1;
            assert!((ratio - 1.0).abs() < 1e-7, "u={u} {ratio}");
        }
    }

    #[test]
    fn chen_example() {
        let spec: FamilySpec = "chen b=1 c=1 exponent_branch=+1".parse().unwrap();
        let d = constant_kappa_directrix(1.0, range(-0.4, 0.4)).unwrap().directrix;
        let g = generate(&spec, 1.5, range(0.0, 1.0), &d).unwrap();
        for u in g.realized.linspace(10) {
            for v in d.domain().linspace(5) {
                let r = eight_invariants(&g.surface, u, v).unwrap();
                assert!(r.lambda.abs() <= 1e-7, "{u} {v} {}", r.lambda);
            }
        }
    }

    #[test]
    fn directrix_mismatch() {
        let spec: FamilySpec = "parallel-b a=1 c=1 b=-2".parse().unwrap();
        assert!(matches!(generate(&spec, 1.0, range(0.0, 1.0), &unit_directrix()), Err(Error::SpecMismatch(_))));
        let wavy = Directrix::from_expr("2 + sin(v)", range(0.0, 1.0)).unwrap();
        let spec: FamilySpec = "parallel-b a=1 c=1 b=-1".parse().unwrap();
        assert!(matches!(generate(&spec, 1.0, range(0.0, 1.0), &wavy), Err(Error::SpecMismatch(_))));
    }

    #[test]
    fn constant_mean_truncates_at_arcsin_cap() {
        let spec: FamilySpec = "constant-mean a=0.5 b=-2 C=0 epsilon=1 branch=+".parse().unwrap();
        let d = constant_kappa_directrix(-2.0, range(0.0, 1.0)).unwrap().directrix;
        let g = generate(&spec, 1.0, range(0.0, 5.0), &d).unwrap();
        assert!(g.is_truncated());
        assert!(g.realized.end < 5.0);
        assert!(g.relation_residual <= RELATION_TOL, "{}", g.relation_residual);
    }
}
