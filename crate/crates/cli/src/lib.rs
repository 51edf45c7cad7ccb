//! Command-line front end for meridian surfaces of parabolic type.

// `!(x <= tol)` deliberately treats NaN as a failure
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod args;
pub mod mesh;
pub mod report;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use meridian_core::families::ProfileSource;
use meridian_core::invariants::classify_and_evaluate;
use meridian_core::{
    constant_kappa_directrix, generate, Constant, Directrix, Execution, FamilySpec, GeneratedSurface, Interval,
    MeridianSurface, ParamGrid, ProfileCurve,
};
use serde::Serialize;

pub use args::{Cli, Command};
use args::{FamilyArgs, GridArgs, GridSize, MeshArgs, SurfaceArgs, VerifyArgs};
pub use mesh::SurfaceMesh;
pub use report::{CheckRecord, VerificationReport, VerifyOptions};

/// Process exit status of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A check failed or the input was rejected.
    Failed,
    /// Output written for a shorter range than requested.
    Truncated,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Truncated => 2,
        }
    }
}

/// Shortest round-trip representation (at most 17 significant digits).
pub fn fmt_float(x: f64) -> String {
    format!("{x:?}")
}

/// A surface built from the command line, with its generation metadata.
pub struct BuiltSurface {
    pub surface: MeridianSurface,
    pub generated: Option<GeneratedSurface>,
    /// Canonical description echoed into outputs.
    pub label: String,
    /// Why the directrix covers less than the requested v range.
    pub directrix_truncation: Option<String>,
}

fn parse_spec(text: &str) -> anyhow::Result<FamilySpec> {
    text.parse::<FamilySpec>().with_context(|| format!("invalid spec `{text}`"))
}

/// `--phi` if given, else the constant-curvature directrix the family
/// needs, else `phi = 1`.
fn directrix_for(
    spec: Option<&FamilySpec>,
    phi: Option<&str>,
    v: Interval,
) -> anyhow::Result<(Directrix, Option<String>)> {
    if let Some(text) = phi {
        return Ok((Directrix::from_expr(text, v)?, None));
    }
    match spec.and_then(FamilySpec::required_kappa) {
        Some(b) => {
            let k = constant_kappa_directrix(b, v)?;
            Ok((k.directrix, k.truncation))
        }
        None => Ok((Directrix::new(Arc::new(Constant(1.0)), v), None)),
    }
}

pub fn build_surface(a: &SurfaceArgs) -> anyhow::Result<BuiltSurface> {
    match (&a.spec, &a.f) {
        (Some(text), _) => {
            let spec = parse_spec(text)?;
            let (d, directrix_truncation) = directrix_for(Some(&spec), a.phi.as_deref(), a.v.interval)?;
            let gen = generate(&spec, a.f0, a.u.interval, &d)?;
            Ok(BuiltSurface {
                surface: gen.surface.clone(),
                label: spec.to_string(),
                generated: Some(gen),
                directrix_truncation,
            })
        }
        (None, Some(f)) => {
            let (d, _) = directrix_for(None, a.phi.as_deref(), a.v.interval)?;
            let profile = ProfileCurve::from_expr(f, a.u.interval, a.g0)?;
            let phi = a.phi.as_deref().unwrap_or("1");
            Ok(BuiltSurface {
                surface: MeridianSurface::new(profile, d)?,
                generated: None,
                label: format!("f={f} phi={phi} g0={}", a.g0),
                directrix_truncation: None,
            })
        }
        (None, None) => bail!("either --spec or --f is required"),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Serialize)]
struct FamilyEcho {
    spec: String,
    f0: f64,
    requested_range: [f64; 2],
    realized_range: [f64; 2],
    truncated: bool,
    truncation: Option<String>,
    source: String,
    step: Option<f64>,
    error_estimate: Option<f64>,
    relation_residual: f64,
    directrix_truncation: Option<String>,
}

fn echo_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

pub fn cmd_family(a: &FamilyArgs) -> anyhow::Result<Status> {
    let spec = parse_spec(&a.spec)?;
    let (d, directrix_truncation) = directrix_for(Some(&spec), a.phi.as_deref(), a.v.interval)?;
    let gen = generate(&spec, a.f0, a.u.interval, &d)?;
    let realized = gen.realized;
    let profile = gen.surface.profile();

    let samples = match a.u.step {
        Some(h) => {
            let n = (realized.width() / h + 1e-9).floor() as usize;
            let mut us: Vec<f64> = (0..=n).map(|i| realized.start + i as f64 * h).collect();
            if us.last().is_some_and(|&u| realized.end - u > 1e-9 * h) {
                us.push(realized.end);
            }
            us
        }
        None => realized.linspace(101),
    };
    let mut csv = String::from("u,f,df,d2f,g\n");
    for u in samples {
        let u = u.min(realized.end);
        let j = profile.f_jet(u)?;
        let g = profile.g(u)?;
        let row = [u, j.value, j.d1, j.d2, g].map(fmt_float).join(",");
        writeln!(csv, "{row}")?;
    }

    let (source, step, error_estimate) = match &gen.source {
        ProfileSource::ClosedForm(text) => (format!("closed form f = {text}"), None, None),
        ProfileSource::Ode { step, error_estimate, .. } => {
            ("RK4 integration of f' = y(f)".to_string(), Some(*step), Some(*error_estimate))
        }
    };
    let echo = FamilyEcho {
        spec: spec.to_string(),
        f0: a.f0,
        requested_range: [gen.requested.start, gen.requested.end],
        realized_range: [realized.start, realized.end],
        truncated: gen.is_truncated(),
        truncation: gen.truncation.clone(),
        source,
        step,
        error_estimate,
        relation_residual: gen.relation_residual,
        directrix_truncation,
    };
    let json = to_json(&echo)?;
    match &a.out {
        Some(p) => {
            write_output(Some(p), &csv)?;
            write_output(Some(&echo_path(p)), &json)?;
        }
        None => {
            write_output(None, &csv)?;
            eprint!("{json}");
        }
    }
    Ok(if gen.is_truncated() { Status::Truncated } else { Status::Ok })
}

pub const INVARIANT_COLUMNS: [&str; 16] = [
    "u", "v", "gamma1", "gamma2", "nu1", "nu2", "lambda", "mu", "beta1", "beta2", "K", "k", "varkappa", "H_norm",
    "epsilon", "case",
];

#[derive(Debug, Serialize)]
struct InvariantRow {
    u: f64,
    v: f64,
    case: &'static str,
    #[serde(flatten)]
    values: Option<RowValues>,
}

#[derive(Debug, Serialize)]
struct RowValues {
    gamma1: f64,
    gamma2: f64,
    nu1: f64,
    nu2: f64,
    lambda: f64,
    mu: f64,
    beta1: f64,
    beta2: f64,
    #[serde(rename = "K")]
    gauss: f64,
    k: f64,
    varkappa: f64,
    #[serde(rename = "H_norm")]
    h_norm: f64,
    epsilon: i8,
}

#[derive(Debug, Serialize)]
struct InvariantTable {
    spec: String,
    realized_range: [f64; 2],
    grid: [usize; 2],
    rows: Vec<InvariantRow>,
}

/// Table rows in `(u index, v index)` order.
fn invariant_rows(s: &MeridianSurface, grid: &ParamGrid, tol: f64) -> anyhow::Result<Vec<InvariantRow>> {
    let rows = grid.map(Execution::Parallel, |u, v| classify_and_evaluate(s, u, v, tol).map(|r| (u, v, r)));
    rows.into_iter()
        .map(|r| {
            let (u, v, r) = r?;
            Ok(match r {
                Ok(r) => InvariantRow {
                    u,
                    v,
                    case: meridian_core::PointCase::General.label(),
                    values: Some(RowValues {
                        gamma1: r.gamma1,
                        gamma2: r.gamma2,
                        nu1: r.nu1,
                        nu2: r.nu2,
                        lambda: r.lambda,
                        mu: r.mu,
                        beta1: r.beta1,
                        beta2: r.beta2,
                        gauss: r.gauss,
                        k: r.k,
                        varkappa: r.varkappa,
                        h_norm: r.h_norm,
                        epsilon: r.epsilon,
                    }),
                },
                Err(case) => InvariantRow { u, v, case: case.label(), values: None },
            })
        })
        .collect()
}

fn invariants_csv(rows: &[InvariantRow]) -> String {
    let mut csv = INVARIANT_COLUMNS.join(",");
    csv.push('\n');
    for r in rows {
        let mut cells = vec![fmt_float(r.u), fmt_float(r.v)];
        match &r.values {
            Some(x) => {
                cells.extend(
                    [
                        x.gamma1, x.gamma2, x.nu1, x.nu2, x.lambda, x.mu, x.beta1, x.beta2, x.gauss, x.k, x.varkappa,
                        x.h_norm,
                    ]
                    .map(fmt_float),
                );
                cells.push(x.epsilon.to_string());
            }
            None => cells.extend(std::iter::repeat_n(String::new(), 13)),
        }
        cells.push(r.case.to_string());
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    csv
}

fn surface_grid(b: &BuiltSurface, size: GridSize) -> anyhow::Result<ParamGrid> {
    Ok(ParamGrid::new(b.surface.u_domain(), b.surface.v_domain(), size.nu, size.nv)?)
}

pub fn cmd_invariants(a: &GridArgs) -> anyhow::Result<Status> {
    let b = build_surface(&a.surface)?;
    let size = GridSize::resolve(a.grid, &a.surface.u, &a.surface.v);
    let grid = surface_grid(&b, size)?;
    let rows = invariant_rows(&b.surface, &grid, a.tol)?;
    let text = match a.format {
        args::Format::Csv => invariants_csv(&rows),
        args::Format::Json => to_json(&InvariantTable {
            spec: b.label.clone(),
            realized_range: [grid.u.start, grid.u.end],
            grid: [size.nu, size.nv],
            rows,
        })?,
    };
    write_output(a.out.as_deref(), &text)?;
    Ok(Status::Ok)
}

/// Full verification of a built surface.
pub fn verify_surface(b: &BuiltSurface, opts: &VerifyOptions) -> anyhow::Result<VerificationReport> {
    let mut checks = report::surface_checks(&b.surface, opts)?;
    if let Some(gen) = &b.generated {
        checks.extend(report::family_checks(gen, opts)?);
    }
    let d = b.surface.u_domain();
    Ok(VerificationReport::new(b.label.clone(), [d.start, d.end], opts.grid, checks))
}

pub fn cmd_verify(a: &VerifyArgs) -> anyhow::Result<Status> {
    let b = build_surface(&a.surface)?;
    let size = GridSize::resolve(a.grid, &a.surface.u, &a.surface.v);
    let opts = VerifyOptions {
        grid: [size.nu, size.nv],
        oracle_tol: a.tol,
        oracle_step: a.oracle_step,
        exec: Execution::Parallel,
    };
    let rep = verify_surface(&b, &opts)?;
    let json = to_json(&rep)?;
    if let Some(p) = &a.out {
        write_output(Some(p), &json)?;
    }
    if a.format == Some(args::Format::Json) {
        write_output(None, &json)?;
    } else {
        println!("{rep}");
    }
    Ok(if rep.pass { Status::Ok } else { Status::Failed })
}

pub fn cmd_mesh(a: &MeshArgs) -> anyhow::Result<Status> {
    let b = build_surface(&a.surface)?;
    let size = GridSize::resolve(a.grid, &a.surface.u, &a.surface.v);
    let m = SurfaceMesh::build(b.label.clone(), &b.surface, size.nu, size.nv, &a.fields, a.projection, a.tol)?;
    write_output(a.out.as_deref(), &to_json(&m)?)?;
    Ok(Status::Ok)
}

pub fn run(cli: &Cli) -> anyhow::Result<Status> {
    match &cli.command {
        Command::Family(a) => cmd_family(a),
        Command::Invariants(a) => cmd_invariants(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Mesh(a) => cmd_mesh(a),
    }
}
