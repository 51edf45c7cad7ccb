use std::collections::BTreeMap;

use anyhow::bail;
use meridian_core::invariants::classify_and_evaluate;
use meridian_core::{Execution, InvariantRecord, MeridianSurface, ParamGrid};
use serde::Serialize;

use crate::args::Projection;

pub const FIELD_NAMES: [&str; 6] = ["K", "H_norm", "k", "lambda", "beta1", "beta2"];

fn field(r: &InvariantRecord, name: &str) -> f64 {
    match name {
        "K" => r.gauss,
        "H_norm" => r.h_norm,
        "k" => r.k,
        "lambda" => r.lambda,
        "beta1" => r.beta1,
        _ => r.beta2,
    }
}

/// Vertices in `(u index, v index)` order with optional per-vertex fields;
/// `null` marks a non-General vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceMesh {
    pub spec: String,
    pub realized_range: [f64; 2],
    pub grid: [usize; 2],
    pub projection: &'static str,
    pub vertices: Vec<Vec<f64>>,
    pub fields: BTreeMap<String, Vec<Option<f64>>>,
}

impl SurfaceMesh {
    pub fn build(
        spec: String,
        s: &MeridianSurface,
        nu: usize,
        nv: usize,
        fields: &[String],
        projection: Projection,
        tol: f64,
    ) -> anyhow::Result<Self> {
        for f in fields {
            if !FIELD_NAMES.contains(&f.as_str()) {
                bail!("unknown field `{f}`; expected one of {}", FIELD_NAMES.join(","));
            }
        }
        let grid = ParamGrid::new(s.u_domain(), s.v_domain(), nu, nv)?;
        let rows = grid.map(Execution::Parallel, |u, v| -> meridian_core::Result<_> {
            let z = s.embed(u, v)?;
            let rec = if fields.is_empty() { None } else { classify_and_evaluate(s, u, v, tol)?.ok() };
            Ok((z, rec))
        });
        let mut vertices = Vec::with_capacity(grid.len());
        let mut values: BTreeMap<String, Vec<Option<f64>>> =
            fields.iter().map(|f| (f.clone(), Vec::with_capacity(grid.len()))).collect();
        for row in rows {
            let (z, rec) = row?;
            vertices.push(match projection {
                Projection::None => z.0.to_vec(),
                Projection::DropE4 => z.0[..3].to_vec(),
            });
            for (name, column) in values.iter_mut() {
                column.push(rec.as_ref().map(|r| field(r, name)));
            }
        }
        Ok(SurfaceMesh {
            spec,
            realized_range: [s.u_domain().start, s.u_domain().end],
            grid: [nu, nv],
            projection: projection.label(),
            vertices,
            fields: values,
        })
    }
}
