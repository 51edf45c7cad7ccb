//! Parameter grids and the data-parallel map used by sweeps.
//!
//! Results are always collected in index order, so the output of a sweep
//! does not depend on how the work was scheduled.

use crate::error::{Error, Result};
use crate::numeric::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise runs
    /// sequentially.
    #[default]
    Parallel,
}

/// `f(0), ..., f(n-1)` in index order.
pub fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Uniform `nu x nv` grid over a parameter rectangle, endpoints included,
/// ordered by `(u index, v index)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamGrid {
    pub u: Interval,
    pub v: Interval,
    pub nu: usize,
    pub nv: usize,
}

impl ParamGrid {
    pub fn new(u: Interval, v: Interval, nu: usize, nv: usize) -> Result<Self> {
        if nu == 0 || nv == 0 {
            return Err(Error::InvalidArgument(format!("grid {nu}x{nv} must be nonempty")));
        }
        Ok(ParamGrid { u, v, nu, nv })
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, index: usize) -> (f64, f64) {
        let (i, j) = (index / self.nv, index % self.nv);
        (self.u.linspace(self.nu)[i], self.v.linspace(self.nv)[j])
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        let us = self.u.linspace(self.nu);
        let vs = self.v.linspace(self.nv);
        us.iter().flat_map(|&u| vs.iter().map(move |&v| (u, v))).collect()
    }

    /// Evaluates `f` at every grid point, in grid order.
    pub fn map<T, F>(&self, exec: Execution, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(f64, f64) -> T + Sync + Send,
    {
        let pts = self.points();
        map_indexed(pts.len(), exec, |i| f(pts[i].0, pts[i].1))
    }
}
