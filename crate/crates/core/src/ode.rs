//! Fixed-step classical Runge-Kutta integration and quintic Hermite dense
//! output.

use crate::error::{Error, Result};

/// One classical fourth-order Runge-Kutta step of `y' = rhs(t, y)`.
pub fn rk4_step<const N: usize, F>(rhs: &F, t: f64, y: [f64; N], h: f64) -> Result<[f64; N]>
where
    F: Fn(f64, [f64; N]) -> Result<[f64; N]>,
{
    let axpy = |y: [f64; N], k: [f64; N], s: f64| -> [f64; N] { std::array::from_fn(|i| y[i] + s * k[i]) };
    let k1 = rhs(t, y)?;
    let k2 = rhs(t + 0.5 * h, axpy(y, k1, 0.5 * h))?;
    let k3 = rhs(t + 0.5 * h, axpy(y, k2, 0.5 * h))?;
    let k4 = rhs(t + h, axpy(y, k3, h))?;
    Ok(std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])))
}

/// Piecewise quintic Hermite interpolant through nodes carrying value,
/// first and second derivative. The interpolant is C² and its derivatives
/// up to order three are available everywhere on the node span.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteTrack {
    t: Vec<f64>,
    x: Vec<[f64; 3]>,
}

impl HermiteTrack {
    /// `t` must be strictly monotone (either direction) with at least two
    /// nodes.
    pub fn new(t: Vec<f64>, x: Vec<[f64; 3]>) -> Result<Self> {
        if t.len() != x.len() || t.len() < 2 {
            return Err(Error::Integration("dense output needs at least two nodes".into()));
        }
        let increasing = t[1] > t[0];
        if !t.windows(2).all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] }) {
            return Err(Error::Integration("dense output nodes are not monotone".into()));
        }
        Ok(HermiteTrack { t, x })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[[f64; 3]] {
        &self.x
    }

    pub fn span(&self) -> (f64, f64) {
        let (a, b) = (self.t[0], *self.t.last().unwrap());
        (a.min(b), a.max(b))
    }

    fn segment(&self, t: f64) -> Option<usize> {
        let (lo, hi) = self.span();
        if !(t >= lo && t <= hi) {
            return None;
        }
        let n = self.t.len();
        let increasing = self.t[1] > self.t[0];
        // index i with t in [t_i, t_{i+1}]
        let idx = if increasing { self.t.partition_point(|&s| s <= t) } else { self.t.partition_point(|&s| s >= t) };
        Some(idx.clamp(1, n - 1) - 1)
    }

    /// Value and first three derivatives of the interpolant at `t`.
    pub fn eval(&self, t: f64) -> Option<[f64; 4]> {
        let i = self.segment(t)?;
        let (t0, t1) = (self.t[i], self.t[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let [y0, d0, c0] = self.x[i];
        let [y1, d1, c1] = self.x[i + 1];
        let (m0, m1) = (h * d0, h * d1);
        let (k0, k1) = (h * h * c0, h * h * c1);
        let a0 = y0;
        let a1 = m0;
        let a2 = 0.5 * k0;
        let big_a = y1 - (a0 + a1 + a2);
        let big_b = m1 - (a1 + 2.0 * a2);
        let big_c = k1 - 2.0 * a2;
        let a3 = 10.0 * big_a - 4.0 * big_b + 0.5 * big_c;
        let a4 = -15.0 * big_a + 7.0 * big_b - big_c;
        let a5 = 6.0 * big_a - 3.0 * big_b + 0.5 * big_c;
        let p = a0 + s * (a1 + s * (a2 + s * (a3 + s * (a4 + s * a5))));
        let dp = a1 + s * (2.0 * a2 + s * (3.0 * a3 + s * (4.0 * a4 + s * 5.0 * a5)));
        let ddp = 2.0 * a2 + s * (6.0 * a3 + s * (12.0 * a4 + s * 20.0 * a5));
        let dddp = 6.0 * a3 + s * (24.0 * a4 + s * 60.0 * a5);
        Some([p, dp / h, ddp / (h * h), dddp / (h * h * h)])
    }
}
