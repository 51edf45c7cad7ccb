//! Small numerical helpers: intervals, grids, bisection and adaptive Simpson.

use crate::error::{Error, Result};

/// Closed interval `[start, end]` with `start <= end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) || start > end {
            return Err(Error::InvalidArgument(format!("invalid interval [{start}, {end}]")));
        }
        Ok(Interval { start, end })
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.start && x <= self.end
    }

    pub fn width(&self) -> f64 {
        self.end - self.start
    }

    pub fn check(&self, what: &'static str, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { what, value: x, start: self.start, end: self.end })
        }
    }

    /// `n` uniformly spaced points including both endpoints.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        linspace(self.start, self.end, n)
    }

    /// `n` cell midpoints of a uniform partition.
    pub fn midpoints(&self, n: usize) -> Vec<f64> {
        let h = self.width() / n as f64;
        (0..n).map(|i| self.start + (i as f64 + 0.5) * h).collect()
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let h = (b - a) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { b } else { a + i as f64 * h }).collect()
        }
    }
}

/// Root of `f` in `[a, b]` by bisection; `f(a)` and `f(b)` must differ in sign.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidArgument(format!("no sign change on [{a}, {b}]")));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Hard cap on the number of subintervals created by [`adaptive_simpson`].
pub const SIMPSON_INTERVAL_CAP: usize = 1 << 20;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `tol`, with Richardson correction on accepted panels. Exceeding
/// [`SIMPSON_INTERVAL_CAP`] subintervals is an error.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut intervals = 1usize;

    // explicit stack: (a, b, fa, fm, fb, whole, tol)
    let mut stack = vec![(a, b, fa, fm, fb, whole, tol)];
    let mut total = 0.0;
    while let Some((a, b, fa, fm, fb, whole, tol)) = stack.pop() {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm)?;
        let frm = f(rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol || (m - a).abs() <= f64::EPSILON * a.abs().max(1.0) {
            total += left + right + delta / 15.0;
            continue;
        }
        intervals += 1;
        if intervals > SIMPSON_INTERVAL_CAP {
            return Err(Error::QuadratureCap { cap: SIMPSON_INTERVAL_CAP });
        }
        stack.push((m, b, fm, frm, fb, right, 0.5 * tol));
        stack.push((a, m, fa, flm, fm, left, 0.5 * tol));
    }
    Ok(total)
}
