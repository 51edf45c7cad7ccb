//! Truncated Taylor jets of order three.
//!
//! A [`Jet`] carries the value and the first three derivatives of a scalar
//! function of one variable at a point. Arithmetic on jets propagates the
//! derivatives exactly (up to rounding), so every derivative in the crate is
//! produced here and never by finite differences.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value plus first, second and third derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

/// A partial function was applied outside its domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DomainViolation {
    pub op: &'static str,
}

type JetResult = Result<Jet, DomainViolation>;

impl Jet {
    pub const fn new(value: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Jet { value, d1, d2, d3 }
    }

    pub const fn constant(value: f64) -> Self {
        Jet::new(value, 0.0, 0.0, 0.0)
    }

    /// The identity function `t -> t` at `t`.
    pub const fn variable(t: f64) -> Self {
        Jet::new(t, 1.0, 0.0, 0.0)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.value, self.d1, self.d2, self.d3]
    }

    /// Jet of the derivative. The third derivative of the result is unknown
    /// and set to zero, so only `value`, `d1`, `d2` of the result are exact.
    pub fn derivative(self) -> Jet {
        Jet::new(self.d1, self.d2, self.d3, 0.0)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    /// Chain rule for `g(self)` given `g, g', g'', g'''` at `self.value`.
    pub fn compose(self, g0: f64, g1: f64, g2: f64, g3: f64) -> Jet {
        let (u1, u2, u3) = (self.d1, self.d2, self.d3);
        Jet { value: g0, d1: g1 * u1, d2: g2 * u1 * u1 + g1 * u2, d3: g3 * u1 * u1 * u1 + 3.0 * g2 * u1 * u2 + g1 * u3 }
    }

    pub fn scale(self, s: f64) -> Jet {
        Jet::new(self.value * s, self.d1 * s, self.d2 * s, self.d3 * s)
    }

    pub fn recip(self) -> JetResult {
        let x = self.value;
        if x == 0.0 {
            return Err(DomainViolation { op: "division" });
        }
        let r = 1.0 / x;
        let r2 = r * r;
        Ok(self.compose(r, -r2, 2.0 * r2 * r, -6.0 * r2 * r2))
    }

    pub fn checked_div(self, rhs: Jet) -> JetResult {
        Ok(self * rhs.recip()?)
    }

    pub fn sin(self) -> Jet {
        let (s, c) = self.value.sin_cos();
        self.compose(s, c, -s, -c)
    }

    pub fn cos(self) -> Jet {
        let (s, c) = self.value.sin_cos();
        self.compose(c, -s, -c, s)
    }

    pub fn tan(self) -> JetResult {
        if self.value.cos() == 0.0 {
            return Err(DomainViolation { op: "tan" });
        }
        let t = self.value.tan();
        let sec2 = 1.0 + t * t;
        Ok(self.compose(t, sec2, 2.0 * t * sec2, sec2 * (2.0 + 6.0 * t * t)))
    }

    pub fn sec(self) -> JetResult {
        let c = self.value.cos();
        if c == 0.0 {
            return Err(DomainViolation { op: "sec" });
        }
        let s = 1.0 / c;
        let t = self.value.tan();
        let s2 = s * s;
        let t2 = t * t;
        Ok(self.compose(s, s * t, s * (t2 + s2), s * t * (3.0 * t2 + 2.0 + 3.0 * s2)))
    }

    pub fn sinh(self) -> Jet {
        let (sh, ch) = (self.value.sinh(), self.value.cosh());
        self.compose(sh, ch, sh, ch)
    }

    pub fn cosh(self) -> Jet {
        let (sh, ch) = (self.value.sinh(), self.value.cosh());
        self.compose(ch, sh, ch, sh)
    }

    pub fn exp(self) -> Jet {
        let e = self.value.exp();
        self.compose(e, e, e, e)
    }

    pub fn ln(self) -> JetResult {
        let x = self.value;
        if x <= 0.0 {
            return Err(DomainViolation { op: "log" });
        }
        let r = 1.0 / x;
        Ok(self.compose(x.ln(), r, -r * r, 2.0 * r * r * r))
    }

    pub fn sqrt(self) -> JetResult {
        let x = self.value;
        if x <= 0.0 {
            return Err(DomainViolation { op: "sqrt" });
        }
        let s = x.sqrt();
        let s3 = s * x;
        Ok(self.compose(s, 0.5 / s, -0.25 / s3, 0.375 / (s3 * x)))
    }

    pub fn asin(self) -> JetResult {
        let x = self.value;
        let w = 1.0 - x * x;
        if w <= 0.0 {
            return Err(DomainViolation { op: "arcsin" });
        }
        let r = 1.0 / w.sqrt();
        let r3 = r * r * r;
        let r5 = r3 * r * r;
        Ok(self.compose(x.asin(), r, x * r3, r3 + 3.0 * x * x * r5))
    }

    /// `self^p` for a constant exponent. Negative bases are accepted only
    /// for integral `p`.
    pub fn powf(self, p: f64) -> JetResult {
        let x = self.value;
        if p == 0.0 {
            return Ok(Jet::constant(1.0));
        }
        let integral = p.fract() == 0.0 && p.abs() < i32::MAX as f64;
        if x < 0.0 && !integral {
            return Err(DomainViolation { op: "power" });
        }
        if x == 0.0 && (p < 0.0 || (!integral && p < 3.0)) {
            return Err(DomainViolation { op: "power" });
        }
        let term = |coef: f64, e: f64| -> f64 {
            if coef == 0.0 {
                0.0
            } else if integral {
                coef * x.powi(e as i32)
            } else {
                coef * x.powf(e)
            }
        };
        Ok(self.compose(
            term(1.0, p),
            term(p, p - 1.0),
            term(p * (p - 1.0), p - 2.0),
            term(p * (p - 1.0) * (p - 2.0), p - 3.0),
        ))
    }

    /// `self^rhs` for a jet exponent, via `exp(rhs ln self)`.
    pub fn pow(self, rhs: Jet) -> JetResult {
        Ok((rhs * self.ln()?).exp())
    }
}

impl From<f64> for Jet {
    fn from(c: f64) -> Self {
        Jet::constant(c)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2, self.d3 - o.d3)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let (a0, a1, a2, a3) = (self.value, self.d1, self.d2, self.d3);
        let (b0, b1, b2, b3) = (o.value, o.d1, o.d2, o.d3);
        Jet {
            value: a0 * b0,
            d1: a0 * b1 + a1 * b0,
            d2: a0 * b2 + 2.0 * a1 * b1 + a2 * b0,
            d3: a0 * b3 + 3.0 * (a1 * b2 + a2 * b1) + a3 * b0,
        }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scale(s)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        Jet { value: self.value + c, ..self }
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, c: f64) -> Jet {
        Jet { value: self.value - c, ..self }
    }
}

/// Unchecked division; a zero denominator yields non-finite components.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        match o.recip() {
            Ok(r) => self * r,
            Err(_) => Jet::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN),
        }
    }
}
