//! Minkowski 4-space of signature (3,1).
//!
//! Vectors are stored in coordinates with respect to the orthonormal basis
//! `e1, e2, e3, e4` with `<e4, e4> = -1`. The lightlike vectors
//! `xi1 = (e3 + e4)/sqrt2`, `xi2 = (-e3 + e4)/sqrt2` are only ever a
//! conversion, never a second storage format.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec4(pub [f64; 4]);

impl Vec4 {
    pub const ZERO: Vec4 = Vec4([0.0; 4]);
    pub const E1: Vec4 = Vec4([1.0, 0.0, 0.0, 0.0]);
    pub const E2: Vec4 = Vec4([0.0, 1.0, 0.0, 0.0]);
    pub const E3: Vec4 = Vec4([0.0, 0.0, 1.0, 0.0]);
    pub const E4: Vec4 = Vec4([0.0, 0.0, 0.0, 1.0]);

    pub const fn new(c1: f64, c2: f64, c3: f64, c4: f64) -> Self {
        Vec4([c1, c2, c3, c4])
    }

    /// Builds `a e1 + b e2 + p xi1 + q xi2`.
    pub fn from_pseudo(a: f64, b: f64, p: f64, q: f64) -> Self {
        Vec4([a, b, (p - q) * FRAC_1_SQRT_2, (p + q) * FRAC_1_SQRT_2])
    }

    /// Coordinates `(a, b, p, q)` with respect to `{e1, e2, xi1, xi2}`.
    pub fn to_pseudo(self) -> [f64; 4] {
        let [a, b, c3, c4] = self.0;
        [a, b, (c3 + c4) * FRAC_1_SQRT_2, (c4 - c3) * FRAC_1_SQRT_2]
    }

    pub fn dot(self, other: Vec4) -> f64 {
        minkowski_dot(self, other)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Largest absolute coordinate.
    pub fn max_abs(self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

impl Index<usize> for Vec4 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl AddAssign for Vec4 {
    fn add_assign(&mut self, o: Vec4) {
        *self = *self + o;
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4(self.0.map(|c| -c))
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    fn mul(self, s: f64) -> Vec4 {
        Vec4(self.0.map(|c| c * s))
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;
    fn mul(self, v: Vec4) -> Vec4 {
        v * self
    }
}

/// `a1 b1 + a2 b2 + a3 b3 - a4 b4`.
pub fn minkowski_dot(a: Vec4, b: Vec4) -> f64 {
    a.0[0] * b.0[0] + a.0[1] * b.0[1] + a.0[2] * b.0[2] - a.0[3] * b.0[3]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightlikePair {
    pub xi1: Vec4,
    pub xi2: Vec4,
}

pub fn lightlike_basis() -> LightlikePair {
    LightlikePair {
        xi1: Vec4::new(0.0, 0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2),
        xi2: Vec4::new(0.0, 0.0, -FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    }
}

/// Gram matrix `<v_i, v_j>` of a list of vectors.
pub fn gram<const N: usize>(vs: [Vec4; N]) -> [[f64; N]; N] {
    std::array::from_fn(|i| std::array::from_fn(|j| minkowski_dot(vs[i], vs[j])))
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basis_products() {
        let LightlikePair { xi1, xi2 } = lightlike_basis();
        assert_eq!(minkowski_dot(Vec4::E1, Vec4::E1), 1.0);
        assert_eq!(minkowski_dot(Vec4::E4, Vec4::E4), -1.0);
        assert!((minkowski_dot(xi1, xi2) + 1.0).abs() < 1e-15);
        assert!(minkowski_dot(xi1, xi1).abs() < 1e-15);
        assert!(minkowski_dot(xi2, xi2).abs() < 1e-15);
        assert!((xi2[2] + 0.70710678).abs() < 1e-8);
        assert!((xi2[3] - 0.70710678).abs() < 1e-8);
    }

    #[test]
    fn basis_gram_is_diagonal() {
        let g = gram([Vec4::E1, Vec4::E2, Vec4::E3, Vec4::E4]);
        let expect = [1.0, 1.0, 1.0, -1.0];
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { expect[i] } else { 0.0 };
                assert_eq!(g[i][j], e);
            }
        }
    }

    #[test]
    fn pseudo_roundtrip() {
        let LightlikePair { xi1, xi2 } = lightlike_basis();
        let v = Vec4::from_pseudo(1.0, 2.0, 3.0, 4.0);
        let w = Vec4::E1 * 1.0 + Vec4::E2 * 2.0 + xi1 * 3.0 + xi2 * 4.0;
        assert!((v - w).max_abs() < 1e-15);
        let p = v.to_pseudo();
        for (a, b) in p.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    fn vec4() -> impl Strategy<Value = Vec4> {
        prop::array::uniform4(-100.0..100.0f64).prop_map(Vec4)
    }

    proptest! {
        #[test]
        fn dot_is_symmetric(a in vec4(), b in vec4()) {
            prop_assert_eq!(minkowski_dot(a, b), minkowski_dot(b, a));
        }

        #[test]
        fn dot_is_bilinear(a in vec4(), b in vec4(), c in vec4(), s in -10.0..10.0f64) {
            let lhs = minkowski_dot(a * s + b, c);
            let rhs = s * minkowski_dot(a, c) + minkowski_dot(b, c);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
        }
    }
}
