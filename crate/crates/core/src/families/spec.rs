//! Family parameters, their text form, the closed-form `y(t)` of the ODE
//! variants and the defining second-order relations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::jet::{DomainViolation, Jet};

/// Margin kept below the arcsine cap `|b|/(2|a|)` of the constant-mean
/// family with `epsilon = +1`.
pub const ARCSIN_CAP_MARGIN: f64 = 1e-9;

/// A sign choice of the form `+` / `-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec {
    /// `f = alpha cos(sqrt(K) u) + beta sin(sqrt(K) u)`, hyperbolic for `K < 0`.
    ConstantGauss { k: f64, alpha: f64, beta: f64 },
    /// `||H|| = a`, `kappa = b`.
    ConstantMean { a: f64, b: f64, c: f64, epsilon: i8, branch: Branch },
    /// `k = -a^2`, `kappa = b`, `y = c +- a t^2/(2b)`.
    ConstantK { a: f64, b: f64, c: f64, branch: Branch },
    /// `lambda = 0`, `kappa = b`, `y = (c^2 t^{+-2} + b^2)/(2c t^{+-1})`.
    Chen { b: f64, c: f64, exponent_branch: Branch },
    /// `f = +-(cu + d)^{1/2}`, any directrix.
    ParallelA { c: f64, d: f64, a: f64, sign: Branch },
    /// `y = (c + a t)/t`, `kappa = b`.
    ParallelB { a: f64, c: f64, b: f64 },
}

fn nonzero(name: &str, x: f64) -> Result<()> {
    if x == 0.0 {
        Err(Error::InvalidSpec(format!("{name} must be nonzero")))
    } else if !x.is_finite() {
        Err(Error::InvalidSpec(format!("{name} must be finite")))
    } else {
        Ok(())
    }
}

fn finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{name} must be finite")))
    }
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::ConstantGauss { .. } => "constant-gauss",
            FamilySpec::ConstantMean { .. } => "constant-mean",
            FamilySpec::ConstantK { .. } => "constant-k",
            FamilySpec::Chen { .. } => "chen",
            FamilySpec::ParallelA { .. } => "parallel-a",
            FamilySpec::ParallelB { .. } => "parallel-b",
        }
    }

    /// Checks the parameter constraints of the family.
    pub fn validate(&self) -> Result<()> {
        match *self {
            FamilySpec::ConstantGauss { k, alpha, beta } => {
                nonzero("K", k)?;
                finite("alpha", alpha)?;
                finite("beta", beta)?;
                if alpha == 0.0 && beta == 0.0 {
                    return Err(Error::InvalidSpec("alpha and beta must not both vanish".into()));
                }
            }
            FamilySpec::ConstantMean { a, b, c, epsilon, .. } => {
                nonzero("a", a)?;
                nonzero("b", b)?;
                finite("C", c)?;
                if epsilon != 1 && epsilon != -1 {
                    return Err(Error::InvalidSpec("epsilon must be +1 or -1".into()));
                }
            }
            FamilySpec::ConstantK { a, b, c, .. } => {
                nonzero("a", a)?;
                nonzero("b", b)?;
                finite("c", c)?;
            }
            FamilySpec::Chen { b, c, .. } => {
                nonzero("b", b)?;
                nonzero("c", c)?;
            }
            FamilySpec::ParallelA { c, d, a, .. } => {
                nonzero("c", c)?;
                finite("d", d)?;
                finite("a", a)?;
            }
            FamilySpec::ParallelB { a, c, b } => {
                nonzero("a", a)?;
                finite("c", c)?;
                nonzero("b", b)?;
            }
        }
        Ok(())
    }

    /// Whether `f` comes from integrating `f' = y(f)`.
    pub fn is_ode(&self) -> bool {
        !matches!(self, FamilySpec::ConstantGauss { .. } | FamilySpec::ParallelA { .. })
    }

    /// The constant directrix curvature the family demands, if any.
    pub fn required_kappa(&self) -> Option<f64> {
        match *self {
            FamilySpec::ConstantMean { b, .. }
            | FamilySpec::ConstantK { b, .. }
            | FamilySpec::Chen { b, .. }
            | FamilySpec::ParallelB { b, .. } => Some(b),
            _ => None,
        }
    }

    /// Closed-form `f` as an expression in `u` (closed-form variants only).
    pub fn closed_form_f(&self) -> Option<String> {
        match *self {
            FamilySpec::ConstantGauss { k, alpha, beta } => {
                let (c, s, w) = if k > 0.0 { ("cos", "sin", k.sqrt()) } else { ("cosh", "sinh", (-k).sqrt()) };
                Some(format!("({alpha:?})*{c}(({w:?})*u) + ({beta:?})*{s}(({w:?})*u)"))
            }
            FamilySpec::ParallelA { c, d, sign, .. } => Some(format!("({:?})*sqrt(({c:?})*u + ({d:?}))", sign.sign())),
            _ => None,
        }
    }

    /// Closed-form `g` of the parallel-a family.
    pub fn closed_form_g(&self, u: f64) -> Option<f64> {
        match *self {
            FamilySpec::ParallelA { c, d, a, sign } => {
                Some(-sign.sign() * 2.0 / (3.0 * c * c) * (c * u + d).powf(1.5) + a)
            }
            _ => None,
        }
    }

    /// Jet of `y` at `t` (ODE variants only).
    pub fn y_jet(&self, t: f64) -> Result<Jet> {
        if !(t > 0.0) {
            return Err(Error::Domain { op: "y(t) requires t > 0", t });
        }
        let dom = |e: DomainViolation| Error::Domain { op: e.op, t };
        let x = Jet::variable(t);
        let y = match *self {
            FamilySpec::ConstantMean { a, b, c, epsilon, branch } => {
                let eps = epsilon as f64;
                if eps > 0.0 && t > b.abs() / (2.0 * a.abs()) - ARCSIN_CAP_MARGIN {
                    return Err(Error::Domain { op: "arcsin cap |2at| <= |b|", t });
                }
                let r = (x * x * (-4.0 * eps * a * a) + b * b).sqrt().map_err(dom)?;
                let arc = if eps > 0.0 {
                    (x * (2.0 * a / b.abs())).asin().map_err(dom)?
                } else {
                    let w = x * (2.0 * a) + r;
                    let w = if w.value < 0.0 { -w } else { w };
                    w.ln().map_err(dom)?
                };
                let inner = x * r * 0.5 + arc * (b * b / (4.0 * a));
                (inner * branch.sign() + c).checked_div(x).map_err(dom)?
            }
            FamilySpec::ConstantK { a, b, c, branch } => x * x * (branch.sign() * a / (2.0 * b)) + c,
            FamilySpec::Chen { b, c, exponent_branch } => {
                let p = match exponent_branch {
                    Branch::Plus => x,
                    Branch::Minus => x.recip().map_err(dom)?,
                };
                (p * p * (c * c) + b * b).checked_div(p * (2.0 * c)).map_err(dom)?
            }
            FamilySpec::ParallelB { a, c, .. } => (x * a + c).checked_div(x).map_err(dom)?,
            _ => return Err(Error::InvalidArgument(format!("{} has a closed-form profile and no y(t)", self.name()))),
        };
        if !y.is_finite() {
            return Err(Error::Domain { op: "y(t) is not finite", t });
        }
        Ok(y)
    }

    /// `y(t)`.
    pub fn y_of_t(&self, t: f64) -> Result<f64> {
        Ok(self.y_jet(t)?.value)
    }

    /// Relative residual of the second-order relation defining the family,
    /// evaluated on `(f, f', f'')`.
    pub fn relation_residual(&self, f: f64, f1: f64, f2: f64) -> f64 {
        let p = f * f2 + f1 * f1;
        let (lhs, rhs, scale) = match *self {
            FamilySpec::ConstantGauss { k, .. } => (f2, -k * f, f2.abs().max((k * f).abs())),
            FamilySpec::ConstantMean { a, b, epsilon, .. } => {
                let lhs = p * p + 4.0 * epsilon as f64 * a * a * f * f * f1 * f1;
                let rhs = b * b * f1 * f1;
                (lhs, rhs, rhs.abs().max(lhs.abs()))
            }
            FamilySpec::ConstantK { a, b, branch, .. } => {
                let (l, r) = (b * f2, branch.sign() * a * f * f1);
                (l, r, l.abs().max(r.abs()))
            }
            FamilySpec::Chen { b, .. } => {
                let (l, r) = ((f * f2).powi(2), f1 * f1 * (f1 * f1 - b * b));
                (l, r, l.abs().max(r.abs()))
            }
            FamilySpec::ParallelA { .. } => (p, 0.0, (f * f2).abs().max(f1 * f1)),
            FamilySpec::ParallelB { a, .. } => (p, a * f1, p.abs().max((a * f1).abs())),
        };
        if scale == 0.0 {
            0.0
        } else {
            (lhs - rhs).abs() / scale
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::ConstantGauss { k, alpha, beta } => {
                write!(f, "constant-gauss K={k} alpha={alpha} beta={beta}")
            }
            FamilySpec::ConstantMean { a, b, c, epsilon, branch } => {
                write!(f, "constant-mean a={a} b={b} C={c} epsilon={epsilon:+} branch={branch}")
            }
            FamilySpec::ConstantK { a, b, c, branch } => {
                write!(f, "constant-k a={a} b={b} c={c} branch={branch}")
            }
            FamilySpec::Chen { b, c, exponent_branch } => {
                write!(f, "chen b={b} c={c} exponent_branch={}1", exponent_branch)
            }
            FamilySpec::ParallelA { c, d, a, sign } => {
                write!(f, "parallel-a c={c} d={d} a={a} sign={sign}")
            }
            FamilySpec::ParallelB { a, c, b } => write!(f, "parallel-b a={a} c={c} b={b}"),
        }
    }
}

struct Fields<'a> {
    map: BTreeMap<String, (&'a str, usize, usize)>,
}

fn parse_error(message: impl Into<String>, token: &str, position: usize) -> Error {
    Error::Parse { message: message.into(), token: token.to_string(), position }
}

impl<'a> Fields<'a> {
    /// The value text of `key` and its byte position.
    fn take(&mut self, key: &str) -> Option<(&'a str, usize)> {
        self.map.remove(key).map(|(value, _, pos)| (value, pos))
    }

    fn number(&mut self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.take(key) {
            Some((text, pos)) => {
                text.parse::<f64>().map_err(|_| parse_error(format!("value of {key} is not a number"), text, pos))
            }
            None => default.ok_or_else(|| Error::InvalidSpec(format!("missing parameter {key}"))),
        }
    }

    fn branch(&mut self, key: &str) -> Result<Branch> {
        match self.take(key) {
            None => Ok(Branch::Plus),
            Some((text, pos)) => match text {
                "+" | "+1" | "1" => Ok(Branch::Plus),
                "-" | "-1" => Ok(Branch::Minus),
                _ => Err(parse_error(format!("{key} must be + or -"), text, pos)),
            },
        }
    }

    fn finish(self) -> Result<()> {
        match self.map.iter().min_by_key(|(_, (_, pos, _))| *pos) {
            Some((key, (_, pos, _))) => Err(parse_error(format!("unknown parameter {key}"), key, *pos)),
            None => Ok(()),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Parses `name key=value ...`. Branch fields default to `+`, `C`
    /// (constant-mean) and `a` (parallel-a) default to zero.
    fn from_str(text: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        let mut offset = 0;
        for tok in text.split_whitespace() {
            let pos = offset + text[offset..].find(tok).unwrap_or(0);
            offset = pos + tok.len();
            tokens.push((tok, pos));
        }
        let Some(&(name, name_pos)) = tokens.first() else {
            return Err(parse_error("empty family spec", "", 0));
        };
        let mut map = BTreeMap::new();
        for &(tok, pos) in &tokens[1..] {
            let Some((key, value)) = tok.split_once('=') else {
                return Err(parse_error("expected key=value", tok, pos));
            };
            let key_len = key.len();
            let key = if key == "eps" { "epsilon" } else { key };
            if map.insert(key.to_string(), (value, pos, pos + key_len + 1)).is_some() {
                return Err(parse_error(format!("duplicate parameter {key}"), tok, pos));
            }
        }
        let mut fl = Fields { map };
        let spec = match name {
            "constant-gauss" => {
                let k = fl.number("K", None)?;
                if k == 0.0 {
                    return Err(Error::InvalidSpec("K must be nonzero".into()));
                }
                FamilySpec::ConstantGauss { k, alpha: fl.number("alpha", None)?, beta: fl.number("beta", None)? }
            }
            "constant-mean" => {
                let a = fl.number("a", None)?;
                let b = fl.number("b", None)?;
                let c = fl.number("C", Some(0.0))?;
                let epsilon = match fl.take("epsilon") {
                    None => return Err(Error::InvalidSpec("missing parameter epsilon".into())),
                    Some((t, pos)) => match t {
                        "+1" | "1" | "+" => 1,
                        "-1" | "-" => -1,
                        _ => return Err(parse_error("epsilon must be +1 or -1", t, pos)),
                    },
                };
                FamilySpec::ConstantMean { a, b, c, epsilon, branch: fl.branch("branch")? }
            }
            "constant-k" => FamilySpec::ConstantK {
                a: fl.number("a", None)?,
                b: fl.number("b", None)?,
                c: fl.number("c", None)?,
                branch: fl.branch("branch")?,
            },
            "chen" => FamilySpec::Chen {
                b: fl.number("b", None)?,
                c: fl.number("c", None)?,
                exponent_branch: fl.branch("exponent_branch")?,
            },
            "parallel-a" => FamilySpec::ParallelA {
                c: fl.number("c", None)?,
                d: fl.number("d", None)?,
                a: fl.number("a", Some(0.0))?,
                sign: fl.branch("sign")?,
            },
            "parallel-b" => {
                FamilySpec::ParallelB { a: fl.number("a", None)?, c: fl.number("c", None)?, b: fl.number("b", None)? }
            }
            other => return Err(parse_error("unknown family", other, name_pos)),
        };
        fl.finish()?;
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn y_examples() {
        let s: FamilySpec = "constant-mean a=0.5 b=2 C=0 epsilon=+1 branch=+".parse().unwrap();
        assert!((s.y_of_t(1.0).unwrap() - 1.91322295).abs() < 1e-8);
        let s: FamilySpec = "constant-k a=1 b=2 c=0 branch=+".parse().unwrap();
        assert!((s.y_of_t(2.0).unwrap() - 1.0).abs() < 1e-15);
        let s: FamilySpec = "chen b=1 c=1 exponent_branch=+1".parse().unwrap();
        assert!((s.y_of_t(1.0).unwrap() - 1.0).abs() < 1e-15);
        let s: FamilySpec = "parallel-b a=1 c=0 b=-1".parse().unwrap();
        for t in [0.1, 1.0, 7.0] {
            assert!((s.y_of_t(t).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn y_domain_errors() {
        let s: FamilySpec = "constant-mean a=0.5 b=2 epsilon=1".parse().unwrap();
        assert!(matches!(s.y_of_t(2.5), Err(Error::Domain { .. })));
        assert!(matches!(s.y_of_t(0.0), Err(Error::Domain { .. })));
        assert!(s.y_of_t(2.0 - 2e-9).is_ok());
        let s: FamilySpec = "parallel-a c=1 d=1".parse().unwrap();
        assert!(s.y_of_t(1.0).is_err());
    }

    #[test]
    fn constant_mean_negative_b_uses_abs() {
        // y for b < 0 equals y for |b|: only b^2 and |b| enter
        let p: FamilySpec = "constant-mean a=0.5 b=2 epsilon=1".parse().unwrap();
        let m: FamilySpec = "constant-mean a=0.5 b=-2 epsilon=1".parse().unwrap();
        assert_eq!(p.y_of_t(1.3).unwrap(), m.y_of_t(1.3).unwrap());
    }

    fn derivative_check(s: FamilySpec, t: f64) {
        let j = s.y_jet(t).unwrap();
        let h = 1e-4;
        let fd1 = (s.y_of_t(t + h).unwrap() - s.y_of_t(t - h).unwrap()) / (2.0 * h);
        let fd2 = (s.y_of_t(t + h).unwrap() - 2.0 * j.value + s.y_of_t(t - h).unwrap()) / (h * h);
        assert!((j.d1 - fd1).abs() < 1e-6 * (1.0 + j.d1.abs()), "{s} {} {}", j.d1, fd1);
        assert!((j.d2 - fd2).abs() < 1e-4 * (1.0 + j.d2.abs()), "{s} {} {}", j.d2, fd2);
    }

    #[test]
    fn y_jets_match_finite_differences() {
        for text in [
            "constant-mean a=0.5 b=2 C=0.3 epsilon=1 branch=-",
            "constant-mean a=0.5 b=1 C=0 epsilon=-1 branch=+",
            "constant-mean a=-0.7 b=1.5 C=0.1 epsilon=-1 branch=-",
            "constant-k a=1 b=-1 c=0.5 branch=-",
            "chen b=2 c=0.5 exponent_branch=-1",
            "parallel-b a=2 c=-0.5 b=-1",
        ] {
            derivative_check(text.parse().unwrap(), 0.8);
        }
    }

    #[test]
    fn y_solves_first_integral() {
        // (t y)' = +-sqrt(b^2 - 4 eps a^2 t^2) for the constant-mean family
        for (text, eps) in [
            ("constant-mean a=0.5 b=2 C=0.2 epsilon=1 branch=+", 1.0),
            ("constant-mean a=0.5 b=1 C=0 epsilon=-1 branch=-", -1.0),
        ] {
            let s: FamilySpec = text.parse().unwrap();
            let (a, b) = (0.5f64, if eps > 0.0 { 2.0 } else { 1.0 });
            for t in [0.3, 0.9, 1.4] {
                let j = s.y_jet(t).unwrap();
                let lhs = (t * j.d1 + j.value).abs();
                let rhs = (b * b - 4.0 * eps * a * a * t * t).sqrt();
                assert!((lhs - rhs).abs() < 1e-12, "{text} t={t}");
            }
        }
    }

    #[test]
    fn parse_errors() {
        let e = "constant-gauss K=0 alpha=1 beta=0".parse::<FamilySpec>().unwrap_err();
        assert!(e.to_string().contains("K must be nonzero"), "{e}");
        let e = "constant-gauss K=1 alpha=1 beta=0 gamma=2".parse::<FamilySpec>().unwrap_err();
        assert!(matches!(e, Error::Parse { ref token, position: 34, .. } if token == "gamma"), "{e:?}");
        let e = "constant-gauss K=x alpha=1 beta=0".parse::<FamilySpec>().unwrap_err();
        assert!(matches!(e, Error::Parse { ref token, .. } if token == "x"));
        let e = "torus R=1".parse::<FamilySpec>().unwrap_err();
        assert!(matches!(e, Error::Parse { ref token, .. } if token == "torus"));
        assert!("chen b=1 c=0".parse::<FamilySpec>().is_err());
        assert!("constant-k a=1 b=0 c=0".parse::<FamilySpec>().is_err());
        assert!("constant-mean a=1 b=1".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn defaults_and_aliases() {
        let s: FamilySpec = "constant-mean a=0.5 b=1 eps=-1".parse().unwrap();
        assert_eq!(s, FamilySpec::ConstantMean { a: 0.5, b: 1.0, c: 0.0, epsilon: -1, branch: Branch::Plus });
        assert_eq!(s.to_string(), "constant-mean a=0.5 b=1 C=0 epsilon=-1 branch=+");
    }

    fn any_spec() -> impl Strategy<Value = FamilySpec> {
        let nz = prop_oneof![-5.0..-0.01f64, 0.01..5.0f64];
        let r = -5.0..5.0f64;
        let br = prop_oneof![Just(Branch::Plus), Just(Branch::Minus)];
        prop_oneof![
            (nz.clone(), 0.1..2.0f64, r.clone()).prop_map(|(k, alpha, beta)| FamilySpec::ConstantGauss {
                k,
                alpha,
                beta
            }),
            (nz.clone(), nz.clone(), r.clone(), prop_oneof![Just(1i8), Just(-1i8)], br.clone())
                .prop_map(|(a, b, c, epsilon, branch)| FamilySpec::ConstantMean { a, b, c, epsilon, branch }),
            (nz.clone(), nz.clone(), r.clone(), br.clone()).prop_map(|(a, b, c, branch)| FamilySpec::ConstantK {
                a,
                b,
                c,
                branch
            }),
            (nz.clone(), nz.clone(), br.clone()).prop_map(|(b, c, exponent_branch)| FamilySpec::Chen {
                b,
                c,
                exponent_branch
            }),
            (nz.clone(), r.clone(), r.clone(), br).prop_map(|(c, d, a, sign)| FamilySpec::ParallelA { c, d, a, sign }),
            (nz.clone(), r, nz).prop_map(|(a, c, b)| FamilySpec::ParallelB { a, c, b }),
        ]
    }

    proptest! {
        #[test]
        fn text_round_trip(s in any_spec()) {
            let back: FamilySpec = s.to_string().parse().unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
