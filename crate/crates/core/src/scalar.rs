//! Dual-mode scalar arithmetic.
//!
//! Every coordinate, distance, and volume in this crate is a [`Scalar`]:
//! either an arbitrary-precision rational ([`Scalar::Exact`]) or an IEEE-754
//! double ([`Scalar::Float`]). Exact scalars are closed under `+`, `-`, `*`,
//! `/`, and `floor`; square roots stay exact only when the radicand is a
//! perfect rational square and otherwise degrade to float. Any arithmetic
//! that mixes the two modes coerces the result to float.
//!
//! Comparisons between two exact scalars are exact. As soon as a float is
//! involved, equality is judged by the relative tolerance in [`Tol`]:
//! `|a - b| <= rel * (1 + max(|a|, |b|))`, which behaves absolutely near
//! zero and relatively for large magnitudes.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::GeometryError;

/// Arithmetic mode of a scalar or of a structure built from scalars.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// Relative comparison tolerance.
///
/// `eq(a, b)` holds when `|a - b| <= rel * (1 + max(|a|, |b|))`. The default
/// `rel` is `1e-9`; contexts that need a different guarantee construct their
/// own value instead of mutating a global.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tol {
    pub rel: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            rel: Tol::DEFAULT_REL,
        }
    }
}

impl Tol {
    pub const DEFAULT_REL: f64 = 1e-9;

    pub fn new(rel: f64) -> Self {
        assert!(
            rel >= 0.0 && rel.is_finite(),
            "tolerance must be finite and nonnegative"
        );
        Tol { rel }
    }

    /// Absolute slack allowed at the given magnitude scale.
    pub fn eps(&self, scale: f64) -> f64 {
        self.rel * (1.0 + scale.abs())
    }

    /// Tolerance-based equality of two floats.
    pub fn eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.eps(a.abs().max(b.abs()))
    }

    /// Is `a` zero at the given scale?
    pub fn is_zero(&self, a: f64, scale: f64) -> bool {
        a.abs() <= self.eps(scale)
    }
}

/// A number in one of two modes: exact rational or `f64`.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    /// Exact integer.
    pub fn int(v: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    /// Exact ratio `num/den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Zero in the requested mode.
    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::int(0),
            Mode::Float => Scalar::Float(0.0),
        }
    }

    /// One in the requested mode.
    pub fn one(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::int(1),
            Mode::Float => Scalar::Float(1.0),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(x) => *x > 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Float(x) => x.is_finite(),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    /// Largest integer not exceeding the value, as a scalar in the same mode.
    pub fn floor(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.floor()),
            Scalar::Float(x) => Scalar::Float(x.floor()),
        }
    }

    /// `floor` narrowed to `i64`; `None` when it does not fit (or is not finite).
    pub fn floor_int(&self) -> Option<i64> {
        match self {
            Scalar::Exact(r) => r.floor().to_integer().to_i64(),
            Scalar::Float(x) => {
                let f = x.floor();
                if f.is_finite() && f >= i64::MIN as f64 && f <= i64::MAX as f64 {
                    Some(f as i64)
                } else {
                    None
                }
            }
        }
    }

    /// Square root.
    ///
    /// Float input stays float. Exact input stays exact when the value is a
    /// perfect rational square (e.g. `25/4 -> 5/2`) and degrades to a float
    /// approximation otherwise. Negative input is an error in both modes.
    pub fn sqrt(&self) -> Result<Scalar, GeometryError> {
        match self {
            Scalar::Float(x) => {
                if *x < 0.0 {
                    Err(GeometryError::NegativeSqrt)
                } else {
                    Ok(Scalar::Float(x.sqrt()))
                }
            }
            Scalar::Exact(r) => {
                if r.is_negative() {
                    return Err(GeometryError::NegativeSqrt);
                }
                match exact_sqrt(r) {
                    Some(root) => Ok(Scalar::Exact(root)),
                    None => Ok(Scalar::Float(r.to_f64().unwrap_or(f64::NAN).sqrt())),
                }
            }
        }
    }

    /// Tolerance-aware equality: exact/exact pairs compare exactly, any pair
    /// involving a float compares through [`Tol::eq`].
    pub fn approx_eq(&self, other: &Scalar, tol: &Tol) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (a, b) => tol.eq(a.to_f64(), b.to_f64()),
        }
    }
}

/// Square root of a nonnegative rational, if it is again rational.
fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    let num = r.numer();
    let den = r.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (a, b) => Scalar::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Value equality: exact pairs compare exactly, otherwise through `f64`.
/// `Exact(1) == Float(1.0)` holds.
impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (a, b) => a.to_f64() == b.to_f64(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            (a, b) => a.to_f64().partial_cmp(&b.to_f64()),
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Exact(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.denom() == &BigInt::from(1) {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Accepts `"p/q"` and plain integers as exact values, anything else that
/// parses as a decimal becomes a float.
impl FromStr for Scalar {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num
                .trim()
                .parse()
                .map_err(|_| GeometryError::ParseScalar(s.to_owned()))?;
            let den: BigInt = den
                .trim()
                .parse()
                .map_err(|_| GeometryError::ParseScalar(s.to_owned()))?;
            if den.is_zero() {
                return Err(GeometryError::ParseScalar(s.to_owned()));
            }
            return Ok(Scalar::Exact(BigRational::new(num, den)));
        }
        if let Ok(i) = s.parse::<BigInt>() {
            return Ok(Scalar::Exact(BigRational::from_integer(i)));
        }
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Scalar::Float(f64::INFINITY));
        }
        s.parse::<f64>()
            .map(Scalar::Float)
            .map_err(|_| GeometryError::ParseScalar(s.to_owned()))
    }
}

/// Exact scalars serialize as `"p/q"` strings (just `"p"` for integers) so
/// round-trips never lose precision; floats serialize as JSON numbers.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(_) => serializer.serialize_str(&self.to_string()),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ScalarVisitor;

        impl de::Visitor<'_> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a \"p/q\" rational string")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Scalar, E> {
                Ok(Scalar::Float(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
                Ok(Scalar::Float(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
                Ok(Scalar::Float(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_is_closed() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(1, 6);
        let sum = &a + &b;
        assert_eq!(sum, Scalar::ratio(1, 2));
        assert!(sum.is_exact());
        assert!((&a * &b).is_exact());
        assert!((&a - &b).is_exact());
        assert!((&a / &b).is_exact());
    }

    #[test]
    fn mixed_mode_coerces_to_float() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::Float(0.5);
        let sum = &a + &b;
        assert_eq!(sum.mode(), Mode::Float);
        assert!((sum.to_f64() - (1.0 / 3.0 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn perfect_square_roots_stay_exact() {
        let r = Scalar::ratio(25, 4);
        assert_eq!(r.sqrt().unwrap(), Scalar::ratio(5, 2));
        assert!(r.sqrt().unwrap().is_exact());

        let two = Scalar::int(2);
        let root = two.sqrt().unwrap();
        assert_eq!(root.mode(), Mode::Float);
        assert!((root.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn negative_sqrt_is_rejected_in_both_modes() {
        assert_eq!(Scalar::int(-1).sqrt(), Err(GeometryError::NegativeSqrt));
        assert_eq!(Scalar::Float(-0.5).sqrt(), Err(GeometryError::NegativeSqrt));
    }

    #[test]
    fn floor_matches_in_both_modes() {
        assert_eq!(Scalar::ratio(-7, 2).floor_int(), Some(-4));
        assert_eq!(Scalar::Float(-3.5).floor_int(), Some(-4));
        assert_eq!(Scalar::ratio(7, 2).floor_int(), Some(3));
        assert_eq!(Scalar::int(5).floor_int(), Some(5));
    }

    #[test]
    fn tolerance_is_absolute_near_zero_and_relative_at_scale() {
        let tol = Tol::default();
        assert!(tol.eq(0.0, 5e-10));
        assert!(!tol.eq(0.0, 5e-9));
        assert!(tol.eq(1e12, 1e12 + 100.0));
        assert!(!tol.eq(1e12, 1e12 + 1e4));
    }

    #[test]
    fn exact_comparison_ignores_tolerance() {
        let tol = Tol::new(1e-2);
        let a = Scalar::ratio(1, 1_000_000);
        let b = Scalar::ratio(1, 1_000_001);
        assert!(!a.approx_eq(&b, &tol));
        assert!(a.approx_eq(&a.clone(), &Tol::new(0.0)));
    }

    #[test]
    fn parse_round_trip() {
        let cases = ["3", "-7/2", "0.25", "-12"];
        for c in cases {
            let s: Scalar = c.parse().unwrap();
            let json = serde_json::to_string(&s).unwrap();
            let back: Scalar = serde_json::from_str(&json).unwrap();
            assert_eq!(s, back, "round trip failed for {c}");
        }
        let exact: Scalar = "-7/2".parse().unwrap();
        assert!(exact.is_exact());
        let float: Scalar = "0.25".parse().unwrap();
        assert!(!float.is_exact());
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn serde_uses_strings_only_for_exact_values() {
        let exact = Scalar::ratio(1, 3);
        assert_eq!(serde_json::to_string(&exact).unwrap(), "\"1/3\"");
        let int = Scalar::int(4);
        assert_eq!(serde_json::to_string(&int).unwrap(), "\"4\"");
        let float = Scalar::Float(0.25);
        assert_eq!(serde_json::to_string(&float).unwrap(), "0.25");
    }

    #[test]
    fn value_equality_crosses_modes() {
        assert_eq!(Scalar::int(1), Scalar::Float(1.0));
        assert!(Scalar::ratio(1, 2) < Scalar::Float(0.75));
        assert!(Scalar::Float(0.75) > Scalar::ratio(1, 2));
    }
}
