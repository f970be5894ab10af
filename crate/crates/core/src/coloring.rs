//! The catalog of colorings the engine can evaluate.
//!
//! A coloring assigns an `i64` color to points of `R^n`. The interesting
//! ones here are counterexample material: strips and merged strips (convex
//! classes stacked along the last axis), grids of half-open cells (classes
//! of small diameter), the rational-coordinates coloring on the plane, and
//! a two-ball coloring. All of them evaluate exactly on exact points —
//! boundary membership is decided by rational arithmetic, never by a
//! tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::ColoringError;
use crate::linalg;
use crate::point::Point;
use crate::scalar::{Mode, Scalar, Tol};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coloring {
    /// Everything gets one color.
    Constant { color: i64 },
    /// `f(x) = floor(x_n)`: unit strips along the last coordinate, each
    /// class a convex set `R^(n-1) x [c, c+1)`.
    Strip { n: usize },
    /// The strip coloring collapsed to `colors` values: everything below 0
    /// is color 0, everything at or above `colors - 2` is the last color,
    /// and the unit strips in between keep their own colors.
    MergedStrip { n: usize, colors: u32 },
    /// Half-open axis cells of side `delta`, each cell its own color via a
    /// pairing bijection; any two points sharing a color are closer than
    /// `delta * sqrt(n)`.
    Grid { n: usize, delta: Scalar },
    /// On the plane: color 1 on rational points, color 0 elsewhere.
    /// Evaluates on exact rational points and on [`QuadExtPoint`]s.
    Rational2d,
    /// On the plane: color 2 inside the open ball of radius 2 at (2, 0),
    /// color 1 everywhere else (including the mirror ball at (-2, 0), which
    /// the classes make no use of but the geometry does).
    TwoBall,
}

impl Coloring {
    pub fn grid(n: usize, delta: Scalar) -> Result<Self, ColoringError> {
        if !delta.is_positive() || !delta.is_finite() {
            return Err(ColoringError::NonPositiveCell);
        }
        Ok(Coloring::Grid { n, delta })
    }

    /// Ambient dimension the coloring expects, if it is fixed.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Coloring::Constant { .. } => None,
            Coloring::Strip { n } | Coloring::MergedStrip { n, .. } | Coloring::Grid { n, .. } => {
                Some(*n)
            }
            Coloring::Rational2d | Coloring::TwoBall => Some(2),
        }
    }

    pub fn validate(&self) -> Result<(), ColoringError> {
        match self {
            Coloring::MergedStrip { colors, .. } if *colors < 2 => {
                Err(ColoringError::TooFewColors(*colors))
            }
            Coloring::Grid { delta, .. } if !delta.is_positive() || !delta.is_finite() => {
                Err(ColoringError::NonPositiveCell)
            }
            Coloring::Strip { n } | Coloring::MergedStrip { n, .. } | Coloring::Grid { n, .. }
                if *n < 2 =>
            {
                Err(ColoringError::DimensionMismatch {
                    expected: 2,
                    got: *n,
                })
            }
            _ => Ok(()),
        }
    }

    /// The color of a point.
    ///
    /// [`Coloring::Rational2d`] only evaluates on exact points (a float
    /// carries no usable rationality information); everything else takes
    /// both modes.
    pub fn color(&self, p: &Point) -> Result<i64, ColoringError> {
        self.validate()?;
        if let Some(n) = self.dim() {
            if p.dim() != n {
                return Err(ColoringError::DimensionMismatch {
                    expected: n,
                    got: p.dim(),
                });
            }
        }
        match self {
            Coloring::Constant { color } => Ok(*color),
            Coloring::Strip { .. } => last_floor(p),
            Coloring::MergedStrip { colors, .. } => {
                let c = last_floor(p)?;
                let k = i64::from(*colors);
                Ok(if c < 0 {
                    0
                } else if c >= k - 2 {
                    k - 1
                } else {
                    c + 1
                })
            }
            Coloring::Grid { delta, .. } => {
                let cells = p
                    .coords()
                    .iter()
                    .map(|x| (x / delta).floor_int().ok_or(ColoringError::ColorOverflow))
                    .collect::<Result<Vec<_>, _>>()?;
                kappa(&cells)
            }
            Coloring::Rational2d => match p.mode() {
                Mode::Exact => Ok(1),
                Mode::Float => Err(ColoringError::UnsupportedPoint),
            },
            Coloring::TwoBall => {
                let center = Point::ints(&[2, 0]);
                let d2 = p.dist_sq(&center)?;
                Ok(if d2 < Scalar::int(4) { 2 } else { 1 })
            }
        }
    }

    /// The color of a point of the quadratic extension plane. Only the
    /// colorings that can decide rationality questions exactly accept these.
    pub fn color_quad(&self, p: &QuadExtPoint) -> Result<i64, ColoringError> {
        match self {
            Coloring::Constant { color } => Ok(*color),
            Coloring::Rational2d => Ok(if p.is_rational() { 1 } else { 0 }),
            _ => Err(ColoringError::UnsupportedPoint),
        }
    }
}

fn last_floor(p: &Point) -> Result<i64, ColoringError> {
    p.coord(p.dim() - 1)
        .floor_int()
        .ok_or(ColoringError::ColorOverflow)
}

/// Sign-fold `Z -> N`: `0, -1, 1, -2, 2, ...` become `0, 1, 2, 3, 4, ...`.
fn fold_z(z: i64) -> Result<u128, ColoringError> {
    let z = i128::from(z);
    let folded = if z >= 0 { 2 * z } else { -2 * z - 1 };
    u128::try_from(folded).map_err(|_| ColoringError::ColorOverflow)
}

fn cantor_pair(a: u128, b: u128) -> Result<u128, ColoringError> {
    let s = a.checked_add(b).ok_or(ColoringError::ColorOverflow)?;
    let t = s
        .checked_mul(s.checked_add(1).ok_or(ColoringError::ColorOverflow)?)
        .ok_or(ColoringError::ColorOverflow)?
        / 2;
    t.checked_add(b).ok_or(ColoringError::ColorOverflow)
}

/// Injective map from cell-index vectors to colors: sign-fold each index
/// into `N`, then left-fold with the Cantor pairing.
fn kappa(cells: &[i64]) -> Result<i64, ColoringError> {
    let mut acc = fold_z(cells[0])?;
    for &c in &cells[1..] {
        acc = cantor_pair(acc, fold_z(c)?)?;
    }
    i64::try_from(acc).map_err(|_| ColoringError::ColorOverflow)
}

/// Coordinate `a + b * sqrt(2)` of the real quadratic extension `Q(sqrt 2)`,
/// on which rationality is decidable: the value is rational iff `b = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExt {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadExt {
    pub fn rational(a: BigRational) -> Self {
        QuadExt {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        QuadExt {
            a: BigRational::from_integer(BigInt::from(a)),
            b: BigRational::from_integer(BigInt::from(b)),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        Scalar::Exact(self.a.clone()).to_f64()
            + Scalar::Exact(self.b.clone()).to_f64() * std::f64::consts::SQRT_2
    }
}

/// A plane point with coordinates in `Q(sqrt 2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExtPoint {
    pub x: QuadExt,
    pub y: QuadExt,
}

impl QuadExtPoint {
    pub fn new(x: QuadExt, y: QuadExt) -> Self {
        QuadExtPoint { x, y }
    }

    pub fn is_rational(&self) -> bool {
        self.x.is_rational() && self.y.is_rational()
    }

    /// The exact rational [`Point`], when both coordinates are rational.
    pub fn to_rational_point(&self) -> Option<Point> {
        if !self.is_rational() {
            return None;
        }
        Point::new(vec![
            Scalar::Exact(self.x.a.clone()),
            Scalar::Exact(self.y.a.clone()),
        ])
        .ok()
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        vec![self.x.to_f64(), self.y.to_f64()]
    }
}

/// Center of the circle through three exact plane points.
///
/// Three rational points determine a rational center: the perpendicular
/// bisector conditions are a linear system with rational coefficients.
/// Collinear input has no circle and is rejected.
pub fn rational_circle_center(a: &Point, b: &Point, c: &Point) -> Result<Point, ColoringError> {
    for p in [a, b, c] {
        if p.dim() != 2 {
            return Err(ColoringError::DimensionMismatch {
                expected: 2,
                got: p.dim(),
            });
        }
        if p.mode() != Mode::Exact {
            return Err(ColoringError::UnsupportedPoint);
        }
    }
    let two = Scalar::int(2);
    let norm =
        |p: &Point| -> Scalar { p.coords().iter().fold(Scalar::int(0), |acc, x| acc + x * x) };
    let row = |p: &Point| -> Vec<Scalar> {
        p.coords()
            .iter()
            .zip(a.coords())
            .map(|(x, y)| &two * &(x - y))
            .collect()
    };
    let na = norm(a);
    let system = vec![row(b), row(c)];
    let rhs = vec![norm(b) - &na, norm(c) - &na];
    linalg::solve(system, rhs, &Tol::default())
        .map_err(|_| ColoringError::CollinearPoints)
        .and_then(|coords| Point::new(coords).map_err(ColoringError::from))
}
