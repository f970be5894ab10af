//! Points of `n`-dimensional Euclidean space.
//!
//! A [`Point`] is a fixed-length coordinate vector whose entries all share
//! one [`Mode`]; the mode of the point is the mode of its coordinates.
//! Points serialize as plain JSON arrays.

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::scalar::{Mode, Scalar, Tol};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Scalar>", into = "Vec<Scalar>")]
pub struct Point {
    coords: Vec<Scalar>,
}

impl Point {
    /// Builds a point, requiring at least two coordinates in a single mode.
    pub fn new(coords: Vec<Scalar>) -> Result<Self, GeometryError> {
        if coords.len() < 2 {
            return Err(GeometryError::TooFewCoordinates(coords.len()));
        }
        let mode = coords[0].mode();
        if coords.iter().any(|c| c.mode() != mode) {
            return Err(GeometryError::MixedModes);
        }
        Ok(Point { coords })
    }

    /// Float-mode point from raw coordinates.
    ///
    /// Panics if fewer than two coordinates are given; use [`Point::new`]
    /// for data of unknown shape.
    pub fn floats(coords: &[f64]) -> Self {
        Point::new(coords.iter().copied().map(Scalar::Float).collect())
            .expect("float point literal must have >= 2 coordinates")
    }

    /// Exact-mode point from integer coordinates.
    ///
    /// Panics if fewer than two coordinates are given.
    pub fn ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().copied().map(Scalar::int).collect())
            .expect("integer point literal must have >= 2 coordinates")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn mode(&self) -> Mode {
        self.coords[0].mode()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.coords.iter().map(Scalar::to_f64).collect()
    }

    /// Squared Euclidean distance; exact when both points are exact.
    pub fn dist_sq(&self, other: &Point) -> Result<Scalar, GeometryError> {
        if self.dim() != other.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        let mut acc = match (self.mode(), other.mode()) {
            (Mode::Exact, Mode::Exact) => Scalar::zero(Mode::Exact),
            _ => Scalar::zero(Mode::Float),
        };
        for (a, b) in self.coords.iter().zip(&other.coords) {
            let d = a - b;
            acc = acc + &d * &d;
        }
        Ok(acc)
    }

    /// Euclidean distance; exact only when the squared distance is a
    /// perfect rational square.
    pub fn dist(&self, other: &Point) -> Result<Scalar, GeometryError> {
        self.dist_sq(other)?.sqrt()
    }

    /// Coordinatewise tolerance comparison.
    pub fn approx_eq(&self, other: &Point, tol: &Tol) -> bool {
        self.dim() == other.dim()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

impl TryFrom<Vec<Scalar>> for Point {
    type Error = GeometryError;

    fn try_from(coords: Vec<Scalar>) -> Result<Self, Self::Error> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<Scalar> {
    fn from(p: Point) -> Self {
        p.coords
    }
}
