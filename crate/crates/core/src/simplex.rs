//! Simplices and their metric invariants.
//!
//! A [`Simplex`] is `m + 1` affinely independent vertices in `n`-dimensional
//! space, `1 <= m <= n`. Volume comes from the Cayley-Menger determinant
//! over squared distances, so it is computable from lengths alone and stays
//! exact for exact input. The circumsphere is recovered by solving the
//! perpendicular-bisector linear system, which keeps the center rational
//! whenever the vertices are.

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::linalg;
use crate::point::Point;
use crate::scalar::{Mode, Scalar, Tol};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Simplex {
    vertices: Vec<Point>,
}

impl Simplex {
    /// Builds an `m`-simplex from `m + 1` vertices.
    ///
    /// All vertices must share dimension and mode, `2 <= m + 1 <= n + 1`,
    /// and the vertex set must be affinely independent (checked by the rank
    /// of the edge-vector matrix, with the default tolerance in float mode).
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.len() < 2 {
            return Err(GeometryError::BadVertexCount(vertices.len()));
        }
        let n = vertices[0].dim();
        let mode = vertices[0].mode();
        if vertices.len() > n + 1 {
            return Err(GeometryError::BadVertexCount(vertices.len()));
        }
        for v in &vertices {
            if v.dim() != n {
                return Err(GeometryError::DimensionMismatch {
                    expected: n,
                    got: v.dim(),
                });
            }
            if v.mode() != mode {
                return Err(GeometryError::MixedModes);
            }
        }
        let m = vertices.len() - 1;
        let rows: Vec<Vec<Scalar>> = vertices[1..]
            .iter()
            .map(|v| {
                v.coords()
                    .iter()
                    .zip(vertices[0].coords())
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        if linalg::rank(rows, &Tol::default()) != m {
            return Err(GeometryError::DegenerateSimplex);
        }
        Ok(Simplex { vertices })
    }

    /// Float-mode simplex from raw coordinate rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, GeometryError> {
        let vertices = rows
            .iter()
            .map(|r| Point::new(r.iter().copied().map(Scalar::Float).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        Simplex::new(vertices)
    }

    /// Simplex dimension `m` (one less than the vertex count).
    pub fn m(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Ambient dimension `n`.
    pub fn n(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn mode(&self) -> Mode {
        self.vertices[0].mode()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Squared `m`-volume via the Cayley-Menger determinant:
    /// `vol^2 = (-1)^(m+1) / (2^m (m!)^2) * det(CM)`, where `CM` borders the
    /// matrix of squared distances with a 0/1 row and column.
    pub fn cm_volume_sq(&self) -> Scalar {
        let m = self.m();
        let k = m + 2;
        let mode = self.mode();
        let mut cm = vec![vec![Scalar::zero(mode); k]; k];
        for i in 1..k {
            cm[0][i] = Scalar::one(mode);
            cm[i][0] = Scalar::one(mode);
        }
        for i in 0..=m {
            for j in 0..=m {
                if i != j {
                    cm[i + 1][j + 1] = self.vertices[i]
                        .dist_sq(&self.vertices[j])
                        .expect("vertices share a dimension");
                }
            }
        }
        let d = linalg::det(cm, &Tol::default());
        let sign = if (m + 1).is_multiple_of(2) { 1 } else { -1 };
        let denom = (1u128 << m) * factorial(m) * factorial(m);
        let denom = match mode {
            Mode::Exact => Scalar::Exact(num_rational::BigRational::from_integer(
                num_bigint::BigInt::from(denom),
            )),
            Mode::Float => Scalar::Float(denom as f64),
        };
        let v2 = Scalar::int(sign) * d / denom;
        // Rounding can push a barely positive square below zero in float mode.
        if v2.is_negative() {
            Scalar::zero(mode)
        } else {
            v2
        }
    }

    /// `m`-dimensional volume. Exact when the squared volume is a perfect
    /// rational square, float otherwise.
    pub fn cm_volume(&self) -> Scalar {
        self.cm_volume_sq()
            .sqrt()
            .expect("squared volume is clamped nonnegative")
    }

    /// Center and radius of the unique sphere through all vertices.
    ///
    /// Requires a full-dimensional simplex (`m = n`). The center solves the
    /// bisector system `2 (v_i - v_0) . c = |v_i|^2 - |v_0|^2` and is exact
    /// for exact vertices; the radius degrades to float when irrational.
    pub fn circumsphere(&self, tol: &Tol) -> Result<(Point, Scalar), GeometryError> {
        let center = self.circumcenter(tol)?;
        let radius = center.dist(&self.vertices[0])?;
        Ok((center, radius))
    }

    pub fn circumcenter(&self, tol: &Tol) -> Result<Point, GeometryError> {
        let (m, n) = (self.m(), self.n());
        if m != n {
            return Err(GeometryError::NotFullDimensional { m, n });
        }
        let v0 = &self.vertices[0];
        let norm0 = norm_sq(v0);
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        let two = Scalar::int(2);
        for v in &self.vertices[1..] {
            a.push(
                v.coords()
                    .iter()
                    .zip(v0.coords())
                    .map(|(x, y)| &two * &(x - y))
                    .collect::<Vec<_>>(),
            );
            b.push(norm_sq(v) - &norm0);
        }
        let c = linalg::solve(a, b, tol)?;
        Point::new(c)
    }

    /// Squared circumradius; exact for exact vertices.
    pub fn circumradius_sq(&self, tol: &Tol) -> Result<Scalar, GeometryError> {
        let center = self.circumcenter(tol)?;
        center.dist_sq(&self.vertices[0])
    }

    /// All `C(m+1, 2)` edge lengths as a multiset, sorted ascending.
    pub fn edge_lengths(&self) -> Vec<Scalar> {
        let mut out = Vec::new();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                out.push(
                    self.vertices[i]
                        .dist(&self.vertices[j])
                        .expect("vertices share a dimension"),
                );
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).expect("lengths are finite"));
        out
    }

    /// Are all edges the same length (within tolerance, on squared lengths)?
    pub fn is_regular(&self, tol: &Tol) -> bool {
        let mut first: Option<Scalar> = None;
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let d2 = self.vertices[i].dist_sq(&self.vertices[j]).unwrap();
                match &first {
                    None => first = Some(d2),
                    Some(f) => {
                        if !f.approx_eq(&d2, tol) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Lowest-index vertex equidistant from all the others, if any.
    pub fn is_isosceles(&self, tol: &Tol) -> Option<usize> {
        'apex: for a in 0..self.vertices.len() {
            let mut first: Option<Scalar> = None;
            for (i, v) in self.vertices.iter().enumerate() {
                if i == a {
                    continue;
                }
                let d2 = self.vertices[a].dist_sq(v).unwrap();
                match &first {
                    None => first = Some(d2),
                    Some(f) => {
                        if !f.approx_eq(&d2, tol) {
                            continue 'apex;
                        }
                    }
                }
            }
            return Some(a);
        }
        None
    }

    /// Lowest-index vertex at which all edge vectors are pairwise
    /// orthogonal, if any.
    pub fn is_right(&self, tol: &Tol) -> Option<usize> {
        'apex: for a in 0..self.vertices.len() {
            let legs: Vec<Vec<Scalar>> = self
                .vertices
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != a)
                .map(|(_, v)| {
                    v.coords()
                        .iter()
                        .zip(self.vertices[a].coords())
                        .map(|(x, y)| x - y)
                        .collect()
                })
                .collect();
            for i in 0..legs.len() {
                for j in i + 1..legs.len() {
                    let d = scalar_dot(&legs[i], &legs[j]);
                    let ni = scalar_dot(&legs[i], &legs[i]).to_f64().sqrt();
                    let nj = scalar_dot(&legs[j], &legs[j]).to_f64().sqrt();
                    let zero = match &d {
                        Scalar::Exact(r) => num_traits::Zero::is_zero(r),
                        Scalar::Float(x) => tol.is_zero(*x, ni * nj),
                    };
                    if !zero {
                        continue 'apex;
                    }
                }
            }
            return Some(a);
        }
        None
    }
}

impl TryFrom<Vec<Point>> for Simplex {
    type Error = GeometryError;

    fn try_from(vertices: Vec<Point>) -> Result<Self, Self::Error> {
        Simplex::new(vertices)
    }
}

impl From<Simplex> for Vec<Point> {
    fn from(s: Simplex) -> Self {
        s.vertices
    }
}

fn factorial(m: usize) -> u128 {
    (1..=m as u128).product::<u128>().max(1)
}

fn norm_sq(p: &Point) -> Scalar {
    let mut acc = Scalar::zero(p.mode());
    for c in p.coords() {
        acc = acc + c * c;
    }
    acc
}

fn scalar_dot(u: &[Scalar], v: &[Scalar]) -> Scalar {
    let mode = if u.iter().chain(v).all(Scalar::is_exact) {
        Mode::Exact
    } else {
        Mode::Float
    };
    let mut acc = Scalar::zero(mode);
    for (a, b) in u.iter().zip(v) {
        acc = acc + a * b;
    }
    acc
}

/// Upper bound for the `m`-volume of any simplex contained in an axis
/// cube of side `delta` in dimension `n`: `(delta * sqrt(n))^m / m!`.
///
/// Every edge vector fits in the cube, so its length is at most the cube
/// diagonal `delta * sqrt(n)`; the Hadamard inequality then bounds the
/// parallelepiped spanned by the `m` edges at the first vertex.
pub fn cube_volume_bound(m: usize, n: usize, delta: &Scalar) -> Scalar {
    let d = delta.to_f64();
    Scalar::Float((d * (n as f64).sqrt()).powi(m as i32) / factorial(m) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tri(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Simplex {
        Simplex::from_rows(&[a.to_vec(), b.to_vec(), c.to_vec()]).unwrap()
    }

    /// Shoelace area, an oracle independent of Cayley-Menger.
    fn shoelace(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])).abs()
    }

    /// Triple-product volume, an oracle independent of Cayley-Menger.
    fn triple_product(vs: &[[f64; 3]; 4]) -> f64 {
        let e = |i: usize| {
            [
                vs[i][0] - vs[0][0],
                vs[i][1] - vs[0][1],
                vs[i][2] - vs[0][2],
            ]
        };
        let (u, v, w) = (e(1), e(2), e(3));
        let cx = v[1] * w[2] - v[2] * w[1];
        let cy = v[2] * w[0] - v[0] * w[2];
        let cz = v[0] * w[1] - v[1] * w[0];
        (u[0] * cx + u[1] * cy + u[2] * cz).abs() / 6.0
    }

    #[test]
    fn degenerate_vertices_are_rejected() {
        let r = Simplex::from_rows(&[vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]);
        assert_eq!(r, Err(GeometryError::DegenerateSimplex));
        let r = Simplex::new(vec![Point::ints(&[1, 2]), Point::ints(&[1, 2])]);
        assert_eq!(r, Err(GeometryError::DegenerateSimplex));
    }

    #[test]
    fn unit_right_triangle_has_exact_area_half() {
        let s = Simplex::new(vec![
            Point::ints(&[0, 0]),
            Point::ints(&[1, 0]),
            Point::ints(&[0, 1]),
        ])
        .unwrap();
        let v = s.cm_volume();
        assert_eq!(v, Scalar::ratio(1, 2));
        assert!(v.is_exact());
    }

    #[test]
    fn segment_volume_is_its_length() {
        let s = Simplex::new(vec![Point::ints(&[0, 0]), Point::ints(&[3, 4])]).unwrap();
        assert_eq!(s.cm_volume(), Scalar::int(5));
    }

    #[test]
    fn triangle_volume_matches_shoelace_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let b = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let c = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let oracle = shoelace(a, b, c);
            if oracle < 1e-3 {
                continue;
            }
            let got = tri(a, b, c).cm_volume().to_f64();
            assert!(
                (got - oracle).abs() <= 1e-9 * (1.0 + oracle),
                "{got} vs {oracle}"
            );
        }
    }

    #[test]
    fn tetrahedron_volume_matches_triple_product_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let mut vs = [[0.0; 3]; 4];
            for v in vs.iter_mut() {
                for x in v.iter_mut() {
                    *x = rng.gen_range(-2.0..2.0);
                }
            }
            let oracle = triple_product(&vs);
            if oracle < 1e-3 {
                continue;
            }
            let s = Simplex::from_rows(&vs.iter().map(|v| v.to_vec()).collect::<Vec<_>>()).unwrap();
            let got = s.cm_volume().to_f64();
            assert!(
                (got - oracle).abs() <= 1e-9 * (1.0 + oracle),
                "{got} vs {oracle}"
            );
        }
    }

    #[test]
    fn circumcenter_of_rational_triangle_is_rational() {
        let s = Simplex::new(vec![
            Point::ints(&[0, 0]),
            Point::ints(&[2, 0]),
            Point::ints(&[0, 2]),
        ])
        .unwrap();
        let (c, r) = s.circumsphere(&Tol::default()).unwrap();
        assert_eq!(c, Point::ints(&[1, 1]));
        assert_eq!(c.mode(), Mode::Exact);
        assert!((r.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn right_simplex_circumradius_closed_form() {
        // legs of length a along the axes: circumradius a sqrt(n) / 2
        for n in 2..=5usize {
            let a = 1.25;
            let mut rows = vec![vec![0.0; n]];
            for i in 0..n {
                let mut v = vec![0.0; n];
                v[i] = a;
                rows.push(v);
            }
            let s = Simplex::from_rows(&rows).unwrap();
            let (_, r) = s.circumsphere(&Tol::default()).unwrap();
            let expect = a * (n as f64).sqrt() / 2.0;
            assert!((r.to_f64() - expect).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn circumsphere_is_equidistant_from_all_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let tol = Tol::default();
        for n in 2..=3usize {
            for _ in 0..100 {
                let s = loop {
                    let rows: Vec<Vec<f64>> = (0..=n)
                        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
                        .collect();
                    match Simplex::from_rows(&rows) {
                        Ok(s) if s.cm_volume().to_f64() > 1e-3 => break s,
                        _ => continue,
                    }
                };
                let (c, r) = s.circumsphere(&tol).unwrap();
                for v in s.vertices() {
                    let d = c.dist(v).unwrap().to_f64();
                    assert!((d - r.to_f64()).abs() <= 1e-9 * (1.0 + r.to_f64()));
                }
            }
        }
    }

    #[test]
    fn circumsphere_requires_full_dimension() {
        let s = Simplex::from_rows(&[
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(matches!(
            s.circumsphere(&Tol::default()),
            Err(GeometryError::NotFullDimensional { m: 2, n: 3 })
        ));
    }

    #[test]
    fn edge_lengths_are_sorted() {
        let s = tri([0.0, 0.0], [3.0, 0.0], [0.0, 4.0]);
        let e: Vec<f64> = s.edge_lengths().iter().map(Scalar::to_f64).collect();
        assert!((e[0] - 3.0).abs() < 1e-12);
        assert!((e[1] - 4.0).abs() < 1e-12);
        assert!((e[2] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn shape_predicates_match_hand_picked_cases() {
        let tol = Tol::default();

        let equilateral = tri([0.0, 0.0], [1.0, 0.0], [0.5, 0.75f64.sqrt()]);
        assert!(equilateral.is_regular(&tol));
        assert_eq!(equilateral.is_isosceles(&tol), Some(0));

        let right_iso = tri([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]);
        assert!(!right_iso.is_regular(&tol));
        assert_eq!(right_iso.is_isosceles(&tol), Some(0));
        assert_eq!(right_iso.is_right(&tol), Some(0));

        let tall = tri([0.0, 0.0], [2.0, 0.0], [1.0, 10.0]);
        assert_eq!(tall.is_isosceles(&tol), Some(2));
        assert_eq!(tall.is_right(&tol), None);

        let scalene = tri([0.0, 0.0], [3.0, 0.0], [1.0, 1.0]);
        assert_eq!(scalene.is_isosceles(&tol), None);
    }

    #[test]
    fn metric_quantities_are_rigid_motion_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let tol = Tol::default();
        for _ in 0..50 {
            let n = 3;
            let s = loop {
                let rows: Vec<Vec<f64>> = (0..=n)
                    .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
                    .collect();
                match Simplex::from_rows(&rows) {
                    Ok(s) if s.cm_volume().to_f64() > 1e-2 => break s,
                    _ => continue,
                }
            };
            let q = crate::linalg::random_rotation(&mut rng, n);
            let t: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let moved_rows: Vec<Vec<f64>> = s
                .vertices()
                .iter()
                .map(|v| crate::linalg::add(&crate::linalg::apply_frame(&q, &v.to_f64_vec()), &t))
                .collect();
            let moved = Simplex::from_rows(&moved_rows).unwrap();

            assert!(tol.eq(s.cm_volume().to_f64(), moved.cm_volume().to_f64()));
            let (_, r1) = s.circumsphere(&tol).unwrap();
            let (_, r2) = moved.circumsphere(&tol).unwrap();
            assert!(tol.eq(r1.to_f64(), r2.to_f64()));
            assert_eq!(s.is_isosceles(&tol), moved.is_isosceles(&tol));
            assert_eq!(s.is_right(&tol), moved.is_right(&tol));
            for (a, b) in s.edge_lengths().iter().zip(moved.edge_lengths()) {
                assert!(tol.eq(a.to_f64(), b.to_f64()));
            }
        }
    }

    #[test]
    fn cube_bound_basics() {
        // m = n = 2, delta = 1: bound is 2^1 / 2 = 1, above the true max 1/2
        let b = cube_volume_bound(2, 2, &Scalar::int(1));
        assert!((b.to_f64() - 1.0).abs() < 1e-12);
        let z = cube_volume_bound(2, 2, &Scalar::int(0));
        assert_eq!(z.to_f64(), 0.0);
    }
}
