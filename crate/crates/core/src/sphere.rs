//! Spheres, sub-spheres, caps, and the witness constructions on them.
//!
//! The workhorse type is [`SubSphere`]: a `k`-dimensional sphere presented
//! as a center, a radius, and an orthonormal basis of the `(k+1)`-flat it
//! spans. Intersecting a sphere with another sphere centered on it drops
//! the dimension by one and shrinks the radius by the textbook identity
//! `x = (d^2 + R^2 - r^2) / 2d`, `rho = sqrt(R^2 - x^2)`; iterating this is
//! what powers the chained constructions. Sub-spheres are float-mode:
//! intersection radii are irrational in all but contrived cases, so nothing
//! would be gained by carrying rationals through them.
//!
//! Randomness is never ambient. Every sampling entry point takes a seed or
//! an explicit RNG, and equal seeds give byte-identical output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::admissible::AdmissibleValues;
use crate::error::SphereError;
use crate::lengths::EdgeLengthFunction;
use crate::linalg;
use crate::point::Point;
use crate::scalar::{Scalar, Tol};
use crate::simplex::Simplex;

/// A hypersphere `S_r(p)` in `R^n`, with dual-mode center and radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sphere {
    center: Point,
    radius: Scalar,
}

impl Sphere {
    pub fn new(center: Point, radius: Scalar) -> Result<Self, SphereError> {
        if !radius.is_positive() || !radius.is_finite() {
            return Err(SphereError::ZeroRadius);
        }
        Ok(Sphere { center, radius })
    }

    /// Float-mode sphere from raw coordinates.
    pub fn from_f64(center: &[f64], radius: f64) -> Result<Self, SphereError> {
        Sphere::new(Point::floats(center), Scalar::Float(radius))
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> &Scalar {
        &self.radius
    }

    pub fn n(&self) -> usize {
        self.center.dim()
    }

    /// `| |p - center| - radius |`, the on-sphere residual.
    pub fn residual(&self, p: &Point) -> f64 {
        match self.center.dist(p) {
            Ok(d) => (d.to_f64() - self.radius.to_f64()).abs(),
            Err(_) => f64::INFINITY,
        }
    }

    /// Does `p` lie on the sphere? Exact centers and points compare exactly
    /// (through squared distances); otherwise the residual is tolerance-gated.
    pub fn contains(&self, p: &Point, tol: &Tol) -> bool {
        if p.dim() != self.n() {
            return false;
        }
        match (self.center.dist_sq(p), &self.radius) {
            (Ok(d2 @ Scalar::Exact(_)), r @ Scalar::Exact(_)) => d2 == r * r,
            (Ok(d2), _) => {
                let r = self.radius.to_f64();
                tol.eq(d2.to_f64().sqrt(), r)
            }
            (Err(_), _) => false,
        }
    }

    /// The sphere as a full-ambient [`SubSphere`] (float mode).
    pub fn to_subsphere(&self) -> SubSphere {
        let n = self.n();
        let basis = (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e
            })
            .collect();
        SubSphere {
            center: self.center.to_f64_vec(),
            radius: self.radius.to_f64(),
            basis,
        }
    }

    /// `count` points sampled uniformly on the sphere; equal seeds give
    /// identical output.
    pub fn sample_uniform(&self, count: usize, seed: u64) -> Vec<Point> {
        self.to_subsphere()
            .sample_uniform(count, seed)
            .into_iter()
            .map(|c| Point::floats(&c))
            .collect()
    }
}

/// A `k`-sphere inside `R^n`: all points of an affine `(k+1)`-flat at a
/// fixed distance from a center lying in that flat.
///
/// `basis` holds `k + 1` orthonormal ambient vectors spanning the flat's
/// directions. `radius` may be zero (a single point), which is what a chain
/// of intersections eventually degenerates to.
#[derive(Clone, Debug)]
pub struct SubSphere {
    center: Vec<f64>,
    radius: f64,
    basis: Vec<Vec<f64>>,
}

/// Result of intersecting two spheres (or a sub-sphere with a sphere).
#[derive(Clone, Debug)]
pub enum SphereIntersection {
    Empty,
    Tangent(Point),
    Meet(SubSphere),
}

impl SubSphere {
    pub fn new(center: Vec<f64>, radius: f64, basis: Vec<Vec<f64>>) -> Result<Self, SphereError> {
        if radius < 0.0 || !radius.is_finite() {
            return Err(SphereError::ZeroRadius);
        }
        if basis.is_empty() || basis.iter().any(|b| b.len() != center.len()) {
            return Err(SphereError::DimensionTooSmall {
                needed: 1,
                got: basis.len(),
            });
        }
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (linalg::dot(&basis[i], &basis[j]) - expect).abs() > 1e-7 {
                    return Err(SphereError::BadCap);
                }
            }
        }
        Ok(SubSphere {
            center,
            radius,
            basis,
        })
    }

    /// Sphere dimension `k` (a circle has `k = 1`, a point pair `k = 0`).
    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.center.len()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    /// Ambient coordinates of a local coordinate vector (length `k + 1`).
    pub fn embed(&self, local: &[f64]) -> Vec<f64> {
        debug_assert_eq!(local.len(), self.basis.len());
        let mut out = self.center.clone();
        for (c, b) in local.iter().zip(&self.basis) {
            out = linalg::axpy(&out, *c, b);
        }
        out
    }

    /// Local coordinates of an ambient point (its offset projected on the basis).
    pub fn to_local(&self, ambient: &[f64]) -> Vec<f64> {
        let offset = linalg::sub(ambient, &self.center);
        self.basis.iter().map(|b| linalg::dot(&offset, b)).collect()
    }

    /// Is `p` on the sub-sphere: inside the flat and at the right distance?
    pub fn contains(&self, p: &[f64], tol: &Tol) -> bool {
        let local = self.to_local(p);
        let in_flat = {
            let back = self.embed(&local);
            let res = linalg::norm(&linalg::sub(p, &back));
            tol.is_zero(res, linalg::norm(p))
        };
        in_flat && tol.eq(linalg::norm(&local), self.radius)
    }

    /// One uniform sample (the center itself when the radius is zero).
    pub fn sample_one<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let u = linalg::random_unit(rng, self.basis.len());
        self.embed(&linalg::scale(&u, self.radius))
    }

    pub fn sample_uniform(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.sample_one(&mut rng)).collect()
    }

    /// The two points of a zero-dimensional sub-sphere.
    pub fn endpoints(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.dim() != 0 {
            return None;
        }
        Some((
            linalg::axpy(&self.center, self.radius, &self.basis[0]),
            linalg::axpy(&self.center, -self.radius, &self.basis[0]),
        ))
    }

    /// Intersection with the sphere of radius `r` around a point `p` that
    /// lies **on** this sub-sphere. The result is one dimension lower and
    /// stays inside this sub-sphere's flat.
    pub fn intersect_at(
        &self,
        p: &[f64],
        r: f64,
        tol: &Tol,
    ) -> Result<SphereIntersection, SphereError> {
        let t = self.radius;
        if t <= 0.0 || self.dim() == 0 {
            return Err(SphereError::ZeroRadius);
        }
        if r <= 0.0 || !r.is_finite() {
            return Err(SphereError::OutOfRange {
                what: "intersection radius",
                value: r,
                range: "(0, 2t)",
            });
        }
        let local = self.to_local(p);
        let off = (linalg::norm(&local) - t).abs();
        if off > 1e-6 * (1.0 + t) {
            return Err(SphereError::OutOfRange {
                what: "pole residual",
                value: off,
                range: "on the sub-sphere",
            });
        }
        let u = linalg::scale(&local, 1.0 / t);
        if tol.eq(r, 2.0 * t) {
            let anti = self.embed(&linalg::scale(&u, -t));
            return Ok(SphereIntersection::Tangent(Point::floats(&anti)));
        }
        if r > 2.0 * t {
            return Ok(SphereIntersection::Empty);
        }
        // distance from the sub-center to the intersection flat, along u;
        // rho is computed in factored form, which stays accurate for r << t
        let x = (2.0 * t * t - r * r) / (2.0 * t);
        let rho = r * ((2.0 * t - r) * (2.0 * t + r)).max(0.0).sqrt() / (2.0 * t);
        let center = self.embed(&linalg::scale(&u, x));
        let local_basis = linalg::complete_orthonormal_basis(&[u], self.basis.len());
        let basis: Vec<Vec<f64>> = local_basis[1..]
            .iter()
            .map(|w| {
                let mut out = vec![0.0; self.center.len()];
                for (c, b) in w.iter().zip(&self.basis) {
                    out = linalg::axpy(&out, *c, b);
                }
                out
            })
            .collect();
        Ok(SphereIntersection::Meet(SubSphere {
            center,
            radius: rho,
            basis,
        }))
    }

    /// A random great sub-sphere of dimension `dim` (same center and
    /// radius, directions drawn uniformly inside this sphere's flat).
    pub fn great_subsphere<R: Rng>(&self, dim: usize, rng: &mut R) -> SubSphere {
        assert!(dim <= self.dim(), "great sub-sphere cannot gain dimensions");
        let k1 = self.basis.len();
        let frame = loop {
            let cols: Vec<Vec<f64>> = (0..dim + 1)
                .map(|_| linalg::gaussian_vec(rng, k1))
                .collect();
            if let Some(f) = linalg::orthonormalize(&cols) {
                break f;
            }
        };
        let basis = frame
            .iter()
            .map(|w| {
                let mut out = vec![0.0; self.center.len()];
                for (c, b) in w.iter().zip(&self.basis) {
                    out = linalg::axpy(&out, *c, b);
                }
                out
            })
            .collect();
        SubSphere {
            center: self.center.clone(),
            radius: self.radius,
            basis,
        }
    }
}

/// Intersects two spheres in the same ambient space.
pub fn sphere_intersect(
    a: &Sphere,
    b: &Sphere,
    tol: &Tol,
) -> Result<SphereIntersection, SphereError> {
    if a.n() != b.n() {
        return Err(SphereError::Geometry(
            crate::error::GeometryError::DimensionMismatch {
                expected: a.n(),
                got: b.n(),
            },
        ));
    }
    let p = a.center.to_f64_vec();
    let q = b.center.to_f64_vec();
    let (big_r, small_r) = (a.radius.to_f64(), b.radius.to_f64());
    let diff = linalg::sub(&q, &p);
    let d = linalg::norm(&diff);
    if tol.is_zero(d, big_r.max(small_r)) {
        return Err(SphereError::ConcentricSpheres);
    }
    let u = linalg::scale(&diff, 1.0 / d);
    let x = (d * d + big_r * big_r - small_r * small_r) / (2.0 * d);
    if tol.eq(d, big_r + small_r) || tol.eq(d, (big_r - small_r).abs()) {
        return Ok(SphereIntersection::Tangent(Point::floats(&linalg::axpy(
            &p, x, &u,
        ))));
    }
    if d > big_r + small_r || d < (big_r - small_r).abs() {
        return Ok(SphereIntersection::Empty);
    }
    // Heron-style factored form avoids cancellation near tangency
    let rho = ((-d + small_r + big_r)
        * (d + small_r - big_r)
        * (d - small_r + big_r)
        * (d + small_r + big_r))
        .max(0.0)
        .sqrt()
        / (2.0 * d);
    let full = linalg::complete_orthonormal_basis(std::slice::from_ref(&u), a.n());
    Ok(SphereIntersection::Meet(SubSphere {
        center: linalg::axpy(&p, x, &u),
        radius: rho,
        basis: full[1..].to_vec(),
    }))
}

/// Edge length of the regular `(n-1)`-simplex inscribed in the sub-sphere
/// cut from a radius-`r` sphere in `R^n` by a chord distance `t` from a
/// point on it: `h(t) = rho(t) * sqrt(2n / (n-1))` with
/// `rho(t) = t * sqrt(1 - t^2 / 4r^2)`. Strictly increasing for
/// `t in (0, r * sqrt(2))`.
pub fn h_edge(radius: f64, t: f64, n: usize) -> Result<f64, SphereError> {
    if n < 2 {
        return Err(SphereError::DimensionTooSmall { needed: 2, got: n });
    }
    if !(t > 0.0 && t < 2.0 * radius) {
        return Err(SphereError::OutOfRange {
            what: "chord distance",
            value: t,
            range: "(0, 2r)",
        });
    }
    let rho = t * (1.0 - t * t / (4.0 * radius * radius)).sqrt();
    Ok(rho * (2.0 * n as f64 / (n as f64 - 1.0)).sqrt())
}

/// A spherical cap: the points of `sphere` within Euclidean distance
/// `euclid_radius` of `pole`. The radius is measured by chords, so
/// `2 * sphere.radius` covers the whole sphere and `delta()` in `(0, 1]`
/// is the normalized size `euclid_radius / (radius * sqrt(2))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    sphere: Sphere,
    pole: Point,
    euclid_radius: Scalar,
}

impl Cap {
    pub fn new(
        sphere: Sphere,
        pole: Point,
        euclid_radius: Scalar,
        tol: &Tol,
    ) -> Result<Self, SphereError> {
        if !sphere.contains(&pole, tol) {
            return Err(SphereError::BadCap);
        }
        let two_r = Scalar::int(2) * sphere.radius();
        if !euclid_radius.is_positive() || euclid_radius > two_r {
            return Err(SphereError::BadCap);
        }
        Ok(Cap {
            sphere,
            pole,
            euclid_radius,
        })
    }

    /// Cap of normalized size `delta in (0, 1]` around the pole.
    pub fn from_delta(
        sphere: Sphere,
        pole: Point,
        delta: f64,
        tol: &Tol,
    ) -> Result<Self, SphereError> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(SphereError::BadCap);
        }
        let r = sphere.radius().to_f64();
        let euclid = Scalar::Float(delta * r * std::f64::consts::SQRT_2);
        Cap::new(sphere, pole, euclid, tol)
    }

    pub fn sphere(&self) -> &Sphere {
        &self.sphere
    }

    pub fn pole(&self) -> &Point {
        &self.pole
    }

    pub fn euclid_radius(&self) -> &Scalar {
        &self.euclid_radius
    }

    pub fn delta(&self) -> f64 {
        self.euclid_radius.to_f64() / (self.sphere.radius().to_f64() * std::f64::consts::SQRT_2)
    }

    /// On the sphere and strictly within the chord radius of the pole.
    pub fn contains(&self, p: &Point, tol: &Tol) -> bool {
        if !self.sphere.contains(p, tol) {
            return false;
        }
        match self.pole.dist(p) {
            Ok(d) => d.to_f64() < self.euclid_radius.to_f64(),
            Err(_) => false,
        }
    }
}

/// Vertices of a regular `(k+1)`-simplex inscribed in a sub-sphere, in
/// ambient coordinates. Handles `k = 0` (the two endpoints).
fn regular_points_on(
    sub: &SubSphere,
    rotation: Option<&mut ChaCha8Rng>,
) -> Result<Vec<Vec<f64>>, SphereError> {
    if sub.radius <= 0.0 {
        return Err(SphereError::ZeroRadius);
    }
    let m = sub.dim() + 1;
    if m == 1 {
        let (a, b) = sub.endpoints().expect("dim 0 has endpoints");
        return Ok(vec![a, b]);
    }
    let tol = Tol::default();
    let h = EdgeLengthFunction::constant(m, Scalar::int(1)).expect("m >= 2");
    let unit = h.realize(&tol)?;
    let rows: Vec<Vec<f64>> = unit.vertices().iter().map(|v| v.to_f64_vec()).collect();
    let mut centroid = vec![0.0; m];
    for r in &rows {
        centroid = linalg::add(&centroid, r);
    }
    centroid = linalg::scale(&centroid, 1.0 / (m as f64 + 1.0));
    let circum = linalg::norm(&linalg::sub(&rows[0], &centroid));
    let factor = sub.radius / circum;
    let frame = rotation.map(|rng| linalg::random_rotation(rng, m));
    Ok(rows
        .iter()
        .map(|r| {
            let local = linalg::scale(&linalg::sub(r, &centroid), factor);
            let local = match &frame {
                Some(f) => linalg::apply_frame(f, &local),
                None => local,
            };
            sub.embed(&local)
        })
        .collect())
}

/// The regular `(k+1)`-simplex inscribed in a `k`-dimensional sub-sphere,
/// `k >= 1`, with the orientation drawn from the seed. Its edge length is
/// `radius * sqrt(2(k+2)/(k+1))`.
pub fn inscribed_regular(sub: &SubSphere, seed: u64) -> Result<Simplex, SphereError> {
    if sub.dim() < 1 {
        return Err(SphereError::DimensionTooSmall {
            needed: 1,
            got: sub.dim(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = regular_points_on(sub, Some(&mut rng))?;
    Ok(Simplex::from_rows(&pts)?)
}

/// A right `(k+1)`-simplex inscribed in a `k`-dimensional sub-sphere: a
/// random apex on the sphere plus orthogonal legs with random positive
/// lengths satisfying `sum a_i^2 = 4 rho^2`, which puts every vertex on the
/// sphere (the apex is vertex 0).
pub fn right_inscribed<R: Rng>(sub: &SubSphere, rng: &mut R) -> Result<Simplex, SphereError> {
    if sub.dim() < 1 {
        return Err(SphereError::DimensionTooSmall {
            needed: 1,
            got: sub.dim(),
        });
    }
    if sub.radius <= 0.0 {
        return Err(SphereError::ZeroRadius);
    }
    let m = sub.dim() + 1;
    let rho = sub.radius;
    // apex in local coordinates; u points from the apex to the sub-center
    let apex_dir = linalg::random_unit(rng, m);
    let u = linalg::scale(&apex_dir, -1.0);
    let weights = loop {
        let g: Vec<f64> = linalg::gaussian_vec(rng, m)
            .iter()
            .map(|x| x.abs())
            .collect();
        let norm = linalg::norm(&g);
        if g.iter().all(|&x| x > 1e-3 * norm) {
            break linalg::scale(&g, 2.0 * rho / norm);
        }
    };
    let w = linalg::scale(&weights, 1.0 / (2.0 * rho));
    let q = linalg::random_rotation(rng, m);
    let s = linalg::apply_frame(&q, &w);
    let reflect = linalg::reflect_onto(&s, &u);
    let apex_local = linalg::scale(&apex_dir, rho);
    let mut rows = vec![sub.embed(&apex_local)];
    for (i, a) in weights.iter().enumerate() {
        let g = reflect(&q[i]);
        rows.push(sub.embed(&linalg::axpy(&apex_local, *a, &g)));
    }
    Ok(Simplex::from_rows(&rows)?)
}

/// A right `n`-simplex with circumradius `sphere.radius` whose vertices all
/// lie inside the cap, when the cap is big enough; `Ok(None)` when it
/// provably is not. With equal legs `a = 2r/sqrt(n)` anchored at the pole,
/// every vertex is within `a` of the pole, so the construction fits exactly
/// when `delta > sqrt(2/n)`; that threshold is sharp for this family.
/// Needs `n >= 3`: on a circle, a right triangle's hypotenuse is a
/// diameter, so no small cap can contain one.
pub fn right_simplex_in_cap(cap: &Cap, seed: u64) -> Result<Option<Simplex>, SphereError> {
    let n = cap.sphere().n();
    if n < 3 {
        return Err(SphereError::DimensionTooSmall { needed: 3, got: n });
    }
    let r = cap.sphere().radius().to_f64();
    let legs = 2.0 * r / (n as f64).sqrt();
    if legs >= cap.euclid_radius().to_f64() {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pole = cap.pole().to_f64_vec();
    let center = cap.sphere().center().to_f64_vec();
    let u = linalg::scale(&linalg::sub(&center, &pole), 1.0 / r);
    // orthonormal legs g_i with sum g_i = sqrt(n) * u, randomized about u
    let q = linalg::random_rotation(&mut rng, n);
    let diag = linalg::scale(&vec![1.0; n], 1.0 / (n as f64).sqrt());
    let s = linalg::apply_frame(&q, &diag);
    let reflect = linalg::reflect_onto(&s, &u);
    let mut rows = vec![pole.clone()];
    for col in &q {
        rows.push(linalg::axpy(&pole, legs, &reflect(col)));
    }
    Ok(Some(Simplex::from_rows(&rows)?))
}

/// Spec-shaped convenience: sphere of radius `r` at the origin in `R^n`,
/// cap of normalized size `delta` about the first-axis pole.
pub fn cap_contains_right_simplex(
    r: f64,
    delta: f64,
    n: usize,
    seed: u64,
) -> Result<Option<Simplex>, SphereError> {
    if n < 3 {
        return Err(SphereError::DimensionTooSmall { needed: 3, got: n });
    }
    let mut center = vec![0.0; n];
    let sphere = Sphere::from_f64(&center, r)?;
    center[0] = r;
    let cap = Cap::from_delta(sphere, Point::floats(&center), delta, &Tol::default())?;
    right_simplex_in_cap(&cap, seed)
}

/// Builds an `n`-simplex on the cap's sphere, entirely inside the cap, with
/// every edge at the pole-side vertices drawn from `lengths`.
///
/// Starting at the pole, each step intersects the current sub-sphere with a
/// sphere of an admissible radius around the latest vertex; the radius is
/// chosen below half the available room (the cap radius first, then the
/// current sub-sphere radius), so the intersection always exists and stays
/// inside the cap. The final zero-dimensional sphere contributes its two
/// endpoints, leaving only that last edge unconstrained: at least
/// `C(n+1,2) - 1` edges land in `lengths`.
pub fn chain_construction(
    cap: &Cap,
    lengths: &AdmissibleValues,
    seed: u64,
) -> Result<Simplex, SphereError> {
    let tol = Tol::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = cap.sphere().to_subsphere();
    let mut p = cap.pole().to_f64_vec();
    let mut vertices = vec![p.clone()];
    let mut first = true;
    loop {
        let room = if first {
            cap.euclid_radius().to_f64().min(2.0 * cur.radius())
        } else {
            cur.radius()
        };
        first = false;
        let bound = room / 2.0;
        let r = lengths
            .pick_below(bound, &tol)
            .ok_or(SphereError::NoSmallLength(bound))?;
        cur = match cur.intersect_at(&p, r, &tol)? {
            SphereIntersection::Meet(s) => s,
            _ => unreachable!("radius below half the room always meets"),
        };
        if cur.dim() == 0 {
            let (a, b) = cur.endpoints().expect("dim 0");
            vertices.push(a);
            vertices.push(b);
            break;
        }
        p = cur.sample_one(&mut rng);
        vertices.push(p.clone());
    }
    Ok(Simplex::from_rows(&vertices)?)
}

/// The comparison simplex used by [`volume_witness`]: the cap's pole plus
/// the first `m` vertices of the regular `(n-1)`-simplex inscribed in the
/// slice at chord distance `t`, in a fixed deterministic orientation.
fn volume_slice_simplex(cap: &Cap, m: usize, t: f64) -> Result<Simplex, SphereError> {
    let tol = Tol::default();
    let full = cap.sphere().to_subsphere();
    let pole = cap.pole().to_f64_vec();
    let sub = match full.intersect_at(&pole, t, &tol)? {
        SphereIntersection::Meet(s) => s,
        _ => {
            return Err(SphereError::OutOfRange {
                what: "slice distance",
                value: t,
                range: "(0, 2r)",
            })
        }
    };
    let ring = regular_points_on(&sub, None)?;
    let mut rows = vec![pole];
    rows.extend_from_slice(&ring[..m]);
    Ok(Simplex::from_rows(&rows)?)
}

/// The room available to [`volume_witness`]'s slice parameter: volumes stay
/// monotone in `t` below both the cap radius and `r * sqrt(2)`.
fn volume_room(cap: &Cap) -> f64 {
    let r = cap.sphere().radius().to_f64();
    0.999
        * cap
            .euclid_radius()
            .to_f64()
            .min(r * std::f64::consts::SQRT_2)
}

/// The largest `m`-volume that [`volume_witness`] can reach on this cap.
pub fn volume_witness_max(cap: &Cap, m: usize) -> Result<f64, SphereError> {
    let n = cap.sphere().n();
    if m < 1 || m > n {
        return Err(SphereError::DimensionTooSmall { needed: 1, got: m });
    }
    Ok(volume_slice_simplex(cap, m, volume_room(cap))?
        .cm_volume()
        .to_f64())
}

/// An `m`-simplex inside the cap whose `m`-volume equals `target` to a
/// relative `1e-12`.
///
/// The one-parameter family `t -> {pole} + slice(t)` has strictly
/// increasing volume while `t` stays below both the cap radius and
/// `r * sqrt(2)`, so a bisection on `t` finds the preimage; the target must
/// be positive and below [`volume_witness_max`].
pub fn volume_witness(cap: &Cap, m: usize, target: f64) -> Result<Simplex, SphereError> {
    if target <= 0.0 || !target.is_finite() {
        return Err(SphereError::NonPositiveTarget(target));
    }
    let room = volume_room(cap);
    let vol_at = |t: f64| -> Result<f64, SphereError> {
        Ok(volume_slice_simplex(cap, m, t)?.cm_volume().to_f64())
    };
    let max = volume_witness_max(cap, m)?;
    if target >= max {
        return Err(SphereError::TargetTooLarge { target, max });
    }
    let mut lo = room * 1e-3;
    let mut hi = room;
    for _ in 0..40 {
        match vol_at(lo) {
            Ok(v) if v < target => break,
            // still too big: shrink; unconstructibly small: stop, the
            // bisection only ever evaluates above lo
            Ok(_) => lo *= 0.25,
            Err(_) => break,
        }
    }
    let rel = 1e-12;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = vol_at(mid)?;
        if (v - target).abs() <= rel * target.abs() {
            return volume_slice_simplex(cap, m, mid);
        }
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(SphereError::OutOfRange {
        what: "bisection residual",
        value: vol_at(0.5 * (lo + hi))? - target,
        range: "within 1e-12 of the target",
    })
}
