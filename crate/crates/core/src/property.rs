//! Point-set properties that trigger forcing, and witness construction.
//!
//! A property is a predicate on finite subsets of a sphere: "contains `y`
//! points", "contains a regular `m`-simplex", "contains `k` pairwise
//! distances from this set", and so on. Two questions matter downstream:
//!
//! * [`Property::holds`] — does a concrete point set satisfy the property
//!   (exhaustively, with a witness)?
//! * [`witness_template`] — can a satisfying configuration be *constructed*
//!   on a given sphere at all? The answer distinguishes a found template
//!   from honest failure ([`TemplateOutcome::Exhausted`]) and from a proof
//!   that none exists ([`TemplateOutcome::Impossible`]).

use itertools::Itertools;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::admissible::AdmissibleValues;
use crate::error::{PropertyError, SphereError};
use crate::lengths::{edge_count, EdgeLengthFunction};
use crate::linalg;
use crate::point::Point;
use crate::scalar::{Mode, Scalar, Tol};
use crate::simplex::Simplex;
use crate::sphere::{
    inscribed_regular, right_inscribed, volume_witness, volume_witness_max, Cap, Sphere,
    SphereIntersection,
};

/// Cap on the number of subsets [`Property::holds`] will enumerate.
const HOLDS_BUDGET: u128 = 200_000;
/// Cap on the number of length assignments the finite exhaustive witness
/// search will try.
const ENUM_BUDGET: u128 = 100_000;
/// Retries for the randomized witness constructions.
const SAMPLING_TRIES: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Property {
    /// At least `y` distinct points.
    Cardinality { y: u64 },
    /// Contains the vertex set of an isosceles `m`-simplex: some vertex is
    /// equidistant from all the others.
    Isosceles { m: usize },
    /// Contains the vertex set of a regular `m`-simplex.
    Regular { m: usize },
    /// Contains the vertex set of a right `m`-simplex: some vertex has
    /// pairwise orthogonal edges.
    Right { m: usize },
    /// Contains an `m`-simplex whose `m`-volume lies in `volumes`.
    Volume { m: usize, volumes: AdmissibleValues },
    /// Contains `n + 1` points (in ambient `R^n`) of which at least `k`
    /// pairwise distances lie in `lengths`.
    EdgeLengths { k: usize, lengths: AdmissibleValues },
}

/// Result of an exhaustive property check, with the indices of a
/// satisfying subset when there is one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoldsOutcome {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

impl HoldsOutcome {
    fn no() -> Self {
        HoldsOutcome {
            holds: false,
            witness: None,
        }
    }

    fn yes(witness: Vec<usize>) -> Self {
        HoldsOutcome {
            holds: true,
            witness: Some(witness),
        }
    }
}

/// What a witness construction attempt can report.
#[derive(Clone, Debug, PartialEq)]
pub enum TemplateOutcome {
    /// Points on the sphere satisfying the property.
    Found(Vec<Point>),
    /// No template found within the sampling budget; nothing is proven.
    Exhausted,
    /// No satisfying configuration exists on this sphere (exact when the
    /// sphere and the parameters are exact, tolerance-based otherwise).
    Impossible,
}

impl Property {
    pub fn validate(&self) -> Result<(), PropertyError> {
        let bad = |msg: &str| Err(PropertyError::BadParameters(msg.into()));
        match self {
            Property::Cardinality { y } if *y < 1 => bad("cardinality needs y >= 1"),
            Property::Isosceles { m } | Property::Right { m } if *m < 2 => {
                bad("isosceles and right simplices need dimension >= 2")
            }
            Property::Regular { m } if *m < 1 => bad("regular simplex needs dimension >= 1"),
            Property::Volume { m, volumes } => {
                if *m < 1 {
                    return bad("volume needs simplex dimension >= 1");
                }
                volumes.validate().map_err(PropertyError::BadParameters)
            }
            Property::EdgeLengths { k, lengths } => {
                if *k < 1 {
                    return bad("edge count k must be >= 1");
                }
                lengths.validate().map_err(PropertyError::BadParameters)
            }
            _ => Ok(()),
        }
    }

    /// The smallest point set that could possibly satisfy the property in
    /// ambient dimension `n`.
    pub fn min_points(&self, n: usize) -> usize {
        match self {
            Property::Cardinality { y } => *y as usize,
            Property::Isosceles { m }
            | Property::Regular { m }
            | Property::Right { m }
            | Property::Volume { m, .. } => m + 1,
            Property::EdgeLengths { .. } => n + 1,
        }
    }

    /// Exhaustively decides whether `points` satisfies the property,
    /// returning the indices of a satisfying subset when one exists.
    /// Subset enumeration is capped at a budget to keep the check honest
    /// about its cost.
    pub fn holds(&self, points: &[Point], tol: &Tol) -> Result<HoldsOutcome, PropertyError> {
        self.validate()?;
        match self {
            Property::Cardinality { y } => {
                let y = *y as usize;
                let mut reps: Vec<usize> = Vec::new();
                for (i, p) in points.iter().enumerate() {
                    if reps.iter().all(|&r| !points[r].approx_eq(p, tol)) {
                        reps.push(i);
                        if reps.len() == y {
                            return Ok(HoldsOutcome::yes(reps));
                        }
                    }
                }
                Ok(HoldsOutcome::no())
            }
            Property::Isosceles { m }
            | Property::Regular { m }
            | Property::Right { m }
            | Property::Volume { m, .. } => {
                let size = m + 1;
                self.scan_subsets(points, size, tol, |s| match self {
                    Property::Isosceles { .. } => s.is_isosceles(tol).is_some(),
                    Property::Regular { .. } => s.is_regular(tol),
                    Property::Right { .. } => s.is_right(tol).is_some(),
                    Property::Volume { volumes, .. } => volumes.contains_sq(&s.cm_volume_sq(), tol),
                    _ => unreachable!(),
                })
            }
            Property::EdgeLengths { k, lengths } => {
                if points.is_empty() {
                    return Ok(HoldsOutcome::no());
                }
                let size = points[0].dim() + 1;
                if points.len() < size {
                    return Ok(HoldsOutcome::no());
                }
                check_budget(points.len(), size)?;
                for combo in (0..points.len()).combinations(size) {
                    let mut hits = 0usize;
                    for pair in combo.iter().combinations(2) {
                        let d2 = points[*pair[0]].dist_sq(&points[*pair[1]])?;
                        if lengths.contains_sq(&d2, tol) {
                            hits += 1;
                        }
                    }
                    if hits >= *k {
                        return Ok(HoldsOutcome::yes(combo));
                    }
                }
                Ok(HoldsOutcome::no())
            }
        }
    }

    fn scan_subsets(
        &self,
        points: &[Point],
        size: usize,
        _tol: &Tol,
        pred: impl Fn(&Simplex) -> bool,
    ) -> Result<HoldsOutcome, PropertyError> {
        if points.len() < size {
            return Ok(HoldsOutcome::no());
        }
        check_budget(points.len(), size)?;
        for combo in (0..points.len()).combinations(size) {
            let verts: Vec<Point> = combo.iter().map(|&i| points[i].clone()).collect();
            // affinely dependent subsets are not simplices; skip them
            let Ok(s) = Simplex::new(verts) else { continue };
            if pred(&s) {
                return Ok(HoldsOutcome::yes(combo));
            }
        }
        Ok(HoldsOutcome::no())
    }

    /// A normalized cap size `delta` such that *every* cap of that size on
    /// a sphere carrying the property's ambient dimension contains a
    /// satisfying configuration — when the property is cap-uniform at all.
    /// The returned value is a sufficient size, not the infimum.
    pub fn uniform_cap_delta(&self, n: usize) -> Option<f64> {
        match self {
            Property::Cardinality { .. } => Some(0.5),
            Property::Isosceles { m } => (*m <= n).then_some(0.5),
            // a regular m-simplex fits in arbitrarily small caps as long as
            // a slice sub-sphere can hold it; at m = n its edge is pinned
            // to the circumradius and no small cap contains it
            Property::Regular { m } => (*m < n).then_some(0.5),
            Property::Right { m } => {
                if *m < n {
                    Some(0.5)
                } else if *m == n && n >= 3 {
                    // the equal-leg construction fits when
                    // delta > sqrt(2/n); stay safely above the threshold
                    Some(((2.0 / n as f64).sqrt() + 1.0) / 2.0)
                } else {
                    // on a circle the hypotenuse is a diameter
                    None
                }
            }
            Property::Volume { m, volumes } => {
                (*m <= n && volumes.has_arbitrarily_small()).then_some(0.5)
            }
            Property::EdgeLengths { k, lengths } => {
                let total = edge_count(n);
                if *k > total {
                    None
                } else if *k < total {
                    lengths.has_arbitrarily_small().then_some(0.5)
                } else {
                    // all edges constrained: the chain trick no longer
                    // covers the last edge, so a full interval near zero is
                    // needed to absorb both length scales
                    interval_like_at_zero(lengths).then_some(0.5)
                }
            }
        }
    }
}

fn check_budget(points: usize, size: usize) -> Result<(), PropertyError> {
    if binomial(points, size) > HOLDS_BUDGET {
        return Err(PropertyError::TooManyPoints {
            points,
            budget: HOLDS_BUDGET as usize,
        });
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

fn interval_like_at_zero(s: &AdmissibleValues) -> bool {
    match s {
        AdmissibleValues::Interval { lo, .. }
        | AdmissibleValues::IntervalMinusCountable { lo, .. } => !lo.is_positive(),
        AdmissibleValues::UnionOfIntervals(parts) => parts.iter().any(|(lo, _)| !lo.is_positive()),
        _ => false,
    }
}

/// Volume of the regular `m`-simplex with circumradius `r` — the largest
/// `m`-simplex with all vertices on a sphere of that radius.
fn regular_max_volume(m: usize, r: f64) -> f64 {
    let mf = m as f64;
    let fact: f64 = (1..=m).map(|i| i as f64).product();
    r.powi(m as i32) * (mf + 1.0).powf((mf + 1.0) / 2.0) / (fact * mf.powf(mf / 2.0))
}

/// A cap covering the monotone working range of the sphere, poled at the
/// first-axis point.
fn full_cap(sphere: &Sphere, tol: &Tol) -> Result<Cap, SphereError> {
    let mut pole = sphere.center().to_f64_vec();
    pole[0] += sphere.radius().to_f64();
    Cap::from_delta(sphere.clone(), Point::floats(&pole), 1.0, tol)
}

fn pole_point(sphere: &Sphere) -> Vec<f64> {
    let mut pole = sphere.center().to_f64_vec();
    pole[0] += sphere.radius().to_f64();
    pole
}

/// Tries to construct, on `sphere`, a point set satisfying `prop`.
/// Deterministic in `seed`. `Found` templates always satisfy
/// [`Property::holds`] and lie on the sphere to float accuracy;
/// `Impossible` is a certificate that no satisfying set exists (exact when
/// everything in sight is exact).
pub fn witness_template(
    prop: &Property,
    sphere: &Sphere,
    seed: u64,
) -> Result<TemplateOutcome, PropertyError> {
    prop.validate()?;
    let tol = Tol::default();
    let n = sphere.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match prop {
        Property::Cardinality { y } => Ok(TemplateOutcome::Found(
            sphere.sample_uniform(*y as usize, seed),
        )),
        Property::Regular { m } => {
            if *m > n {
                return Ok(TemplateOutcome::Impossible);
            }
            Ok(TemplateOutcome::Found(regular_template(
                sphere, *m, &mut rng,
            )?))
        }
        Property::Isosceles { m } => {
            if *m > n {
                return Ok(TemplateOutcome::Impossible);
            }
            let full = sphere.to_subsphere();
            let apex = full.sample_one(&mut rng);
            let r = sphere.radius().to_f64();
            let SphereIntersection::Meet(slice) = full.intersect_at(&apex, r, &tol)? else {
                return Ok(TemplateOutcome::Exhausted);
            };
            for _ in 0..8 {
                let mut rows = vec![apex.clone()];
                if slice.dim() == 0 {
                    let (a, b) = slice.endpoints().expect("dim 0");
                    rows.push(a);
                    rows.push(b);
                } else {
                    for _ in 0..*m {
                        rows.push(slice.sample_one(&mut rng));
                    }
                }
                if let Ok(s) = Simplex::from_rows(&rows) {
                    if s.is_isosceles(&tol).is_some() {
                        return Ok(TemplateOutcome::Found(s.vertices().to_vec()));
                    }
                }
            }
            Ok(TemplateOutcome::Exhausted)
        }
        Property::Right { m } => {
            if *m > n {
                return Ok(TemplateOutcome::Impossible);
            }
            let full = sphere.to_subsphere();
            let sub = if *m == n {
                full
            } else {
                full.great_subsphere(m - 1, &mut rng)
            };
            for _ in 0..8 {
                if let Ok(s) = right_inscribed(&sub, &mut rng) {
                    return Ok(TemplateOutcome::Found(s.vertices().to_vec()));
                }
            }
            Ok(TemplateOutcome::Exhausted)
        }
        Property::Volume { m, volumes } => {
            if *m > n {
                return Ok(TemplateOutcome::Impossible);
            }
            let r = sphere.radius().to_f64();
            let vmax = regular_max_volume(*m, r);
            if volumes.inf() > vmax * (1.0 + 1e-9) {
                return Ok(TemplateOutcome::Impossible);
            }
            if volumes.contains(&Scalar::Float(vmax), &tol) {
                return Ok(TemplateOutcome::Found(regular_template(
                    sphere, *m, &mut rng,
                )?));
            }
            let cap = full_cap(sphere, &tol)?;
            let reach = volume_witness_max(&cap, *m)?;
            match volumes.pick_below(reach * (1.0 - 1e-9), &tol) {
                Some(target) if target > 0.0 => match volume_witness(&cap, *m, target) {
                    Ok(s) => Ok(TemplateOutcome::Found(s.vertices().to_vec())),
                    Err(_) => Ok(TemplateOutcome::Exhausted),
                },
                _ => Ok(TemplateOutcome::Exhausted),
            }
        }
        Property::EdgeLengths { k, lengths } => {
            edge_length_template(*k, lengths, sphere, &mut rng, &tol)
        }
    }
}

/// Vertices of a regular `m`-simplex on the sphere (`m <= n`); `m = 1` is a
/// pair of antipodal points.
fn regular_template(
    sphere: &Sphere,
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Point>, PropertyError> {
    let n = sphere.n();
    let full = sphere.to_subsphere();
    if m == 1 {
        let sub = full.great_subsphere(0, rng);
        let (a, b) = sub.endpoints().expect("dim 0");
        return Ok(vec![Point::floats(&a), Point::floats(&b)]);
    }
    let sub = if m == n {
        full
    } else {
        full.great_subsphere(m - 1, rng)
    };
    let s = inscribed_regular(&sub, rng.gen())?;
    Ok(s.vertices().to_vec())
}

fn edge_length_template(
    k: usize,
    lengths: &AdmissibleValues,
    sphere: &Sphere,
    rng: &mut ChaCha8Rng,
    tol: &Tol,
) -> Result<TemplateOutcome, PropertyError> {
    let n = sphere.n();
    let total = edge_count(n);
    if k > total {
        return Ok(TemplateOutcome::Impossible);
    }
    // smallest j with C(j+1, 2) >= k; a regular j-simplex on a slice
    // provides that many equal admissible edges when j fits strictly below
    // the ambient dimension
    let j = (1..).find(|&j| j * (j + 1) / 2 >= k).unwrap();
    if j < n {
        if let Some(points) = slice_regular_route(j, lengths, sphere, rng, tol)? {
            return Ok(TemplateOutcome::Found(points));
        }
    }
    if let Some(points) = two_length_route(lengths, sphere, rng, tol)? {
        return Ok(TemplateOutcome::Found(points));
    }
    if k < total && lengths.has_arbitrarily_small() {
        let cap = full_cap(sphere, tol)?;
        if let Ok(s) = crate::sphere::chain_construction(&cap, lengths, rng.gen()) {
            return Ok(TemplateOutcome::Found(s.vertices().to_vec()));
        }
    }
    if k == total {
        if let AdmissibleValues::Finite(values) = lengths {
            if let Some(outcome) = finite_exhaustive_route(values, sphere, rng, tol)? {
                return Ok(outcome);
            }
        }
    }
    Ok(TemplateOutcome::Exhausted)
}

/// `j + 1` points at a mutual admissible distance `a` (a regular
/// `j`-simplex on a slice of the sphere), padded to `n + 1` points with
/// uniform samples. Needs `j <= n - 1` so the slice has room.
fn slice_regular_route(
    j: usize,
    lengths: &AdmissibleValues,
    sphere: &Sphere,
    rng: &mut ChaCha8Rng,
    tol: &Tol,
) -> Result<Option<Vec<Point>>, PropertyError> {
    let n = sphere.n();
    let r = sphere.radius().to_f64();
    let full = sphere.to_subsphere();
    let pole = pole_point(sphere);
    let a_max = r * (2.0 * (j as f64 + 1.0) / j as f64).sqrt();
    for _ in 0..SAMPLING_TRIES {
        let Some(a) = lengths.sample(rng, tol) else {
            break;
        };
        if !(a > 1e-9 * r && a < a_max * 0.999) {
            continue;
        }
        let mut rows: Vec<Vec<f64>> = Vec::new();
        if j == 1 {
            let SphereIntersection::Meet(slice) = full.intersect_at(&pole, a, tol)? else {
                continue;
            };
            rows.push(pole.clone());
            rows.push(slice.sample_one(rng));
        } else {
            // slice whose sub-radius equals the simplex circumradius;
            // the smaller root of rho(t) = rho_j, written stably
            let rho = a * (j as f64 / (2.0 * (j as f64 + 1.0))).sqrt();
            let x = (rho / r) * (rho / r);
            let t = (2.0 * r * r * x / (1.0 + (1.0 - x).sqrt())).sqrt();
            let SphereIntersection::Meet(slice) = full.intersect_at(&pole, t, tol)? else {
                continue;
            };
            let ring_sub = if slice.dim() == j - 1 {
                slice
            } else {
                slice.great_subsphere(j - 1, rng)
            };
            let Ok(s) = inscribed_regular(&ring_sub, rng.gen()) else {
                continue;
            };
            rows.extend(s.vertices().iter().map(|v| v.to_f64_vec()));
        }
        let mut points: Vec<Point> = rows.iter().map(|row| Point::floats(row)).collect();
        points.extend(sphere.sample_uniform(n + 1 - points.len(), rng.gen()));
        return Ok(Some(points));
    }
    Ok(None)
}

/// An apex plus a regular ring on its slice: `n + 1` points whose edges all
/// lie in `{t, h_edge(r, t, n)}`. Succeeds when both lengths land in the
/// admissible set.
fn two_length_route(
    lengths: &AdmissibleValues,
    sphere: &Sphere,
    rng: &mut ChaCha8Rng,
    tol: &Tol,
) -> Result<Option<Vec<Point>>, PropertyError> {
    let n = sphere.n();
    let r = sphere.radius().to_f64();
    let full = sphere.to_subsphere();
    let pole = pole_point(sphere);
    for _ in 0..SAMPLING_TRIES {
        let Some(t) = lengths.sample(rng, tol) else {
            break;
        };
        if !(t > 1e-9 * r && t < r * std::f64::consts::SQRT_2 * 0.999) {
            continue;
        }
        let h = crate::sphere::h_edge(r, t, n)?;
        if !lengths.contains(&Scalar::Float(h), tol) {
            continue;
        }
        let SphereIntersection::Meet(slice) = full.intersect_at(&pole, t, tol)? else {
            continue;
        };
        let mut rows = vec![pole.clone()];
        if slice.dim() == 0 {
            let (a, b) = slice.endpoints().expect("dim 0");
            rows.push(a);
            rows.push(b);
        } else {
            let Ok(s) = inscribed_regular(&slice, rng.gen()) else {
                continue;
            };
            rows.extend(s.vertices().iter().map(|v| v.to_f64_vec()));
        }
        return Ok(Some(rows.iter().map(|row| Point::floats(row)).collect()));
    }
    Ok(None)
}

/// Exhaustive search over complete edge-length assignments from a finite
/// set: decides whether `n + 1` points with all pairwise distances drawn
/// from `values` can lie on the sphere at all.
///
/// Realizability on the sphere is a Gram condition: with `u_i` the vertex
/// offsets from the center, the matrix `M_ij = r^2 - d_ij^2 / 2` (and
/// `M_ii = r^2`) must be positive semidefinite of rank at most `n`. With
/// exact inputs the minors are checked exactly, so a negative answer is a
/// certificate. Returns `None` when the search space exceeds the budget.
fn finite_exhaustive_route(
    values: &[Scalar],
    sphere: &Sphere,
    rng: &mut ChaCha8Rng,
    tol: &Tol,
) -> Result<Option<TemplateOutcome>, PropertyError> {
    let n = sphere.n();
    let total = edge_count(n);
    if n > 8 {
        return Ok(None);
    }
    let space = (values.len() as u128).checked_pow(total as u32);
    if space.is_none() || space.unwrap() > ENUM_BUDGET {
        return Ok(None);
    }
    let r_sq = sphere.radius() * sphere.radius();
    let exact = sphere.radius().is_exact()
        && sphere.center().mode() == Mode::Exact
        && values.iter().all(|v| v.is_exact());
    let mut unrealized_feasible = false;
    let mut idx = vec![0usize; total];
    'assign: loop {
        let assignment: Vec<Scalar> = idx.iter().map(|&i| values[i].clone()).collect();
        if let Ok(elf) = EdgeLengthFunction::new(n, assignment) {
            let m = sphere_gram(&elf, &r_sq);
            if gram_feasible_on_sphere(&m, n, exact, tol) {
                match realize_on_sphere(&m, sphere, &elf, rng, tol) {
                    Some(points) => return Ok(Some(TemplateOutcome::Found(points))),
                    None => unrealized_feasible = true,
                }
            }
        }
        for pos in 0..total {
            idx[pos] += 1;
            if idx[pos] < values.len() {
                continue 'assign;
            }
            idx[pos] = 0;
        }
        break;
    }
    if unrealized_feasible {
        Ok(Some(TemplateOutcome::Exhausted))
    } else {
        Ok(Some(TemplateOutcome::Impossible))
    }
}

fn sphere_gram(elf: &EdgeLengthFunction, r_sq: &Scalar) -> Vec<Vec<Scalar>> {
    let count = elf.n() + 1;
    let half = Scalar::ratio(1, 2);
    let mut m = vec![vec![Scalar::int(0); count]; count];
    for i in 0..count {
        for j in 0..count {
            m[i][j] = if i == j {
                r_sq.clone()
            } else {
                let d = elf.get(i.min(j), i.max(j));
                r_sq - &(&(d * d) * &half)
            };
        }
    }
    m
}

fn gram_feasible_on_sphere(m: &[Vec<Scalar>], n: usize, exact: bool, tol: &Tol) -> bool {
    let count = m.len();
    if exact {
        // PSD iff every principal minor is nonnegative; rank <= n iff the
        // full determinant vanishes
        for subset in (0..count).powerset() {
            if subset.is_empty() {
                continue;
            }
            let sub: Vec<Vec<Scalar>> = subset
                .iter()
                .map(|&i| subset.iter().map(|&j| m[i][j].clone()).collect())
                .collect();
            let d = linalg::det(sub, tol);
            if d.is_negative() {
                return false;
            }
            if subset.len() == count && !d.is_zero() {
                return false;
            }
        }
        true
    } else {
        let mf: Vec<Vec<f64>> = m
            .iter()
            .map(|row| row.iter().map(|x| x.to_f64()).collect())
            .collect();
        match linalg::psd_realize(&mf, tol) {
            Some(us) => us.iter().all(|u| u.len() <= n),
            None => false,
        }
    }
}

/// Places the vertex offsets recovered from the Gram matrix around the
/// sphere's center, in a seeded random orientation, and verifies the
/// distances actually match before accepting.
fn realize_on_sphere(
    m: &[Vec<Scalar>],
    sphere: &Sphere,
    elf: &EdgeLengthFunction,
    rng: &mut ChaCha8Rng,
    tol: &Tol,
) -> Option<Vec<Point>> {
    let n = sphere.n();
    let mf: Vec<Vec<f64>> = m
        .iter()
        .map(|row| row.iter().map(|x| x.to_f64()).collect())
        .collect();
    let us = linalg::psd_realize(&mf, tol)?;
    if us.iter().any(|u| u.len() > n) {
        return None;
    }
    let frame = linalg::random_rotation(rng, n);
    let center = sphere.center().to_f64_vec();
    let r = sphere.radius().to_f64();
    let points: Vec<Point> = us
        .iter()
        .map(|u| {
            let mut padded = u.clone();
            padded.resize(n, 0.0);
            let rotated = linalg::apply_frame(&frame, &padded);
            Point::floats(&linalg::add(&center, &rotated))
        })
        .collect();
    // the factorization is numerical even when feasibility was exact;
    // accept only if the realized geometry matches
    let count = points.len();
    for i in 0..count {
        let off = (points[i].dist(sphere.center()).ok()?.to_f64() - r).abs();
        if off > 1e-6 * (1.0 + r) {
            return None;
        }
        for jdx in i + 1..count {
            let want = elf.get(i, jdx).to_f64();
            let got = points[i].dist(&points[jdx]).ok()?.to_f64();
            if (got - want).abs() > 1e-6 * (1.0 + want) {
                return None;
            }
        }
    }
    Some(points)
}
