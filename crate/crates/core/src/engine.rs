//! Checking, falsifying, and propagating forcing conditions.
//!
//! A condition quantifies over admissible spheres: whenever such a sphere
//! carries a monochromatic point set satisfying the condition's property,
//! the center must receive that color. The engine attacks this from three
//! sides:
//!
//! * [`check_sphere`] examines one sphere under one coloring, by building
//!   witness templates and testing them for monochromaticity;
//! * [`falsify`] drives that check over sampled admissible spheres, hunting
//!   for a [`ViolationCert`] (which is always re-validated before being
//!   reported);
//! * [`propagate`] runs the forcing rule as a fixpoint computation on a
//!   finite colored configuration, which is how hand-built contradiction
//!   arguments are mechanized.
//!
//! [`excluded_radii`] supports the vacuity direction: spheres whose radii
//! avoid every circumradius realizable from a finite length set can never
//! carry a fully-constrained witness.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::admissible::AdmissibleValues;
use crate::coloring::Coloring;
use crate::error::{ColoringError, EngineError};
use crate::lengths::{edge_count, EdgeLengthFunction};
use crate::linalg;
use crate::point::Point;
use crate::property::{witness_template, Property, TemplateOutcome};
use crate::scalar::{Scalar, Tol};
use crate::sphere::Sphere;

/// The color range a condition speaks about.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorSpace {
    AllIntegers,
    Finite(u32),
}

/// An open ball, used to restrict where sphere centers may lie.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: Scalar,
}

impl Ball {
    /// Strict membership; exact when both sides are exact.
    pub fn contains(&self, p: &Point) -> bool {
        match p.dist_sq(&self.center) {
            Ok(d2) => d2 < &self.radius * &self.radius,
            Err(_) => false,
        }
    }
}

/// Where the centers of admissible spheres live.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterSet {
    All,
    BallUnion(Vec<Ball>),
    FinitePointSet(Vec<Point>),
}

impl CenterSet {
    pub fn contains(&self, p: &Point, tol: &Tol) -> bool {
        match self {
            CenterSet::All => true,
            CenterSet::BallUnion(balls) => balls.iter().any(|b| b.contains(p)),
            CenterSet::FinitePointSet(points) => points.iter().any(|q| q.approx_eq(p, tol)),
        }
    }
}

/// A forcing condition: on every admissible sphere (center in `centers`,
/// radius in `radii`), a monochromatic point set satisfying `property`
/// forces the center's color.
///
/// When `radii` removes a countable set from an interval, `epsilon` must
/// give a positive safety margin: sampled radii then keep at least that
/// distance from every removed point, which is what makes "almost every
/// radius" arguments checkable with floats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QCondition {
    pub colors: ColorSpace,
    pub property: Property,
    pub centers: CenterSet,
    pub radii: AdmissibleValues,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Scalar>,
}

impl QCondition {
    pub fn validate(&self) -> Result<(), EngineError> {
        if let ColorSpace::Finite(k) = self.colors {
            if k < 2 {
                return Err(EngineError::BadCondition(
                    "a finite color space needs at least two colors".into(),
                ));
            }
        }
        self.property.validate()?;
        self.radii.validate().map_err(EngineError::BadCondition)?;
        match (&self.radii, &self.epsilon) {
            (AdmissibleValues::IntervalMinusCountable { .. }, None) => {
                return Err(EngineError::BadCondition(
                    "an epsilon margin is required when radii exclude a countable set".into(),
                ));
            }
            (_, Some(e)) if !e.is_positive() => {
                return Err(EngineError::BadCondition("epsilon must be positive".into()));
            }
            _ => {}
        }
        match &self.centers {
            CenterSet::All => Ok(()),
            CenterSet::BallUnion(balls) => {
                if balls.is_empty() {
                    return Err(EngineError::BadCondition("ball union is empty".into()));
                }
                if balls.iter().any(|b| !b.radius.is_positive()) {
                    return Err(EngineError::BadCondition(
                        "center balls need positive radii".into(),
                    ));
                }
                Ok(())
            }
            CenterSet::FinitePointSet(points) => {
                if points.is_empty() {
                    return Err(EngineError::BadCondition(
                        "center point set is empty".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Is this sphere one the condition quantifies over?
    pub fn is_admissible(&self, sphere: &Sphere, tol: &Tol) -> bool {
        if !self.centers.contains(sphere.center(), tol) {
            return false;
        }
        if !self.radii.contains(sphere.radius(), tol) {
            return false;
        }
        if let (AdmissibleValues::IntervalMinusCountable { excluded, .. }, Some(eps)) =
            (&self.radii, &self.epsilon)
        {
            let r = sphere.radius().to_f64();
            let e = eps.to_f64();
            if excluded.iter().any(|x| (x.to_f64() - r).abs() < e) {
                return false;
            }
        }
        true
    }
}

/// Work limits for the randomized search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    /// Spheres sampled by [`falsify`].
    pub spheres: usize,
    /// Witness templates tried per sphere.
    pub witnesses: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            spheres: 1000,
            witnesses: 100,
        }
    }
}

/// What a single-sphere check can conclude.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    /// No point set on this sphere can satisfy the property, so the
    /// condition holds for free.
    HoldsVacuously,
    /// Monochromatic witnesses were found and every one agreed with the
    /// center's color.
    HoldsWithWitnesses { count: usize },
    /// A monochromatic witness whose color the center does not carry.
    Violated { certificate: ViolationCert },
    /// No monochromatic witness was found within the budget; nothing is
    /// proven either way.
    Inconclusive { budget: usize },
}

/// A checkable refutation: everything needed to replay the violation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationCert {
    pub sphere: Sphere,
    pub witness: Vec<Point>,
    pub witness_color: i64,
    pub center_color: i64,
}

/// A sphere paired with the verdict the check reached on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereVerdict {
    pub sphere: Sphere,
    #[serde(flatten)]
    pub outcome: Outcome,
}

/// The result of a falsification run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FalsifyOutcome {
    pub verdicts: Vec<SphereVerdict>,
    /// Present exactly when some verdict is `Violated`.
    pub certificate: Option<ViolationCert>,
}

/// Checks the condition on one admissible sphere under `coloring`.
///
/// Witness templates are constructed with per-attempt seeds derived from
/// `seed`; a template only counts when the coloring makes it monochromatic.
/// Any violation returned has already passed [`validate_certificate`].
pub fn check_sphere(
    cond: &QCondition,
    coloring: &Coloring,
    sphere: &Sphere,
    budgets: &Budgets,
    seed: u64,
) -> Result<Outcome, EngineError> {
    cond.validate()?;
    coloring.validate()?;
    let tol = Tol::default();
    if !cond.is_admissible(sphere, &tol) {
        return Err(EngineError::NotAdmissible);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut consistent = 0usize;
    for _ in 0..budgets.witnesses {
        match witness_template(&cond.property, sphere, rng.gen())? {
            TemplateOutcome::Impossible => return Ok(Outcome::HoldsVacuously),
            TemplateOutcome::Exhausted => continue,
            TemplateOutcome::Found(points) => {
                let Some(witness_color) = monochromatic_color(coloring, &points)? else {
                    continue;
                };
                let center_color = match coloring.color(sphere.center()) {
                    Ok(c) => c,
                    // a coloring that cannot judge this center cannot be
                    // refuted through it
                    Err(ColoringError::UnsupportedPoint) => continue,
                    Err(e) => return Err(e.into()),
                };
                if center_color == witness_color {
                    consistent += 1;
                } else {
                    let certificate = ViolationCert {
                        sphere: sphere.clone(),
                        witness: points,
                        witness_color,
                        center_color,
                    };
                    validate_certificate(&certificate, cond, coloring)?;
                    return Ok(Outcome::Violated { certificate });
                }
            }
        }
    }
    Ok(if consistent > 0 {
        Outcome::HoldsWithWitnesses { count: consistent }
    } else {
        Outcome::Inconclusive {
            budget: budgets.witnesses,
        }
    })
}

fn monochromatic_color(coloring: &Coloring, points: &[Point]) -> Result<Option<i64>, EngineError> {
    let mut color = None;
    for p in points {
        let c = match coloring.color(p) {
            Ok(c) => c,
            Err(ColoringError::UnsupportedPoint) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        match color {
            None => color = Some(c),
            Some(existing) if existing != c => return Ok(None),
            _ => {}
        }
    }
    Ok(color)
}

/// Replays a violation certificate from scratch: admissibility, sphere
/// membership, the property, monochromaticity, and the color clash.
pub fn validate_certificate(
    cert: &ViolationCert,
    cond: &QCondition,
    coloring: &Coloring,
) -> Result<(), EngineError> {
    let tol = Tol::default();
    let fail = |msg: &str| Err(EngineError::BadCertificate(msg.into()));
    if !cond.is_admissible(&cert.sphere, &tol) {
        return fail("sphere is not admissible");
    }
    for p in &cert.witness {
        if !cert.sphere.contains(p, &tol) {
            return fail("witness point is off the sphere");
        }
    }
    if !cond.property.holds(&cert.witness, &tol)?.holds {
        return fail("witness does not satisfy the property");
    }
    for p in &cert.witness {
        if coloring.color(p)? != cert.witness_color {
            return fail("witness is not monochromatic in the claimed color");
        }
    }
    if coloring.color(cert.sphere.center())? != cert.center_color {
        return fail("center color is misreported");
    }
    if cert.center_color == cert.witness_color {
        return fail("center and witness colors agree; nothing is violated");
    }
    Ok(())
}

/// Samples admissible spheres in `R^n` and checks each one, stopping early
/// at the first (validated) violation. Deterministic in `seed`.
pub fn falsify(
    cond: &QCondition,
    coloring: &Coloring,
    n: usize,
    budgets: &Budgets,
    seed: u64,
) -> Result<FalsifyOutcome, EngineError> {
    cond.validate()?;
    coloring.validate()?;
    if n < 2 {
        return Err(EngineError::BadCondition(
            "searches need at least two dimensions".into(),
        ));
    }
    if let Some(required) = coloring.dim() {
        if required != n {
            return Err(EngineError::BadCondition(format!(
                "coloring expects dimension {required}, search runs in dimension {n}"
            )));
        }
    }
    let tol = Tol::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verdicts = Vec::new();
    for _ in 0..budgets.spheres {
        let center = sample_center(&cond.centers, n, &mut rng)?;
        let Some(radius) = sample_radius(cond, &mut rng, &tol) else {
            return Err(EngineError::BadCondition(
                "the radius set admits no samples".into(),
            ));
        };
        let sphere = Sphere::new(center, Scalar::Float(radius))?;
        let outcome = check_sphere(cond, coloring, &sphere, budgets, rng.gen())?;
        let violated = matches!(outcome, Outcome::Violated { .. });
        verdicts.push(SphereVerdict { sphere, outcome });
        if violated {
            let certificate = match &verdicts.last().unwrap().outcome {
                Outcome::Violated { certificate } => Some(certificate.clone()),
                _ => unreachable!(),
            };
            return Ok(FalsifyOutcome {
                verdicts,
                certificate,
            });
        }
    }
    Ok(FalsifyOutcome {
        verdicts,
        certificate: None,
    })
}

fn sample_center(
    centers: &CenterSet,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Point, EngineError> {
    match centers {
        CenterSet::All => Ok(Point::floats(
            &(0..n).map(|_| rng.gen_range(-4.0..4.0)).collect::<Vec<_>>(),
        )),
        CenterSet::BallUnion(balls) => {
            let b = &balls[rng.gen_range(0..balls.len())];
            if b.center.dim() != n {
                return Err(EngineError::BadCondition(
                    "center ball dimension does not match the search dimension".into(),
                ));
            }
            let dir = linalg::random_unit(rng, n);
            let u: f64 = rng.gen();
            let dist = b.radius.to_f64() * u.powf(1.0 / n as f64) * 0.999;
            Ok(Point::floats(&linalg::axpy(
                &b.center.to_f64_vec(),
                dist,
                &dir,
            )))
        }
        CenterSet::FinitePointSet(points) => {
            let p = points[rng.gen_range(0..points.len())].clone();
            if p.dim() != n {
                return Err(EngineError::BadCondition(
                    "center point dimension does not match the search dimension".into(),
                ));
            }
            Ok(p)
        }
    }
}

fn sample_radius(cond: &QCondition, rng: &mut ChaCha8Rng, tol: &Tol) -> Option<f64> {
    for _ in 0..100 {
        let r = cond.radii.sample(rng, tol)?;
        if r <= 0.0 || !r.is_finite() {
            continue;
        }
        if let (AdmissibleValues::IntervalMinusCountable { excluded, .. }, Some(eps)) =
            (&cond.radii, &cond.epsilon)
        {
            let e = eps.to_f64();
            if excluded.iter().any(|x| (x.to_f64() - r).abs() < e) {
                continue;
            }
        }
        return Some(r);
    }
    None
}

/// Circumradii of all nondegenerate `n`-simplices whose `C(n+1, 2)` edge
/// lengths come from `values`, sorted ascending and deduplicated.
///
/// A sphere whose radius avoids every returned value carries no
/// full-dimensional point set with all pairwise distances in `values` —
/// the vacuity half of conditions built on fully-constrained edge sets.
/// Exact inputs produce exact radii whenever the squared circumradius is a
/// perfect rational square.
pub fn excluded_radii(values: &[Scalar], n: usize) -> Result<Vec<Scalar>, EngineError> {
    if !(2..=3).contains(&n) {
        return Err(EngineError::BadCondition(
            "radius enumeration is supported in dimensions 2 and 3".into(),
        ));
    }
    if values.is_empty() || values.iter().any(|v| !v.is_positive() || !v.is_finite()) {
        return Err(EngineError::BadCondition(
            "edge lengths must be a nonempty set of positive values".into(),
        ));
    }
    let edges = edge_count(n);
    if values.len() > 8 {
        return Err(EngineError::PrefixTooLarge {
            sets: values.len(),
            edges,
        });
    }
    let tol = Tol::default();
    let all_exact = values.iter().all(|v| v.is_exact());
    let mut exact_squares: BTreeSet<BigRational> = BTreeSet::new();
    let mut float_squares: Vec<f64> = Vec::new();
    let mut idx = vec![0usize; edges];
    'assign: loop {
        let assignment: Vec<Scalar> = idx.iter().map(|&i| values[i].clone()).collect();
        if let Ok(elf) = EdgeLengthFunction::new(n, assignment) {
            if elf.feasible(&tol) {
                if let Ok(r_sq) = elf.circumradius_sq(&tol) {
                    if all_exact {
                        exact_squares.insert(r_sq.as_exact().expect("exact inputs").clone());
                    } else {
                        float_squares.push(r_sq.to_f64());
                    }
                }
            }
        }
        for pos in 0..edges {
            idx[pos] += 1;
            if idx[pos] < values.len() {
                continue 'assign;
            }
            idx[pos] = 0;
        }
        break;
    }
    if all_exact {
        exact_squares
            .into_iter()
            .map(|sq| Scalar::Exact(sq).sqrt().map_err(EngineError::from))
            .collect()
    } else {
        float_squares.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut out: Vec<Scalar> = Vec::new();
        for sq in float_squares {
            let r = sq.sqrt();
            if out.last().is_none_or(|prev| !tol.eq(prev.to_f64(), r)) {
                out.push(Scalar::Float(r));
            }
        }
        Ok(out)
    }
}

/// One point of a finite configuration: coordinates plus an optional
/// pre-assigned color.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigPoint {
    pub coords: Vec<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<i64>,
}

/// A finite, partially colored point configuration: the input to
/// [`propagate`]. Points are distinct, same dimension, same scalar mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ConfigPoint>", into = "Vec<ConfigPoint>")]
pub struct FiniteConfig {
    points: Vec<Point>,
    colors: Vec<Option<i64>>,
}

impl FiniteConfig {
    pub fn new(entries: Vec<(Point, Option<i64>)>) -> Result<Self, EngineError> {
        if entries.is_empty() {
            return Err(EngineError::BadConfig("no points".into()));
        }
        let dim = entries[0].0.dim();
        let mode = entries[0].0.mode();
        for (p, _) in &entries {
            if p.dim() != dim {
                return Err(EngineError::BadConfig(
                    "points have mixed dimensions".into(),
                ));
            }
            if p.mode() != mode {
                return Err(EngineError::BadConfig("points mix exact and float".into()));
            }
        }
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                if entries[i].0 == entries[j].0 {
                    return Err(EngineError::BadConfig(format!(
                        "points {i} and {j} coincide"
                    )));
                }
            }
        }
        let (points, colors) = entries.into_iter().unzip();
        Ok(FiniteConfig { points, colors })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn color(&self, i: usize) -> Option<i64> {
        self.colors[i]
    }
}

impl TryFrom<Vec<ConfigPoint>> for FiniteConfig {
    type Error = EngineError;

    fn try_from(raw: Vec<ConfigPoint>) -> Result<Self, Self::Error> {
        let entries = raw
            .into_iter()
            .map(|cp| Ok((Point::new(cp.coords)?, cp.color)))
            .collect::<Result<Vec<_>, EngineError>>()?;
        FiniteConfig::new(entries)
    }
}

impl From<FiniteConfig> for Vec<ConfigPoint> {
    fn from(cfg: FiniteConfig) -> Self {
        cfg.points
            .iter()
            .zip(&cfg.colors)
            .map(|(p, c)| ConfigPoint {
                coords: p.coords().to_vec(),
                color: *c,
            })
            .collect()
    }
}

/// One forced assignment during propagation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForcedStep {
    pub round: usize,
    pub point: usize,
    pub color: i64,
    /// Indices of the monochromatic points that did the forcing.
    pub witness: Vec<usize>,
    /// Squared radius of the forcing sphere.
    pub radius_sq: Scalar,
}

/// A conflict between an existing color and a forced one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropagationContradiction {
    pub point: usize,
    pub existing: i64,
    pub forced: i64,
    pub witness: Vec<usize>,
}

/// The trace of a propagation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Propagation {
    pub rounds: usize,
    pub colors: Vec<Option<i64>>,
    pub steps: Vec<ForcedStep>,
    pub contradiction: Option<PropagationContradiction>,
}

impl Propagation {
    pub fn contradictory(&self) -> bool {
        self.contradiction.is_some()
    }
}

/// Runs the forcing rule to a fixpoint on a finite configuration, for
/// conditions whose property is a cardinality bound: whenever at least `y`
/// same-colored points lie at a common admissible distance from a point in
/// the center set, that point's color is forced.
///
/// Rounds are synchronous — all forcings are computed from the colors at
/// the start of the round, then applied — so the trace is independent of
/// point order. Colors are only ever added, so the run terminates after at
/// most one round per point, or stops at the first contradiction.
pub fn propagate(cfg: &FiniteConfig, cond: &QCondition) -> Result<Propagation, EngineError> {
    cond.validate()?;
    let Property::Cardinality { y } = &cond.property else {
        return Err(EngineError::BadCondition(
            "finite propagation supports cardinality properties".into(),
        ));
    };
    let y = *y as usize;
    let tol = Tol::default();
    let mut colors: Vec<Option<i64>> = (0..cfg.len()).map(|i| cfg.color(i)).collect();
    let mut steps = Vec::new();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut pending: Vec<ForcedStep> = Vec::new();
        for i in 0..cfg.len() {
            if !cond.centers.contains(cfg.point(i), &tol) {
                continue;
            }
            for (r_sq, indices) in distance_groups(cfg, i, &tol)? {
                if !cond.radii.contains_sq(&r_sq, &tol) {
                    continue;
                }
                let mut by_color: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
                for &j in &indices {
                    if let Some(c) = colors[j] {
                        by_color.entry(c).or_default().push(j);
                    }
                }
                for (c, members) in by_color {
                    if members.len() >= y {
                        pending.push(ForcedStep {
                            round: rounds,
                            point: i,
                            color: c,
                            witness: members,
                            radius_sq: r_sq.clone(),
                        });
                    }
                }
            }
        }
        let mut changed = false;
        for step in pending {
            match colors[step.point] {
                Some(existing) if existing != step.color => {
                    return Ok(Propagation {
                        rounds,
                        colors,
                        steps,
                        contradiction: Some(PropagationContradiction {
                            point: step.point,
                            existing,
                            forced: step.color,
                            witness: step.witness,
                        }),
                    });
                }
                Some(_) => {}
                None => {
                    colors[step.point] = Some(step.color);
                    changed = true;
                    steps.push(step);
                }
            }
        }
        if !changed || rounds > cfg.len() {
            break;
        }
    }
    Ok(Propagation {
        rounds,
        colors,
        steps,
        contradiction: None,
    })
}

/// The other points grouped by their (squared) distance from point `i`:
/// exact grouping in exact mode, tolerance clustering on sorted values in
/// float mode.
fn distance_groups(
    cfg: &FiniteConfig,
    i: usize,
    tol: &Tol,
) -> Result<Vec<(Scalar, Vec<usize>)>, EngineError> {
    if cfg.point(i).mode() == crate::scalar::Mode::Exact {
        let mut groups: BTreeMap<BigRational, Vec<usize>> = BTreeMap::new();
        for j in 0..cfg.len() {
            if j == i {
                continue;
            }
            let d2 = cfg.point(i).dist_sq(cfg.point(j))?;
            groups
                .entry(d2.as_exact().expect("exact mode").clone())
                .or_default()
                .push(j);
        }
        Ok(groups
            .into_iter()
            .map(|(sq, js)| (Scalar::Exact(sq), js))
            .collect())
    } else {
        let mut pairs: Vec<(f64, usize)> = Vec::new();
        for j in 0..cfg.len() {
            if j == i {
                continue;
            }
            pairs.push((cfg.point(i).dist_sq(cfg.point(j))?.to_f64(), j));
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut groups: Vec<(Scalar, Vec<usize>)> = Vec::new();
        for (d2, j) in pairs {
            match groups.last_mut() {
                Some((rep, js)) if tol.eq(rep.to_f64(), d2) => js.push(j),
                _ => groups.push((Scalar::Float(d2), vec![j])),
            }
        }
        Ok(groups)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cardinality_cond(y: u64, radii: AdmissibleValues) -> QCondition {
        QCondition {
            colors: ColorSpace::AllIntegers,
            property: Property::Cardinality { y },
            centers: CenterSet::All,
            radii,
            epsilon: None,
        }
    }

    #[test]
    fn condition_serde_round_trip() {
        let cond = QCondition {
            colors: ColorSpace::Finite(3),
            property: Property::Regular { m: 2 },
            centers: CenterSet::BallUnion(vec![Ball {
                center: Point::ints(&[2, 0]),
                radius: Scalar::int(2),
            }]),
            radii: AdmissibleValues::interval(0.5, 2.0),
            epsilon: None,
        };
        let json = serde_json::to_string(&cond).unwrap();
        assert_eq!(serde_json::from_str::<QCondition>(&json).unwrap(), cond);
        assert!(json.contains(r#""colors":{"finite":3}"#));
        assert!(json.contains(r#""ball_union""#));
    }

    #[test]
    fn validation_requires_epsilon_with_excluded_radii() {
        let mut cond = cardinality_cond(
            2,
            AdmissibleValues::IntervalMinusCountable {
                lo: Scalar::int(0),
                hi: Scalar::int(1),
                excluded: vec![Scalar::ratio(1, 2)],
            },
        );
        assert!(matches!(cond.validate(), Err(EngineError::BadCondition(_))));
        cond.epsilon = Some(Scalar::ratio(1, 100));
        assert!(cond.validate().is_ok());
        cond.epsilon = Some(Scalar::int(0));
        assert!(cond.validate().is_err());
    }

    #[test]
    fn admissibility_respects_the_epsilon_margin() {
        let cond = QCondition {
            epsilon: Some(Scalar::ratio(1, 10)),
            ..cardinality_cond(
                2,
                AdmissibleValues::IntervalMinusCountable {
                    lo: Scalar::int(0),
                    hi: Scalar::int(2),
                    excluded: vec![Scalar::int(1)],
                },
            )
        };
        let tol = Tol::default();
        let near = Sphere::from_f64(&[0.0, 0.0], 1.05).unwrap();
        let far = Sphere::from_f64(&[0.0, 0.0], 1.5).unwrap();
        assert!(!cond.is_admissible(&near, &tol));
        assert!(cond.is_admissible(&far, &tol));
    }

    #[test]
    fn check_sphere_rejects_inadmissible_spheres() {
        let cond = cardinality_cond(3, AdmissibleValues::finite_ints(&[3]));
        let sphere = Sphere::from_f64(&[0.0, 0.0], 2.0).unwrap();
        let budgets = Budgets::default();
        assert!(matches!(
            check_sphere(
                &cond,
                &Coloring::Constant { color: 0 },
                &sphere,
                &budgets,
                1
            ),
            Err(EngineError::NotAdmissible)
        ));
    }

    #[test]
    fn two_ball_coloring_is_refuted_on_its_critical_sphere() {
        // points at distance 3 from (2, 0) all lie outside the ball that
        // carries color 2, so any three of them are monochromatic in color
        // 1 while the center keeps color 2
        let cond = cardinality_cond(3, AdmissibleValues::finite_ints(&[3]));
        let coloring = Coloring::TwoBall;
        let sphere = Sphere::new(Point::ints(&[2, 0]), Scalar::int(3)).unwrap();
        let budgets = Budgets::default();
        let out = check_sphere(&cond, &coloring, &sphere, &budgets, 7).unwrap();
        let Outcome::Violated { certificate } = out else {
            panic!("expected a violation, got {out:?}");
        };
        assert_eq!(certificate.witness_color, 1);
        assert_eq!(certificate.center_color, 2);
        assert!(validate_certificate(&certificate, &cond, &coloring).is_ok());

        // tampering is caught on replay
        let mut bad = certificate.clone();
        bad.center_color = 1;
        assert!(matches!(
            validate_certificate(&bad, &cond, &coloring),
            Err(EngineError::BadCertificate(_))
        ));
    }

    #[test]
    fn impossible_witnesses_make_the_condition_vacuous() {
        let cond = QCondition {
            colors: ColorSpace::AllIntegers,
            property: Property::EdgeLengths {
                k: 3,
                lengths: AdmissibleValues::finite_ints(&[1]),
            },
            centers: CenterSet::All,
            radii: AdmissibleValues::finite_ints(&[1]),
            epsilon: None,
        };
        let sphere = Sphere::new(Point::ints(&[0, 0]), Scalar::int(1)).unwrap();
        let out = check_sphere(
            &cond,
            &Coloring::Strip { n: 2 },
            &sphere,
            &Budgets::default(),
            3,
        )
        .unwrap();
        assert_eq!(out, Outcome::HoldsVacuously);
    }

    #[test]
    fn constant_colorings_always_agree_with_their_centers() {
        let cond = QCondition {
            colors: ColorSpace::AllIntegers,
            property: Property::Regular { m: 2 },
            centers: CenterSet::All,
            radii: AdmissibleValues::interval(0.5, 1.5),
            epsilon: None,
        };
        let sphere = Sphere::from_f64(&[0.0, 0.0], 1.0).unwrap();
        let budgets = Budgets {
            spheres: 5,
            witnesses: 10,
        };
        let out = check_sphere(
            &cond,
            &Coloring::Constant { color: 9 },
            &sphere,
            &budgets,
            11,
        )
        .unwrap();
        assert_eq!(out, Outcome::HoldsWithWitnesses { count: 10 });
    }

    #[test]
    fn falsify_finds_the_two_ball_violation_and_stops() {
        let cond = QCondition {
            colors: ColorSpace::Finite(2),
            property: Property::Cardinality { y: 3 },
            centers: CenterSet::BallUnion(vec![Ball {
                center: Point::ints(&[2, 0]),
                radius: Scalar::int(2),
            }]),
            radii: AdmissibleValues::finite_ints(&[5]),
            epsilon: None,
        };
        let budgets = Budgets {
            spheres: 50,
            witnesses: 5,
        };
        let out = falsify(&cond, &Coloring::TwoBall, 2, &budgets, 13).unwrap();
        let cert = out.certificate.expect("every admissible sphere violates");
        assert_eq!(out.verdicts.len(), 1, "search stops at the first violation");
        assert_eq!(cert.witness_color, 1);
        assert_eq!(cert.center_color, 2);
        assert!(validate_certificate(&cert, &cond, &Coloring::TwoBall).is_ok());
    }

    #[test]
    fn strip_coloring_survives_regular_triangle_falsification() {
        let cond = QCondition {
            colors: ColorSpace::AllIntegers,
            property: Property::Regular { m: 2 },
            centers: CenterSet::All,
            radii: AdmissibleValues::interval(0.05, 3.0),
            epsilon: None,
        };
        let budgets = Budgets {
            spheres: 30,
            witnesses: 8,
        };
        let out = falsify(&cond, &Coloring::Strip { n: 2 }, 2, &budgets, 17).unwrap();
        assert!(out.certificate.is_none());
        assert_eq!(out.verdicts.len(), budgets.spheres);
    }

    #[test]
    fn falsify_is_deterministic_in_the_seed() {
        let cond = cardinality_cond(2, AdmissibleValues::interval(0.5, 1.5));
        let budgets = Budgets {
            spheres: 10,
            witnesses: 3,
        };
        let coloring = Coloring::Strip { n: 2 };
        let a = falsify(&cond, &coloring, 2, &budgets, 23).unwrap();
        let b = falsify(&cond, &coloring, 2, &budgets, 23).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn classic_triple_radii_are_exact() {
        let radii = excluded_radii(&[Scalar::int(3), Scalar::int(4), Scalar::int(5)], 2).unwrap();
        assert!(radii.contains(&Scalar::ratio(5, 2)));
        // sorted, deduplicated
        for w in radii.windows(2) {
            assert!(w[0] < w[1]);
        }
        // the all-equal assignments give r = a / sqrt(3)
        let r3 = 3.0 / 3.0f64.sqrt();
        assert!(radii.iter().any(|r| (r.to_f64() - r3).abs() < 1e-9));
    }

    #[test]
    fn excluded_radii_enforces_the_enumeration_cap() {
        let values: Vec<Scalar> = (1..=9).map(Scalar::int).collect();
        assert!(matches!(
            excluded_radii(&values, 3),
            Err(EngineError::PrefixTooLarge { sets: 9, edges: 6 })
        ));
        assert!(matches!(
            excluded_radii(&[Scalar::int(1)], 5),
            Err(EngineError::BadCondition(_))
        ));
    }

    #[test]
    fn propagation_forces_colors_across_rounds() {
        // unit rhombus chain: c is forced by {a, b}, d by {b, c}, e by
        // {b, d}; three rounds of synchronous forcing
        let h = 3.0f64.sqrt() / 2.0;
        let cfg = FiniteConfig::new(vec![
            (Point::floats(&[0.0, 0.0]), Some(1)),
            (Point::floats(&[1.0, 0.0]), Some(1)),
            (Point::floats(&[0.5, h]), None),
            (Point::floats(&[1.5, h]), None),
            (Point::floats(&[2.0, 0.0]), None),
        ])
        .unwrap();
        let cond = cardinality_cond(2, AdmissibleValues::finite_ints(&[1]));
        let out = propagate(&cfg, &cond).unwrap();
        assert!(out.contradiction.is_none());
        assert_eq!(out.colors, vec![Some(1); 5]);
        let round_of = |p: usize| out.steps.iter().find(|s| s.point == p).unwrap().round;
        assert_eq!(round_of(2), 1);
        assert_eq!(round_of(3), 2);
        assert_eq!(round_of(4), 3);
    }

    #[test]
    fn propagation_detects_contradictions_exactly() {
        // (0,0) and (6/5,0) both sit at distance 1 from (3/5,4/5) — a
        // rational unit-distance gadget
        let cfg = FiniteConfig::new(vec![
            (Point::ints(&[0, 0]), Some(1)),
            (
                Point::new(vec![Scalar::ratio(6, 5), Scalar::int(0)]).unwrap(),
                Some(1),
            ),
            (
                Point::new(vec![Scalar::ratio(3, 5), Scalar::ratio(4, 5)]).unwrap(),
                Some(2),
            ),
        ])
        .unwrap();
        let cond = cardinality_cond(2, AdmissibleValues::finite_ints(&[1]));
        let out = propagate(&cfg, &cond).unwrap();
        let c = out.contradiction.expect("colors 1 and 2 clash at the apex");
        assert_eq!(c.point, 2);
        assert_eq!(c.existing, 2);
        assert_eq!(c.forced, 1);
        assert_eq!(c.witness, vec![0, 1]);
    }

    #[test]
    fn propagation_respects_the_center_set() {
        let h = 3.0f64.sqrt() / 2.0;
        let apex = Point::floats(&[0.5, h]);
        let cfg = FiniteConfig::new(vec![
            (Point::floats(&[0.0, 0.0]), Some(1)),
            (Point::floats(&[1.0, 0.0]), Some(1)),
            (apex, None),
        ])
        .unwrap();
        let mut cond = cardinality_cond(2, AdmissibleValues::finite_ints(&[1]));
        cond.centers = CenterSet::FinitePointSet(vec![Point::floats(&[9.0, 9.0])]);
        let out = propagate(&cfg, &cond).unwrap();
        assert_eq!(out.colors[2], None);
        assert!(out.steps.is_empty());
    }

    #[test]
    fn finite_config_serde_round_trip() {
        let json = r#"[
            {"coords":["0","0"],"color":1},
            {"coords":["6/5","0"],"color":1},
            {"coords":["3/5","4/5"]}
        ]"#;
        let cfg: FiniteConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.len(), 3);
        assert_eq!(cfg.color(0), Some(1));
        assert_eq!(cfg.color(2), None);
        let back = serde_json::to_string(&cfg).unwrap();
        let again: FiniteConfig = serde_json::from_str(&back).unwrap();
        assert_eq!(cfg, again);

        let dup = r#"[{"coords":["0","0"]},{"coords":["0","0"]}]"#;
        assert!(serde_json::from_str::<FiniteConfig>(dup).is_err());
    }

    #[test]
    fn verdict_serialization_flattens_the_outcome() {
        let verdict = SphereVerdict {
            sphere: Sphere::new(Point::ints(&[0, 0]), Scalar::int(1)).unwrap(),
            outcome: Outcome::HoldsWithWitnesses { count: 4 },
        };
        let json = serde_json::to_string(&verdict).unwrap();
        assert!(json.contains(r#""outcome":"holds_with_witnesses""#));
        assert!(json.contains(r#""count":4"#));
        let back: SphereVerdict = serde_json::from_str(&json).unwrap();
        assert_eq!(back, verdict);
    }
}
