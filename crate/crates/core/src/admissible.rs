//! Admissible value sets: which radii, lengths, or volumes count.
//!
//! Conditions quantify over sets of positive reals — sphere radii, forced
//! edge lengths, forced volumes. Five representations cover everything the
//! engine needs: finite sets, open intervals, open intervals with countably
//! many points removed, finite unions of open intervals, and geometric
//! sequences `{ratio^k : k >= 1}` (the standard way to write a set with
//! members arbitrarily close to zero).
//!
//! Membership is exact whenever both the set and the query are exact;
//! otherwise it is judged at the caller's tolerance.

use serde::{Deserialize, Serialize};

use crate::scalar::{Scalar, Tol};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdmissibleValues {
    /// A finite set, listed explicitly.
    Finite(Vec<Scalar>),
    /// The open interval `(lo, hi)`; `hi` may be infinite.
    Interval { lo: Scalar, hi: Scalar },
    /// `(lo, hi)` minus the listed points.
    IntervalMinusCountable {
        lo: Scalar,
        hi: Scalar,
        excluded: Vec<Scalar>,
    },
    /// A finite union of open intervals.
    UnionOfIntervals(Vec<(Scalar, Scalar)>),
    /// `{ratio^k : k >= 1}` for `0 < ratio < 1`.
    Geometric { ratio: Scalar },
}

/// Values are used as radii/lengths/volumes, so sets must live in `[0, inf)`.
impl AdmissibleValues {
    pub fn interval(lo: f64, hi: f64) -> Self {
        AdmissibleValues::Interval {
            lo: Scalar::Float(lo),
            hi: Scalar::Float(hi),
        }
    }

    pub fn finite_ints(values: &[i64]) -> Self {
        AdmissibleValues::Finite(values.iter().copied().map(Scalar::int).collect())
    }

    pub fn validate(&self) -> Result<(), String> {
        let check_interval = |lo: &Scalar, hi: &Scalar| -> Result<(), String> {
            if lo.is_negative() {
                return Err(format!("interval lower bound {lo} is negative"));
            }
            if hi <= lo {
                return Err(format!("empty interval ({lo}, {hi})"));
            }
            Ok(())
        };
        match self {
            AdmissibleValues::Finite(vs) => {
                if vs.is_empty() {
                    return Err("finite set is empty".into());
                }
                if vs.iter().any(|v| !v.is_positive() || !v.is_finite()) {
                    return Err("finite set members must be positive".into());
                }
                Ok(())
            }
            AdmissibleValues::Interval { lo, hi } => check_interval(lo, hi),
            AdmissibleValues::IntervalMinusCountable { lo, hi, .. } => check_interval(lo, hi),
            AdmissibleValues::UnionOfIntervals(parts) => {
                if parts.is_empty() {
                    return Err("union of intervals is empty".into());
                }
                for (lo, hi) in parts {
                    check_interval(lo, hi)?;
                }
                Ok(())
            }
            AdmissibleValues::Geometric { ratio } => {
                if !ratio.is_positive() || *ratio >= Scalar::int(1) {
                    return Err(format!("geometric ratio {ratio} must lie in (0, 1)"));
                }
                Ok(())
            }
        }
    }

    /// Set membership. Open intervals are strict; exact/exact comparisons
    /// are exact, anything involving floats uses `tol`.
    pub fn contains(&self, x: &Scalar, tol: &Tol) -> bool {
        match self {
            AdmissibleValues::Finite(vs) => vs.iter().any(|v| v.approx_eq(x, tol)),
            AdmissibleValues::Interval { lo, hi } => x > lo && x < hi,
            AdmissibleValues::IntervalMinusCountable { lo, hi, excluded } => {
                x > lo && x < hi && !excluded.iter().any(|e| e.approx_eq(x, tol))
            }
            AdmissibleValues::UnionOfIntervals(parts) => {
                parts.iter().any(|(lo, hi)| x > lo && x < hi)
            }
            AdmissibleValues::Geometric { ratio } => {
                if !x.is_positive() {
                    return false;
                }
                let k_est = x.to_f64().ln() / ratio.to_f64().ln();
                if !k_est.is_finite() {
                    return false;
                }
                let k_mid = k_est.round().max(1.0) as u32;
                (k_mid.saturating_sub(1)..=k_mid + 1)
                    .filter(|&k| k >= 1)
                    .any(|k| pow_scalar(ratio, k).approx_eq(x, tol))
            }
        }
    }

    /// Membership of `sqrt(x_sq)`, avoiding the square root when both sides
    /// are exact (`5/2` is in `{5/2}` even though only `25/4` is rational).
    pub fn contains_sq(&self, x_sq: &Scalar, tol: &Tol) -> bool {
        if x_sq.is_negative() {
            return false;
        }
        if let Scalar::Exact(_) = x_sq {
            match self {
                AdmissibleValues::Finite(vs) => {
                    return vs.iter().any(|v| {
                        if v.is_exact() {
                            (v * v).approx_eq(x_sq, tol)
                        } else {
                            tol.eq(v.to_f64(), x_sq.to_f64().sqrt())
                        }
                    });
                }
                AdmissibleValues::Interval { lo, hi } => {
                    return x_sq > &(lo * lo) && (!hi.is_finite() || x_sq < &(hi * hi));
                }
                _ => {}
            }
        }
        let x = Scalar::Float(x_sq.to_f64().sqrt());
        self.contains(&x, tol)
    }

    /// Infimum of the set as a float.
    pub fn inf(&self) -> f64 {
        match self {
            AdmissibleValues::Finite(vs) => {
                vs.iter().map(Scalar::to_f64).fold(f64::INFINITY, f64::min)
            }
            AdmissibleValues::Interval { lo, .. } => lo.to_f64(),
            AdmissibleValues::IntervalMinusCountable { lo, .. } => lo.to_f64(),
            AdmissibleValues::UnionOfIntervals(parts) => parts
                .iter()
                .map(|(lo, _)| lo.to_f64())
                .fold(f64::INFINITY, f64::min),
            AdmissibleValues::Geometric { .. } => 0.0,
        }
    }

    /// Does the set contain members arbitrarily close to zero?
    ///
    /// True for geometric sequences and for interval representations whose
    /// infimum is zero (removing countably many points leaves the infimum).
    pub fn has_arbitrarily_small(&self) -> bool {
        match self {
            AdmissibleValues::Finite(_) => false,
            _ => self.inf() <= 0.0,
        }
    }

    /// A deterministic member strictly below `bound`, if one exists.
    ///
    /// Finite and geometric sets yield their largest member below the bound;
    /// interval representations yield the midpoint of the available range,
    /// nudged off any excluded point.
    pub fn pick_below(&self, bound: f64, tol: &Tol) -> Option<f64> {
        if bound <= 0.0 {
            return None;
        }
        match self {
            AdmissibleValues::Finite(vs) => vs
                .iter()
                .map(Scalar::to_f64)
                .filter(|&v| v < bound)
                .fold(None, |best, v| Some(best.map_or(v, |b: f64| b.max(v)))),
            AdmissibleValues::Geometric { ratio } => {
                let q = ratio.to_f64();
                let mut v = q;
                for _ in 0..4096 {
                    if v < bound {
                        return Some(v);
                    }
                    v *= q;
                }
                None
            }
            AdmissibleValues::Interval { lo, hi } => {
                midpoint_below(lo.to_f64(), hi.to_f64(), bound)
            }
            AdmissibleValues::IntervalMinusCountable { lo, hi, excluded } => {
                let lo = lo.to_f64();
                let mut v = midpoint_below(lo, hi.to_f64(), bound)?;
                for _ in 0..64 {
                    if !excluded.iter().any(|e| tol.eq(e.to_f64(), v)) {
                        return Some(v);
                    }
                    v = lo + (v - lo) * 0.618;
                }
                None
            }
            AdmissibleValues::UnionOfIntervals(parts) => parts
                .iter()
                .filter_map(|(lo, hi)| midpoint_below(lo.to_f64(), hi.to_f64(), bound))
                .fold(None, |best, v| Some(best.map_or(v, |b: f64| b.max(v)))),
        }
    }

    /// A random member, for sphere sampling. Unbounded intervals are sampled
    /// in a window of width 4 above their lower bound. Returns `None` only
    /// when the resample budget for excluded points is exhausted.
    pub fn sample<R: rand::Rng>(&self, rng: &mut R, tol: &Tol) -> Option<f64> {
        match self {
            AdmissibleValues::Finite(vs) => Some(vs[rng.gen_range(0..vs.len())].to_f64()),
            AdmissibleValues::Interval { lo, hi } => {
                Some(sample_open(rng, lo.to_f64(), hi.to_f64()))
            }
            AdmissibleValues::IntervalMinusCountable { lo, hi, excluded } => {
                let (lo, hi) = (lo.to_f64(), hi.to_f64());
                for _ in 0..100 {
                    let v = sample_open(rng, lo, hi);
                    if !excluded.iter().any(|e| tol.eq(e.to_f64(), v)) {
                        return Some(v);
                    }
                }
                None
            }
            AdmissibleValues::UnionOfIntervals(parts) => {
                let widths: Vec<f64> = parts
                    .iter()
                    .map(|(lo, hi)| (hi.to_f64() - lo.to_f64()).min(4.0))
                    .collect();
                let total: f64 = widths.iter().sum();
                let mut pick = rng.gen::<f64>() * total;
                for ((lo, hi), w) in parts.iter().zip(&widths) {
                    if pick <= *w {
                        return Some(sample_open(rng, lo.to_f64(), hi.to_f64()));
                    }
                    pick -= w;
                }
                let (lo, hi) = &parts[parts.len() - 1];
                Some(sample_open(rng, lo.to_f64(), hi.to_f64()))
            }
            AdmissibleValues::Geometric { ratio } => {
                let k = rng.gen_range(1..=40);
                Some(pow_scalar(ratio, k).to_f64())
            }
        }
    }
}

fn midpoint_below(lo: f64, hi: f64, bound: f64) -> Option<f64> {
    let hi = hi.min(bound);
    if hi <= lo {
        None
    } else {
        Some(lo + (hi - lo) / 2.0)
    }
}

fn sample_open<R: rand::Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let hi = if hi.is_finite() { hi } else { lo + 4.0 };
    loop {
        let v = lo + rng.gen::<f64>() * (hi - lo);
        if v > lo && v < hi {
            return v;
        }
    }
}

fn pow_scalar(base: &Scalar, k: u32) -> Scalar {
    match base {
        Scalar::Exact(r) => {
            let mut acc = num_rational::BigRational::from_integer(1.into());
            for _ in 0..k {
                acc *= r;
            }
            Scalar::Exact(acc)
        }
        Scalar::Float(x) => Scalar::Float(x.powi(k as i32)),
    }
}
