//! Small dense linear algebra over [`Scalar`], plus `f64` vector helpers.
//!
//! One elimination kernel serves both modes: pivots are chosen by largest
//! magnitude (deterministic), and the zero test is exact for exact entries
//! and tolerance-gated for floats. Matrices here are tiny (at most a few
//! rows beyond the ambient dimension), so no effort is spent on blocking.

use rand::Rng;

use crate::error::GeometryError;
use crate::scalar::{Mode, Scalar, Tol};

fn matrix_scale(m: &[Vec<Scalar>]) -> f64 {
    m.iter()
        .flatten()
        .map(|s| s.to_f64().abs())
        .fold(0.0, f64::max)
}

fn entry_is_zero(s: &Scalar, tol: &Tol, scale: f64) -> bool {
    match s {
        Scalar::Exact(r) => num_traits::Zero::is_zero(r),
        Scalar::Float(x) => tol.is_zero(*x, scale),
    }
}

/// Determinant by forward elimination with partial pivoting.
pub(crate) fn det(mut m: Vec<Vec<Scalar>>, tol: &Tol) -> Scalar {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    if n == 0 {
        return Scalar::int(1);
    }
    let scale = matrix_scale(&m);
    let mut sign_flip = false;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&a, &b| {
                let ma = m[a][col].to_f64().abs();
                let mb = m[b][col].to_f64().abs();
                ma.partial_cmp(&mb).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if entry_is_zero(&m[pivot_row][col], tol, scale) {
            let all_exact = m.iter().flatten().all(Scalar::is_exact);
            return Scalar::zero(if all_exact { Mode::Exact } else { Mode::Float });
        }
        if pivot_row != col {
            m.swap(pivot_row, col);
            sign_flip = !sign_flip;
        }
        let pivot = m[col][col].clone();
        for row in col + 1..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = &m[row][col] / &pivot;
            for k in col..n {
                let delta = &factor * &m[col][k];
                m[row][k] = &m[row][k] - &delta;
            }
        }
    }
    let mut d = Scalar::int(1);
    for (i, row) in m.iter().enumerate() {
        d = d * &row[i];
    }
    if sign_flip {
        -d
    } else {
        d
    }
}

/// Solves the square system `a x = b`. Fails on (tolerance-)singular input.
pub(crate) fn solve(
    mut a: Vec<Vec<Scalar>>,
    mut b: Vec<Scalar>,
    tol: &Tol,
) -> Result<Vec<Scalar>, GeometryError> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    let scale = matrix_scale(&a);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| {
                let m1 = a[r1][col].to_f64().abs();
                let m2 = a[r2][col].to_f64().abs();
                m1.partial_cmp(&m2).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if entry_is_zero(&a[pivot_row][col], tol, scale) {
            return Err(GeometryError::SingularSystem);
        }
        if pivot_row != col {
            a.swap(pivot_row, col);
            b.swap(pivot_row, col);
        }
        let pivot = a[col][col].clone();
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = &a[row][col] / &pivot;
            for k in col..n {
                let delta = &factor * &a[col][k];
                a[row][k] = &a[row][k] - &delta;
            }
            let delta = &factor * &b[col];
            b[row] = &b[row] - &delta;
        }
    }
    let mut x = vec![Scalar::int(0); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for col in row + 1..n {
            acc = acc - &a[row][col] * &x[col];
        }
        x[row] = acc / &a[row][row];
    }
    Ok(x)
}

/// Rank of a (possibly rectangular) matrix.
pub(crate) fn rank(mut m: Vec<Vec<Scalar>>, tol: &Tol) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let scale = matrix_scale(&m);
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let pivot_row = (r..rows)
            .max_by(|&a, &b| {
                let ma = m[a][col].to_f64().abs();
                let mb = m[b][col].to_f64().abs();
                ma.partial_cmp(&mb).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if entry_is_zero(&m[pivot_row][col], tol, scale) {
            continue;
        }
        m.swap(pivot_row, r);
        let pivot = m[r][col].clone();
        for row in r + 1..rows {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = &m[row][col] / &pivot;
            for k in col..cols {
                let delta = &factor * &m[r][k];
                m[row][k] = &m[row][k] - &delta;
            }
        }
        r += 1;
    }
    r
}

// ---------------------------------------------------------------------------
// f64 vector helpers for the sampling-heavy float paths.
// ---------------------------------------------------------------------------

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `a + s * b`
pub(crate) fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub(crate) fn normalize(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n < 1e-12 {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}

/// Modified Gram-Schmidt. Returns `None` if the input is (numerically)
/// linearly dependent.
pub(crate) fn orthonormalize(vectors: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        // two passes for numerical robustness
        for _ in 0..2 {
            for q in &out {
                let c = dot(&w, q);
                w = axpy(&w, -c, q);
            }
        }
        out.push(normalize(&w)?);
    }
    Some(out)
}

/// Factors a symmetric positive semidefinite matrix `g` as a Gram matrix:
/// returns vectors `u_0..u_{k-1}` (in the original index order, each of
/// dimension `rank(g)`) with `u_i . u_j = g[i][j]`, or `None` when `g` is
/// not PSD within the tolerance. Cholesky with diagonal pivoting, so rank
/// deficiency is handled by stopping once the remaining diagonal vanishes.
pub(crate) fn psd_realize(g: &[Vec<f64>], tol: &Tol) -> Option<Vec<Vec<f64>>> {
    let n = g.len();
    let scale = g
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let eps = tol.eps(scale).max(1e-12 * (1.0 + scale));
    let mut a: Vec<Vec<f64>> = g.to_vec();
    let mut l = vec![vec![0.0; n]; n];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rank = n;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| {
                a[i][i]
                    .partial_cmp(&a[j][j])
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if a[p][p] <= eps {
            // the rest of the diagonal is at most this pivot; PSD demands
            // it not be meaningfully negative
            if (k..n).any(|i| a[i][i] < -eps) {
                return None;
            }
            rank = k;
            break;
        }
        if p != k {
            a.swap(p, k);
            for row in a.iter_mut() {
                row.swap(p, k);
            }
            l.swap(p, k);
            perm.swap(p, k);
        }
        let d = a[k][k].sqrt();
        l[k][k] = d;
        for i in k + 1..n {
            l[i][k] = a[i][k] / d;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] -= l[i][k] * l[j][k];
            }
        }
    }
    let mut out = vec![Vec::new(); n];
    for k in 0..n {
        out[perm[k]] = l[k][..rank].to_vec();
    }
    Some(out)
}

/// Extends an orthonormal set to `total` vectors by orthogonalizing standard
/// basis vectors against it, in index order. Deterministic.
pub(crate) fn complete_orthonormal_basis(existing: &[Vec<f64>], total: usize) -> Vec<Vec<f64>> {
    let dim = if existing.is_empty() {
        total
    } else {
        existing[0].len()
    };
    let mut out: Vec<Vec<f64>> = existing.to_vec();
    let mut axis = 0;
    while out.len() < total && axis < dim {
        let mut w = vec![0.0; dim];
        w[axis] = 1.0;
        for _ in 0..2 {
            for q in &out {
                let c = dot(&w, q);
                w = axpy(&w, -c, q);
            }
        }
        if let Some(q) = normalize(&w) {
            out.push(q);
        }
        axis += 1;
    }
    assert!(
        out.len() == total,
        "could not complete orthonormal basis: {} of {total}",
        out.len()
    );
    out
}

pub(crate) fn gaussian_vec<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    // Box-Muller; two uniforms per normal keeps the stream layout simple.
    (0..dim)
        .map(|_| {
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen::<f64>();
            (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
        })
        .collect()
}

/// Uniform random point on the unit sphere in `dim` dimensions.
pub(crate) fn random_unit<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v = gaussian_vec(rng, dim);
        if let Some(u) = normalize(&v) {
            return u;
        }
    }
}

/// Haar-ish random rotation as an orthonormal frame `q_1..q_dim`
/// (the rotation maps `e_i` to `q_i`). Determinant is corrected to +1.
pub(crate) fn random_rotation<R: Rng>(rng: &mut R, dim: usize) -> Vec<Vec<f64>> {
    loop {
        let cols: Vec<Vec<f64>> = (0..dim).map(|_| gaussian_vec(rng, dim)).collect();
        if let Some(mut q) = orthonormalize(&cols) {
            if frame_det(&q) < 0.0 {
                for x in q[dim - 1].iter_mut() {
                    *x = -*x;
                }
            }
            return q;
        }
    }
}

/// Applies a frame (list of images of `e_i`) to a coordinate vector.
pub(crate) fn apply_frame(frame: &[Vec<f64>], coords: &[f64]) -> Vec<f64> {
    let dim = frame[0].len();
    let mut out = vec![0.0; dim];
    for (c, q) in coords.iter().zip(frame) {
        for (o, x) in out.iter_mut().zip(q) {
            *o += c * x;
        }
    }
    out
}

fn frame_det(frame: &[Vec<f64>]) -> f64 {
    let m: Vec<Vec<Scalar>> = frame
        .iter()
        .map(|row| row.iter().copied().map(Scalar::Float).collect())
        .collect();
    det(m, &Tol::default()).to_f64()
}

/// Householder-style reflection taking unit vector `from` to unit vector `to`;
/// returns a closure applying it. Falls back to identity when they coincide.
pub(crate) fn reflect_onto(from: &[f64], to: &[f64]) -> impl Fn(&[f64]) -> Vec<f64> {
    let diff = sub(from, to);
    let q = normalize(&diff);
    move |v: &[f64]| match &q {
        Some(q) => {
            let c = dot(v, q);
            axpy(v, -2.0 * c, q)
        }
        None => v.to_vec(),
    }
}
