//! Edge-length functions and their realizability.
//!
//! An [`EdgeLengthFunction`] assigns a positive length to every unordered
//! pair of indices `0..=n`, i.e. to every edge of a would-be `n`-simplex.
//! Whether such a simplex exists in `R^n` is a positive-definiteness
//! question for the Gram matrix `G[i][j] = (h(0,i)^2 + h(0,j)^2 - h(i,j)^2) / 2`;
//! feasibility is decided by Sylvester's criterion (exactly in exact mode)
//! and a realization is read off a Cholesky factor in a canonical frame.

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::linalg;
use crate::scalar::{Mode, Scalar, Tol};
use crate::simplex::Simplex;

/// Number of vertex pairs of an `n`-simplex: `C(n+1, 2)`.
pub fn edge_count(n: usize) -> usize {
    n * (n + 1) / 2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeLengthFunction {
    n: usize,
    /// Lengths in lexicographic pair order: (0,1), (0,2), ..., (n-1,n).
    values: Vec<Scalar>,
}

impl EdgeLengthFunction {
    pub fn new(n: usize, values: Vec<Scalar>) -> Result<Self, GeometryError> {
        if n < 2 {
            return Err(GeometryError::DimensionMismatch {
                expected: 2,
                got: n,
            });
        }
        let expected = edge_count(n);
        if values.len() != expected {
            return Err(GeometryError::BadEdgeCount {
                expected,
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_positive() || !v.is_finite()) {
            return Err(GeometryError::NonPositiveLength);
        }
        Ok(EdgeLengthFunction { n, values })
    }

    /// The constant function `h = value` on all edges.
    pub fn constant(n: usize, value: Scalar) -> Result<Self, GeometryError> {
        EdgeLengthFunction::new(n, vec![value; edge_count(n)])
    }

    /// Edge lengths of a full-dimensional simplex, keyed by vertex pair.
    pub fn from_simplex(s: &Simplex) -> Result<Self, GeometryError> {
        if s.m() != s.n() {
            return Err(GeometryError::NotFullDimensional { m: s.m(), n: s.n() });
        }
        let n = s.n();
        let mut values = Vec::with_capacity(edge_count(n));
        for i in 0..=n {
            for j in i + 1..=n {
                values.push(s.vertices()[i].dist(&s.vertices()[j])?);
            }
        }
        EdgeLengthFunction::new(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn mode(&self) -> Mode {
        if self.values.iter().all(Scalar::is_exact) {
            Mode::Exact
        } else {
            Mode::Float
        }
    }

    // row i starts at sum_{t<i} (n - t) = i*n - i(i-1)/2
    fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j <= self.n);
        i * self.n - i * i.saturating_sub(1) / 2 + (j - i - 1)
    }

    /// Length of edge `{i, j}`, `i != j`, both at most `n`.
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        &self.values[self.pair_index(i, j)]
    }

    /// Gram matrix of the edge vectors at vertex 0.
    fn gram(&self) -> Vec<Vec<Scalar>> {
        let n = self.n;
        let half = Scalar::ratio(1, 2);
        let mut g = vec![vec![Scalar::int(0); n]; n];
        for i in 1..=n {
            for j in 1..=n {
                let d0i = self.get(0, i);
                let d0j = self.get(0, j);
                let entry = if i == j {
                    d0i * d0i
                } else {
                    let dij = self.get(i, j);
                    &half * &(&(d0i * d0i) + &(d0j * d0j) - dij * dij)
                };
                g[i - 1][j - 1] = entry;
            }
        }
        g
    }

    /// Is there a nondegenerate `n`-simplex with these edge lengths?
    ///
    /// Exact inputs are decided exactly via the signs of the leading
    /// principal minors; float inputs use a tolerance-pivoted Cholesky.
    pub fn feasible(&self, tol: &Tol) -> bool {
        let g = self.gram();
        match self.mode() {
            Mode::Exact => {
                for k in 1..=self.n {
                    let minor: Vec<Vec<Scalar>> =
                        g[..k].iter().map(|row| row[..k].to_vec()).collect();
                    if !linalg::det(minor, tol).is_positive() {
                        return false;
                    }
                }
                true
            }
            Mode::Float => {
                let gf: Vec<Vec<f64>> = g
                    .iter()
                    .map(|row| row.iter().map(Scalar::to_f64).collect())
                    .collect();
                cholesky(&gf, tol).is_some()
            }
        }
    }

    /// A simplex in `R^n` (float mode) with these edge lengths, in the
    /// canonical frame: vertex 0 at the origin, vertex 1 on the first axis,
    /// and each further vertex introducing one new coordinate with a
    /// nonnegative value.
    pub fn realize(&self, tol: &Tol) -> Result<Simplex, GeometryError> {
        if !self.feasible(tol) {
            return Err(GeometryError::InfeasibleLengths);
        }
        let gf: Vec<Vec<f64>> = self
            .gram()
            .iter()
            .map(|row| row.iter().map(Scalar::to_f64).collect())
            .collect();
        let l = cholesky(&gf, tol).ok_or(GeometryError::InfeasibleLengths)?;
        let n = self.n;
        let mut rows = Vec::with_capacity(n + 1);
        rows.push(vec![0.0; n]);
        for mut row in l {
            row.resize(n, 0.0);
            rows.push(row);
        }
        Simplex::from_rows(&rows)
    }

    /// Squared circumradius of the realizing simplex, computed directly from
    /// the Gram matrix (so it stays exact for exact lengths): solve
    /// `2 G lambda = diag(G)` and evaluate `lambda^T G lambda`.
    pub fn circumradius_sq(&self, tol: &Tol) -> Result<Scalar, GeometryError> {
        if !self.feasible(tol) {
            return Err(GeometryError::InfeasibleLengths);
        }
        let g = self.gram();
        let two = Scalar::int(2);
        let a: Vec<Vec<Scalar>> = g
            .iter()
            .map(|row| row.iter().map(|x| &two * x).collect())
            .collect();
        let b: Vec<Scalar> = (0..self.n).map(|i| g[i][i].clone()).collect();
        let lambda = linalg::solve(a, b, tol)?;
        let mut r2 = Scalar::int(0);
        for i in 0..self.n {
            for j in 0..self.n {
                r2 = r2 + &lambda[i] * &(&g[i][j] * &lambda[j]);
            }
        }
        Ok(r2)
    }
}

/// Lower-triangular Cholesky factor of a symmetric matrix, or `None` if it
/// is not positive definite at the given tolerance.
fn cholesky(g: &[Vec<f64>], tol: &Tol) -> Option<Vec<Vec<f64>>> {
    let n = g.len();
    let scale = g.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = g[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if sum <= tol.eps(scale) {
                    return None;
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Some(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn h2(a: f64, b: f64, c: f64) -> EdgeLengthFunction {
        // pairs (0,1), (0,2), (1,2)
        EdgeLengthFunction::new(
            2,
            vec![Scalar::Float(a), Scalar::Float(b), Scalar::Float(c)],
        )
        .unwrap()
    }

    #[test]
    fn entry_count_and_positivity_are_enforced() {
        assert!(matches!(
            EdgeLengthFunction::new(2, vec![Scalar::int(1); 4]),
            Err(GeometryError::BadEdgeCount {
                expected: 3,
                got: 4
            })
        ));
        assert!(matches!(
            EdgeLengthFunction::new(2, vec![Scalar::int(1), Scalar::int(0), Scalar::int(1)]),
            Err(GeometryError::NonPositiveLength)
        ));
    }

    #[test]
    fn pair_indexing_is_lexicographic() {
        let h = EdgeLengthFunction::new(3, (1..=6).map(Scalar::int).collect()).unwrap();
        assert_eq!(h.get(0, 1), &Scalar::int(1));
        assert_eq!(h.get(0, 2), &Scalar::int(2));
        assert_eq!(h.get(0, 3), &Scalar::int(3));
        assert_eq!(h.get(1, 2), &Scalar::int(4));
        assert_eq!(h.get(1, 3), &Scalar::int(5));
        assert_eq!(h.get(2, 3), &Scalar::int(6));
        assert_eq!(h.get(3, 2), &Scalar::int(6));
    }

    #[test]
    fn triangle_inequality_governs_n2_feasibility() {
        let tol = Tol::default();
        assert!(h2(3.0, 4.0, 5.0).feasible(&tol));
        assert!(!h2(1.0, 1.0, 3.0).feasible(&tol));
        // degenerate (equality) case is infeasible
        assert!(!h2(1.0, 1.0, 2.0).feasible(&tol));
    }

    #[test]
    fn exact_feasibility_is_decided_exactly() {
        let tol = Tol::default();
        let h = EdgeLengthFunction::new(2, vec![Scalar::int(1), Scalar::int(1), Scalar::int(2)])
            .unwrap();
        assert!(!h.feasible(&tol)); // flat triangle, exactly
        let h = EdgeLengthFunction::new(
            2,
            vec![
                Scalar::int(1),
                Scalar::int(1),
                Scalar::Exact(num_rational::BigRational::new(
                    num_bigint::BigInt::from(1_999_999_999u64),
                    num_bigint::BigInt::from(1_000_000_000u64),
                )),
            ],
        )
        .unwrap();
        // within float tolerance of flat, but exactly feasible
        assert!(h.feasible(&tol));
    }

    #[test]
    fn realize_is_canonical_and_round_trips() {
        let tol = Tol::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=4usize {
            for _ in 0..50 {
                // random simplices give realizable length functions
                let s = loop {
                    let rows: Vec<Vec<f64>> = (0..=n)
                        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
                        .collect();
                    match Simplex::from_rows(&rows) {
                        Ok(s) if s.cm_volume().to_f64() > 1e-2 => break s,
                        _ => continue,
                    }
                };
                let h = EdgeLengthFunction::from_simplex(&s).unwrap();
                assert!(h.feasible(&tol));
                let r = h.realize(&tol).unwrap();

                // canonical frame
                let vs: Vec<Vec<f64>> = r.vertices().iter().map(|v| v.to_f64_vec()).collect();
                assert!(vs[0].iter().all(|&x| x == 0.0));
                assert!(vs[1][1..].iter().all(|&x| x.abs() < 1e-12));
                assert!(vs[1][0] > 0.0);

                // same edge lengths
                let h2 = EdgeLengthFunction::from_simplex(&r).unwrap();
                for (a, b) in h.values().iter().zip(h2.values()) {
                    assert!(tol.eq(a.to_f64(), b.to_f64()), "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn infeasible_lengths_do_not_realize() {
        assert_eq!(
            h2(1.0, 1.0, 3.0).realize(&Tol::default()),
            Err(GeometryError::InfeasibleLengths)
        );
    }

    #[test]
    fn exact_circumradius_square_of_345_triangle() {
        let tol = Tol::default();
        let h = EdgeLengthFunction::new(2, vec![Scalar::int(3), Scalar::int(4), Scalar::int(5)])
            .unwrap();
        let r2 = h.circumradius_sq(&tol).unwrap();
        assert_eq!(r2, Scalar::ratio(25, 4));
        assert!(r2.is_exact());
        // agrees with the realized simplex's circumsphere
        let s = h.realize(&tol).unwrap();
        let (_, r) = s.circumsphere(&tol).unwrap();
        assert!(tol.eq(r.to_f64(), 2.5));
    }

    #[test]
    fn regular_simplex_circumradius_matches_closed_form() {
        let tol = Tol::default();
        for n in 2..=4usize {
            let h = EdgeLengthFunction::constant(n, Scalar::int(1)).unwrap();
            let r2 = h.circumradius_sq(&tol).unwrap();
            let expect = n as f64 / (2.0 * (n as f64 + 1.0));
            assert!((r2.to_f64() - expect).abs() < 1e-12, "n = {n}");
        }
    }
}
