//! Point sets, squared distances and the validators for the squared-Euclidean
//! triangle inequality and the unit sphere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute slack used by every floating-point comparison in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    abs_tol: f64,
}

impl Tolerance {
    pub const DEFAULT_ABS: f64 = 1e-9;

    pub fn new(abs_tol: f64) -> Result<Self> {
        if !abs_tol.is_finite() || abs_tol < 0.0 {
            return Err(Error::InvalidTolerance(abs_tol));
        }
        Ok(Self { abs_tol })
    }

    pub fn abs(&self) -> f64 {
        self.abs_tol
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: Self::DEFAULT_ABS,
        }
    }
}

/// `n ≥ 1` points with `d ≥ 1` finite coordinates each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPointSet", into = "RawPointSet")]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct RawPointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl TryFrom<RawPointSet> for PointSet {
    type Error = Error;

    fn try_from(raw: RawPointSet) -> Result<Self> {
        PointSet::new(raw.dim, raw.points)
    }
}

impl From<PointSet> for RawPointSet {
    fn from(ps: PointSet) -> Self {
        RawPointSet {
            dim: ps.dim,
            points: ps.points,
        }
    }
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::RaggedRow {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite { index });
            }
        }
        Ok(Self { dim, points })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("point set serializes")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false for a constructed set; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Squared distance between points `i` and `j`.
    pub fn sq_dist(&self, i: usize, j: usize) -> f64 {
        sq_dist_unchecked(&self.points[i], &self.points[j])
    }

    /// Row-major `n × n` matrix of squared distances, exactly symmetric.
    pub fn squared_distance_matrix(&self) -> Vec<f64> {
        let n = self.len();
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.sq_dist(i, j);
                m[i * n + j] = d;
                m[j * n + i] = d;
            }
        }
        m
    }
}

fn sq_dist_unchecked(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// `Σ_t (p_t − q_t)²`.
pub fn squared_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    Ok(sq_dist_unchecked(p, q))
}

/// A triple with `‖v_i−v_j‖² + ‖v_j−v_k‖² − ‖v_i−v_k‖² < −tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub slack: f64,
}

impl TriangleViolation {
    /// Recomputes the slack of `(i, j, k)` on `ps`.
    pub fn slack_of(ps: &PointSet, i: usize, j: usize, k: usize) -> f64 {
        ps.sq_dist(i, j) + ps.sq_dist(j, k) - ps.sq_dist(i, k)
    }
}

/// Scans all ordered triples of distinct indices and returns the one with the
/// most negative slack (lexicographically least on ties), or `None` when every
/// slack is at least `-tol`.
pub fn validate_triangle_inequalities(ps: &PointSet, tol: Tolerance) -> Option<TriangleViolation> {
    let n = ps.len();
    if n < 3 {
        return None;
    }
    let d = ps.squared_distance_matrix();
    let mut worst: Option<TriangleViolation> = None;
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            let dij = d[i * n + j];
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let slack = dij + d[j * n + k] - d[i * n + k];
                if slack < -tol.abs() && worst.is_none_or(|w| slack < w.slack) {
                    worst = Some(TriangleViolation { i, j, k, slack });
                }
            }
        }
    }
    worst
}

/// Index of the first point with `|‖v‖² − 1| > tol`, if any.
pub fn validate_unit_sphere(ps: &PointSet, tol: Tolerance) -> Option<usize> {
    ps.points
        .iter()
        .position(|p| (p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() > tol.abs())
}

/// Mean of `‖v_i − v_j‖²` over all `n²` ordered pairs, `i = j` included.
pub fn average_squared_distance(ps: &PointSet) -> f64 {
    let n = ps.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            total += ps.sq_dist(i, j);
        }
    }
    2.0 * total / (n * n) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(dim: usize, pts: &[&[f64]]) -> PointSet {
        PointSet::new(dim, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn squared_distance_examples() {
        assert_eq!(squared_distance(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(squared_distance(&[1.0, 0.0], &[-1.0, 0.0]).unwrap(), 4.0);
        assert_eq!(squared_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 2.0);
        assert!(matches!(
            squared_distance(&[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn rejects_malformed_sets() {
        assert!(matches!(PointSet::new(0, vec![vec![]]), Err(Error::ZeroDimension)));
        assert!(matches!(PointSet::new(2, vec![]), Err(Error::EmptyPointSet)));
        assert!(matches!(
            PointSet::new(2, vec![vec![1.0, 0.0], vec![1.0]]),
            Err(Error::RaggedRow { index: 1, .. })
        ));
        assert!(matches!(
            PointSet::new(1, vec![vec![f64::NAN]]),
            Err(Error::NonFinite { index: 0 })
        ));
    }

    #[test]
    fn json_reader_rejects_ragged_rows() {
        assert!(PointSet::from_json(r#"{"dim":2,"points":[[1,0],[0]]}"#).is_err());
        assert!(PointSet::from_json(r#"{"dim":2,"points":[[1,0],[0,1e999]]}"#).is_err());
        let ps = PointSet::from_json(r#"{"dim":2,"points":[[1,0],[0,1]]}"#).unwrap();
        assert_eq!(PointSet::from_json(&ps.to_json()).unwrap(), ps);
    }

    #[test]
    fn quarter_arc_triple_violates() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let ps = set(2, &[&[1.0, 0.0], &[h, h], &[0.0, 1.0]]);
        let v = validate_triangle_inequalities(&ps, Tolerance::default()).unwrap();
        assert_eq!((v.i, v.j, v.k), (0, 1, 2));
        assert!((v.slack - (2.0 - 2.0 * 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(TriangleViolation::slack_of(&ps, v.i, v.j, v.k), v.slack);
    }

    #[test]
    fn tiny_sets_always_pass() {
        let ps = set(1, &[&[0.0], &[5.0]]);
        assert_eq!(validate_triangle_inequalities(&ps, Tolerance::default()), None);
    }

    #[test]
    fn sphere_validation() {
        assert_eq!(
            validate_unit_sphere(&set(2, &[&[1.0, 0.0], &[-1.0, 0.0]]), Tolerance::default()),
            None
        );
        assert_eq!(validate_unit_sphere(&set(2, &[&[2.0, 0.0]]), Tolerance::default()), Some(0));
    }

    #[test]
    fn average_examples() {
        let same = set(2, &[&[0.3, 0.4], &[0.3, 0.4], &[0.3, 0.4]]);
        assert_eq!(average_squared_distance(&same), 0.0);
        let anti = set(1, &[&[1.0], &[1.0], &[-1.0], &[-1.0]]);
        assert_eq!(average_squared_distance(&anti), 2.0);
        let ortho = set(3, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        assert!((average_squared_distance(&ortho) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tolerance_must_be_nonnegative() {
        assert!(Tolerance::new(-1.0).is_err());
        assert!(Tolerance::new(f64::INFINITY).is_err());
        assert_eq!(Tolerance::new(0.0).unwrap().abs(), 0.0);
    }
}
