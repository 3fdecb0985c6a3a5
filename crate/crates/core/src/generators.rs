//! Deterministic point-set families used as fixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointSet;

pub const MAX_HYPERCUBE_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    Antipodal { n: usize, d: usize },
    Hypercube { d: usize },
    Orthonormal { n: usize },
    RandomSphere { n: usize, d: usize, seed: u64 },
}

impl FamilySpec {
    pub fn generate(&self) -> Result<PointSet> {
        match *self {
            FamilySpec::Antipodal { n, d } => gen_antipodal(n, d),
            FamilySpec::Hypercube { d } => gen_hypercube(d),
            FamilySpec::Orthonormal { n } => gen_orthonormal(n),
            FamilySpec::RandomSphere { n, d, seed } => gen_random_sphere(n, d, seed),
        }
    }

    /// Families guaranteed to satisfy the squared triangle inequality.
    pub fn is_valid_family(&self) -> bool {
        !matches!(self, FamilySpec::RandomSphere { .. })
    }

    pub fn label(&self) -> String {
        match *self {
            FamilySpec::Antipodal { n, d } => format!("antipodal(n={n},d={d})"),
            FamilySpec::Hypercube { d } => format!("hypercube(d={d})"),
            FamilySpec::Orthonormal { n } => format!("orthonormal(n={n})"),
            FamilySpec::RandomSphere { n, d, seed } => {
                format!("random-sphere(n={n},d={d},seed={seed})")
            }
        }
    }
}

fn unit_axis(d: usize, sign: f64) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[0] = sign;
    v
}

/// `n/2` copies of `e₁` followed by `n/2` copies of `−e₁`.
pub fn gen_antipodal(n: usize, d: usize) -> Result<PointSet> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::InvalidFamily(format!("antipodal needs a positive even n, got {n}")));
    }
    if d == 0 {
        return Err(Error::InvalidFamily("antipodal needs d >= 1".into()));
    }
    let points = (0..n)
        .map(|i| unit_axis(d, if i < n / 2 { 1.0 } else { -1.0 }))
        .collect();
    PointSet::new(d, points)
}

/// All `2^d` vectors in `{±1/√d}^d`. Bit `t` of the vertex index set means
/// coordinate `t` is negative, so squared distances are `4·hamming/d`.
pub fn gen_hypercube(d: usize) -> Result<PointSet> {
    if !(1..=MAX_HYPERCUBE_DIM).contains(&d) {
        return Err(Error::InvalidFamily(format!(
            "hypercube dimension must be in 1..={MAX_HYPERCUBE_DIM}, got {d}"
        )));
    }
    let scale = 1.0 / (d as f64).sqrt();
    let points = (0..1usize << d)
        .map(|v| {
            (0..d)
                .map(|t| if v >> t & 1 == 1 { -scale } else { scale })
                .collect()
        })
        .collect();
    PointSet::new(d, points)
}

/// The first `n` standard basis vectors of `R^n`.
pub fn gen_orthonormal(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidFamily("orthonormal needs n >= 1".into()));
    }
    let points = (0..n)
        .map(|i| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        })
        .collect();
    PointSet::new(n, points)
}

/// `n` normalized standard-Gaussian vectors drawn from ChaCha8 seeded with
/// `seed` (via `seed_from_u64`). Not guaranteed to satisfy the squared
/// triangle inequality.
pub fn gen_random_sphere(n: usize, d: usize, seed: u64) -> Result<PointSet> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidFamily("random-sphere needs n, d >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n).map(|_| random_unit_vector(&mut rng, d)).collect();
    PointSet::new(d, points)
}

pub(crate) fn random_unit_vector<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Validated fixtures with at most `n_max` points, in a fixed order.
pub fn validated_fixtures(n_max: usize) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for n in (2..=n_max).step_by(2) {
        out.push(FamilySpec::Antipodal { n, d: 3 });
    }
    for d in 1..=MAX_HYPERCUBE_DIM {
        if 1 << d > n_max {
            break;
        }
        out.push(FamilySpec::Hypercube { d });
    }
    for n in 1..=n_max {
        out.push(FamilySpec::Orthonormal { n });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{
        average_squared_distance, validate_triangle_inequalities, validate_unit_sphere, Tolerance,
    };

    #[test]
    fn antipodal_layout() {
        let ps = gen_antipodal(4, 2).unwrap();
        assert_eq!(
            ps.points(),
            &[vec![1.0, 0.0], vec![1.0, 0.0], vec![-1.0, 0.0], vec![-1.0, 0.0]]
        );
        for n in (2..=40).step_by(2) {
            assert_eq!(average_squared_distance(&gen_antipodal(n, 3).unwrap()), 2.0);
        }
        assert!(gen_antipodal(5, 2).is_err());
    }

    #[test]
    fn hypercube_distances_track_hamming() {
        for d in 1..=6 {
            let ps = gen_hypercube(d).unwrap();
            for u in 0..ps.len() {
                for v in 0..ps.len() {
                    let h = (u ^ v).count_ones() as f64;
                    assert!((ps.sq_dist(u, v) - 4.0 * h / d as f64).abs() < 1e-12);
                }
            }
        }
        assert!((average_squared_distance(&gen_hypercube(2).unwrap()) - 2.0).abs() < 1e-12);
        assert!(gen_hypercube(0).is_err());
        assert!(gen_hypercube(17).is_err());
    }

    #[test]
    fn orthonormal_spread() {
        let ps = gen_orthonormal(3).unwrap();
        assert!((average_squared_distance(&ps) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn valid_families_pass_validation() {
        let tol = Tolerance::default();
        for spec in validated_fixtures(32) {
            let ps = spec.generate().unwrap();
            assert_eq!(validate_triangle_inequalities(&ps, tol), None, "{}", spec.label());
            assert_eq!(validate_unit_sphere(&ps, tol), None, "{}", spec.label());
        }
    }

    #[test]
    fn random_sphere_is_seeded_and_normalized() {
        let a = gen_random_sphere(10, 4, 7).unwrap();
        assert_eq!(a, gen_random_sphere(10, 4, 7).unwrap());
        assert_ne!(a, gen_random_sphere(10, 4, 8).unwrap());
        assert_eq!(validate_unit_sphere(&a, Tolerance::default()), None);
    }

    #[test]
    fn some_planar_triple_violates() {
        let tol = Tolerance::default();
        let hit = (0..200u64)
            .any(|seed| validate_triangle_inequalities(&gen_random_sphere(3, 2, seed).unwrap(), tol).is_some());
        assert!(hit);
    }
}
