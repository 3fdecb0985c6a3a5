//! Well-separated set pairs: measurement, verification, exhaustive search
//! and a random-projection heuristic.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::generators::random_unit_vector;
use crate::geometry::{PointSet, Tolerance};
use crate::graph::VertexSet;

/// Default vertex limit for [`best_separated_pair_exact`].
pub const SEPARATION_EXACT_LIMIT: usize = 20;

/// Two vertex sets and the minimum squared distance across them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatedPair {
    #[serde(rename = "S")]
    pub s: VertexSet,
    #[serde(rename = "T")]
    pub t: VertexSet,
    pub delta: f64,
}

impl SeparatedPair {
    /// Builds the pair and measures its separation on `ps`.
    pub fn measure(ps: &PointSet, s: VertexSet, t: VertexSet) -> Result<Self> {
        let delta = separation_of(ps, &s, &t)?;
        Ok(Self { s, t, delta })
    }

    pub fn min_size(&self) -> usize {
        self.s.len().min(self.t.len())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pair serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn check_members(ps: &PointSet, s: &VertexSet) -> Result<()> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    match s.iter().find(|&v| v >= ps.len()) {
        Some(index) => Err(Error::IndexOutOfRange { index, n: ps.len() }),
        None => Ok(()),
    }
}

/// `min_{u∈S, v∈T} ‖v_u − v_v‖²`, which is 0 when the sets meet.
pub fn separation_of(ps: &PointSet, s: &VertexSet, t: &VertexSet) -> Result<f64> {
    check_members(ps, s)?;
    check_members(ps, t)?;
    let mut best = f64::INFINITY;
    for u in s.iter() {
        for v in t.iter() {
            best = best.min(ps.sq_dist(u, v));
        }
    }
    Ok(best)
}

/// Both sides have at least `⌈c′n⌉` members and every cross pair is at
/// squared distance at least `delta_req − tol`.
pub fn verify_well_separated(
    ps: &PointSet,
    pair: &SeparatedPair,
    cprime: &Rational,
    delta_req: f64,
    tol: Tolerance,
) -> Result<bool> {
    if !exact::is_positive(cprime) || *cprime > exact::fraction(1, 2) {
        return Err(Error::InvalidArgument(format!(
            "c' must lie in (0, 1/2], got {}",
            exact::to_f64(cprime)
        )));
    }
    let need = exact::ceil_usize(&(cprime * exact::integer(ps.len())));
    if pair.s.len() < need || pair.t.len() < need {
        return Ok(false);
    }
    Ok(separation_of(ps, &pair.s, &pair.t)? >= delta_req - tol.abs())
}

pub fn best_separated_pair_exact(ps: &PointSet, delta: f64, tol: Tolerance) -> Result<Option<SeparatedPair>> {
    best_separated_pair_exact_with_limit(ps, delta, tol, SEPARATION_EXACT_LIMIT)
}

/// Searches all nonempty `S`, pairing each with the largest admissible
/// `T = {v : ‖v − u‖² ≥ delta − tol for all u ∈ S}`, and keeps the pair with
/// the largest `min(|S|, |T|)`. Ties go to the lexicographically least `S`.
pub fn best_separated_pair_exact_with_limit(
    ps: &PointSet,
    delta: f64,
    tol: Tolerance,
    limit: usize,
) -> Result<Option<SeparatedPair>> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    let n = ps.len();
    let limit = limit.min(63);
    if n > limit {
        return Err(Error::ExactLimitExceeded { n, limit });
    }
    // close[u]: vertices within squared distance < delta - tol of u
    let cutoff = delta - tol.abs();
    let close: Vec<u64> = (0..n)
        .map(|u| {
            (0..n)
                .filter(|&v| v == u || ps.sq_dist(u, v) < cutoff)
                .fold(0u64, |m, v| m | 1 << v)
        })
        .collect();
    let mut search = PairSearch {
        close: &close,
        n,
        best: 0,
        best_s: 0,
        best_gamma: 0,
    };
    search.visit(0, 0, 0);
    if search.best == 0 {
        return Ok(None);
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let s = VertexSet::from_mask(search.best_s);
    let t = VertexSet::from_mask(full & !search.best_gamma);
    Ok(Some(SeparatedPair::measure(ps, s, t)?))
}

/// Preorder DFS over subsets, which visits them in lexicographic order of
/// their sorted member lists. Supersets only shrink `T`, so a branch whose
/// `T` is no larger than the incumbent's score is cut.
struct PairSearch<'a> {
    close: &'a [u64],
    n: usize,
    best: usize,
    best_s: u64,
    best_gamma: u64,
}

impl PairSearch<'_> {
    fn visit(&mut self, start: usize, set: u64, gamma: u64) {
        for v in start..self.n {
            let next_set = set | 1 << v;
            let next_gamma = gamma | self.close[v];
            let t_size = self.n - next_gamma.count_ones() as usize;
            if t_size <= self.best {
                continue;
            }
            let score = t_size.min(next_set.count_ones() as usize);
            if score > self.best {
                self.best = score;
                self.best_s = next_set;
                self.best_gamma = next_gamma;
            }
            self.visit(v + 1, next_set, next_gamma);
        }
    }
}

/// Fraction of the projection order taken for each candidate side.
const SLICE_FRACTION_DENOM: usize = 4;

/// Random-direction heuristic. Each round projects onto a seeded unit
/// direction and takes the points at or below the lower quartile value as
/// `S` and at or above the upper quartile value as `T`, then prunes
/// conflicting cross pairs (squared distance `< delta`) by deleting the
/// vertex in the most conflicts, lowest index first. Returns the best pair
/// over all rounds by `min(|S|, |T|)`, earliest round on ties.
pub fn find_separated_pair_projection(
    ps: &PointSet,
    delta: f64,
    seed: u64,
    rounds: usize,
) -> Result<Option<SeparatedPair>> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be positive".into()));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for _ in 0..rounds {
        let dir = random_unit_vector(&mut rng, ps.dim());
        let proj: Vec<f64> = ps
            .points()
            .iter()
            .map(|p| p.iter().zip(&dir).map(|(a, b)| a * b).sum())
            .collect();
        let Some((s, t)) = quartile_slices(&proj) else {
            continue;
        };
        let (s, t) = prune_conflicts(ps, delta, s, t);
        if s.is_empty() || t.is_empty() {
            continue;
        }
        let size = s.len().min(t.len());
        if best.as_ref().is_none_or(|(bs, bt)| size > bs.len().min(bt.len())) {
            best = Some((s, t));
        }
    }
    match best {
        None => Ok(None),
        Some((s, t)) => Ok(Some(SeparatedPair::measure(ps, VertexSet::new(s), VertexSet::new(t))?)),
    }
}

fn quartile_slices(proj: &[f64]) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = proj.len();
    if n < 2 {
        return None;
    }
    let mut sorted = proj.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q = n.div_ceil(SLICE_FRACTION_DENOM);
    let low = sorted[q - 1];
    let high = sorted[n - q];
    if low >= high {
        return None;
    }
    let s = (0..n).filter(|&v| proj[v] <= low).collect();
    let t = (0..n).filter(|&v| proj[v] >= high).collect();
    Some((s, t))
}

fn prune_conflicts(ps: &PointSet, delta: f64, mut s: Vec<usize>, mut t: Vec<usize>) -> (Vec<usize>, Vec<usize>) {
    loop {
        let mut degree = vec![0usize; ps.len()];
        let mut any = false;
        for &u in &s {
            for &v in &t {
                if ps.sq_dist(u, v) < delta {
                    degree[u] += 1;
                    degree[v] += 1;
                    any = true;
                }
            }
        }
        if !any {
            return (s, t);
        }
        // max degree, lowest index on ties
        let victim = (0..ps.len())
            .max_by_key(|&v| (degree[v], std::cmp::Reverse(v)))
            .expect("nonempty");
        s.retain(|&v| v != victim);
        t.retain(|&v| v != victim);
    }
}
