//! Constructive transformations between non-expansion witnesses and
//! well-separated pairs, the per-instance check of the expansion lower bound
//! on ε, and an instance checker for the embedded-graph variant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{
    certify_expansion_exact_with_limit, falsify_expansion_randomized, is_expanding_set_exact, k_steps,
    ExpanderParams, Verdict, EXACT_LIMIT,
};
use crate::geometry::{validate_triangle_inequalities, validate_unit_sphere, PointSet, Tolerance};
use crate::graph::{build_threshold_graph, Graph, ThresholdGraph, VertexSet};
use crate::separation::{separation_of, SeparatedPair};

/// Turns a non-expanding set `S` with `|Γ(S)| ≤ n/2` into the pair
/// `(S, V ∖ Γ(S))`. No edge crosses the pair, so its separation exceeds ε.
pub fn extract_separated_from_witness(
    ps: &PointSet,
    g: &ThresholdGraph,
    witness: &VertexSet,
) -> Result<SeparatedPair> {
    let n = ps.len();
    if g.n() != n {
        return Err(Error::Precondition(format!(
            "graph has {} vertices, point set has {n}",
            g.n()
        )));
    }
    if witness.is_empty() {
        return Err(Error::EmptySet);
    }
    let gamma = g.neighborhood(witness)?;
    if 2 * gamma.len() > n {
        return Err(Error::Precondition(format!(
            "|Γ(S)| = {} exceeds n/2 = {}",
            gamma.len(),
            n as f64 / 2.0
        )));
    }
    SeparatedPair::measure(ps, witness.clone(), gamma.complement(n))
}

/// Builds a non-expansion witness for `(c′, β)` on `G_{V,ε}` from a separated
/// pair, where `c′ = min(|S|,|T|)/n`.
///
/// Returns `Ok(None)` when `2kε ≥ Δ`, since then no contradiction is
/// available. Otherwise walks `A_{t+1} = Γ(A_t)` from the smaller side and
/// then the larger one, returning the first iterate in the size window that
/// fails to expand, or the lexicographically least `⌊n/(2β)⌋`-subset of the
/// first iterate that overshoots the window, if that subset fails.
pub fn witness_from_separated_pair(
    ps: &PointSet,
    epsilon: f64,
    pair: &SeparatedPair,
    beta: f64,
    tol: Tolerance,
) -> Result<Option<VertexSet>> {
    if pair.delta.is_nan() || pair.delta <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "pair separation must be positive, got {}",
            pair.delta
        )));
    }
    let measured = separation_of(ps, &pair.s, &pair.t)?;
    if measured < pair.delta - tol.abs() {
        return Err(Error::Precondition(format!(
            "pair claims separation {} but measures {measured}",
            pair.delta
        )));
    }
    let n = ps.len();
    let (small, large) = if pair.s.len() <= pair.t.len() {
        (&pair.s, &pair.t)
    } else {
        (&pair.t, &pair.s)
    };
    if 2 * small.len() >= n {
        return Err(Error::InvalidParams(format!(
            "c' = {}/{n} must be below 1/2",
            small.len()
        )));
    }
    let params = ExpanderParams::with_alpha_fraction(small.len(), n, beta)?;
    let k = k_steps(&params);
    if 2.0 * k as f64 * epsilon >= pair.delta {
        return Ok(None);
    }
    let window = params.window(n);
    if window.is_empty() {
        return Err(Error::EmptyWindow {
            smin: window.smin,
            smax: window.smax,
        });
    }
    let g = build_threshold_graph(ps, epsilon, tol)?;
    for start in [small, large] {
        if let Some(w) = failing_iterate(&g, start, &params, k)? {
            return Ok(Some(w));
        }
    }
    Err(Error::Precondition(format!(
        "no non-expanding set along {k} neighborhood steps from either side \
         (integer window rounding: β·⌊n/(2β)⌋ = {} vs n/2 = {})",
        params.beta() * window.smax as f64,
        n as f64 / 2.0
    )))
}

fn failing_iterate(g: &Graph, start: &VertexSet, params: &ExpanderParams, k: usize) -> Result<Option<VertexSet>> {
    let window = params.window(g.n());
    let mut current = start.clone();
    for _ in 0..=k {
        if window.contains(current.len()) {
            if !is_expanding_set_exact(g, &current, params.beta_exact())? {
                return Ok(Some(current));
            }
        } else if current.len() > window.smax {
            let trimmed = current.prefix(window.smax);
            if !is_expanding_set_exact(g, &trimmed, params.beta_exact())? {
                return Ok(Some(trimmed));
            }
            return Ok(None);
        }
        current = g.neighborhood(&current)?;
    }
    Ok(None)
}

/// One data point `(n, ε, α, β, k, verdict, ε·k·√(ln n))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub n: usize,
    pub epsilon: f64,
    pub alpha: f64,
    pub beta: f64,
    pub k: usize,
    pub verdict: Verdict,
    pub ratio: f64,
}

impl InstanceReport {
    pub fn new(n: usize, epsilon: f64, alpha: f64, beta: f64, k: usize, verdict: Verdict) -> Self {
        Self {
            n,
            epsilon,
            alpha,
            beta,
            k,
            verdict,
            ratio: Self::ratio_of(n, epsilon, k),
        }
    }

    /// `ε·k·√(ln n)`, natural logarithm.
    pub fn ratio_of(n: usize, epsilon: f64, k: usize) -> f64 {
        epsilon * k as f64 * (n as f64).ln().sqrt()
    }

    pub const CSV_HEADER: [&'static str; 7] = ["n", "epsilon", "alpha", "beta", "k", "verdict", "ratio"];
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub tol: Tolerance,
    pub exact_limit: usize,
    /// Restarts for the randomized falsifier above `exact_limit`.
    pub budget: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            exact_limit: EXACT_LIMIT,
            budget: 1000,
            seed: 0,
        }
    }
}

pub fn check_main_theorem_instance(
    ps: &PointSet,
    epsilon: f64,
    params: &ExpanderParams,
    opts: &CheckOptions,
) -> Result<InstanceReport> {
    let n = ps.len();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least 2 points (ln 1 = 0)".into()));
    }
    if let Some(v) = validate_triangle_inequalities(ps, opts.tol) {
        return Err(Error::Invalid(format!(
            "triangle inequality fails at ({}, {}, {}) with slack {}",
            v.i, v.j, v.k, v.slack
        )));
    }
    if let Some(i) = validate_unit_sphere(ps, opts.tol) {
        return Err(Error::Invalid(format!("point {i} is not on the unit sphere")));
    }
    let g = build_threshold_graph(ps, epsilon, opts.tol)?;
    let verdict = if n <= opts.exact_limit {
        certify_expansion_exact_with_limit(&g, params, opts.exact_limit)?.verdict
    } else if params.window(n).is_empty() {
        Verdict::Vacuous
    } else {
        match falsify_expansion_randomized(&g, params, opts.budget, opts.seed)? {
            Some(_) => Verdict::NotExpander,
            None => Verdict::Unknown,
        }
    };
    Ok(InstanceReport::new(
        n,
        epsilon,
        params.alpha(),
        params.beta(),
        k_steps(params),
        verdict,
    ))
}

/// A graph with a map of its vertices into the unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedGraph {
    graph: Graph,
    embedding: Vec<Vec<f64>>,
}

impl EmbeddedGraph {
    pub fn new(graph: Graph, embedding: Vec<Vec<f64>>, tol: Tolerance) -> Result<Self> {
        if embedding.len() != graph.n() {
            return Err(Error::Invalid(format!(
                "embedding has {} images for {} vertices",
                embedding.len(),
                graph.n()
            )));
        }
        let dim = embedding.first().map_or(0, Vec::len);
        for (index, image) in embedding.iter().enumerate() {
            if image.len() != dim {
                return Err(Error::RaggedRow {
                    index,
                    expected: dim,
                    found: image.len(),
                });
            }
            if image.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite { index });
            }
            if image.iter().map(|x| x * x).sum::<f64>() > 1.0 + tol.abs() {
                return Err(Error::Invalid(format!("image of vertex {index} lies outside the unit ball")));
            }
        }
        Ok(Self { graph, embedding })
    }

    pub fn from_points(graph: Graph, ps: &PointSet, tol: Tolerance) -> Result<Self> {
        Self::new(graph, ps.points().to_vec(), tol)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn embedded_distance(&self, u: usize, v: usize) -> f64 {
        self.embedding[u]
            .iter()
            .zip(&self.embedding[v])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedHit {
    pub u: usize,
    pub v: usize,
    pub hop: usize,
    /// Euclidean, not squared.
    pub distance: f64,
}

/// `⌊γ·√(ln n)/ln β⌋`.
pub fn generalized_hop_bound(n: usize, beta: f64, gamma: f64) -> usize {
    (gamma * (n as f64).ln().sqrt() / beta.ln()).floor() as usize
}

/// First pair `u ≤ v` in lexicographic order with hop distance within
/// [`generalized_hop_bound`] and embedded Euclidean distance at least `delta`.
pub fn check_generalized(
    eg: &EmbeddedGraph,
    params: &ExpanderParams,
    gamma: f64,
    delta: f64,
) -> Result<Option<GeneralizedHit>> {
    let n = eg.graph.n();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least 2 vertices".into()));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be nonnegative, got {delta}")));
    }
    let bound = generalized_hop_bound(n, params.beta(), gamma);
    for u in 0..n {
        let hops = eg.graph.bfs(&VertexSet::new(vec![u]))?;
        for (v, hop) in hops.iter().enumerate().skip(u) {
            let Some(hop) = *hop else { continue };
            if hop > bound {
                continue;
            }
            let distance = eg.embedded_distance(u, v);
            if distance >= delta {
                return Ok(Some(GeneralizedHit { u, v, hop, distance }));
            }
        }
    }
    Ok(None)
}
