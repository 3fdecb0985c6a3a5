//! (α,β)-node expansion: size windows, the strict expansion test, exact
//! certification by subset enumeration, and a seeded randomized falsifier.
//!
//! A graph on `n` vertices is an (α,β)-expander when every vertex set `S`
//! with `⌈αn⌉ ≤ |S| ≤ ⌊n/(2β)⌋` has `|Γ(S)| > β|S|`. All comparisons against
//! α and β are done on exact rationals (see [`crate::exact`]).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::graph::{Graph, VertexSet};

/// Default vertex limit for [`certify_expansion_exact`].
pub const EXACT_LIMIT: usize = 24;
/// Hard ceiling: the enumerator packs vertex sets into `u64`.
pub const EXACT_HARD_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct ExpanderParams {
    alpha: f64,
    beta: f64,
    alpha_q: Rational,
    beta_q: Rational,
}

impl ExpanderParams {
    /// Requires `0 < alpha < 1/2` and `beta > 1`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParams(format!("alpha={alpha}, beta={beta}")));
        }
        Self::from_exact(exact::from_f64(alpha), exact::from_f64(beta))
    }

    pub fn from_exact(alpha: Rational, beta: Rational) -> Result<Self> {
        let half = exact::fraction(1, 2);
        if !exact::is_positive(&alpha) || alpha >= half {
            return Err(Error::InvalidParams(format!(
                "alpha must lie in (0, 1/2), got {}",
                exact::to_f64(&alpha)
            )));
        }
        if beta <= exact::one() {
            return Err(Error::InvalidParams(format!(
                "beta must exceed 1, got {}",
                exact::to_f64(&beta)
            )));
        }
        Ok(Self {
            alpha: exact::to_f64(&alpha),
            beta: exact::to_f64(&beta),
            alpha_q: alpha,
            beta_q: beta,
        })
    }

    /// α given as the exact fraction `numer/denom`.
    pub fn with_alpha_fraction(numer: usize, denom: usize, beta: f64) -> Result<Self> {
        if denom == 0 || !beta.is_finite() {
            return Err(Error::InvalidParams(format!("alpha={numer}/{denom}, beta={beta}")));
        }
        Self::from_exact(exact::fraction(numer as u64, denom as u64), exact::from_f64(beta))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha_exact(&self) -> &Rational {
        &self.alpha_q
    }

    pub fn beta_exact(&self) -> &Rational {
        &self.beta_q
    }

    pub fn window(&self, n: usize) -> SizeWindow {
        size_window(n, self)
    }

    /// `⌊β·size⌋`: a set of this size expands iff its neighborhood is larger.
    pub fn expansion_cap(&self, size: usize) -> usize {
        expansion_cap(&self.beta_q, size)
    }
}

fn expansion_cap(beta: &Rational, size: usize) -> usize {
    exact::floor_usize(&(beta * exact::integer(size)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeWindow {
    pub smin: usize,
    pub smax: usize,
}

impl SizeWindow {
    pub fn is_empty(&self) -> bool {
        self.smin > self.smax
    }

    pub fn contains(&self, size: usize) -> bool {
        self.smin <= size && size <= self.smax
    }
}

/// `smin = ⌈αn⌉`, `smax = ⌊n/(2β)⌋`.
pub fn size_window(n: usize, params: &ExpanderParams) -> SizeWindow {
    let n_q = exact::integer(n);
    let smin = exact::ceil_usize(&(&params.alpha_q * &n_q)).max(1);
    let smax = exact::floor_usize(&(n_q / (exact::integer(2) * &params.beta_q)));
    SizeWindow { smin, smax }
}

/// `|Γ(S)| > β|S|`, with `β` read as the rational of its decimal form.
pub fn is_expanding_set(g: &Graph, s: &VertexSet, beta: f64) -> Result<bool> {
    if !beta.is_finite() {
        return Err(Error::InvalidParams(format!("beta={beta}")));
    }
    is_expanding_set_exact(g, s, &exact::from_f64(beta))
}

pub fn is_expanding_set_exact(g: &Graph, s: &VertexSet, beta: &Rational) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let gamma = g.neighborhood(s)?;
    Ok(gamma.len() > expansion_cap(beta, s.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Expander,
    NotExpander,
    Vacuous,
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Expander => "expander",
            Verdict::NotExpander => "not-expander",
            Verdict::Vacuous => "vacuous",
            Verdict::Unknown => "unknown",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Randomized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CertificateJson", into = "CertificateJson")]
pub struct ExpansionCertificate {
    pub params: ExpanderParams,
    pub verdict: Verdict,
    pub witness: Option<VertexSet>,
    pub window: SizeWindow,
    pub method: Method,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    alpha: f64,
    beta: f64,
    verdict: Verdict,
    witness: Option<VertexSet>,
    window: [usize; 2],
    method: Method,
}

impl From<ExpansionCertificate> for CertificateJson {
    fn from(c: ExpansionCertificate) -> Self {
        CertificateJson {
            alpha: c.params.alpha,
            beta: c.params.beta,
            verdict: c.verdict,
            witness: c.witness,
            window: [c.window.smin, c.window.smax],
            method: c.method,
        }
    }
}

impl TryFrom<CertificateJson> for ExpansionCertificate {
    type Error = Error;

    fn try_from(raw: CertificateJson) -> Result<Self> {
        Ok(ExpansionCertificate {
            params: ExpanderParams::new(raw.alpha, raw.beta)?,
            verdict: raw.verdict,
            witness: raw.witness,
            window: SizeWindow {
                smin: raw.window[0],
                smax: raw.window[1],
            },
            method: raw.method,
        })
    }
}

impl ExpansionCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Re-checks the certificate invariants against `g`, independently of
    /// how it was produced.
    pub fn check(&self, g: &Graph) -> Result<()> {
        let expected = self.params.window(g.n());
        if self.window != expected {
            return Err(Error::Precondition(format!(
                "window {:?} does not match {:?}",
                self.window, expected
            )));
        }
        match self.verdict {
            Verdict::NotExpander => {
                let w = self
                    .witness
                    .as_ref()
                    .ok_or_else(|| Error::Precondition("not-expander without witness".into()))?;
                if !self.window.contains(w.len()) {
                    return Err(Error::Precondition(format!(
                        "witness size {} outside window",
                        w.len()
                    )));
                }
                if is_expanding_set_exact(g, w, &self.params.beta_q)? {
                    return Err(Error::Precondition("witness expands".into()));
                }
            }
            Verdict::Expander if self.method != Method::Exact => {
                return Err(Error::Precondition("expander verdict requires exact method".into()));
            }
            Verdict::Vacuous if !self.window.is_empty() => {
                return Err(Error::Precondition("vacuous verdict with nonempty window".into()));
            }
            _ => {}
        }
        Ok(())
    }
}

pub fn certify_expansion_exact(g: &Graph, params: &ExpanderParams) -> Result<ExpansionCertificate> {
    certify_expansion_exact_with_limit(g, params, EXACT_LIMIT)
}

/// Enumerates every set in the size window. The witness, if any, is the
/// smallest failing set, lexicographically least among those of its size.
pub fn certify_expansion_exact_with_limit(
    g: &Graph,
    params: &ExpanderParams,
    limit: usize,
) -> Result<ExpansionCertificate> {
    let n = g.n();
    let limit = limit.min(EXACT_HARD_LIMIT);
    if n > limit {
        return Err(Error::ExactLimitExceeded { n, limit });
    }
    let window = params.window(n);
    let mut cert = ExpansionCertificate {
        params: params.clone(),
        verdict: Verdict::Vacuous,
        witness: None,
        window,
        method: Method::Exact,
    };
    if window.is_empty() {
        return Ok(cert);
    }
    let rows = g.row_masks().expect("n <= 64");
    for size in window.smin..=window.smax {
        let mut search = FailingSetSearch {
            rows: &rows,
            size,
            cap: params.expansion_cap(size),
        };
        if let Some(mask) = search.first(0, 0, 0, 0) {
            cert.verdict = Verdict::NotExpander;
            cert.witness = Some(VertexSet::from_mask(mask));
            return Ok(cert);
        }
    }
    cert.verdict = Verdict::Expander;
    Ok(cert)
}

/// Depth-first search over `size`-subsets in lexicographic order for one whose
/// closed neighborhood has at most `cap` vertices. Neighborhoods only grow as
/// members are added, so a prefix whose neighborhood already exceeds `cap`
/// is pruned.
struct FailingSetSearch<'a> {
    rows: &'a [u64],
    size: usize,
    cap: usize,
}

impl FailingSetSearch<'_> {
    fn first(&mut self, start: usize, depth: usize, set: u64, gamma: u64) -> Option<u64> {
        if depth == self.size {
            return Some(set);
        }
        let n = self.rows.len();
        let remaining = self.size - depth;
        for v in start..=(n - remaining) {
            let next = gamma | self.rows[v];
            if next.count_ones() as usize > self.cap {
                continue;
            }
            if let Some(found) = self.first(v + 1, depth + 1, set | 1 << v, next) {
                return Some(found);
            }
        }
        None
    }
}

/// Seeded random restarts plus greedy local search for a set in the window
/// that fails to expand. `budget` is the number of restarts. Any returned set
/// has been re-checked with [`is_expanding_set_exact`].
pub fn falsify_expansion_randomized(
    g: &Graph,
    params: &ExpanderParams,
    budget: usize,
    seed: u64,
) -> Result<Option<VertexSet>> {
    let n = g.n();
    let window = params.window(n);
    if window.is_empty() {
        return Err(Error::EmptyWindow {
            smin: window.smin,
            smax: window.smax,
        });
    }
    let caps: Vec<usize> = (0..=window.smax + 1).map(|s| params.expansion_cap(s)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for restart in 0..budget {
        let size = rng.random_range(window.smin..=window.smax);
        let start = if restart % 2 == 0 {
            order.shuffle(&mut rng);
            order[..size].to_vec()
        } else {
            ball_start(g, rng.random_range(0..n), size)
        };
        let mut state = LocalSearch::new(g, &start);
        if let Some(found) = state.descend(window, &caps, &mut rng) {
            if window.contains(found.len()) && !is_expanding_set_exact(g, &found, &params.beta_q)? {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}

/// The `size` vertices nearest to `center` in hop distance (ties by index),
/// padded with unreachable vertices in index order.
fn ball_start(g: &Graph, center: usize, size: usize) -> Vec<usize> {
    let dist = g
        .bfs(&VertexSet::new(vec![center]))
        .expect("center is in range");
    let mut by_hop: Vec<usize> = (0..g.n()).collect();
    by_hop.sort_by_key(|&v| (dist[v].unwrap_or(usize::MAX), v));
    by_hop.truncate(size);
    by_hop
}

struct LocalSearch<'a> {
    g: &'a Graph,
    member: Vec<bool>,
    /// Number of members adjacent to each vertex (self-loops included).
    cover: Vec<usize>,
    size: usize,
    gamma: usize,
}

impl<'a> LocalSearch<'a> {
    fn new(g: &'a Graph, start: &[usize]) -> Self {
        let mut s = Self {
            g,
            member: vec![false; g.n()],
            cover: vec![0; g.n()],
            size: 0,
            gamma: 0,
        };
        for &v in start {
            s.add(v);
        }
        s
    }

    fn add(&mut self, v: usize) {
        self.member[v] = true;
        self.size += 1;
        for w in self.g.neighbors(v) {
            if self.cover[w] == 0 {
                self.gamma += 1;
            }
            self.cover[w] += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        self.member[v] = false;
        self.size -= 1;
        for w in self.g.neighbors(v) {
            self.cover[w] -= 1;
            if self.cover[w] == 0 {
                self.gamma -= 1;
            }
        }
    }

    /// Member whose removal shrinks Γ the most, i.e. with the most private
    /// neighbors. Ties are broken uniformly at random.
    fn best_removal<R: Rng>(&self, rng: &mut R) -> Option<(usize, usize)> {
        let scored = (0..self.g.n()).filter(|&v| self.member[v]).map(|v| {
            let loss = self.g.neighbors(v).filter(|&w| self.cover[w] == 1).count();
            (v, loss)
        });
        pick_extreme(scored, rng, |a, b| a > b)
    }

    /// Non-member whose addition grows Γ the least.
    fn best_addition<R: Rng>(&self, rng: &mut R, exclude: Option<usize>) -> Option<(usize, usize)> {
        let scored = (0..self.g.n())
            .filter(|&v| !self.member[v] && Some(v) != exclude)
            .map(|v| {
                let gain = self.g.neighbors(v).filter(|&w| self.cover[w] == 0).count();
                (v, gain)
            });
        pick_extreme(scored, rng, |a, b| a < b)
    }

    fn score(gamma: usize, size: usize, caps: &[usize]) -> i64 {
        gamma as i64 - caps[size] as i64
    }

    fn members(&self) -> VertexSet {
        (0..self.g.n()).filter(|&v| self.member[v]).collect()
    }

    /// Greedy descent on `|Γ(S)| − ⌊β|S|⌋` using swap, drop and add moves
    /// that keep `|S|` in the window. Returns the set once the score is
    /// nonpositive, i.e. `S` fails to expand.
    fn descend<R: Rng>(&mut self, window: SizeWindow, caps: &[usize], rng: &mut R) -> Option<VertexSet> {
        loop {
            let current = Self::score(self.gamma, self.size, caps);
            if current <= 0 {
                return Some(self.members());
            }
            let mut best: Option<(i64, Move)> = None;
            let mut consider = |score: i64, mv: Move| {
                if score < current && best.is_none_or(|(b, _)| score < b) {
                    best = Some((score, mv));
                }
            };

            if let Some((out, loss)) = self.best_removal(rng) {
                if self.size > window.smin {
                    consider(Self::score(self.gamma - loss, self.size - 1, caps), Move::Drop(out));
                }
                self.remove(out);
                if let Some((inn, gain)) = self.best_addition(rng, Some(out)) {
                    consider(Self::score(self.gamma + gain, self.size + 1, caps), Move::Swap(out, inn));
                }
                self.add(out);
            }
            if self.size < window.smax {
                if let Some((inn, gain)) = self.best_addition(rng, None) {
                    consider(Self::score(self.gamma + gain, self.size + 1, caps), Move::Add(inn));
                }
            }

            match best {
                None => return None,
                Some((_, Move::Drop(v))) => self.remove(v),
                Some((_, Move::Add(v))) => self.add(v),
                Some((_, Move::Swap(out, inn))) => {
                    self.remove(out);
                    self.add(inn);
                }
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Move {
    Drop(usize),
    Add(usize),
    Swap(usize, usize),
}

/// Element with the extreme key under `better`, ties chosen uniformly by
/// reservoir sampling.
fn pick_extreme<R: Rng>(
    items: impl Iterator<Item = (usize, usize)>,
    rng: &mut R,
    better: impl Fn(usize, usize) -> bool,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut ties = 0u32;
    for (v, key) in items {
        match best {
            Some((_, b)) if better(b, key) => {}
            Some((_, b)) if b == key => {
                ties += 1;
                if rng.random_range(0..ties + 1) == 0 {
                    best = Some((v, key));
                }
            }
            _ => {
                best = Some((v, key));
                ties = 0;
            }
        }
    }
    best
}

/// `k = ⌈log_β(1/(2α))⌉`, the smallest `k ≥ 1` with `β^k ≥ 1/(2α)`, decided
/// on exact rationals whenever the float estimate is at most [`K_EXACT_MAX`].
pub fn k_steps(params: &ExpanderParams) -> usize {
    let target = (1.0 / (2.0 * params.alpha)).ln() / params.beta.ln();
    let estimate = target.ceil().max(1.0);
    if estimate.is_nan() || estimate > K_EXACT_MAX as f64 {
        return estimate as usize;
    }
    let two_alpha = exact::integer(2) * &params.alpha_q;
    let reaches = |k: usize| {
        let power = num_traits::pow(params.beta_q.clone(), k);
        power * &two_alpha >= exact::one()
    };
    let mut k = (estimate as usize).saturating_sub(2).max(1);
    while !reaches(k) {
        k += 1;
    }
    while k > 1 && reaches(k - 1) {
        k -= 1;
    }
    k
}

pub const K_EXACT_MAX: usize = 256;
