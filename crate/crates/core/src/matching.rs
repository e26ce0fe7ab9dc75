//! The permuted matching game.
//!
//! Both players pick matchings of a multigraph `G` with an edge permutation
//! `π`. The leader scores `|M_L ∩ π(M_F)|`, the follower `|M_L ∩ M_F|`.
//! Best responses are maximum-weight matchings under edge marginals; the
//! leader can guarantee a `(1 - 3ε)/12` fraction of its equilibrium payoff
//! by mixing the two matchings of a greedy pair. Finding a matching `M`
//! maximizing `|M ∩ π(M)|` is 3D-matching-hard, and [`reduce_3dm`]
//! builds that reduction.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::game::{BimatrixGame, GameError};
use crate::TIE_TOL;

/// Exhaustive searches (pure-pair optimum, π-TIM optimum, leader-favoring
/// tie-breaks) are limited to graphs with at most this many edges.
pub const BRUTE_FORCE_EDGE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatchingError {
    #[error("edge {edge} has endpoint {vertex}, but the graph has {len} vertices")]
    VertexOutOfRange { edge: usize, vertex: usize, len: usize },
    #[error("edge {0} is a self-loop")]
    SelfLoop(usize),
    #[error("permutation is not a bijection over the {0} edge ids")]
    NotAPermutation(usize),
    #[error("edge id {0} does not exist")]
    UnknownEdge(usize),
    #[error("edges {0} and {1} share a vertex")]
    NotAMatching(usize, usize),
    #[error("edge {0} listed twice")]
    DuplicateEdge(usize),
    #[error("invalid matching distribution: {0}")]
    InvalidDistribution(&'static str),
    #[error("eps = {0} must lie strictly between 0 and 1/3")]
    EpsOutOfRange(f64),
    #[error("graph has {edges} edges, exhaustive search is limited to {limit}")]
    SizeLimit { edges: usize, limit: usize },
    #[error("more than {limit} matchings")]
    TooManyMatchings { limit: usize },
    #[error("weights have {got} entries, expected {expected}")]
    WeightCount { expected: usize, got: usize },
    #[error("weights must be finite")]
    NonFiniteWeight,
    #[error("triple {triple} has an index outside its part")]
    TripleOutOfRange { triple: usize },
    #[error("selected triples {0} and {1} overlap")]
    Not3dMatching(usize, usize),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Undirected multigraph. Edge ids are positions in `edges`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, MatchingError> {
        for (edge, &(u, v)) in edges.iter().enumerate() {
            for vertex in [u, v] {
                if vertex >= num_vertices {
                    return Err(MatchingError::VertexOutOfRange {
                        edge,
                        vertex,
                        len: num_vertices,
                    });
                }
            }
            if u == v {
                return Err(MatchingError::SelfLoop(edge));
            }
        }
        Ok(Self { num_vertices, edges })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.edges[edge]
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        let (u, v) = self.edges[a];
        let (x, y) = self.edges[b];
        u == x || u == y || v == x || v == y
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePermutation {
    image: Vec<usize>,
    preimage: Vec<usize>,
}

impl EdgePermutation {
    /// `image[e]` is `π(e)`.
    pub fn new(image: Vec<usize>) -> Result<Self, MatchingError> {
        let n = image.len();
        let mut preimage = vec![usize::MAX; n];
        for (e, &f) in image.iter().enumerate() {
            if f >= n || preimage[f] != usize::MAX {
                return Err(MatchingError::NotAPermutation(n));
            }
            preimage[f] = e;
        }
        Ok(Self { image, preimage })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
            preimage: (0..n).collect(),
        }
    }

    pub fn apply(&self, e: usize) -> usize {
        self.image[e]
    }

    pub fn inverse(&self, e: usize) -> usize {
        self.preimage[e]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermMatchInstance {
    graph: Multigraph,
    pi: EdgePermutation,
}

impl PermMatchInstance {
    pub fn new(graph: Multigraph, pi: EdgePermutation) -> Result<Self, MatchingError> {
        if pi.len() != graph.num_edges() {
            return Err(MatchingError::NotAPermutation(graph.num_edges()));
        }
        Ok(Self { graph, pi })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn pi(&self) -> &EdgePermutation {
        &self.pi
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    /// `π(M)` as a sorted edge list (not necessarily a matching).
    pub fn transform(&self, m: &Matching) -> Vec<usize> {
        let mut out: Vec<usize> = m.0.iter().map(|&e| self.pi.apply(e)).collect();
        out.sort_unstable();
        out
    }

    fn check(&self, m: &Matching) -> Result<(), MatchingError> {
        Matching::new(&self.graph, m.0.clone()).map(|_| ())
    }

    fn require_small(&self) -> Result<(), MatchingError> {
        if self.num_edges() > BRUTE_FORCE_EDGE_LIMIT {
            return Err(MatchingError::SizeLimit {
                edges: self.num_edges(),
                limit: BRUTE_FORCE_EDGE_LIMIT,
            });
        }
        Ok(())
    }
}

/// A set of pairwise vertex-disjoint edges, kept as sorted edge ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Matching(Vec<usize>);

impl Matching {
    pub fn new(graph: &Multigraph, mut edges: Vec<usize>) -> Result<Self, MatchingError> {
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(MatchingError::DuplicateEdge(w[0]));
            }
        }
        if let Some(&e) = edges.iter().find(|&&e| e >= graph.num_edges()) {
            return Err(MatchingError::UnknownEdge(e));
        }
        for (i, &a) in edges.iter().enumerate() {
            for &b in &edges[i + 1..] {
                if graph.adjacent(a, b) {
                    return Err(MatchingError::NotAMatching(a, b));
                }
            }
        }
        Ok(Self(edges))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn edges(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.0.binary_search(&edge).is_ok()
    }
}

/// Finite-support distribution over matchings.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingMix {
    support: Vec<(Matching, f64)>,
}

impl MatchingMix {
    pub fn new(support: Vec<(Matching, f64)>) -> Result<Self, MatchingError> {
        if support.is_empty() {
            return Err(MatchingError::InvalidDistribution("empty support"));
        }
        if support.iter().any(|(_, p)| !p.is_finite() || *p < 0.0) {
            return Err(MatchingError::InvalidDistribution("negative or non-finite probability"));
        }
        let total: f64 = support.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(MatchingError::InvalidDistribution("probabilities must sum to 1"));
        }
        Ok(Self { support })
    }

    pub fn point(m: Matching) -> Self {
        Self {
            support: vec![(m, 1.0)],
        }
    }

    pub fn support(&self) -> &[(Matching, f64)] {
        &self.support
    }

    /// `Pr[e ∈ M]` for every edge id below `num_edges`.
    pub fn marginals(&self, num_edges: usize) -> Vec<f64> {
        let mut w = vec![0.0; num_edges];
        for (m, p) in &self.support {
            for &e in m.edges() {
                w[e] += p;
            }
        }
        w
    }

    fn check(&self, inst: &PermMatchInstance) -> Result<(), MatchingError> {
        self.support.iter().try_for_each(|(m, _)| inst.check(m))
    }
}

/// `(U_L, U_F) = (|M_L ∩ π(M_F)|, |M_L ∩ M_F|)`.
pub fn pm_utilities(
    inst: &PermMatchInstance,
    leader: &Matching,
    follower: &Matching,
) -> Result<(usize, usize), MatchingError> {
    inst.check(leader)?;
    inst.check(follower)?;
    Ok(utilities_unchecked(inst, leader, follower))
}

fn utilities_unchecked(inst: &PermMatchInstance, leader: &Matching, follower: &Matching) -> (usize, usize) {
    let image = inst.transform(follower);
    (
        sorted_common(leader.edges(), &image),
        sorted_common(leader.edges(), follower.edges()),
    )
}

fn sorted_common(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// `(common, dist)` with `common = |x ∩ y|` and `dist = |x| + |y| - 2·common`.
pub fn common_dist(x: &Matching, y: &Matching) -> (usize, usize) {
    let common = sorted_common(x.edges(), y.edges());
    (common, x.len() + y.len() - 2 * common)
}

/// Exact maximum-weight matching by branch and bound over edges in id
/// order. Edges of nonpositive weight are never used. Among optimal
/// matchings the lexicographically smallest edge list wins.
pub fn max_weight_matching(graph: &Multigraph, weights: &[f64]) -> Result<Matching, MatchingError> {
    if weights.len() != graph.num_edges() {
        return Err(MatchingError::WeightCount {
            expected: graph.num_edges(),
            got: weights.len(),
        });
    }
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(MatchingError::NonFiniteWeight);
    }
    let candidates: Vec<usize> = (0..graph.num_edges()).filter(|&e| weights[e] > 0.0).collect();

    struct Search<'a> {
        graph: &'a Multigraph,
        weights: &'a [f64],
        candidates: Vec<usize>,
        used: Vec<bool>,
        current: Vec<usize>,
        best: Vec<usize>,
        best_value: f64,
    }

    impl Search<'_> {
        fn bound(&self, from: usize) -> f64 {
            self.candidates[from..]
                .iter()
                .filter(|&&e| {
                    let (u, v) = self.graph.endpoints(e);
                    !self.used[u] && !self.used[v]
                })
                .map(|&e| self.weights[e])
                .sum()
        }

        fn go(&mut self, k: usize, value: f64) {
            if value > self.best_value + 1e-12 {
                self.best_value = value;
                self.best = self.current.clone();
            }
            if k == self.candidates.len() || value + self.bound(k) <= self.best_value + 1e-12 {
                return;
            }
            let e = self.candidates[k];
            let (u, v) = self.graph.endpoints(e);
            if !self.used[u] && !self.used[v] {
                self.used[u] = true;
                self.used[v] = true;
                self.current.push(e);
                self.go(k + 1, value + self.weights[e]);
                self.current.pop();
                self.used[u] = false;
                self.used[v] = false;
            }
            self.go(k + 1, value);
        }
    }

    let mut search = Search {
        graph,
        weights,
        candidates,
        used: vec![false; graph.num_vertices()],
        current: Vec::new(),
        best: Vec::new(),
        best_value: 0.0,
    };
    search.go(0, 0.0);
    Ok(Matching(search.best))
}

/// Every matching of `graph` (including the empty one), ordered by size
/// and then lexicographically. Fails once more than `limit` exist.
pub fn all_matchings(graph: &Multigraph, limit: usize) -> Result<Vec<Matching>, MatchingError> {
    fn go(
        graph: &Multigraph,
        k: usize,
        used: &mut Vec<bool>,
        current: &mut Vec<usize>,
        out: &mut Vec<Matching>,
        limit: usize,
    ) -> Result<(), MatchingError> {
        if k == graph.num_edges() {
            if out.len() == limit {
                return Err(MatchingError::TooManyMatchings { limit });
            }
            out.push(Matching(current.clone()));
            return Ok(());
        }
        go(graph, k + 1, used, current, out, limit)?;
        let (u, v) = graph.endpoints(k);
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            current.push(k);
            go(graph, k + 1, used, current, out, limit)?;
            current.pop();
            used[u] = false;
            used[v] = false;
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(
        graph,
        0,
        &mut vec![false; graph.num_vertices()],
        &mut Vec::new(),
        &mut out,
        limit,
    )?;
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// A follower best response and whether ties were resolved for the leader.
#[derive(Debug, Clone, PartialEq)]
pub struct FollowerResponse {
    pub matching: Matching,
    /// `false` on graphs above [`BRUTE_FORCE_EDGE_LIMIT`] edges, where the
    /// response is the lexicographically first maximum-weight matching.
    pub leader_favoring: bool,
}

/// Follower best response to a leader mix: a maximum-weight matching under
/// `w_e = Pr[e ∈ M_L]`. On small graphs all maximum-weight matchings
/// (within [`TIE_TOL`]) are compared and the one best for the leader wins.
pub fn follower_best_response_pm(
    inst: &PermMatchInstance,
    leader: &MatchingMix,
) -> Result<FollowerResponse, MatchingError> {
    leader.check(inst)?;
    let weights = leader.marginals(inst.num_edges());
    if inst.num_edges() > BRUTE_FORCE_EDGE_LIMIT {
        return Ok(FollowerResponse {
            matching: max_weight_matching(&inst.graph, &weights)?,
            leader_favoring: false,
        });
    }
    let score = |m: &Matching, w: &[f64]| m.edges().iter().map(|&e| w[e]).sum::<f64>();
    // leader gains from follower edge f when π(f) is in the leader's matching
    let gains: Vec<f64> = (0..inst.num_edges()).map(|f| weights[inst.pi.apply(f)]).collect();
    let matchings = all_matchings(&inst.graph, usize::MAX)?;
    let top = matchings
        .iter()
        .map(|m| score(m, &weights))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut best: Option<(&Matching, f64)> = None;
    for m in matchings.iter().filter(|m| score(m, &weights) >= top - TIE_TOL) {
        let lead = score(m, &gains);
        match best {
            Some((_, b)) if lead <= b + TIE_TOL => {}
            _ => best = Some((m, lead)),
        }
    }
    Ok(FollowerResponse {
        matching: best.map(|b| b.0.clone()).unwrap_or_default(),
        leader_favoring: true,
    })
}

/// Leader best response to a follower mix: maximum-weight matching under
/// `w_e = Pr[π⁻¹(e) ∈ M_F]`.
pub fn leader_best_response_pm(inst: &PermMatchInstance, follower: &MatchingMix) -> Result<Matching, MatchingError> {
    follower.check(inst)?;
    let marginals = follower.marginals(inst.num_edges());
    let weights: Vec<f64> = (0..inst.num_edges()).map(|e| marginals[inst.pi.inverse(e)]).collect();
    max_weight_matching(&inst.graph, &weights)
}

/// Greedy pair `(x, x')` with `π(x') = x`: scan `e'` in `order`, and take
/// `e = π(e')` into `x` and `e'` into `x'` whenever both stay matchings.
/// One pass is maximal since admissibility only shrinks as the pair grows.
pub fn greedy_pair(inst: &PermMatchInstance, order: &[usize]) -> Result<(Matching, Matching), MatchingError> {
    let m = inst.num_edges();
    let mut seen = vec![false; m];
    for &e in order {
        if e >= m || seen[e] {
            return Err(MatchingError::NotAPermutation(m));
        }
        seen[e] = true;
    }
    if order.len() != m {
        return Err(MatchingError::NotAPermutation(m));
    }

    let n = inst.graph.num_vertices();
    let (mut used_x, mut used_xp) = (vec![false; n], vec![false; n]);
    let (mut x, mut xp) = (Vec::new(), Vec::new());
    for &ep in order {
        let e = inst.pi.apply(ep);
        let (a, b) = inst.graph.endpoints(e);
        let (c, d) = inst.graph.endpoints(ep);
        if used_x[a] || used_x[b] || used_xp[c] || used_xp[d] {
            continue;
        }
        used_x[a] = true;
        used_x[b] = true;
        used_xp[c] = true;
        used_xp[d] = true;
        x.push(e);
        xp.push(ep);
    }
    x.sort_unstable();
    xp.sort_unstable();
    Ok((Matching(x), Matching(xp)))
}

/// `max_{y, y'} |y ∩ π(y')|` by enumerating all pairs of matchings.
pub fn opt_pure_pair(inst: &PermMatchInstance) -> Result<(Matching, Matching, usize), MatchingError> {
    inst.require_small()?;
    let matchings = all_matchings(&inst.graph, usize::MAX)?;
    let mask = |edges: &[usize]| edges.iter().fold(0u64, |acc, &e| acc | (1 << e));
    let plain: Vec<u64> = matchings.iter().map(|m| mask(m.edges())).collect();
    let images: Vec<u64> = matchings.iter().map(|m| mask(&inst.transform(m))).collect();
    let mut best = (0, 0, 0u32);
    for (i, &y) in plain.iter().enumerate() {
        for (j, &img) in images.iter().enumerate() {
            let value = (y & img).count_ones();
            if value > best.2 {
                best = (i, j, value);
            }
        }
    }
    Ok((matchings[best.0].clone(), matchings[best.1].clone(), best.2 as usize))
}

/// Two-point leader mix: `x` with probability `1/3 - eps`, `x'` with the rest.
pub fn approx_leader_strategy(inst: &PermMatchInstance, eps: f64) -> Result<MatchingMix, MatchingError> {
    let (x, xp) = canonical_pair(inst, eps)?;
    Ok(two_point(x, xp, eps))
}

fn canonical_pair(inst: &PermMatchInstance, eps: f64) -> Result<(Matching, Matching), MatchingError> {
    if !(eps > 0.0 && eps < 1.0 / 3.0) {
        return Err(MatchingError::EpsOutOfRange(eps));
    }
    let order: Vec<usize> = (0..inst.num_edges()).collect();
    greedy_pair(inst, &order)
}

fn two_point(x: Matching, xp: Matching, eps: f64) -> MatchingMix {
    let low = 1.0 / 3.0 - eps;
    MatchingMix {
        support: vec![(x, low), (xp, 1.0 - low)],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PmApproxSolution {
    pub strategy: MatchingMix,
    pub x: Matching,
    pub x_prime: Matching,
    /// `|x ∩ π(x')|`, equal to `|x|` for a greedy pair.
    pub shared: usize,
    pub follower: FollowerResponse,
    pub leader_payoff: f64,
    pub follower_payoff: f64,
    /// `(1 - 3 eps) / 12`: the guaranteed fraction of the equilibrium payoff.
    pub guarantee_factor: f64,
    /// `(1/3 - eps) · shared`, the payoff floor the follower response must meet.
    pub payoff_floor: f64,
}

/// The greedy two-point strategy, the follower's response and the
/// resulting expected payoffs.
pub fn approx_solve(inst: &PermMatchInstance, eps: f64) -> Result<PmApproxSolution, MatchingError> {
    let (x, x_prime) = canonical_pair(inst, eps)?;
    let strategy = two_point(x.clone(), x_prime.clone(), eps);
    let follower = follower_best_response_pm(inst, &strategy)?;
    let (leader_payoff, follower_payoff) = expected_pm_utilities(inst, &strategy, &follower.matching);
    let shared = sorted_common(x.edges(), &inst.transform(&x_prime));
    Ok(PmApproxSolution {
        strategy,
        shared,
        follower,
        leader_payoff,
        follower_payoff,
        guarantee_factor: (1.0 - 3.0 * eps) / 12.0,
        payoff_floor: (1.0 / 3.0 - eps) * shared as f64,
        x,
        x_prime,
    })
}

/// Expected `(U_L, U_F)` of a leader mix against a pure follower matching.
pub fn expected_pm_utilities(inst: &PermMatchInstance, leader: &MatchingMix, follower: &Matching) -> (f64, f64) {
    leader.support.iter().fold((0.0, 0.0), |(l, f), (m, p)| {
        let (ul, uf) = utilities_unchecked(inst, m, follower);
        (l + p * ul as f64, f + p * uf as f64)
    })
}

/// `|M ∩ π(M)|`.
pub fn pitim_value(inst: &PermMatchInstance, m: &Matching) -> Result<usize, MatchingError> {
    inst.check(m)?;
    Ok(sorted_common(m.edges(), &inst.transform(m)))
}

/// Matching maximizing `|M ∩ π(M)|` by exhaustive enumeration.
pub fn bruteforce_pitim(inst: &PermMatchInstance) -> Result<(Matching, usize), MatchingError> {
    inst.require_small()?;
    let mut best = (Matching::empty(), 0);
    for m in all_matchings(&inst.graph, usize::MAX)? {
        let value = sorted_common(m.edges(), &inst.transform(&m));
        if value > best.1 {
            best = (m, value);
        }
    }
    Ok(best)
}

/// The follower's response itself is the π-TIM candidate read off a
/// (near-)equilibrium; returns it with its value.
pub fn extract_pitim_from_se(
    inst: &PermMatchInstance,
    leader: &MatchingMix,
    response: &Matching,
) -> Result<(Matching, usize), MatchingError> {
    leader.check(inst)?;
    let value = pitim_value(inst, response)?;
    Ok((response.clone(), value))
}

/// Both players' pure strategies are all matchings; payoffs from
/// [`pm_utilities`]. The returned list maps row/column indices to matchings.
pub fn explicit_bimatrix(
    inst: &PermMatchInstance,
    max_matchings: usize,
) -> Result<(BimatrixGame, Vec<Matching>), MatchingError> {
    let matchings = all_matchings(&inst.graph, max_matchings)?;
    let k = matchings.len();
    let mut leader = vec![0.0; k * k];
    let mut follower = vec![0.0; k * k];
    for (i, ml) in matchings.iter().enumerate() {
        for (j, mf) in matchings.iter().enumerate() {
            let (ul, uf) = utilities_unchecked(inst, ml, mf);
            leader[i * k + j] = ul as f64;
            follower[i * k + j] = uf as f64;
        }
    }
    Ok((BimatrixGame::new(k, k, leader, follower)?, matchings))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeDmInstance {
    pub n_a: usize,
    pub n_b: usize,
    pub n_c: usize,
    pub triples: Vec<[usize; 3]>,
}

impl ThreeDmInstance {
    pub fn new(n_a: usize, n_b: usize, n_c: usize, triples: Vec<[usize; 3]>) -> Result<Self, MatchingError> {
        for (triple, &[a, b, c]) in triples.iter().enumerate() {
            if a >= n_a || b >= n_b || c >= n_c {
                return Err(MatchingError::TripleOutOfRange { triple });
            }
        }
        Ok(Self { n_a, n_b, n_c, triples })
    }

    /// Fails with the first overlapping pair if `selected` is not a 3D matching.
    pub fn check_matching(&self, selected: &[usize]) -> Result<(), MatchingError> {
        for (i, &s) in selected.iter().enumerate() {
            if s >= self.triples.len() {
                return Err(MatchingError::TripleOutOfRange { triple: s });
            }
            for &t in &selected[i + 1..] {
                let (p, q) = (self.triples[s], self.triples[t]);
                if s == t || p[0] == q[0] || p[1] == q[1] || p[2] == q[2] {
                    return Err(MatchingError::Not3dMatching(s, t));
                }
            }
        }
        Ok(())
    }
}

/// Bookkeeping for [`reduce_3dm`]. Vertex blocks are laid out as
/// `A' = [0, nA)`, `A'' = [nA, 2nA)`, `B' = [2nA, 2nA+nB)`, `C'` after that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMap {
    source: ThreeDmInstance,
    /// Triple `t` becomes edges `(a', b')` and `(a'', c')`.
    pub per_triple: Vec<(usize, usize)>,
    pub a_prime: usize,
    pub a_second: usize,
    pub b_prime: usize,
    pub c_prime: usize,
}

impl ReductionMap {
    pub fn source(&self) -> &ThreeDmInstance {
        &self.source
    }

    /// The triple owning a reduced edge.
    pub fn triple_of(&self, edge: usize) -> usize {
        edge / 2
    }
}

/// Builds the π-TIM instance of a 3D-matching instance: each triple
/// `(a, b, c)` yields edges `(a', b')` and `(a'', c')` that `π` swaps.
pub fn reduce_3dm(tdm: &ThreeDmInstance) -> (PermMatchInstance, ReductionMap) {
    let a_prime = 0;
    let a_second = tdm.n_a;
    let b_prime = 2 * tdm.n_a;
    let c_prime = 2 * tdm.n_a + tdm.n_b;
    let num_vertices = c_prime + tdm.n_c;

    let mut edges = Vec::with_capacity(2 * tdm.triples.len());
    let mut image = Vec::with_capacity(2 * tdm.triples.len());
    let mut per_triple = Vec::with_capacity(tdm.triples.len());
    for (t, &[a, b, c]) in tdm.triples.iter().enumerate() {
        edges.push((a_prime + a, b_prime + b));
        edges.push((a_second + a, c_prime + c));
        image.push(2 * t + 1);
        image.push(2 * t);
        per_triple.push((2 * t, 2 * t + 1));
    }
    let graph = Multigraph { num_vertices, edges };
    let pi = EdgePermutation::new(image).expect("pairwise swap is a permutation");
    let map = ReductionMap {
        source: tdm.clone(),
        per_triple,
        a_prime,
        a_second,
        b_prime,
        c_prime,
    };
    (PermMatchInstance { graph, pi }, map)
}

/// Both reduced edges of every selected triple.
pub fn lift_3dm(map: &ReductionMap, selected: &[usize]) -> Result<Matching, MatchingError> {
    map.source.check_matching(selected)?;
    let mut edges: Vec<usize> = selected
        .iter()
        .flat_map(|&t| {
            let (p, q) = map.per_triple[t];
            [p, q]
        })
        .collect();
    edges.sort_unstable();
    Ok(Matching(edges))
}

/// Triples whose two reduced edges both lie in `reduced`.
pub fn extract_3dm(map: &ReductionMap, reduced: &Matching) -> Result<Vec<usize>, MatchingError> {
    let (inst, _) = reduce_3dm(&map.source);
    inst.check(reduced)?;
    Ok(map
        .per_triple
        .iter()
        .enumerate()
        .filter(|(_, &(p, q))| reduced.contains(p) && reduced.contains(q))
        .map(|(t, _)| t)
        .collect())
}
