//! Like rates, the self-consistent like-centrality system and its
//! mean-field deviation statistics.
//!
//! For a node `i` with friends `N(i)` the like centrality satisfies
//!
//! ```text
//! L_i = Σ_{j∈N(i)} r_ij L_j / Σ_{j∈N(i)} L_j
//! ```
//!
//! where `r_ij` is the rate at which `j` likes `i`'s posts. Each `L_i` is an
//! `L`-weighted average of the rates `i` receives.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed;

/// Denominators below this are treated as a vanished neighborhood.
pub const DEGENERATE_EPS: f64 = 1e-12;

/// Directed like rates on the edges of a graph.
///
/// `received[i]` holds `(j, r_ij)` for every friend `j` of `i`, sorted by `j`,
/// so iterating `i` then `j` visits pairs in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    received: Vec<Vec<(usize, f64)>>,
}

impl RateMatrix {
    /// Builds a rate matrix whose domain must equal the directed edge set of
    /// `g`, with every value in `[0, 1]`.
    pub fn from_triples(g: &Graph, triples: &[(usize, usize, f64)]) -> Result<Self> {
        let n = g.n();
        let mut received: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, r) in triples {
            if i >= n || j >= n || !g.has_edge(i, j) {
                return Err(Error::InvalidParameter(format!(
                    "rate ({i}, {j}) is not on an edge of the graph"
                )));
            }
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::InvalidParameter(format!(
                    "rate ({i}, {j}) = {r} outside [0, 1]"
                )));
            }
            received[i].push((j, r));
        }
        for (i, row) in received.iter_mut().enumerate() {
            row.sort_by_key(|&(j, _)| j);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidParameter(format!("duplicate rate into node {i}")));
            }
            if row.len() != g.degree(i) {
                return Err(Error::InvalidParameter(format!(
                    "node {i} has {} rates for {} friends",
                    row.len(),
                    g.degree(i)
                )));
            }
        }
        Ok(RateMatrix { received })
    }

    pub fn n(&self) -> usize {
        self.received.len()
    }

    /// `r_ij`, the rate at which `j` likes `i`.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let row = &self.received[i];
        row.binary_search_by_key(&j, |&(k, _)| k)
            .ok()
            .map(|pos| row[pos].1)
    }

    /// Rates received by `i`, as `(giver, rate)` sorted by giver.
    #[inline]
    pub fn received(&self, i: usize) -> &[(usize, f64)] {
        &self.received[i]
    }

    pub fn len(&self) -> usize {
        self.received.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All `(i, j, r_ij)` in lexicographic `(i, j)` order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.received
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, r)| (i, j, r)))
    }

    /// Multiplies every rate by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        RateMatrix {
            received: self
                .received
                .iter()
                .map(|row| row.iter().map(|&(j, r)| (j, r * s)).collect())
                .collect(),
        }
    }
}

/// Independent uniform `[0, 1)` rates for both directions of every edge,
/// drawn in lexicographic `(i, j)` order.
pub fn sample_rates(g: &Graph, seed: u64) -> RateMatrix {
    let mut rng = seed::stream_rng(seed, seed::RATE_STREAM);
    let received = (0..g.n())
        .map(|i| {
            g.neighbors(i)
                .iter()
                .map(|&j| (j, rng.random::<f64>()))
                .collect()
        })
        .collect();
    RateMatrix { received }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Sup-norm bound on the cleared-denominator residual.
    pub tol: f64,
    pub max_iters: usize,
    /// Initial damping in `(0, 1]`.
    pub damping: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol: 1e-10,
            max_iters: 10_000,
            damping: 1.0,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "damping must lie in (0, 1], got {}",
                self.damping
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// Lowest damping the oscillation guard will fall back to.
pub const MIN_DAMPING: f64 = 0.125;
/// Consecutive residual increases that count as oscillation.
pub const OSCILLATION_WINDOW: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct LikeCentralityVector {
    pub values: Vec<f64>,
    pub converged: bool,
    /// Right-hand-side evaluations performed, across restarts.
    pub iterations: usize,
    /// Sup norm of the cleared-denominator residual at `values`.
    pub residual_sup: f64,
}

impl LikeCentralityVector {
    pub fn n(&self) -> usize {
        self.values.len()
    }
}

/// Solves the like-centrality system by damped fixed-point iteration
/// `L <- (1 - d) L + d T(L)` from the all-ones vector.
///
/// If the residual grows for [`OSCILLATION_WINDOW`] consecutive steps the
/// damping is halved (down to [`MIN_DAMPING`]) and the iteration restarts from
/// all ones. Returns the last iterate with `converged = false` if `max_iters`
/// evaluations do not bring the residual below `tol`.
pub fn solve_lc(g: &Graph, r: &RateMatrix, settings: &SolverSettings) -> Result<LikeCentralityVector> {
    settings.validate()?;
    let n = g.n();
    if r.n() != n {
        return Err(Error::InvalidParameter(format!(
            "rate matrix has {} nodes, graph has {n}",
            r.n()
        )));
    }
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(Error::InvalidParameter(format!("node {v} has no friends")));
    }

    let mut damping = settings.damping;
    let mut values = vec![1.0; n];
    let mut image = vec![0.0; n];
    let mut prev_res = f64::INFINITY;
    let mut rising = 0usize;
    let mut residual_sup = f64::INFINITY;

    for iteration in 1..=settings.max_iters {
        residual_sup = 0.0;
        for (i, t) in image.iter_mut().enumerate() {
            let (mut num, mut den) = (0.0, 0.0);
            for &(j, rij) in r.received(i) {
                num += rij * values[j];
                den += values[j];
            }
            if den < DEGENERATE_EPS {
                return Err(Error::DegenerateNode { node: i });
            }
            *t = num / den;
            residual_sup = f64::max(residual_sup, (values[i] * den - num).abs());
        }
        if residual_sup <= settings.tol {
            return Ok(LikeCentralityVector {
                values,
                converged: true,
                iterations: iteration,
                residual_sup,
            });
        }
        if iteration == settings.max_iters {
            break;
        }

        rising = if residual_sup > prev_res { rising + 1 } else { 0 };
        prev_res = residual_sup;
        if rising >= OSCILLATION_WINDOW && damping > MIN_DAMPING {
            damping = (damping / 2.0).max(MIN_DAMPING);
            values.fill(1.0);
            rising = 0;
            prev_res = f64::INFINITY;
            continue;
        }
        for (l, &t) in values.iter_mut().zip(&image) {
            *l = (1.0 - damping) * *l + damping * t;
        }
    }

    Ok(LikeCentralityVector {
        values,
        converged: false,
        iterations: settings.max_iters,
        residual_sup,
    })
}

/// Per-node residuals of a candidate solution, computed two ways.
#[derive(Debug, Clone, PartialEq)]
pub struct Residuals {
    /// `|L_i Σ_j L_j - Σ_j r_ij L_j|`
    pub cleared: Vec<f64>,
    /// `|Σ_j (r_ij - L_i) L_j|`
    pub identity: Vec<f64>,
}

impl Residuals {
    pub fn cleared_sup(&self) -> f64 {
        self.cleared.iter().copied().fold(0.0, f64::max)
    }

    pub fn identity_sup(&self) -> f64 {
        self.identity.iter().copied().fold(0.0, f64::max)
    }
}

pub fn residual(g: &Graph, r: &RateMatrix, lc: &[f64]) -> Residuals {
    let n = g.n();
    let mut cleared = Vec::with_capacity(n);
    let mut identity = Vec::with_capacity(n);
    for i in 0..n {
        let row = r.received(i);
        let den: f64 = row.iter().map(|&(j, _)| lc[j]).sum();
        let num: f64 = row.iter().map(|&(j, rij)| rij * lc[j]).sum();
        cleared.push((lc[i] * den - num).abs());
        let eps_weighted: f64 = row.iter().map(|&(j, rij)| (rij - lc[i]) * lc[j]).sum();
        identity.push(eps_weighted.abs());
    }
    Residuals { cleared, identity }
}

pub fn prestige(lc: &LikeCentralityVector) -> f64 {
    lc.values.iter().sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDeviation {
    pub i: usize,
    pub j: usize,
    /// `r_ij / L_i - 1`
    pub delta: f64,
    /// `r_ij - L_i`
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviationStats {
    pub pairs: Vec<PairDeviation>,
    /// `L_i > mean_j r_ij` per node; `None` for dropped nodes.
    pub advantage: Vec<Option<bool>>,
    /// Directed pairs skipped because `L_i < 1e-12`.
    pub dropped_pairs: usize,
}

/// Deviations from the mean-field solution `L_i = r_ij`.
pub fn deviations(g: &Graph, r: &RateMatrix, lc: &LikeCentralityVector) -> DeviationStats {
    let n = g.n();
    let mut pairs = Vec::with_capacity(r.len());
    let mut advantage = Vec::with_capacity(n);
    let mut dropped_pairs = 0;
    for i in 0..n {
        let li = lc.values[i];
        let row = r.received(i);
        if li < DEGENERATE_EPS {
            dropped_pairs += row.len();
            advantage.push(None);
            continue;
        }
        for &(j, rij) in row {
            pairs.push(PairDeviation {
                i,
                j,
                delta: rij / li - 1.0,
                epsilon: rij - li,
            });
        }
        advantage.push(Some(li > receive_stats(r, i).mean));
    }
    DeviationStats {
        pairs,
        advantage,
        dropped_pairs,
    }
}

/// Total rate at which `j` likes its friends' posts, `Σ_i r_ij`.
pub fn give_rate(g: &Graph, r: &RateMatrix, j: usize) -> f64 {
    g.neighbors(j)
        .iter()
        .map(|&i| r.get(i, j).expect("rate matrix domain matches graph"))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiveStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Mean, min and max of the rates received by `i`. `i` must have a friend.
pub fn receive_stats(r: &RateMatrix, i: usize) -> ReceiveStats {
    let row = r.received(i);
    assert!(!row.is_empty(), "node {i} receives no rates");
    let (mut sum, mut min, mut max) = (0.0, f64::INFINITY, f64::NEG_INFINITY);
    for &(_, v) in row {
        sum += v;
        min = min.min(v);
        max = max.max(v);
    }
    ReceiveStats {
        mean: sum / row.len() as f64,
        min,
        max,
    }
}
