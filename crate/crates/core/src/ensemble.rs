//! Seeded Monte-Carlo ensembles of like-centrality networks.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::likecentrality::{self, LikeCentralityVector, RateMatrix, SolverSettings};
use crate::seed;
use crate::stats::Moments;

pub use crate::stats::gaussian_mle;

/// Largest tolerated fraction of non-converged samples.
pub const MAX_FAILURE_RATE: f64 = 0.001;

/// Samples simulated per parallel batch before being handed to the sink.
const BATCH: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub count: usize,
    pub n: usize,
    pub m: usize,
    pub base_seed: u64,
    pub solver: SolverSettings,
    pub quantile: f64,
    /// Worker threads; 0 picks the rayon default.
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            count: 500_000,
            n: 10,
            m: 2,
            base_seed: 0,
            solver: SolverSettings::default(),
            quantile: 0.01,
            workers: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count < 1 {
            return Err(Error::InvalidParameter("count must be at least 1".into()));
        }
        if !(self.quantile > 0.0 && self.quantile < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "quantile must lie in (0, 1), got {}",
                self.quantile
            )));
        }
        if self.m < 1 || self.n <= self.m {
            return Err(Error::InvalidParameter(format!(
                "need n > m >= 1 (n = {}, m = {})",
                self.n, self.m
            )));
        }
        self.solver.validate()
    }
}

/// One simulated network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSample {
    pub id: u64,
    pub seed: u64,
    pub graph: Graph,
    pub rates: RateMatrix,
    pub lc: LikeCentralityVector,
    pub prestige: f64,
    pub mean_clustering: f64,
    pub diameter: usize,
}

impl NetworkSample {
    pub fn simulate(cfg: &ExperimentConfig, id: u64) -> Result<Self> {
        let seed = seed::split(cfg.base_seed, id);
        let graph = graph::generate_ba(cfg.n, cfg.m, seed)?;
        let rates = likecentrality::sample_rates(&graph, seed);
        let lc = likecentrality::solve_lc(&graph, &rates, &cfg.solver)?;
        let prestige = likecentrality::prestige(&lc);
        let mean_clustering = graph::mean_clustering(&graph);
        let diameter = graph::diameter(&graph)?;
        Ok(NetworkSample {
            id,
            seed,
            graph,
            rates,
            lc,
            prestige,
            mean_clustering,
            diameter,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    pub count: usize,
    pub mu: f64,
    pub sigma2: f64,
    pub quantile: f64,
    pub threshold: f64,
    /// Sorted ascending.
    pub strategic_ids: Vec<u64>,
    pub convergence_failures: usize,
}

impl EnsembleSummary {
    pub fn strategic_set(&self) -> BTreeSet<u64> {
        self.strategic_ids.iter().copied().collect()
    }
}

/// The prestige record of one sample, enough to fit and select.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrestigeEntry {
    pub id: u64,
    pub prestige: f64,
    pub converged: bool,
}

impl From<&NetworkSample> for PrestigeEntry {
    fn from(s: &NetworkSample) -> Self {
        PrestigeEntry {
            id: s.id,
            prestige: s.prestige,
            converged: s.lc.converged,
        }
    }
}

/// Number of samples a quantile selects out of `count`.
pub fn selection_size(quantile: f64, count: usize) -> usize {
    (quantile * count as f64).round() as usize
}

/// Picks the `round(quantile * count)` most prestigious converged samples,
/// lower id first on ties. Returns the ids in ascending order and the
/// prestige of the last one selected.
pub fn select_strategic(entries: &[PrestigeEntry], quantile: f64) -> Result<(Vec<u64>, f64)> {
    if !(quantile > 0.0 && quantile < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "quantile must lie in (0, 1), got {quantile}"
        )));
    }
    let k = selection_size(quantile, entries.len());
    if k == 0 {
        return Err(Error::EmptySelection {
            quantile,
            count: entries.len(),
        });
    }
    let mut eligible: Vec<&PrestigeEntry> = entries.iter().filter(|e| e.converged).collect();
    if eligible.is_empty() {
        return Err(Error::EmptySelection {
            quantile,
            count: entries.len(),
        });
    }
    eligible.sort_by(|a, b| b.prestige.total_cmp(&a.prestige).then(a.id.cmp(&b.id)));
    eligible.truncate(k);
    let threshold = eligible.last().map(|e| e.prestige).unwrap();
    let mut ids: Vec<u64> = eligible.iter().map(|e| e.id).collect();
    ids.sort_unstable();
    Ok((ids, threshold))
}

/// Fits the prestige population and selects the strategic set.
pub fn summarize(entries: &[PrestigeEntry], quantile: f64) -> Result<EnsembleSummary> {
    let mut moments = Moments::default();
    let mut failures = 0;
    for e in entries {
        if e.converged {
            moments.push(e.prestige);
        } else {
            failures += 1;
        }
    }
    if moments.count() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: moments.count() as usize,
        });
    }
    let (strategic_ids, threshold) = select_strategic(entries, quantile)?;
    Ok(EnsembleSummary {
        count: entries.len(),
        mu: moments.mean(),
        sigma2: moments.variance(),
        quantile,
        threshold,
        strategic_ids,
        convergence_failures: failures,
    })
}

/// Simulates every sample of `cfg`, handing each to `sink` in id order.
///
/// Batches of samples are simulated in parallel; each sample depends only on
/// its own derived seed, so the output does not depend on the worker count.
/// Non-converged samples are passed to the sink but left out of the fit. The
/// run fails after the last sample if more than [`MAX_FAILURE_RATE`] of the
/// samples did not converge.
pub fn run_ensemble<F>(cfg: &ExperimentConfig, mut sink: F) -> Result<EnsembleSummary>
where
    F: FnMut(&NetworkSample) -> Result<()>,
{
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;

    let mut entries = Vec::with_capacity(cfg.count);
    let count = cfg.count as u64;
    let mut start = 0u64;
    while start < count {
        let end = (start + BATCH as u64).min(count);
        let batch: Vec<NetworkSample> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|id| NetworkSample::simulate(cfg, id))
                .collect::<Result<_>>()
        })?;
        for s in &batch {
            entries.push(PrestigeEntry::from(s));
            sink(s)?;
        }
        start = end;
    }

    let failures = entries.iter().filter(|e| !e.converged).count();
    if failures as f64 > MAX_FAILURE_RATE * cfg.count as f64 {
        return Err(Error::FailureRateExceeded {
            failures,
            count: cfg.count,
        });
    }
    summarize(&entries, cfg.quantile)
}
