//! Comparative analyses between the strategic population and its random
//! baseline, accumulated in one streaming pass over the samples.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::ensemble::{EnsembleSummary, NetworkSample};
use crate::error::{Error, Result};
use crate::graph::CentralityReport;
use crate::likecentrality::{self, receive_stats};
use crate::stats::{self, Histogram, Mode, Moments, RegressionResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BaselineMode {
    /// Every converged sample, strategic ones included.
    #[default]
    FullEnsemble,
    /// Converged samples outside the strategic set.
    BottomRemainder,
}

impl std::str::FromStr for BaselineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" | "full-ensemble" => Ok(BaselineMode::FullEnsemble),
            "bottom" | "bottom-remainder" => Ok(BaselineMode::BottomRemainder),
            other => Err(Error::InvalidParameter(format!(
                "baseline mode must be full-ensemble or bottom-remainder, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub bins: usize,
    pub baseline: BaselineMode,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            bins: 60,
            baseline: BaselineMode::FullEnsemble,
        }
    }
}

pub const DELTA_RANGE: (f64, f64) = (-1.0, 3.0);
pub const EPSILON_RANGE: (f64, f64) = (-1.0, 1.0);
pub const CLUSTERING_RANGE: (f64, f64) = (0.0, 1.0);

/// Regressors tried against an agent's give rate.
pub const PREDICTORS: [&str; 5] = [
    "degree",
    "degree_normalized",
    "betweenness",
    "closeness",
    "eigenvector",
];

/// Exactly-valued predictors are averaged per distinct value; the others are
/// first snapped to the centers of `bins` equal-width bins.
fn is_discrete(predictor: &str) -> bool {
    predictor.starts_with("degree")
}

/// Per-agent output row for `give_rates.csv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentRow {
    pub population: &'static str,
    pub agent_global_id: u64,
    pub degree: usize,
    pub give_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionRow {
    pub predictor: &'static str,
    pub binned: bool,
    pub fit: RegressionResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiameterRow {
    pub diameter: usize,
    pub count: u64,
    pub mean_prestige: f64,
    pub stddev_prestige: f64,
    /// Networks of this diameter that are in the strategic set.
    pub strategic_count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub baseline: BaselineMode,
    pub networks: usize,
    pub strategic_networks: usize,
    pub skipped_unconverged: usize,

    pub give_rate_strategic: Histogram,
    pub give_rate_baseline: Histogram,
    pub mean_give_rate_strategic: f64,
    pub mean_give_rate_baseline: f64,
    /// Strategic mean give rate over the baseline mean.
    pub give_rate_ratio: f64,
    /// Strategic mean give rate over the non-strategic mean; `None` if every
    /// sample is strategic.
    pub give_rate_ratio_bottom: Option<f64>,

    pub regressions: Vec<RegressionRow>,
    /// Binned `(predictor value, mean give rate)` points over strategic
    /// agents, per predictor.
    pub binned_points: Vec<(&'static str, Vec<(f64, f64)>)>,

    pub delta: Histogram,
    pub epsilon: Histogram,
    pub delta_modes: Vec<Mode>,
    pub epsilon_modes: Vec<Mode>,
    /// Strategic directed pairs with ε < 0.
    pub epsilon_negative_fraction: f64,
    /// Strategic agents whose LC exceeds their mean received rate.
    pub advantage_fraction: f64,
    /// Diagnostic: `r_ij - L_i` over every ordered pair `(i, j)` of each
    /// strategic network, self-pairs included, with `r_ij = 0` off the
    /// friendship edges. Not a deviation statistic in the strict sense.
    pub epsilon_all_pairs: Histogram,
    pub epsilon_all_pairs_modes: Vec<Mode>,
    pub epsilon_all_pairs_negative_fraction: f64,

    pub clustering_strategic: Histogram,
    pub clustering_baseline: Histogram,
    pub clustering_percent_difference: Vec<Option<f64>>,
    pub mean_clustering_strategic: f64,
    pub mean_clustering_baseline: f64,

    pub diameters: Vec<DiameterRow>,

    /// Largest `|Σ_j ε_ij L_j|` seen on any converged sample.
    pub max_identity_residual: f64,
    /// Nodes whose LC falls outside the range of rates they receive.
    pub convexity_violations: usize,
}

impl AnalysisReport {
    pub fn regression(&self, predictor: &str, binned: bool) -> Option<&RegressionResult> {
        self.regressions
            .iter()
            .find(|r| r.predictor == predictor && r.binned == binned)
            .map(|r| &r.fit)
    }

    pub fn binned(&self, predictor: &str) -> Option<&[(f64, f64)]> {
        self.binned_points
            .iter()
            .find(|(p, _)| *p == predictor)
            .map(|(_, pts)| pts.as_slice())
    }

    /// Mean prestige per diameter, in increasing diameter order.
    pub fn diameter_prestige(&self, d: usize) -> Option<f64> {
        self.diameters
            .iter()
            .find(|r| r.diameter == d)
            .map(|r| r.mean_prestige)
    }
}

#[derive(Default)]
struct PredictorPoints {
    x: [Vec<f64>; 5],
    y: Vec<f64>,
}

/// Streaming accumulator behind [`analyze`].
pub struct Analyzer {
    strategic: BTreeSet<u64>,
    options: AnalysisOptions,
    node_count: Option<usize>,

    networks: usize,
    strategic_networks: usize,
    skipped: usize,

    give_strategic: Moments,
    give_full: Moments,
    give_bottom: Moments,
    give_hist_strategic: Option<Histogram>,
    give_hist_baseline: Option<Histogram>,

    points: PredictorPoints,

    delta: Histogram,
    epsilon: Histogram,
    eps_pairs: u64,
    eps_negative: u64,
    agents_flagged: u64,
    agents_advantaged: u64,
    eps_all: Histogram,
    eps_all_negative: u64,

    clustering_strategic: Histogram,
    clustering_baseline: Histogram,
    clustering_strategic_mean: Moments,
    clustering_baseline_mean: Moments,

    diameters: BTreeMap<usize, (Moments, u64)>,

    max_identity_residual: f64,
    convexity_violations: usize,
}

/// Slack on the convexity check.
const CONVEXITY_SLACK: f64 = 1e-12;

impl Analyzer {
    pub fn new(summary: &EnsembleSummary, options: AnalysisOptions) -> Result<Self> {
        if summary.strategic_ids.is_empty() {
            return Err(Error::MissingSelection);
        }
        let bins = options.bins;
        Ok(Analyzer {
            strategic: summary.strategic_set(),
            options,
            node_count: None,
            networks: 0,
            strategic_networks: 0,
            skipped: 0,
            give_strategic: Moments::default(),
            give_full: Moments::default(),
            give_bottom: Moments::default(),
            give_hist_strategic: None,
            give_hist_baseline: None,
            points: PredictorPoints::default(),
            delta: Histogram::new(DELTA_RANGE.0, DELTA_RANGE.1, bins)?,
            epsilon: Histogram::new(EPSILON_RANGE.0, EPSILON_RANGE.1, bins)?,
            eps_pairs: 0,
            eps_negative: 0,
            agents_flagged: 0,
            agents_advantaged: 0,
            eps_all: Histogram::new(EPSILON_RANGE.0, EPSILON_RANGE.1, bins)?,
            eps_all_negative: 0,
            clustering_strategic: Histogram::new(CLUSTERING_RANGE.0, CLUSTERING_RANGE.1, bins)?,
            clustering_baseline: Histogram::new(CLUSTERING_RANGE.0, CLUSTERING_RANGE.1, bins)?,
            clustering_strategic_mean: Moments::default(),
            clustering_baseline_mean: Moments::default(),
            diameters: BTreeMap::new(),
            max_identity_residual: 0.0,
            convexity_violations: 0,
        })
    }

    /// Folds one sample in and returns its agents' give-rate rows, one per
    /// population the agent belongs to.
    pub fn push(&mut self, s: &NetworkSample) -> Result<Vec<AgentRow>> {
        self.networks += 1;
        if !s.lc.converged {
            self.skipped += 1;
            return Ok(Vec::new());
        }
        let n = s.graph.n();
        if self.node_count.is_none() {
            self.node_count = Some(n);
            // Give rates lie in [0, deg] and deg <= n - 1.
            let hi = (n.max(2) - 1) as f64;
            self.give_hist_strategic = Some(Histogram::new(0.0, hi, self.options.bins)?);
            self.give_hist_baseline = Some(Histogram::new(0.0, hi, self.options.bins)?);
        }
        let strategic = self.strategic.contains(&s.id);
        let in_baseline = match self.options.baseline {
            BaselineMode::FullEnsemble => true,
            BaselineMode::BottomRemainder => !strategic,
        };
        if strategic {
            self.strategic_networks += 1;
        }

        let values = &s.lc.values;
        let res = likecentrality::residual(&s.graph, &s.rates, values);
        self.max_identity_residual = self.max_identity_residual.max(res.identity_sup());
        for (i, &li) in values.iter().enumerate() {
            let rs = receive_stats(&s.rates, i);
            if li < rs.min - CONVEXITY_SLACK || li > rs.max + CONVEXITY_SLACK {
                self.convexity_violations += 1;
            }
        }

        let by_diameter = self.diameters.entry(s.diameter).or_default();
        by_diameter.0.push(s.prestige);
        by_diameter.1 += u64::from(strategic);
        if strategic {
            self.clustering_strategic.add(s.mean_clustering);
            self.clustering_strategic_mean.push(s.mean_clustering);
        }
        if in_baseline {
            self.clustering_baseline.add(s.mean_clustering);
            self.clustering_baseline_mean.push(s.mean_clustering);
        }

        let mut rows = Vec::with_capacity(2 * n);
        let give: Vec<f64> = (0..n)
            .map(|j| likecentrality::give_rate(&s.graph, &s.rates, j))
            .collect();
        for (j, &g) in give.iter().enumerate() {
            let row = |population| AgentRow {
                population,
                agent_global_id: s.id * n as u64 + j as u64,
                degree: s.graph.degree(j),
                give_rate: g,
            };
            self.give_full.push(g);
            if strategic {
                self.give_strategic.push(g);
                self.give_hist_strategic.as_mut().unwrap().add(g);
                rows.push(row("strategic"));
            } else {
                self.give_bottom.push(g);
            }
            if in_baseline {
                self.give_hist_baseline.as_mut().unwrap().add(g);
                rows.push(row("baseline"));
            }
        }

        if strategic {
            let c = CentralityReport::compute(&s.graph)?;
            for (j, &g) in give.iter().enumerate() {
                let deg = c.degree[j] as f64;
                let xs = [
                    deg,
                    deg / (n - 1) as f64,
                    c.betweenness[j],
                    c.closeness[j],
                    c.eigenvector[j],
                ];
                for (col, x) in self.points.x.iter_mut().zip(xs) {
                    col.push(x);
                }
                self.points.y.push(g);
            }

            let dev = likecentrality::deviations(&s.graph, &s.rates, &s.lc);
            for p in &dev.pairs {
                self.delta.add(p.delta);
                self.epsilon.add(p.epsilon);
                self.eps_pairs += 1;
                if p.epsilon < 0.0 {
                    self.eps_negative += 1;
                }
            }
            for flag in dev.advantage.iter().flatten() {
                self.agents_flagged += 1;
                if *flag {
                    self.agents_advantaged += 1;
                }
            }

            for (i, &li) in values.iter().enumerate() {
                for j in 0..n {
                    let e = s.rates.get(i, j).unwrap_or(0.0) - li;
                    self.eps_all.add(e);
                    if e < 0.0 {
                        self.eps_all_negative += 1;
                    }
                }
            }
        }
        Ok(rows)
    }

    pub fn finish(self) -> Result<AnalysisReport> {
        if self.strategic_networks == 0 {
            return Err(Error::MissingSelection);
        }
        let bins = self.options.bins;
        let mut regressions = Vec::new();
        let mut binned_points = Vec::new();
        for (k, &name) in PREDICTORS.iter().enumerate() {
            let x = &self.points.x[k];
            let y = &self.points.y;
            regressions.push(RegressionRow {
                predictor: name,
                binned: false,
                fit: stats::ols_fit(x, y)?,
            });
            let snapped: Vec<f64> = if is_discrete(name) {
                x.clone()
            } else {
                snap_to_bins(x, bins)
            };
            let points = stats::binned_mean(&snapped, y);
            let (bx, by): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
            regressions.push(RegressionRow {
                predictor: name,
                binned: true,
                fit: stats::ols_fit(&bx, &by)?,
            });
            binned_points.push((name, points));
        }

        let give_strategic = self.give_hist_strategic.unwrap();
        let give_baseline = self.give_hist_baseline.unwrap();
        let mean_give_rate_baseline = match self.options.baseline {
            BaselineMode::FullEnsemble => self.give_full.mean(),
            BaselineMode::BottomRemainder => self.give_bottom.mean(),
        };
        let give_rate_ratio_bottom =
            (self.give_bottom.count() > 0).then(|| self.give_strategic.mean() / self.give_bottom.mean());

        let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let diameters = self
            .diameters
            .iter()
            .map(|(&d, (m, strategic))| DiameterRow {
                diameter: d,
                count: m.count(),
                mean_prestige: m.mean(),
                stddev_prestige: m.variance().sqrt(),
                strategic_count: *strategic,
            })
            .collect();

        Ok(AnalysisReport {
            baseline: self.options.baseline,
            networks: self.networks,
            strategic_networks: self.strategic_networks,
            skipped_unconverged: self.skipped,
            mean_give_rate_strategic: self.give_strategic.mean(),
            mean_give_rate_baseline,
            give_rate_ratio: self.give_strategic.mean() / mean_give_rate_baseline,
            give_rate_ratio_bottom,
            give_rate_strategic: give_strategic,
            give_rate_baseline: give_baseline,
            regressions,
            binned_points,
            delta_modes: stats::detect_modes(&self.delta),
            epsilon_modes: stats::detect_modes(&self.epsilon),
            delta: self.delta,
            epsilon: self.epsilon,
            epsilon_negative_fraction: ratio(self.eps_negative, self.eps_pairs),
            advantage_fraction: ratio(self.agents_advantaged, self.agents_flagged),
            epsilon_all_pairs_modes: stats::detect_modes(&self.eps_all),
            epsilon_all_pairs_negative_fraction: ratio(self.eps_all_negative, self.eps_all.total()),
            epsilon_all_pairs: self.eps_all,
            clustering_percent_difference: stats::percent_difference(
                &self.clustering_strategic,
                &self.clustering_baseline,
            )?,
            clustering_strategic: self.clustering_strategic,
            clustering_baseline: self.clustering_baseline,
            mean_clustering_strategic: self.clustering_strategic_mean.mean(),
            mean_clustering_baseline: self.clustering_baseline_mean.mean(),
            diameters,
            max_identity_residual: self.max_identity_residual,
            convexity_violations: self.convexity_violations,
        })
    }
}

fn snap_to_bins(x: &[f64], bins: usize) -> Vec<f64> {
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return x.to_vec();
    }
    let width = (hi - lo) / bins as f64;
    x.iter()
        .map(|&v| {
            let k = (((v - lo) / width) as usize).min(bins - 1);
            lo + (k as f64 + 0.5) * width
        })
        .collect()
}

/// Runs the full analysis over a stream of samples.
pub fn analyze<I>(samples: I, summary: &EnsembleSummary, options: AnalysisOptions) -> Result<AnalysisReport>
where
    I: IntoIterator<Item = Result<NetworkSample>>,
{
    let mut a = Analyzer::new(summary, options)?;
    for s in samples {
        a.push(&s?)?;
    }
    a.finish()
}

pub const GIVE_RATES_HEADER: &str = "population,agent_global_id,degree,give_rate";

pub fn give_rate_line(r: &AgentRow) -> String {
    format!("{},{},{},{}", r.population, r.agent_global_id, r.degree, r.give_rate)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| x.to_string())
}

impl AnalysisReport {
    pub fn regressions_csv(&self) -> String {
        let mut out = String::from("predictor,binned,slope,intercept,r_squared,n_points\n");
        for r in &self.regressions {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.predictor, r.binned, r.fit.slope, r.fit.intercept, r.fit.r_squared, r.fit.n_points
            );
        }
        out
    }

    fn hist_csv(h: &Histogram) -> String {
        let mut out = String::from("bin_lo,bin_hi,density_strategic\n");
        for (w, d) in h.edges.windows(2).zip(h.densities()) {
            let _ = writeln!(out, "{},{},{}", w[0], w[1], d);
        }
        out
    }

    pub fn delta_csv(&self) -> String {
        Self::hist_csv(&self.delta)
    }

    pub fn epsilon_csv(&self) -> String {
        Self::hist_csv(&self.epsilon)
    }

    pub fn epsilon_all_pairs_csv(&self) -> String {
        Self::hist_csv(&self.epsilon_all_pairs)
    }

    pub fn clustering_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,density_random,density_strategic,percent_difference\n");
        let base = self.clustering_baseline.densities();
        let strat = self.clustering_strategic.densities();
        for (k, w) in self.clustering_baseline.edges.windows(2).enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                w[0],
                w[1],
                base[k],
                strat[k],
                fmt_opt(self.clustering_percent_difference[k])
            );
        }
        out
    }

    pub fn diameter_csv(&self) -> String {
        let mut out = String::from("diameter,count,mean_prestige,stddev_prestige\n");
        for r in &self.diameters {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.diameter, r.count, r.mean_prestige, r.stddev_prestige
            );
        }
        out
    }

    pub fn modes_csv(&self) -> String {
        let mut out = String::from("histogram,mode_center,mode_density\n");
        for (name, modes) in [
            ("delta", &self.delta_modes),
            ("epsilon", &self.epsilon_modes),
            ("epsilon_all_pairs", &self.epsilon_all_pairs_modes),
        ] {
            for m in modes {
                let _ = writeln!(out, "{name},{},{}", m.center, m.density);
            }
        }
        out
    }

    /// Human-readable headline numbers.
    pub fn headline(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "networks={} strategic={} skipped_unconverged={}",
            self.networks, self.strategic_networks, self.skipped_unconverged
        );
        let _ = writeln!(
            out,
            "give_rate mean strategic={:.4} baseline={:.4} ratio={:.4} ratio_vs_bottom={}",
            self.mean_give_rate_strategic,
            self.mean_give_rate_baseline,
            self.give_rate_ratio,
            self.give_rate_ratio_bottom
                .map_or_else(|| "undefined".into(), |r| format!("{r:.4}"))
        );
        let modes: Vec<String> = self
            .epsilon_modes
            .iter()
            .map(|m| format!("{:.3}@{:.3}", m.center, m.density))
            .collect();
        let _ = writeln!(out, "epsilon_modes={}", modes.join(" "));
        let _ = writeln!(
            out,
            "agent_advantage_fraction={:.4} edge_epsilon_negative_fraction={:.4}",
            self.advantage_fraction, self.epsilon_negative_fraction
        );
        let modes: Vec<String> = self
            .epsilon_all_pairs_modes
            .iter()
            .map(|m| format!("{:.3}@{:.3}", m.center, m.density))
            .collect();
        let _ = writeln!(
            out,
            "all_pairs_epsilon_modes={} all_pairs_epsilon_negative_fraction={:.4}",
            modes.join(" "),
            self.epsilon_all_pairs_negative_fraction
        );
        if let (Some(raw), Some(binned)) = (self.regression("degree", false), self.regression("degree", true)) {
            let _ = writeln!(
                out,
                "degree_regression binned: give={:.4}+{:.4}*degree R2={:.5}; raw R2={:.5}",
                binned.intercept, binned.slope, binned.r_squared, raw.r_squared
            );
        }
        let _ = writeln!(
            out,
            "mean_clustering strategic={:.4} baseline={:.4}",
            self.mean_clustering_strategic, self.mean_clustering_baseline
        );
        for r in &self.diameters {
            let _ = writeln!(
                out,
                "diameter={} count={} mean_prestige={:.4} stddev={:.4} strategic_share={:.4}",
                r.diameter,
                r.count,
                r.mean_prestige,
                r.stddev_prestige,
                r.strategic_count as f64 / r.count as f64
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{run_ensemble, ExperimentConfig};

    fn ensemble(count: usize, quantile: f64) -> (Vec<NetworkSample>, EnsembleSummary) {
        let cfg = ExperimentConfig {
            count,
            base_seed: 11,
            quantile,
            ..Default::default()
        };
        let mut out = Vec::new();
        let summary = run_ensemble(&cfg, |s| {
            out.push(s.clone());
            Ok(())
        })
        .unwrap();
        (out, summary)
    }

    #[test]
    fn strategic_equal_to_baseline() {
        let (samples, summary) = ensemble(40, 0.99);
        assert_eq!(summary.strategic_ids.len(), 40);
        let report = analyze(samples.into_iter().map(Ok), &summary, AnalysisOptions::default()).unwrap();
        assert_eq!(report.give_rate_ratio, 1.0);
        assert_eq!(report.give_rate_ratio_bottom, None);
        for pd in report.clustering_percent_difference.iter().flatten() {
            assert_eq!(*pd, 0.0);
        }
    }

    #[test]
    fn report_invariants() {
        let (samples, summary) = ensemble(2000, 0.05);
        let report = analyze(samples.iter().cloned().map(Ok), &summary, AnalysisOptions::default()).unwrap();
        assert_eq!(report.strategic_networks, 100);
        assert!(report.max_identity_residual < 1e-8);
        assert_eq!(report.convexity_violations, 0);
        assert!((0.0..=1.0).contains(&report.advantage_fraction));
        assert!((0.0..=1.0).contains(&report.epsilon_negative_fraction));
        assert_eq!(report.regressions.len(), 2 * PREDICTORS.len());
        let total: u64 = report.diameters.iter().map(|r| r.count).sum();
        assert_eq!(total, 2000);
        assert_eq!(report.epsilon.total(), 100 * 34);
        assert_eq!(report.epsilon_all_pairs.total(), 100 * 100);
        let strategic: u64 = report.diameters.iter().map(|r| r.strategic_count).sum();
        assert_eq!(strategic, 100);

        let again = analyze(samples.into_iter().map(Ok), &summary, AnalysisOptions::default()).unwrap();
        assert_eq!(report, again);
    }

    #[test]
    fn bottom_mode_excludes_strategic() {
        let (samples, summary) = ensemble(400, 0.05);
        let opts = AnalysisOptions {
            baseline: BaselineMode::BottomRemainder,
            ..Default::default()
        };
        let report = analyze(samples.into_iter().map(Ok), &summary, opts).unwrap();
        assert_eq!(report.clustering_baseline.total(), 380);
        assert_eq!(Some(report.give_rate_ratio), report.give_rate_ratio_bottom);
    }

    #[test]
    fn missing_selection() {
        let (samples, mut summary) = ensemble(10, 0.1);
        summary.strategic_ids.clear();
        assert!(matches!(
            analyze(samples.into_iter().map(Ok), &summary, AnalysisOptions::default()),
            Err(Error::MissingSelection)
        ));
    }

    #[test]
    fn csv_shapes() {
        let (samples, summary) = ensemble(200, 0.05);
        let opts = AnalysisOptions { bins: 20, ..Default::default() };
        let report = analyze(samples.into_iter().map(Ok), &summary, opts).unwrap();
        assert_eq!(report.delta_csv().lines().count(), 21);
        assert_eq!(report.clustering_csv().lines().count(), 21);
        assert_eq!(report.regressions_csv().lines().count(), 11);
        assert!(report.modes_csv().starts_with("histogram,mode_center,mode_density\n"));
        assert!(report.diameter_csv().lines().skip(1).all(|l| l.split(',').count() == 4));
    }
}
