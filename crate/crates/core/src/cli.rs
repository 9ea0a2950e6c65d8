//! `likesim` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numerical failure
//! (non-convergence, degenerate network, failure-rate abort).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{self, AnalysisOptions, Analyzer, BaselineMode};
use crate::ensemble::{self, ExperimentConfig, PrestigeEntry};
use crate::error::{Error, Result};
use crate::graph;
use crate::io::{self, AtomicFile, NetworkInput, SampleReader};
use crate::likecentrality::{self, SolverSettings};
use crate::seed;
use crate::svg;

/// Environment variable that overrides the worker count.
pub const THREADS_ENV: &str = "LIKESIM_THREADS";

#[derive(Debug, Parser)]
#[command(name = "likesim", version, about = "Like-centrality ensembles on random social graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write random BA graphs with sampled (unsolved) like rates as JSONL.
    Generate(GenerateArgs),
    /// Solve the like-centrality system for one network read from JSON.
    Solve(SolveArgs),
    /// Run a seeded ensemble and write samples.jsonl and summary.json.
    Experiment(ExperimentArgs),
    /// Analyze a persisted ensemble into CSV tables and optional SVG charts.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    count: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SolverArgs {
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    damping: Option<f64>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, alias = "base-seed")]
    seed: Option<u64>,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    quantile: Option<f64>,
    /// 0 picks one worker per core.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long)]
    in_dir: PathBuf,
    /// Defaults to the input directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 60)]
    bins: usize,
    #[arg(long)]
    emit_svg: bool,
    /// full-ensemble or bottom-remainder.
    #[arg(long, default_value = "full-ensemble")]
    baseline: BaselineMode,
    /// Re-select the strategic set at this quantile instead of using the
    /// summary's selection.
    #[arg(long)]
    quantile: Option<f64>,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => return cmd_solve(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Analyze(a) => cmd_analyze(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => report(&e),
    }
}

fn report(e: &Error) -> i32 {
    eprintln!("likesim: {e}");
    if e.is_numerical() {
        2
    } else {
        1
    }
}

fn cmd_generate(a: GenerateArgs) -> Result<()> {
    let mut out = AtomicFile::create(&a.out)?;
    for id in 0..a.count as u64 {
        let s = seed::split(a.seed, id);
        let g = graph::generate_ba(a.n, a.m, s)?;
        let r = likecentrality::sample_rates(&g, s);
        out.write_line(&io::network_record(id, s, &g, &r))?;
    }
    out.commit()
}

impl SolverArgs {
    fn apply(&self, base: SolverSettings) -> SolverSettings {
        SolverSettings {
            tol: self.tol.unwrap_or(base.tol),
            max_iters: self.max_iters.unwrap_or(base.max_iters),
            damping: self.damping.unwrap_or(base.damping),
        }
    }
}

fn cmd_solve(a: SolveArgs) -> i32 {
    let outcome = (|| {
        let text = fs::read_to_string(&a.input).map_err(|e| Error::io(&a.input, e))?;
        let (g, r) = NetworkInput::parse(&text)?;
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let settings = a.solver.apply(SolverSettings::default());
        let lc = likecentrality::solve_lc(&g, &r, &settings)?;
        Ok((g, r, lc))
    })();
    let (g, r, lc) = match outcome {
        Ok(v) => v,
        Err(e) => return report(&e),
    };
    for i in 0..g.n() {
        if r.received(i).iter().all(|&(_, v)| v == 0.0) {
            eprintln!("likesim: warning: node {i} receives only zero rates; its centrality is 0");
        }
    }
    let out = serde_json::json!({
        "lc": lc.values,
        "prestige": likecentrality::prestige(&lc),
        "converged": lc.converged,
        "iterations": lc.iterations,
        "residual": lc.residual_sup,
    });
    println!("{out}");
    if lc.converged {
        0
    } else {
        eprintln!(
            "likesim: no convergence after {} iterations (last residual {:e})",
            lc.iterations, lc.residual_sup
        );
        2
    }
}

/// Reads a flat `key = value` config file. Blank lines and `#` comments are
/// ignored; later keys override earlier ones.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("config line {}: expected `key = value`", k + 1))
        })?;
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

fn config_value<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| Error::InvalidParameter(format!("config key `{key}`: cannot parse `{v}`")))
        })
        .transpose()
}

const CONFIG_KEYS: [&str; 10] = [
    "count", "n", "m", "base_seed", "tol", "max_iters", "damping", "quantile", "workers", "out_dir",
];

fn experiment_config(a: &ExperimentArgs) -> Result<(ExperimentConfig, PathBuf)> {
    let file = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            parse_config(&text)?
        }
        None => BTreeMap::new(),
    };
    if let Some(key) = file.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
        return Err(Error::InvalidParameter(format!("unknown config key `{key}`")));
    }
    let d = ExperimentConfig::default();
    let solver = SolverSettings {
        tol: config_value(&file, "tol")?.unwrap_or(d.solver.tol),
        max_iters: config_value(&file, "max_iters")?.unwrap_or(d.solver.max_iters),
        damping: config_value(&file, "damping")?.unwrap_or(d.solver.damping),
    };
    let mut cfg = ExperimentConfig {
        count: a.count.or(config_value(&file, "count")?).unwrap_or(d.count),
        n: a.n.or(config_value(&file, "n")?).unwrap_or(d.n),
        m: a.m.or(config_value(&file, "m")?).unwrap_or(d.m),
        base_seed: a.seed.or(config_value(&file, "base_seed")?).unwrap_or(d.base_seed),
        solver: a.solver.apply(solver),
        quantile: a.quantile.or(config_value(&file, "quantile")?).unwrap_or(d.quantile),
        workers: a.workers.or(config_value(&file, "workers")?).unwrap_or(d.workers),
    };
    if let Ok(v) = std::env::var(THREADS_ENV) {
        cfg.workers = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{THREADS_ENV} must be a count, got `{v}`")))?;
    }
    let out_dir = a
        .out_dir
        .clone()
        .or(config_value(&file, "out_dir")?)
        .ok_or_else(|| Error::InvalidParameter("missing --out-dir".into()))?;
    cfg.validate()?;
    Ok((cfg, out_dir))
}

fn cmd_experiment(a: ExperimentArgs) -> Result<()> {
    let (cfg, out_dir) = experiment_config(&a)?;
    fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
    let mut samples = AtomicFile::create(out_dir.join("samples.jsonl"))?;
    let summary = ensemble::run_ensemble(&cfg, |s| samples.write_line(&io::sample_record(s)))?;
    samples.commit()?;
    io::save_summary(&summary, out_dir.join("summary.json"))?;
    println!(
        "count={} mu={:.6} sigma2={:.6} failures={}",
        summary.count, summary.mu, summary.sigma2, summary.convergence_failures
    );
    Ok(())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let mut f = AtomicFile::create(dir.join(name))?;
    f.write_str(contents)?;
    f.commit()
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<()> {
    if a.bins == 0 {
        return Err(Error::InvalidParameter("--bins must be at least 1".into()));
    }
    let samples_path = a.in_dir.join("samples.jsonl");
    let mut summary = io::load_summary(a.in_dir.join("summary.json"))?;
    if let Some(q) = a.quantile {
        let entries = SampleReader::open(&samples_path)?
            .map(|s| s.map(|s| PrestigeEntry::from(&s)))
            .collect::<Result<Vec<_>>>()?;
        summary = ensemble::summarize(&entries, q)?;
    }
    let out_dir = a.out_dir.clone().unwrap_or_else(|| a.in_dir.clone());
    fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;

    let options = AnalysisOptions {
        bins: a.bins,
        baseline: a.baseline,
    };
    let mut analyzer = Analyzer::new(&summary, options)?;
    let mut give_rates = AtomicFile::create(out_dir.join("give_rates.csv"))?;
    give_rates.write_line(analysis::GIVE_RATES_HEADER)?;
    for s in SampleReader::open(&samples_path)? {
        for row in analyzer.push(&s?)? {
            give_rates.write_line(&analysis::give_rate_line(&row))?;
        }
    }
    let report = analyzer.finish()?;
    give_rates.commit()?;

    write_file(&out_dir, "regressions.csv", &report.regressions_csv())?;
    write_file(&out_dir, "delta_hist.csv", &report.delta_csv())?;
    write_file(&out_dir, "epsilon_hist.csv", &report.epsilon_csv())?;
    write_file(&out_dir, "epsilon_all_pairs_hist.csv", &report.epsilon_all_pairs_csv())?;
    write_file(&out_dir, "clustering_diff.csv", &report.clustering_csv())?;
    write_file(&out_dir, "diameter_prestige.csv", &report.diameter_csv())?;
    write_file(&out_dir, "modes.csv", &report.modes_csv())?;
    if a.emit_svg {
        for (stem, doc) in svg::figures(&report) {
            write_file(&out_dir, &format!("{stem}.svg"), &doc)?;
        }
    }
    print!("{}", report.headline());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let map = parse_config("# experiment\ncount = 10\n\nbase_seed=4 # trailing\n").unwrap();
        assert_eq!(map.get("count").map(String::as_str), Some("10"));
        assert_eq!(map.get("base_seed").map(String::as_str), Some("4"));
        assert!(parse_config("count 10").is_err());
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.cfg");
        fs::write(&path, "count = 10\nn = 12\nquantile = 0.2\nout_dir = /tmp/x\n").unwrap();
        let args = Cli::try_parse_from([
            "likesim",
            "experiment",
            "--config",
            path.to_str().unwrap(),
            "--count",
            "20",
        ])
        .unwrap();
        let Command::Experiment(a) = args.command else { panic!() };
        let (cfg, out) = experiment_config(&a).unwrap();
        assert_eq!((cfg.count, cfg.n, cfg.m, cfg.quantile), (20, 12, 2, 0.2));
        assert_eq!(out, PathBuf::from("/tmp/x"));
    }

    #[test]
    fn unknown_config_key() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.cfg");
        fs::write(&path, "cuont = 10\n").unwrap();
        let args = Cli::try_parse_from(["likesim", "experiment", "--config", path.to_str().unwrap()]).unwrap();
        let Command::Experiment(a) = args.command else { panic!() };
        assert!(experiment_config(&a).is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["likesim", "generate", "--count", "2"]), 1);
        assert_eq!(run(["likesim", "frobnicate"]), 1);
        assert_eq!(run(["likesim", "--help"]), 0);
    }
}
