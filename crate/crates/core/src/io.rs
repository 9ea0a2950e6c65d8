//! JSONL sample records, the summary file and atomic file output.
//!
//! Records are written by hand so that every float carries exactly 17
//! significant digits and the bytes are a pure function of the sample.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::ensemble::{EnsembleSummary, NetworkSample};
use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::likecentrality::{self, LikeCentralityVector, RateMatrix};

/// Formats a finite float with 17 significant digits in plain decimal
/// notation (scientific for magnitudes outside `1e-5..1e17`). Seventeen
/// digits always round-trip an IEEE-754 double.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    if !x.is_finite() {
        // JSON has no literal for these; callers validate finiteness first.
        return "null".into();
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if !(-5..17).contains(&exp) {
        return sci;
    }
    let decimals = (16 - exp).max(0) as usize;
    let plain = format!("{x:.decimals$}");
    if plain.contains('.') {
        plain
    } else {
        plain + ".0"
    }
}

fn push_edges(out: &mut String, g: &Graph) {
    out.push('[');
    for (k, (i, j)) in g.edges().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "[{i},{j}]");
    }
    out.push(']');
}

fn push_rates(out: &mut String, r: &RateMatrix) {
    out.push('[');
    for (k, (i, j, v)) in r.triples().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "[{i},{j},{}]", fmt_f64(v));
    }
    out.push(']');
}

/// One `samples.jsonl` line, without the trailing newline.
pub fn sample_record(s: &NetworkSample) -> String {
    let mut out = String::with_capacity(2048);
    let _ = write!(out, "{{\"id\":{},\"seed\":\"{}\",\"n\":{},\"edges\":", s.id, s.seed, s.graph.n());
    push_edges(&mut out, &s.graph);
    out.push_str(",\"rates\":");
    push_rates(&mut out, &s.rates);
    out.push_str(",\"lc\":[");
    for (k, v) in s.lc.values.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        out.push_str(&fmt_f64(*v));
    }
    let _ = write!(
        out,
        "],\"prestige\":{},\"converged\":{},\"iterations\":{},\"mean_clustering\":{},\"diameter\":{}}}",
        fmt_f64(s.prestige),
        s.lc.converged,
        s.lc.iterations,
        fmt_f64(s.mean_clustering),
        s.diameter
    );
    out
}

/// A graph with sampled but unsolved rates, as written by `generate`.
pub fn network_record(id: u64, seed: u64, g: &Graph, r: &RateMatrix) -> String {
    let mut out = String::with_capacity(1024);
    let _ = write!(out, "{{\"id\":{id},\"seed\":\"{seed}\",\"n\":{},\"edges\":", g.n());
    push_edges(&mut out, g);
    out.push_str(",\"rates\":");
    push_rates(&mut out, r);
    out.push('}');
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSample {
    id: u64,
    seed: String,
    n: usize,
    edges: Vec<(usize, usize)>,
    rates: Vec<(usize, usize, f64)>,
    lc: Vec<f64>,
    prestige: f64,
    converged: bool,
    iterations: usize,
    mean_clustering: f64,
    diameter: usize,
}

/// A single network as accepted by `solve`: `n` is optional and defaults to
/// one past the largest node index.
#[derive(Deserialize)]
pub struct NetworkInput {
    #[serde(default)]
    pub n: Option<usize>,
    pub edges: Vec<(usize, usize)>,
    pub rates: Vec<(usize, usize, f64)>,
}

impl NetworkInput {
    pub fn parse(text: &str) -> Result<(Graph, RateMatrix)> {
        let raw: NetworkInput = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("malformed network JSON: {e}")))?;
        let n = raw.n.unwrap_or_else(|| {
            raw.edges
                .iter()
                .map(|&(a, b)| a.max(b) + 1)
                .max()
                .unwrap_or(0)
        });
        let g = Graph::from_edges(n, &raw.edges)?;
        let r = RateMatrix::from_triples(&g, &raw.rates)?;
        Ok((g, r))
    }
}

/// Relative slack allowed when re-deriving stored floats.
const RECHECK_TOL: f64 = 1e-9;

fn parse_sample(path: &Path, line: usize, text: &str) -> Result<NetworkSample> {
    let violation = |field: &'static str, msg: String| Error::InvariantViolation {
        path: path.to_path_buf(),
        line,
        field,
        msg,
    };
    let raw: RawSample = serde_json::from_str(text).map_err(|e| Error::MalformedRecord {
        path: path.to_path_buf(),
        line,
        msg: e.to_string(),
    })?;
    let seed: u64 = raw
        .seed
        .parse()
        .map_err(|_| violation("seed", format!("`{}` is not a u64", raw.seed)))?;

    if !raw.edges.windows(2).all(|w| w[0] < w[1]) || raw.edges.iter().any(|&(i, j)| i >= j) {
        return Err(violation("edges", "pairs must have i < j and be sorted".into()));
    }
    let graph = Graph::from_edges(raw.n, &raw.edges).map_err(|e| violation("edges", e.to_string()))?;
    if !graph.is_connected() {
        return Err(violation("edges", "graph is disconnected".into()));
    }

    if !raw
        .rates
        .windows(2)
        .all(|w| (w[0].0, w[0].1) < (w[1].0, w[1].1))
    {
        return Err(violation("rates", "triples must be sorted by (i, j)".into()));
    }
    let rates = RateMatrix::from_triples(&graph, &raw.rates).map_err(|e| violation("rates", e.to_string()))?;

    if raw.lc.len() != raw.n {
        return Err(violation("lc", format!("expected {} values, got {}", raw.n, raw.lc.len())));
    }
    if let Some(v) = raw.lc.iter().find(|v| !(**v >= 0.0 && **v <= 1.0)) {
        return Err(violation("lc", format!("value {v} outside [0, 1]")));
    }
    let sum: f64 = raw.lc.iter().sum();
    if (sum - raw.prestige).abs() > RECHECK_TOL * raw.n.max(1) as f64 {
        return Err(violation("prestige", format!("{} differs from Σ lc = {sum}", raw.prestige)));
    }
    let clustering = graph::mean_clustering(&graph);
    if (clustering - raw.mean_clustering).abs() > RECHECK_TOL {
        return Err(violation(
            "mean_clustering",
            format!("{} differs from recomputed {clustering}", raw.mean_clustering),
        ));
    }
    let diameter = graph::diameter(&graph).map_err(|e| violation("diameter", e.to_string()))?;
    if diameter != raw.diameter {
        return Err(violation(
            "diameter",
            format!("{} differs from recomputed {diameter}", raw.diameter),
        ));
    }
    let residual_sup = likecentrality::residual(&graph, &rates, &raw.lc).cleared_sup();

    Ok(NetworkSample {
        id: raw.id,
        seed,
        graph,
        rates,
        lc: LikeCentralityVector {
            values: raw.lc,
            converged: raw.converged,
            iterations: raw.iterations,
            residual_sup,
        },
        prestige: raw.prestige,
        mean_clustering: raw.mean_clustering,
        diameter: raw.diameter,
    })
}

/// Streaming reader over a `samples.jsonl` file. Yields an error for the
/// first bad line and stops there.
pub struct SampleReader {
    path: PathBuf,
    lines: std::io::Lines<BufReader<File>>,
    line: usize,
    failed: bool,
}

impl SampleReader {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = File::open(&path).map_err(|e| Error::io(&path, e))?;
        Ok(SampleReader {
            path,
            lines: BufReader::with_capacity(1 << 20, file).lines(),
            line: 0,
            failed: false,
        })
    }
}

impl Iterator for SampleReader {
    type Item = Result<NetworkSample>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let text = match self.lines.next()? {
            Ok(t) => t,
            Err(e) => {
                self.failed = true;
                return Some(Err(Error::io(&self.path, e)));
            }
        };
        self.line += 1;
        let item = parse_sample(&self.path, self.line, &text);
        self.failed = item.is_err();
        Some(item)
    }
}

pub fn load_samples(path: impl AsRef<Path>) -> Result<Vec<NetworkSample>> {
    SampleReader::open(path)?.collect()
}

pub fn save_samples<'a, I>(samples: I, path: impl AsRef<Path>) -> Result<()>
where
    I: IntoIterator<Item = &'a NetworkSample>,
{
    let mut out = AtomicFile::create(path)?;
    for s in samples {
        out.write_line(&sample_record(s))?;
    }
    out.commit()
}

pub fn summary_json(s: &EnsembleSummary) -> String {
    let ids: Vec<String> = s.strategic_ids.iter().map(u64::to_string).collect();
    format!(
        "{{\"count\":{},\"mu\":{},\"sigma2\":{},\"quantile\":{},\"threshold\":{},\"strategic_ids\":[{}],\"convergence_failures\":{}}}\n",
        s.count,
        fmt_f64(s.mu),
        fmt_f64(s.sigma2),
        fmt_f64(s.quantile),
        fmt_f64(s.threshold),
        ids.join(","),
        s.convergence_failures
    )
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSummary {
    count: usize,
    mu: f64,
    sigma2: f64,
    quantile: f64,
    threshold: f64,
    strategic_ids: Vec<u64>,
    convergence_failures: usize,
}

pub fn load_summary(path: impl AsRef<Path>) -> Result<EnsembleSummary> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let raw: RawSummary = serde_json::from_str(&text).map_err(|e| Error::MalformedRecord {
        path: path.to_path_buf(),
        line: e.line(),
        msg: e.to_string(),
    })?;
    let mut strategic_ids = raw.strategic_ids;
    strategic_ids.sort_unstable();
    Ok(EnsembleSummary {
        count: raw.count,
        mu: raw.mu,
        sigma2: raw.sigma2,
        quantile: raw.quantile,
        threshold: raw.threshold,
        strategic_ids,
        convergence_failures: raw.convergence_failures,
    })
}

pub fn save_summary(s: &EnsembleSummary, path: impl AsRef<Path>) -> Result<()> {
    let mut out = AtomicFile::create(path)?;
    out.write_str(&summary_json(s))?;
    out.commit()
}

/// Buffered writer to `<path>.tmp` that is renamed onto `path` on commit.
/// Dropping it uncommitted removes the temporary file.
pub struct AtomicFile {
    path: PathBuf,
    tmp: PathBuf,
    writer: Option<BufWriter<File>>,
}

impl AtomicFile {
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut tmp = path.clone().into_os_string();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        let file = File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        Ok(AtomicFile {
            path,
            tmp,
            writer: Some(BufWriter::with_capacity(1 << 20, file)),
        })
    }

    pub fn write_str(&mut self, s: &str) -> Result<()> {
        let w = self.writer.as_mut().expect("writer is live until commit");
        w.write_all(s.as_bytes()).map_err(|e| Error::io(&self.tmp, e))
    }

    pub fn write_line(&mut self, s: &str) -> Result<()> {
        self.write_str(s)?;
        self.write_str("\n")
    }

    pub fn commit(mut self) -> Result<()> {
        let w = self.writer.take().expect("writer is live until commit");
        let file = w.into_inner().map_err(|e| Error::io(&self.tmp, e.into_error()))?;
        file.sync_all().map_err(|e| Error::io(&self.tmp, e))?;
        fs::rename(&self.tmp, &self.path).map_err(|e| Error::io(&self.path, e))
    }
}

impl Drop for AtomicFile {
    fn drop(&mut self) {
        if self.writer.take().is_some() {
            let _ = fs::remove_file(&self.tmp);
        }
    }
}
