//! Minimal self-contained SVG charts: axes, tick labels, polylines, points
//! and bars. No fonts or external assets beyond generic `sans-serif`.

use std::fmt::Write as _;

use crate::analysis::AnalysisReport;
use crate::stats::Histogram;

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 300.0;
const MARGIN_L: f64 = 56.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 32.0;
const MARGIN_B: f64 = 44.0;

const COLORS: [&str; 4] = ["#e07b00", "#222222", "#1f77b4", "#2ca02c"];

#[derive(Debug, Clone)]
pub enum Series {
    Line { label: String, points: Vec<(f64, f64)> },
    Points { label: String, points: Vec<(f64, f64)> },
    Bars { label: String, points: Vec<(f64, f64)>, width: f64 },
}

impl Series {
    fn label(&self) -> &str {
        match self {
            Series::Line { label, .. } | Series::Points { label, .. } | Series::Bars { label, .. } => label,
        }
    }

    fn points(&self) -> &[(f64, f64)] {
        match self {
            Series::Line { points, .. } | Series::Points { points, .. } | Series::Bars { points, .. } => points,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

impl Panel {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Panel {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
        }
    }

    pub fn with(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64, f64::NEG_INFINITY);
        for s in &self.series {
            let half = match s {
                Series::Bars { width, .. } => width / 2.0,
                _ => 0.0,
            };
            for &(x, y) in s.points() {
                if !(x.is_finite() && y.is_finite()) {
                    continue;
                }
                x0 = x0.min(x - half);
                x1 = x1.max(x + half);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        }
        if !x0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
        let pad = 0.05 * (y1 - y0);
        (x0, x1, if y0 < 0.0 { y0 - pad } else { y0 }, y1 + pad)
    }

    fn render(&self, out: &mut String, ox: f64, oy: f64) {
        let (x0, x1, y0, y1) = self.bounds();
        let pw = PANEL_W - MARGIN_L - MARGIN_R;
        let ph = PANEL_H - MARGIN_T - MARGIN_B;
        let left = ox + MARGIN_L;
        let top = oy + MARGIN_T;
        let sx = |x: f64| left + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| top + ph - (y - y0) / (y1 - y0) * ph;

        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">{}</text>"#,
            left + pw / 2.0,
            oy + 18.0,
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r##"<path d="M{:.1},{:.1} V{:.1} H{:.1}" fill="none" stroke="#000"/>"##,
            left,
            top,
            top + ph,
            left + pw
        );
        for k in 0..=4 {
            let fx = x0 + (x1 - x0) * k as f64 / 4.0;
            let fy = y0 + (y1 - y0) * k as f64 / 4.0;
            let (px, py) = (sx(fx), sy(fy));
            let _ = writeln!(
                out,
                r##"<path d="M{px:.1},{:.1} v4 M{left:.1},{py:.1} h-4" stroke="#000"/>"##,
                top + ph
            );
            let _ = writeln!(
                out,
                r#"<text x="{px:.1}" y="{:.1}" font-size="10" text-anchor="middle">{}</text>"#,
                top + ph + 16.0,
                tick(fx)
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{}</text>"#,
                left - 6.0,
                py + 3.0,
                tick(fy)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle">{}</text>"#,
            left + pw / 2.0,
            oy + PANEL_H - 8.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">{}</text>"#,
            ox + 14.0,
            top + ph / 2.0,
            ox + 14.0,
            top + ph / 2.0,
            escape(&self.y_label)
        );

        for (k, s) in self.series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let finite = s.points().iter().filter(|(x, y)| x.is_finite() && y.is_finite());
            match s {
                Series::Line { .. } => {
                    let mut d = String::new();
                    for (i, &(x, y)) in finite.enumerate() {
                        let _ = write!(d, "{}{:.1},{:.1}", if i == 0 { "M" } else { " L" }, sx(x), sy(y));
                    }
                    let _ = writeln!(out, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#);
                }
                Series::Points { .. } => {
                    for &(x, y) in finite {
                        let _ = writeln!(
                            out,
                            r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#,
                            sx(x),
                            sy(y)
                        );
                    }
                }
                Series::Bars { width, .. } => {
                    let base = sy(0.0f64.clamp(y0, y1));
                    for &(x, y) in finite {
                        let (a, b) = (sx(x - width / 2.0), sx(x + width / 2.0));
                        let py = sy(y);
                        let _ = writeln!(
                            out,
                            r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="{color}" fill-opacity="0.7"/>"#,
                            a.min(b),
                            py.min(base),
                            (b - a).abs(),
                            (base - py).abs()
                        );
                    }
                }
            }
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" font-size="10" fill="{color}" text-anchor="end">{}</text>"#,
                left + pw - 4.0,
                top + 12.0 + 13.0 * k as f64,
                escape(s.label())
            );
        }
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Lays panels out left to right in one SVG document.
pub fn render(panels: &[Panel]) -> String {
    let width = PANEL_W * panels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL_H}" viewBox="0 0 {width} {PANEL_H}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#fff"/>"##);
    for (k, p) in panels.iter().enumerate() {
        p.render(&mut out, k as f64 * PANEL_W, 0.0);
    }
    out.push_str("</svg>\n");
    out
}

fn density_points(h: &Histogram) -> Vec<(f64, f64)> {
    h.centers().into_iter().zip(h.densities()).collect()
}

/// The five report figures as `(file stem, svg document)`.
pub fn figures(report: &AnalysisReport) -> Vec<(&'static str, String)> {
    let mut figs = Vec::with_capacity(5);

    let fig1 = Panel::new("Give-rate distributions", "give rate", "density")
        .with(Series::Line {
            label: format!("strategic (mean {:.3})", report.mean_give_rate_strategic),
            points: density_points(&report.give_rate_strategic),
        })
        .with(Series::Line {
            label: format!("random (mean {:.3})", report.mean_give_rate_baseline),
            points: density_points(&report.give_rate_baseline),
        });
    figs.push(("fig1_give_rates", render(&[fig1])));

    let mut panels = Vec::new();
    for name in ["degree", "betweenness", "closeness", "eigenvector"] {
        let mut p = Panel::new(name, name, "give rate");
        if let Some(fit) = report.regression(name, true) {
            let pts = report.binned(name).unwrap_or_default().to_vec();
            let (lo, hi) = pts
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &(x, _)| (a.min(x), b.max(x)));
            p = p
                .with(Series::Points {
                    label: "binned mean".into(),
                    points: pts,
                })
                .with(Series::Line {
                    label: format!("R2 {:.4}", fit.r_squared),
                    points: vec![(lo, fit.intercept + fit.slope * lo), (hi, fit.intercept + fit.slope * hi)],
                });
        }
        panels.push(p);
    }
    figs.push(("fig2_centrality", render(&panels)));

    let delta = Panel::new("delta deviations", "delta", "density").with(Series::Line {
        label: "strategic".into(),
        points: density_points(&report.delta),
    });
    let eps = Panel::new("epsilon deviations", "epsilon", "density").with(Series::Line {
        label: "strategic".into(),
        points: density_points(&report.epsilon),
    });
    figs.push(("fig3_deviations", render(&[delta, eps])));

    let centers = report.clustering_baseline.centers();
    let width = centers.get(1).map_or(1.0, |c| c - centers[0]) * 0.9;
    let pd: Vec<(f64, f64)> = centers
        .iter()
        .zip(&report.clustering_percent_difference)
        .filter_map(|(&c, d)| d.map(|d| (c, d)))
        .collect();
    let fig4 = Panel::new("Clustering: strategic vs random", "mean clustering", "percent difference")
        .with(Series::Bars {
            label: "percent difference".into(),
            points: pd,
            width,
        });
    figs.push(("fig4_clustering", render(&[fig4])));

    let fig5 = Panel::new("Prestige by diameter", "diameter", "mean prestige").with(Series::Bars {
        label: "mean prestige".into(),
        points: report
            .diameters
            .iter()
            .map(|r| (r.diameter as f64, r.mean_prestige))
            .collect(),
        width: 0.6,
    });
    figs.push(("fig5_diameter", render(&[fig5])));

    figs
}
