//! Rendering and artifact emission: the four-panel K-plot as deterministic
//! SVG, curve tables as CSV, the JSON analysis report, and the end-to-end
//! analyze pipeline the CLI wraps.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytic::{auk_fgm_closed, auk_fgm_mc, auk_fgm_quadrature, FgmParameter};
use crate::estimators::{
    classify_dependence, d_vector, default_classification_tolerance, kendall_curve, DVector,
    DependenceSigns, KendallCurve,
};
use crate::resampling::bootstrap_all;
use crate::rng::derive;
use crate::sample::BivariateSample;
use crate::{Error, Result};

/// Current `schema_version` written into reports.
pub const SCHEMA_VERSION: u32 = 1;

/// A validated four-panel K-plot: panels 0..=3 in order, one shared grid,
/// laid out 2×2 with panel i at row i/2, column i%2.
#[derive(Clone, Debug, PartialEq)]
pub struct KPlotFigure {
    curves: [KendallCurve; 4],
}

impl KPlotFigure {
    pub fn new(curves: [KendallCurve; 4]) -> Result<Self> {
        for (slot, curve) in curves.iter().enumerate() {
            if curve.panel != slot {
                return Err(Error::MisorderedPanels {
                    slot,
                    panel: curve.panel,
                });
            }
            if curve.grid != curves[0].grid {
                return Err(Error::MismatchedGrids);
            }
            if curve.points.len() != curve.grid.len() {
                return Err(Error::MalformedCurve(format!(
                    "panel {slot}: {} points for {} grid values",
                    curve.points.len(),
                    curve.grid.len()
                )));
            }
        }
        Ok(Self { curves })
    }

    pub fn curves(&self) -> &[KendallCurve; 4] {
        &self.curves
    }

    /// Builds the figure straight from a sample.
    pub fn from_sample(sample: &BivariateSample, grid_size: usize) -> Result<Self> {
        Self::new([
            kendall_curve(sample, 0, grid_size)?,
            kendall_curve(sample, 1, grid_size)?,
            kendall_curve(sample, 2, grid_size)?,
            kendall_curve(sample, 3, grid_size)?,
        ])
    }
}

const PANEL_TITLES: [&str; 4] = ["(&lt;, &lt;)", "(≥, &lt;)", "(&lt;, ≥)", "(≥, ≥)"];
const PANEL_SIZE: f64 = 220.0;
const PANEL_GAP: f64 = 50.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;

/// Renders the figure as a standalone SVG string. The output is a pure
/// function of the curves: fixed layout, no timestamps, no generated IDs
/// beyond the four `panel-i` group IDs.
pub fn render_kplot_svg(figure: &KPlotFigure) -> String {
    let width = MARGIN_LEFT + 2.0 * PANEL_SIZE + PANEL_GAP + MARGIN_RIGHT;
    let height = MARGIN_TOP + 2.0 * PANEL_SIZE + PANEL_GAP + MARGIN_BOTTOM;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"11\">"
    );
    for (i, curve) in figure.curves().iter().enumerate() {
        let x0 = MARGIN_LEFT + (i % 2) as f64 * (PANEL_SIZE + PANEL_GAP);
        let y0 = MARGIN_TOP + (i / 2) as f64 * (PANEL_SIZE + PANEL_GAP);
        let map_x = |w: f64| x0 + w * PANEL_SIZE;
        let map_y = |k: f64| y0 + (1.0 - k) * PANEL_SIZE;
        let _ = writeln!(svg, "  <g id=\"panel-{i}\">");
        let _ = writeln!(
            svg,
            "    <rect x=\"{x0}\" y=\"{y0}\" width=\"{PANEL_SIZE}\" height=\"{PANEL_SIZE}\" \
             fill=\"none\" stroke=\"black\"/>"
        );
        let _ = writeln!(
            svg,
            "    <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">Panel {i}: {}</text>",
            x0 + PANEL_SIZE / 2.0,
            y0 - 8.0,
            PANEL_TITLES[i]
        );
        let _ = writeln!(
            svg,
            "    <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" \
             stroke=\"grey\" stroke-dasharray=\"4 3\"/>",
            map_x(0.0),
            map_y(0.0),
            map_x(1.0),
            map_y(1.0)
        );
        for tick in [0.0, 0.5, 1.0] {
            let _ = writeln!(
                svg,
                "    <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"black\"/>",
                map_x(tick),
                y0 + PANEL_SIZE,
                map_x(tick),
                y0 + PANEL_SIZE + 5.0
            );
            let _ = writeln!(
                svg,
                "    <text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"middle\">{tick}</text>",
                map_x(tick),
                y0 + PANEL_SIZE + 18.0
            );
            let _ = writeln!(
                svg,
                "    <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"black\"/>",
                x0 - 5.0,
                map_y(tick),
                x0,
                map_y(tick)
            );
            let _ = writeln!(
                svg,
                "    <text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"end\">{tick}</text>",
                x0 - 8.0,
                map_y(tick) + 4.0
            );
        }
        let mut points = String::new();
        for &(w, k) in &curve.points {
            let _ = write!(points, "{:.3},{:.3} ", map_x(w), map_y(k));
        }
        let _ = writeln!(
            svg,
            "    <polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
            points.trim_end()
        );
        let _ = writeln!(svg, "  </g>");
    }
    let _ = writeln!(
        svg,
        "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">W(t) = t − t·log t</text>",
        MARGIN_LEFT + PANEL_SIZE + PANEL_GAP / 2.0,
        height - 20.0
    );
    let _ = writeln!(
        svg,
        "  <text x=\"18\" y=\"{0:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0:.1})\">K̂ᵢ(t)</text>",
        MARGIN_TOP + PANEL_SIZE + PANEL_GAP / 2.0
    );
    svg.push_str("</svg>\n");
    svg
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the rendered figure to `out`.
pub fn render_kplot(figure: &KPlotFigure, out: &Path) -> Result<()> {
    write_file(out, &render_kplot_svg(figure))
}

/// Curve table as CSV: columns `panel,t,w,k`, panel-major, t ascending.
/// Values use the shortest round-trip float form, so parsing the output
/// reconstructs the curves exactly.
pub fn curves_to_csv(curves: &[KendallCurve]) -> String {
    let mut out = String::from("panel,t,w,k\n");
    for curve in curves {
        for (&t, &(w, k)) in curve.grid.iter().zip(&curve.points) {
            let _ = writeln!(out, "{},{t},{w},{k}", curve.panel);
        }
    }
    out
}

/// Writes [`curves_to_csv`] to `out`.
pub fn export_curves_csv(curves: &[KendallCurve], out: &Path) -> Result<()> {
    write_file(out, &curves_to_csv(curves))
}

/// Parses a CSV produced by [`curves_to_csv`] back into curves, one per
/// distinct panel, in first-appearance order.
pub fn parse_curves_csv(text: &str) -> Result<Vec<KendallCurve>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("panel,t,w,k") => {}
        other => {
            return Err(Error::MalformedCurve(format!(
                "expected header panel,t,w,k, got {other:?}"
            )))
        }
    }
    let mut curves: Vec<KendallCurve> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::MalformedCurve(format!(
                "row {}: expected 4 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| {
                Error::MalformedCurve(format!("row {}: cannot parse {s:?}", lineno + 2))
            })
        };
        let panel = fields[0]
            .parse::<usize>()
            .map_err(|_| Error::MalformedCurve(format!("row {}: bad panel", lineno + 2)))?;
        let (t, w, k) = (parse(fields[1])?, parse(fields[2])?, parse(fields[3])?);
        match curves.iter().position(|c| c.panel == panel) {
            Some(i) if i + 1 == curves.len() => {
                curves[i].grid.push(t);
                curves[i].points.push((w, k));
            }
            Some(_) => {
                return Err(Error::MalformedCurve(format!(
                    "panel {panel} rows are not contiguous"
                )));
            }
            None => curves.push(KendallCurve {
                panel,
                grid: vec![t],
                points: vec![(w, k)],
            }),
        }
    }
    Ok(curves)
}

/// Input-sample metadata carried into the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceInfo {
    pub path: String,
    pub n: usize,
    pub x_tie_count: u64,
    pub y_tie_count: u64,
}

/// One statistic's bootstrap intervals inside the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedInterval {
    pub statistic: String,
    pub point: f64,
    pub levels: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
    pub b: usize,
}

/// The full JSON analysis artifact. Serialization uses shortest
/// round-trip floats, so a parse → serialize cycle is lossless.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub source: SourceInfo,
    pub seed: u64,
    pub grid_size: usize,
    /// Neutrality tolerance used for the dependence labels.
    pub tolerance: f64,
    pub d_vector: DVector,
    pub dependence: DependenceSigns,
    pub intervals: Option<Vec<NamedInterval>>,
    pub version: String,
}

impl AnalysisReport {
    pub fn to_json(&self) -> Result<String> {
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        Ok(json)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Options for the [`analyze`] pipeline; defaults match the CLI defaults.
#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub has_header: bool,
    pub x_col: usize,
    pub y_col: usize,
    /// Bootstrap replication count; `None` skips interval estimation.
    pub bootstrap: Option<usize>,
    pub levels: Vec<f64>,
    pub seed: u64,
    pub grid_size: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            has_header: false,
            x_col: 0,
            y_col: 1,
            bootstrap: None,
            levels: vec![0.90, 0.95],
            seed: 0,
            grid_size: 201,
        }
    }
}

/// End-to-end analysis: loads the CSV, computes the D-vector, labels the
/// dependence (tolerance 2/√n), renders `kplot.svg`, writes `curves.csv`
/// and `report.json` into `out_dir`, and returns the report. The bootstrap,
/// when requested, consumes the sub-stream derived as (seed, 1).
pub fn analyze(input: &Path, out_dir: &Path, options: &AnalyzeOptions) -> Result<AnalysisReport> {
    let sample = BivariateSample::load_csv(input, options.has_header, options.x_col, options.y_col)?;
    let ties = sample.detect_ties();
    let d = d_vector(&sample);
    let tolerance = default_classification_tolerance(sample.n());
    let dependence = classify_dependence(&d, tolerance)?;
    let figure = KPlotFigure::from_sample(&sample, options.grid_size)?;
    let intervals = match options.bootstrap {
        Some(b) => Some(
            bootstrap_all(&sample, b, &options.levels, derive(options.seed, 1))?
                .into_iter()
                .map(|(stat, est)| NamedInterval {
                    statistic: stat.name().to_string(),
                    point: est.point,
                    levels: est.levels,
                    intervals: est.intervals,
                    b: est.b,
                })
                .collect(),
        ),
        None => None,
    };
    let report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        source: SourceInfo {
            path: input.display().to_string(),
            n: sample.n(),
            x_tie_count: ties.x_tie_count,
            y_tie_count: ties.y_tie_count,
        },
        seed: options.seed,
        grid_size: options.grid_size,
        tolerance,
        d_vector: d,
        dependence,
        intervals,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Write {
        path: out_dir.to_path_buf(),
        source,
    })?;
    write_file(&out_dir.join("report.json"), &report.to_json()?)?;
    render_kplot(&figure, &out_dir.join("kplot.svg"))?;
    export_curves_csv(figure.curves(), &out_dir.join("curves.csv"))?;
    Ok(report)
}

/// Evaluation method for the FGM curve table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FgmCurveMethod {
    Closed,
    Quadrature,
    Mc,
}

/// CSV table of (γ, AUK(γ)) over a uniform grid of `steps` points on
/// [gamma_min, gamma_max] ⊂ (−1, 1). The MC method evaluates grid point i
/// with `mc_draws` draws on the sub-stream derived as (seed, i).
pub fn fgm_curve_csv(
    gamma_min: f64,
    gamma_max: f64,
    steps: usize,
    method: FgmCurveMethod,
    mc_draws: usize,
    seed: u64,
) -> Result<String> {
    if !(gamma_min < gamma_max) {
        return Err(Error::InvalidParam {
            name: "gamma_min",
            value: gamma_min,
            requirement: "< gamma_max",
        });
    }
    if steps < 2 {
        return Err(Error::InvalidParam {
            name: "steps",
            value: steps as f64,
            requirement: ">= 2",
        });
    }
    // validating the endpoints covers the whole grid
    FgmParameter::new(gamma_min)?;
    FgmParameter::new(gamma_max)?;
    let mut out = String::from("gamma,auk\n");
    for i in 0..steps {
        let gamma = gamma_min + (gamma_max - gamma_min) * i as f64 / (steps - 1) as f64;
        let p = FgmParameter::new(gamma)?;
        let auk = match method {
            FgmCurveMethod::Closed => auk_fgm_closed(p),
            FgmCurveMethod::Quadrature => auk_fgm_quadrature(p),
            FgmCurveMethod::Mc => auk_fgm_mc(p, mc_draws, derive(seed, i as u64))?,
        };
        let _ = writeln!(out, "{gamma},{auk}");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::{sample_bvn, sample_fgm};

    fn figure(n: usize, grid: usize) -> KPlotFigure {
        let s = sample_bvn(0.4, n, 7).unwrap();
        KPlotFigure::from_sample(&s, grid).unwrap()
    }

    /// Minimal XML well-formedness check: tags balance, attributes quoted.
    fn assert_well_formed_xml(text: &str) {
        let mut stack: Vec<String> = Vec::new();
        let mut rest = text;
        while let Some(start) = rest.find('<') {
            let end = start + rest[start..].find('>').expect("unclosed tag");
            let tag = &rest[start + 1..end];
            rest = &rest[end + 1..];
            if tag.starts_with('?') {
                continue;
            }
            if let Some(name) = tag.strip_prefix('/') {
                assert_eq!(stack.pop().as_deref(), Some(name), "mismatched close");
            } else if !tag.ends_with('/') {
                let name = tag.split_whitespace().next().unwrap().to_string();
                stack.push(name);
            }
            // no raw '<' may remain in text content
            assert!(!tag.contains('<'), "nested < in {tag:?}");
        }
        assert!(stack.is_empty(), "unclosed tags: {stack:?}");
    }

    #[test]
    fn kplot_figure_validates_inputs() {
        let f = figure(80, 21);
        assert_eq!(f.curves()[2].panel, 2);
        let s = sample_bvn(0.4, 80, 7).unwrap();
        let c = |p| kendall_curve(&s, p, 21).unwrap();
        let swapped = KPlotFigure::new([c(0), c(2), c(1), c(3)]);
        assert!(matches!(
            swapped,
            Err(Error::MisorderedPanels { slot: 1, panel: 2 })
        ));
        let mut coarse = c(1);
        coarse.grid = kendall_curve(&s, 1, 11).unwrap().grid;
        coarse.points = kendall_curve(&s, 1, 11).unwrap().points;
        assert!(matches!(
            KPlotFigure::new([c(0), coarse, c(2), c(3)]),
            Err(Error::MismatchedGrids)
        ));
    }

    #[test]
    fn svg_is_deterministic_and_well_formed() {
        let f = figure(120, 41);
        let a = render_kplot_svg(&f);
        let b = render_kplot_svg(&f);
        assert_eq!(a, b);
        assert_well_formed_xml(&a);
        for i in 0..4 {
            assert_eq!(a.matches(&format!("<g id=\"panel-{i}\">")).count(), 1);
        }
        assert!(a.contains("W(t) = t − t·log t"));
        assert!(a.contains("K̂ᵢ(t)"));
    }

    #[test]
    fn independent_sample_curves_hug_the_diagonal() {
        let s = sample_fgm(0.0, 5_000, 23).unwrap();
        let f = KPlotFigure::from_sample(&s, 201).unwrap();
        for curve in f.curves() {
            for &(w, k) in &curve.points {
                assert!((k - w).abs() <= 0.03, "panel {}: |k−w| at w={w}", curve.panel);
            }
        }
    }

    #[test]
    fn curves_csv_row_count_and_round_trip() {
        let f = figure(60, 201);
        let csv = curves_to_csv(f.curves());
        assert_eq!(csv.lines().count(), 1 + 4 * 201);
        assert_eq!(csv, curves_to_csv(f.curves()));
        let parsed = parse_curves_csv(&csv).unwrap();
        assert_eq!(parsed.as_slice(), f.curves().as_slice());
    }

    #[test]
    fn curves_csv_parse_rejects_malformed_input() {
        assert!(parse_curves_csv("panelz\n").is_err());
        assert!(parse_curves_csv("panel,t,w,k\n0,0,0\n").is_err());
        assert!(parse_curves_csv("panel,t,w,k\n0,0,0,zero\n").is_err());
        // non-contiguous panel rows
        let text = "panel,t,w,k\n0,0,0,0\n1,0,0,0\n0,1,1,1\n";
        assert!(parse_curves_csv(text).is_err());
    }

    #[test]
    fn report_json_round_trips() {
        let report = AnalysisReport {
            schema_version: SCHEMA_VERSION,
            source: SourceInfo {
                path: "data.csv".into(),
                n: 200,
                x_tie_count: 0,
                y_tie_count: 3,
            },
            seed: 42,
            grid_size: 201,
            tolerance: 2.0 / (200.0_f64).sqrt(),
            d_vector: DVector::from_components([0.3178, 0.91, 0.88, 0.29]),
            dependence: classify_dependence(
                &DVector::from_components([0.3178, 0.91, 0.88, 0.29]),
                0.01,
            )
            .unwrap(),
            intervals: Some(vec![NamedInterval {
                statistic: "i_auk".into(),
                point: 0.77,
                levels: vec![0.9, 0.95],
                intervals: vec![(0.70, 0.84), (0.68, 0.86)],
                b: 500,
            }]),
            version: "0.0.0".into(),
        };
        let json = report.to_json().unwrap();
        let back = AnalysisReport::from_json(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.to_json().unwrap(), json);
        // unknown fields are rejected, keeping the schema closed
        let spiked = json.replace("\"seed\": 42", "\"seed\": 42, \"extra\": 1");
        assert!(AnalysisReport::from_json(&spiked).is_err());
    }

    #[test]
    fn analyze_writes_all_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("sample.csv");
        let s = sample_bvn(0.6, 150, 5).unwrap();
        s.write_csv(&input).unwrap();
        let out_dir = dir.path().join("out");
        let options = AnalyzeOptions {
            bootstrap: Some(120),
            ..AnalyzeOptions::default()
        };
        let report = analyze(&input, &out_dir, &options).unwrap();
        assert_eq!(report.source.n, 150);
        assert_eq!(report.schema_version, SCHEMA_VERSION);
        let intervals = report.intervals.as_ref().unwrap();
        assert_eq!(intervals.len(), 6);
        assert_eq!(intervals[0].statistic, "auk0");
        let json_disk = std::fs::read_to_string(out_dir.join("report.json")).unwrap();
        assert_eq!(AnalysisReport::from_json(&json_disk).unwrap(), report);
        let svg = std::fs::read_to_string(out_dir.join("kplot.svg")).unwrap();
        assert!(svg.starts_with("<svg"));
        let curves = std::fs::read_to_string(out_dir.join("curves.csv")).unwrap();
        assert_eq!(parse_curves_csv(&curves).unwrap().len(), 4);
        // rerun with the same options is byte-identical
        let report2 = analyze(&input, &out_dir, &options).unwrap();
        assert_eq!(report2.to_json().unwrap(), report.to_json().unwrap());
    }

    #[test]
    fn analyze_missing_input_is_an_input_error() {
        let dir = tempfile::tempdir().unwrap();
        let err = analyze(
            &dir.path().join("absent.csv"),
            &dir.path().join("out"),
            &AnalyzeOptions::default(),
        )
        .unwrap_err();
        assert!(err.is_input_error());
        assert!(!dir.path().join("out").exists());
    }

    #[test]
    fn fgm_curve_table_contents() {
        let csv = fgm_curve_csv(-0.5, 0.5, 3, FgmCurveMethod::Closed, 0, 0).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "gamma,auk");
        assert_eq!(lines.len(), 4);
        // middle row is γ = 0 → quadrature-guard value 1/2
        let mid: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(mid[0], "0");
        let auk: f64 = mid[1].parse().unwrap();
        assert!((auk - 0.5).abs() < 1e-8);

        let quad = fgm_curve_csv(-0.5, 0.5, 3, FgmCurveMethod::Quadrature, 0, 0).unwrap();
        for (lc, lq) in csv.lines().skip(1).zip(quad.lines().skip(1)) {
            let vc: f64 = lc.split(',').nth(1).unwrap().parse().unwrap();
            let vq: f64 = lq.split(',').nth(1).unwrap().parse().unwrap();
            assert!((vc - vq).abs() <= 1e-6);
        }

        let mc = fgm_curve_csv(-0.5, 0.5, 3, FgmCurveMethod::Mc, 50_000, 3).unwrap();
        let vmc: f64 = mc.lines().nth(2).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert!((vmc - 0.5).abs() < 0.01);

        assert!(fgm_curve_csv(0.5, -0.5, 3, FgmCurveMethod::Closed, 0, 0).is_err());
        assert!(fgm_curve_csv(-0.5, 0.5, 1, FgmCurveMethod::Closed, 0, 0).is_err());
        assert!(fgm_curve_csv(-1.0, 0.5, 3, FgmCurveMethod::Closed, 0, 0).is_err());
    }
}
