//! The cross-validation matrix: methods × directions × folds.
//!
//! Every cell trains on one fold's training pairs and scores its test pairs.
//! Cells run in parallel; a failing cell is recorded and the rest continue.
//! Reports are assembled in (method, direction, fold) order so the written
//! CSV is byte-identical across runs with the same configuration.

use crate::ann::{evaluate_ann_fold, TrainConfig, WindowConfig, DEFAULT_WINDOW};
use crate::dataset::{parse_corpus, Corpus, ParseMode, ParseWarning};
use crate::error::{Error, Result};
use crate::seqstruct::{evaluate_fold, ClassMode, Decoder, EvalOptions, EvalReport, ModelDirection};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Hmm,
    Ann,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Hmm => "hmm",
            Method::Ann => "ann",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hmm" => Ok(Method::Hmm),
            "ann" => Ok(Method::Ann),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HmmOptions {
    pub pseudocount: f64,
    pub decoder: Decoder,
    pub classes: ClassMode,
}

impl Default for HmmOptions {
    fn default() -> Self {
        HmmOptions {
            pseudocount: 1.0,
            decoder: Decoder::Posterior,
            classes: ClassMode::Eight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnnOptions {
    pub window: usize,
    pub learning_rate: f64,
    pub iterations_per_position: usize,
    pub epochs: usize,
    pub hidden: Vec<usize>,
    pub seed: u64,
    pub init_scale: f64,
    pub shuffled_sgd: bool,
}

impl Default for AnnOptions {
    fn default() -> Self {
        let t = TrainConfig::default();
        AnnOptions {
            window: DEFAULT_WINDOW,
            learning_rate: t.learning_rate,
            iterations_per_position: t.iterations_per_position,
            epochs: t.epochs,
            hidden: t.hidden,
            seed: t.seed,
            init_scale: t.init_scale,
            shuffled_sgd: t.shuffled_sgd,
        }
    }
}

impl AnnOptions {
    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            learning_rate: self.learning_rate,
            iterations_per_position: self.iterations_per_position,
            epochs: self.epochs,
            seed: self.seed,
            init_scale: self.init_scale,
            hidden: self.hidden.clone(),
            shuffled_sgd: self.shuffled_sgd,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub corpus: PathBuf,
    pub parse_mode: ParseMode,
    pub methods: Vec<Method>,
    pub directions: Vec<ModelDirection>,
    pub folds: usize,
    pub hmm: HmmOptions,
    pub ann: AnnOptions,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            corpus: PathBuf::new(),
            parse_mode: ParseMode::Strict,
            methods: vec![Method::Hmm, Method::Ann],
            directions: vec![ModelDirection::StructureHidden, ModelDirection::SequenceHidden],
            folds: 5,
            hmm: HmmOptions::default(),
            ann: AnnOptions::default(),
            output_dir: PathBuf::from("."),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::InvalidArgument("at least one method is required".into()));
        }
        if self.directions.is_empty() {
            return Err(Error::InvalidArgument("at least one direction is required".into()));
        }
        if self.folds < 2 {
            return Err(Error::InvalidArgument(format!(
                "cross-validation needs at least 2 folds, got {}",
                self.folds
            )));
        }
        if !(self.hmm.pseudocount.is_finite() && self.hmm.pseudocount >= 0.0) {
            return Err(Error::InvalidArgument(format!("bad pseudocount {}", self.hmm.pseudocount)));
        }
        self.ann.train_config().validate()?;
        if self.ann.window.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("window must be odd, got {}", self.ann.window)));
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(Method, ModelDirection, usize)> {
        let mut methods = self.methods.clone();
        methods.sort();
        methods.dedup();
        let mut dirs = self.directions.clone();
        dirs.sort();
        dirs.dedup();
        let mut cells = Vec::new();
        for &m in &methods {
            for &d in &dirs {
                for f in 0..self.folds {
                    cells.push((m, d, f));
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub method: Method,
    pub direction: ModelDirection,
    /// 1-based.
    pub fold: usize,
    pub train_span: String,
    pub test_span: String,
    pub mean_q3: f64,
    pub n_test: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub method: Method,
    pub direction: ModelDirection,
    pub n_folds: usize,
    pub mean: f64,
    /// Sample standard deviation of the fold means; 0 for a single fold.
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub method: Method,
    pub direction: ModelDirection,
    pub fold: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub rows: Vec<ReportRow>,
    pub summary: Vec<SummaryRow>,
    pub failures: Vec<CellFailure>,
}

pub fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = if values.len() < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    (mean, sd)
}

impl ComparisonReport {
    /// Orders rows and failures and recomputes the summary block.
    pub fn from_parts(mut rows: Vec<ReportRow>, mut failures: Vec<CellFailure>) -> Self {
        rows.sort_by_key(|r| (r.method, r.direction, r.fold));
        failures.sort_by_key(|f| (f.method, f.direction, f.fold));
        let mut summary: Vec<SummaryRow> = Vec::new();
        for group in rows.chunk_by(|a, b| (a.method, a.direction) == (b.method, b.direction)) {
            let q: Vec<f64> = group.iter().map(|r| r.mean_q3).collect();
            let (mean, sd) = mean_and_sd(&q);
            summary.push(SummaryRow {
                method: group[0].method,
                direction: group[0].direction,
                n_folds: q.len(),
                mean,
                sd,
            });
        }
        ComparisonReport { rows, summary, failures }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

pub fn row_from_report(method: Method, report: &EvalReport) -> ReportRow {
    ReportRow {
        method,
        direction: report.direction,
        fold: report.fold.index + 1,
        train_span: report.fold.train_span(),
        test_span: report.fold.test_span(),
        mean_q3: report.mean_q3,
        n_test: report.per_pair.len(),
    }
}

/// Timing and outcome of one cell, for the run log.
#[derive(Debug, Clone)]
pub struct CellLog {
    pub method: Method,
    pub direction: ModelDirection,
    pub fold: usize,
    pub elapsed: Duration,
    pub outcome: std::result::Result<f64, String>,
}

impl CellLog {
    pub fn line(&self) -> String {
        let status = match &self.outcome {
            Ok(q) => format!("ok mean_q3={q:.4}"),
            Err(e) => format!("FAILED {e}"),
        };
        format!(
            "{} {} fold={} elapsed_ms={:.1} {}",
            self.method,
            self.direction,
            self.fold,
            self.elapsed.as_secs_f64() * 1e3,
            status
        )
    }
}

pub struct MatrixRun {
    pub report: ComparisonReport,
    pub log: Vec<CellLog>,
}

/// Runs every cell of the matrix over an in-memory corpus.
pub fn run_matrix(corpus: &Corpus, cfg: &ExperimentConfig) -> Result<MatrixRun> {
    cfg.validate()?;
    let folds = corpus.folds(cfg.folds)?;
    let eval = EvalOptions {
        pseudocount: cfg.hmm.pseudocount,
        decoder: cfg.hmm.decoder,
        classes: cfg.hmm.classes,
        ..EvalOptions::new(ModelDirection::StructureHidden)
    };
    let tcfg = cfg.ann.train_config();
    let outcomes: Vec<(CellLog, Option<EvalReport>)> = cfg
        .cells()
        .into_par_iter()
        .map(|(method, direction, f)| {
            let start = Instant::now();
            let fold = &folds[f];
            let result = match method {
                Method::Hmm => evaluate_fold(corpus, fold, &EvalOptions { direction, ..eval }),
                Method::Ann => WindowConfig::for_direction(direction, cfg.ann.window)
                    .and_then(|w| evaluate_ann_fold(corpus, fold, direction, &w, &tcfg)),
            };
            let log = CellLog {
                method,
                direction,
                fold: f + 1,
                elapsed: start.elapsed(),
                outcome: result.as_ref().map(|r| r.mean_q3).map_err(|e| e.to_string()),
            };
            (log, result.ok())
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut log = Vec::new();
    for (entry, report) in outcomes {
        match (&report, &entry.outcome) {
            (Some(r), _) => rows.push(row_from_report(entry.method, r)),
            (None, Err(e)) => failures.push(CellFailure {
                method: entry.method,
                direction: entry.direction,
                fold: entry.fold,
                error: e.clone(),
            }),
            (None, Ok(_)) => unreachable!("a successful cell always has a report"),
        }
        log.push(entry);
    }
    Ok(MatrixRun {
        report: ComparisonReport::from_parts(rows, failures),
        log,
    })
}

pub struct ExperimentOutcome {
    pub report: ComparisonReport,
    pub warnings: Vec<ParseWarning>,
    pub output_dir: PathBuf,
}

impl ExperimentOutcome {
    pub fn succeeded(&self) -> bool {
        self.report.failures.is_empty()
    }
}

/// Loads the corpus, runs the matrix and writes `report.csv`, `report.json`,
/// `comparison.svg` and `run.log` into the output directory.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let text = std::fs::read_to_string(&cfg.corpus)
        .map_err(|e| Error::Io(format!("{}: {e}", cfg.corpus.display())))?;
    let parsed = parse_corpus(&text, cfg.parse_mode)?;
    let run = run_matrix(&parsed.corpus, cfg)?;
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir)?;
    let mut log = String::new();
    for w in &parsed.warnings {
        let _ = writeln!(log, "warning: {}", w.message);
    }
    for entry in &run.log {
        let _ = writeln!(log, "{}", entry.line());
    }
    std::fs::write(dir.join("run.log"), log)?;
    std::fs::write(dir.join("report.json"), run.report.to_json())?;
    if !run.report.rows.is_empty() {
        emit_csv(&run.report, &dir.join("report.csv"))?;
        emit_svg_comparison(&run.report, &dir.join("comparison.svg"))?;
    }
    Ok(ExperimentOutcome {
        report: run.report,
        warnings: parsed.warnings,
        output_dir: dir.clone(),
    })
}

pub fn report_csv(report: &ComparisonReport) -> String {
    let mut out = String::from("method,direction,fold,train_span,test_span,mean_q3\n");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.4}",
            r.method, r.direction, r.fold, r.train_span, r.test_span, r.mean_q3
        );
    }
    out
}

pub fn emit_csv(report: &ComparisonReport, path: &Path) -> Result<()> {
    if report.rows.is_empty() {
        return Err(Error::InvalidArgument("report has no rows".into()));
    }
    std::fs::write(path, report_csv(report))?;
    Ok(())
}

/// Per-fold table for a single method and direction; with `method` set, a
/// leading method column is added.
pub fn fold_table_csv(method: Option<Method>, reports: &[EvalReport]) -> String {
    let mut out = String::new();
    if method.is_some() {
        out.push_str("method,");
    }
    out.push_str("fold_index,train_span,test_span,direction,mean_q3,n_test\n");
    for r in reports {
        if let Some(m) = method {
            let _ = write!(out, "{m},");
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{:.4},{}",
            r.fold.index + 1,
            r.fold.train_span(),
            r.fold.test_span(),
            r.direction,
            r.mean_q3,
            r.per_pair.len()
        );
    }
    out
}

const FOLD_COLOURS: [&str; 6] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#b07aa1"];

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Grouped bar chart: one group per (method, direction), one bar per fold.
pub fn svg_comparison(report: &ComparisonReport) -> String {
    let groups: Vec<&[ReportRow]> = report
        .rows
        .chunk_by(|a, b| (a.method, a.direction) == (b.method, b.direction))
        .collect();
    let max_bars = groups.iter().map(|g| g.len()).max().unwrap_or(0);
    let (bar_w, gap, left, top, plot_h) = (18.0, 30.0, 70.0, 40.0, 300.0);
    let group_w = bar_w * max_bars as f64 + gap;
    let width = left + group_w * groups.len() as f64 + 20.0;
    let height = top + plot_h + 60.0;
    let y = |q: f64| top + plot_h * (1.0 - q.clamp(0.0, 100.0) / 100.0);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="14">Efficiency comparison of HMM and ANN</text>"#,
        width / 2.0
    );
    for tick in (0..=100).step_by(20) {
        let ty = y(tick as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{ty:.1}" x2="{:.1}" y2="{ty:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{tick}</text>"##,
            width - 20.0,
            left - 6.0,
            ty + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text transform="translate(20 {:.1}) rotate(-90)" text-anchor="middle">Efficiency (Q3 %)</text>"#,
        top + plot_h / 2.0
    );
    let _ = writeln!(
        s,
        r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{:.1}" stroke="black"/>"#,
        top + plot_h
    );
    for (g, rows) in groups.iter().enumerate() {
        let x0 = left + gap / 2.0 + g as f64 * group_w;
        let label = format!("{} {}", rows[0].method, rows[0].direction);
        let _ = writeln!(s, r#"<g class="group" data-label="{}">"#, xml_escape(&label));
        for (b, r) in rows.iter().enumerate() {
            let top_y = y(r.mean_q3);
            let _ = writeln!(
                s,
                r#"<rect class="bar" x="{:.1}" y="{top_y:.2}" width="{bar_w}" height="{:.2}" fill="{}"><title>{} fold {}: {:.4}</title></rect>"#,
                x0 + b as f64 * bar_w,
                top + plot_h - top_y,
                FOLD_COLOURS[b % FOLD_COLOURS.len()],
                xml_escape(&label),
                r.fold,
                r.mean_q3
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            x0 + bar_w * rows.len() as f64 / 2.0,
            top + plot_h + 18.0,
            xml_escape(&label)
        );
        s.push_str("</g>\n");
    }
    let _ = writeln!(
        s,
        r#"<line x1="{left}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#,
        top + plot_h,
        width - 20.0,
        top + plot_h
    );
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg_comparison(report: &ComparisonReport, path: &Path) -> Result<()> {
    if report.rows.is_empty() {
        return Err(Error::InvalidArgument("report has no rows to plot".into()));
    }
    std::fs::write(path, svg_comparison(report))?;
    Ok(())
}
