//! Batch runs: generation, detector response, channel analysis and output.

mod channels;
mod config;

pub use channels::{analyze, AnalysisOutput, Component};
pub use config::{Channel, Resolved, RunConfig};

use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::evtgen::{generate_event, read_events, write_events, Event};
use crate::format::sig9;
use crate::parallel::{map_indexed, with_threads};
use crate::report::{csv_string, parse_csv, plot_svg, Histogram, Layout, PlotSpec, RunReport, Section, Style};

pub const REPORT_FILE: &str = "report.txt";
pub const SPECTRUM_FILE: &str = "spectrum.csv";
pub const PLOT_FILE: &str = "spectrum.svg";
pub const EVENTS_FILE: &str = "events.txt";

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    /// Bad or missing configuration (exit code 2).
    #[error("{0}")]
    Config(String),
    /// Runtime or data problem (exit code 1).
    #[error("{0}")]
    Data(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Data(_) | RunError::Io { .. } => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io { path: path.to_path_buf(), source }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    fs::write(path, bytes).map_err(io_err(path))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerateSummary {
    pub path: PathBuf,
    pub n_events: u64,
    pub mean_multiplicity: f64,
}

/// Writes `n_events` generic Z decays to `<run dir>/events.txt`.
pub fn cmd_generate(cfg: &RunConfig, threads: Option<usize>) -> Result<GenerateSummary, RunError> {
    let r = cfg.resolve()?;
    let events: Vec<Event> = with_threads(threads, || {
        map_indexed(cfg.n_events, |i| generate_event(&r.generator, cfg.master_seed, i))
    })
    .into_iter()
    .collect::<Result<_, _>>()
    .map_err(|e| RunError::Data(e.to_string()))?;
    let dir = cfg.run_dir();
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let path = dir.join(EVENTS_FILE);
    let file = fs::File::create(&path).map_err(io_err(&path))?;
    let mut sink = BufWriter::new(file);
    write_events(&events, &mut sink).map_err(io_err(&path))?;
    sink.flush().map_err(io_err(&path))?;
    let n_final: usize = events.iter().map(|e| e.final_state().count()).sum();
    Ok(GenerateSummary {
        path,
        n_events: cfg.n_events,
        mean_multiplicity: n_final as f64 / cfg.n_events as f64,
    })
}

pub fn read_event_file(path: &Path) -> Result<Vec<Event>, RunError> {
    let file = fs::File::open(path).map_err(|e| RunError::Data(format!("{}: {e}", path.display())))?;
    read_events(BufReader::new(file)).map_err(|e| RunError::Data(format!("{}: {e}", path.display())))
}

/// Runs the configured channel and writes CSV, report and plot into the run
/// directory. Returns the written paths.
pub fn cmd_analyze(cfg: &RunConfig, threads: Option<usize>) -> Result<(AnalysisOutput, Vec<PathBuf>), RunError> {
    let r = cfg.resolve()?;
    let background = match &cfg.event_file {
        Some(p) => Some(read_event_file(p)?),
        None => None,
    };
    let out = with_threads(threads, || analyze(&r, background.as_deref()))?;
    let paths = write_outputs(&out, &cfg.run_dir())?;
    Ok((out, paths))
}

pub fn write_outputs(out: &AnalysisOutput, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut paths = Vec::new();
    let mut put = |name: String, bytes: &[u8]| -> Result<(), RunError> {
        let p = dir.join(name);
        write_file(&p, bytes)?;
        paths.push(p);
        Ok(())
    };
    put(SPECTRUM_FILE.into(), csv_string(&out.spectrum).as_bytes())?;
    for c in &out.components {
        put(format!("spectrum_{}.csv", c.name), csv_string(&c.histogram).as_bytes())?;
    }
    put(REPORT_FILE.into(), out.report.render().as_bytes())?;
    let series: Vec<(&Histogram, Style)> = out.components.iter().map(|c| (&c.histogram, Style::new(&c.label))).collect();
    let svg = plot_svg(&series, &out.plot).map_err(|e| RunError::Data(e.to_string()))?;
    put(PLOT_FILE.into(), svg.as_bytes())?;
    Ok(paths)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareOutput {
    pub channel: String,
    pub report: RunReport,
    pub table: String,
    pub paths: Vec<PathBuf>,
}

/// Side-by-side table and paneled plot of two or more analysis outputs of the
/// same channel, written to `<out>/compare_<channel>/`.
pub fn cmd_compare(inputs: &[PathBuf], out_dir: &Path) -> Result<CompareOutput, RunError> {
    if inputs.len() < 2 {
        return Err(RunError::Data("compare needs at least two analysis outputs".into()));
    }
    let mut runs = Vec::new();
    for dir in inputs {
        let rp = dir.join(REPORT_FILE);
        let text = fs::read_to_string(&rp).map_err(|e| RunError::Data(format!("{}: {e}", rp.display())))?;
        let report = RunReport::parse(&text).map_err(|e| RunError::Data(format!("{}: {e}", rp.display())))?;
        let sp = dir.join(SPECTRUM_FILE);
        let file = fs::File::open(&sp).map_err(|e| RunError::Data(format!("{}: {e}", sp.display())))?;
        let hist = parse_csv(BufReader::new(file)).map_err(|e| RunError::Data(format!("{}: {e}", sp.display())))?;
        runs.push((report, hist));
    }
    let channel = runs[0].0.get("run", "channel").unwrap_or("").to_string();
    for (i, (rep, _)) in runs.iter().enumerate() {
        let c = rep.get("run", "channel").unwrap_or("");
        if c != channel {
            return Err(RunError::Data(format!(
                "mismatched channels: '{}' in {} vs '{channel}'",
                c,
                inputs[i].display()
            )));
        }
    }
    let empty = Section::default();
    let results = |r: &RunReport| r.section("results").cloned().unwrap_or_else(|| empty.clone());
    let first = results(&runs[0].0);
    let keys: Vec<String> = first
        .entries
        .iter()
        .map(|(k, _)| k.clone())
        .filter(|k| runs.iter().all(|(r, _)| results(r).get(k).is_some()))
        .collect();

    let labels: Vec<String> =
        runs.iter().map(|(r, _)| r.get("run", "scenario").unwrap_or("?").to_string()).collect();
    let mut report = RunReport::default();
    let mut head = Section::new("compare");
    head.push("channel", &channel).push("inputs", inputs.len());
    report.sections.push(head);
    for ((r, _), label) in runs.iter().zip(&labels) {
        let mut s = Section::new(format!("scenario {label}"));
        let res = results(r);
        for k in &keys {
            s.push(k.clone(), res.get(k).unwrap_or(""));
        }
        report.sections.push(s);
    }

    let mut table = String::new();
    table.push_str(&format!("{:<34}", "quantity"));
    for l in &labels {
        table.push_str(&format!(" {l:>18}"));
    }
    table.push('\n');
    for k in &keys {
        table.push_str(&format!("{k:<34}"));
        for (r, _) in &runs {
            table.push_str(&format!(" {:>18}", results(r).get(k).unwrap_or("")));
        }
        table.push('\n');
    }

    let dir = out_dir.join(format!("compare_{channel}"));
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let mut paths = Vec::new();
    let rp = dir.join("comparison.txt");
    let mut text = report.render();
    text.push_str("\n# table\n");
    for line in table.lines() {
        text.push_str("# ");
        text.push_str(line);
        text.push('\n');
    }
    write_file(&rp, text.as_bytes())?;
    paths.push(rp);
    let series: Vec<(&Histogram, Style)> =
        runs.iter().zip(&labels).map(|((_, h), l)| (h, Style::new(l.clone()))).collect();
    let spec = PlotSpec {
        title: format!("{channel}: scenario comparison"),
        x_label: runs[0].0.get("plot", "x_label").unwrap_or("mass [GeV]").to_string(),
        y_label: "entries".into(),
        layout: Layout::Panels,
    };
    let svg = plot_svg(&series, &spec).map_err(|e| RunError::Data(e.to_string()))?;
    let pp = dir.join("comparison.svg");
    write_file(&pp, svg.as_bytes())?;
    paths.push(pp);
    Ok(CompareOutput { channel, report, table, paths })
}

pub(crate) fn num(x: f64) -> String {
    sig9(x)
}
