use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ckm_core::dataset::{load_defects_csv, load_metrics_csv, metrics_to_csv};
use ckm_core::interchange::{load_model_file, load_module_map, model_to_json};
use ckm_core::metrics::{aggregate_modules, all_class_metrics, Aggregation, AggregationPolicy};
use ckm_core::predict::{effort_rate, score, scores_to_csv, PredictionModel};
use ckm_core::regions::{self, ThresholdChoice, VendorThresholds};
use ckm_core::stats::{ols_fit, DesignMatrix};
use ckm_core::{reference, report, source, Error, Metric};

#[derive(Parser)]
#[command(name = "ckm", version, about = "CK design metrics, threshold regions and defect regression")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a source tree into a class-model file
    Parse {
        src_dir: PathBuf,
        /// `class,module` CSV
        #[arg(long)]
        modules: PathBuf,
        /// Model file to write (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute per-module CK metrics from a class-model file
    Metrics {
        model: PathBuf,
        /// Aggregation override, e.g. `dit=max`; repeatable
        #[arg(long = "agg", value_parser = parse_agg)]
        agg: Vec<(Metric, Aggregation)>,
        /// Emit per-class metrics instead of module rows
        #[arg(long)]
        classes: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Threshold-region analysis of a metrics and defects table
    Regions {
        metrics: PathBuf,
        defects: PathBuf,
        /// `customary`, a vendor key (nasa, sdmetrics, togethersoft, objecteering, cantata) or `user:c1[,c2]`
        #[arg(long, default_value = "customary", value_parser = parse_thresholds)]
        thresholds: ThresholdChoice,
        /// Directory for the report and plot data (report goes to stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Least-squares regression of defects on the six metrics
    Regress {
        metrics: PathBuf,
        defects: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Predict defects and fix hours from a coefficient file
    Predict {
        model: PathBuf,
        metrics: PathBuf,
        /// Defects table with fix_hours, used for the hours-per-defect rate
        history: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate every table from the bundled dataset
    ReportPaper {
        #[arg(long, default_value = "paper_report")]
        out: PathBuf,
    },
}

fn parse_agg(s: &str) -> Result<(Metric, Aggregation), String> {
    let (m, r) = s
        .split_once('=')
        .ok_or_else(|| format!("expected <metric>=<sum|max|mean>, got `{s}`"))?;
    let metric = Metric::parse(m.trim()).ok_or_else(|| format!("unknown metric `{m}`"))?;
    let rule = Aggregation::parse(r.trim()).ok_or_else(|| format!("unknown aggregation `{r}`"))?;
    Ok((metric, rule))
}

fn parse_thresholds(s: &str) -> Result<ThresholdChoice, String> {
    ThresholdChoice::parse(s).ok_or_else(|| format!("unknown threshold selection `{s}`"))
}

enum Failure {
    Core(Error),
    NoSources(PathBuf),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn report(&self) -> (String, u8) {
        match self {
            Failure::Core(e) => (format!("{}: {e}", e.code()), e.exit_code() as u8),
            Failure::NoSources(dir) => (
                format!("E_NO_SOURCES: no source files under {}", dir.display()),
                2,
            ),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn emit(out: Option<&Path>, contents: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            report::write_file(path, contents)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .map_err(|e| Error::Io { path: "<stdout>".into(), source: e })?;
        }
    }
    Ok(())
}

fn source_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut found = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        let entries = fs::read_dir(&d).map_err(|e| Error::Io { path: d.clone(), source: e })?;
        for entry in entries {
            let path = entry.map_err(|e| Error::Io { path: d.clone(), source: e })?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|x| x == "java") {
                found.push(path);
            }
        }
    }
    found.sort();
    Ok(found)
}

fn cmd_parse(src_dir: &Path, modules: &Path, out: Option<&Path>) -> CliResult<()> {
    let files = source_files(src_dir)?;
    if files.is_empty() {
        return Err(Failure::NoSources(src_dir.to_path_buf()));
    }
    let mut inputs = Vec::with_capacity(files.len());
    for path in &files {
        let text = fs::read_to_string(path).map_err(|e| Error::Io { path: path.clone(), source: e })?;
        let name = path.strip_prefix(src_dir).unwrap_or(path).display().to_string();
        inputs.push((name, text));
    }
    let units = source::parse_sources(&inputs)?;
    let model = source::build_class_model(units, &load_module_map(modules)?)?;
    emit(out, &model_to_json(&model))
}

fn cmd_metrics(
    model: &Path,
    agg: &[(Metric, Aggregation)],
    classes: bool,
    out: Option<&Path>,
    format: Format,
) -> CliResult<()> {
    let model = load_model_file(model)?;
    let policy = agg
        .iter()
        .fold(AggregationPolicy::default(), |p, (m, r)| p.with(*m, *r));
    let rows = aggregate_modules(&model, &policy)?;

    let mut table: Vec<Vec<String>> = Vec::new();
    if classes {
        table.push(["class", "module", "cbo", "dit", "lcom", "noc", "rfc", "wmc"].map(String::from).to_vec());
        for c in all_class_metrics(&model) {
            let module = model.module_of(&c.class).unwrap_or_default().to_string();
            let mut row = vec![c.class.clone(), module];
            row.extend(Metric::ALL.map(|m| c.get(m).to_string()));
            table.push(row);
        }
    } else {
        table.push(["module", "cbo", "dit", "lcom", "noc", "rfc", "wmc"].map(String::from).to_vec());
        for r in &rows {
            let mut row = vec![r.module.clone()];
            row.extend(r.values().map(|v| v.to_string()));
            table.push(row);
        }
    }

    let text = match (format, classes) {
        (Format::Csv, false) => metrics_to_csv(&rows),
        (Format::Csv, true) => table.iter().map(|r| r.join(",") + "\n").collect(),
        (Format::Text, _) => {
            let widths: Vec<usize> = (0..table[0].len())
                .map(|c| table.iter().map(|r| r[c].len()).max().unwrap_or(0))
                .collect();
            let mut s = String::new();
            for row in &table {
                let cells: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(cell, w)| format!("{cell:>w$}"))
                    .collect();
                let _ = writeln!(s, "{}", cells.join("  "));
            }
            s
        }
    };
    emit(out, &text)
}

fn cmd_regions(
    metrics: &Path,
    defects: &Path,
    choice: ThresholdChoice,
    out: Option<&Path>,
    format: Format,
) -> CliResult<()> {
    let metrics = load_metrics_csv(metrics)?;
    let defects = load_defects_csv(defects)?;
    let reports = regions::analyze_all(&metrics, &defects, &VendorThresholds::default(), choice)?;

    // Printed listings exist only for the bundled dataset under the customary cuts.
    let errata = (choice == ThresholdChoice::Customary
        && reference::is_reference_dataset(&metrics, &defects))
    .then(|| report::reference_errata(&reports));

    let body = match format {
        Format::Csv => report::regions_csv(&reports),
        Format::Text => {
            let mut s = format!(
                "{}\n{}",
                report::findings_text(&reports, errata.as_ref().map(|(_, c)| c.as_slice())),
                report::regions_text(&reports)
            );
            if let Some((d, c)) = &errata {
                s.push('\n');
                s.push_str(&report::errata_text(d, c));
            }
            s
        }
    };

    match out {
        None => emit(None, &body),
        Some(dir) => {
            let name = match format {
                Format::Csv => "regions.csv",
                Format::Text => "regions.txt",
            };
            report::write_file(&dir.join(name), &body)?;
            if let Some((d, c)) = &errata {
                report::write_file(&dir.join("errata.txt"), &report::errata_text(d, c))?;
            }
            report::write_plots(&dir.join("plots"), &metrics, &reports)?;
            Ok(())
        }
    }
}

fn cmd_regress(metrics: &Path, defects: &Path, out: Option<&Path>, format: Format) -> CliResult<()> {
    let metrics = load_metrics_csv(metrics)?;
    let defects = load_defects_csv(defects)?;
    let fit = ols_fit(&DesignMatrix::from_tables(&metrics, &defects)?)?;
    let text = match format {
        Format::Text => report::regression_text(&fit),
        Format::Csv => report::coefficients_csv(&fit),
    };
    emit(out, &text)
}

fn cmd_predict(model: &Path, metrics: &Path, history: &Path, out: Option<&Path>) -> CliResult<()> {
    let model = PredictionModel::load(model)?;
    let rows = load_metrics_csv(metrics)?;
    let rate = effort_rate(&load_defects_csv(history)?)?;
    emit(out, &scores_to_csv(&score(&model, &rate, &rows)))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Parse { src_dir, modules, out } => cmd_parse(&src_dir, &modules, out.as_deref()),
        Command::Metrics {
            model,
            agg,
            classes,
            out,
            format,
        } => cmd_metrics(&model, &agg, classes, out.as_deref(), format),
        Command::Regions {
            metrics,
            defects,
            thresholds,
            out,
            format,
        } => cmd_regions(&metrics, &defects, thresholds, out.as_deref(), format),
        Command::Regress {
            metrics,
            defects,
            out,
            format,
        } => cmd_regress(&metrics, &defects, out.as_deref(), format),
        Command::Predict {
            model,
            metrics,
            history,
            out,
        } => cmd_predict(&model, &metrics, &history, out.as_deref()),
        Command::ReportPaper { out } => {
            for path in report::write_paper_report(&out)? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (line, code) = f.report();
            eprintln!("error: {}", line.replace('\n', " "));
            ExitCode::from(code)
        }
    }
}
