//! Plain-text and CSV renderings of the analyses, and the one-shot
//! regeneration of every table from the bundled dataset.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::{DefectRow, Metric, MetricsRow};
use crate::predict::COEFFICIENT_HEADER;
use crate::reference;
use crate::regions::{
    self, check_recommendation, compare_with_published, fmt_num, plot_lines, plot_points,
    Divergence, RecommendationCheck, RegionReport, ThresholdChoice, VendorThresholds,
};
use crate::stats::{describe, ols_fit, DesignMatrix, RegressionResult, Summary};

/// Fixed-decimal value without the leading zero for |v| < 1 (".688", "-.121").
pub fn stat(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    if let Some(rest) = s.strip_prefix("0.") {
        format!(".{rest}")
    } else if let Some(rest) = s.strip_prefix("-0.") {
        if rest.bytes().all(|b| b == b'0') {
            format!(".{rest}")
        } else {
            format!("-.{rest}")
        }
    } else {
        s
    }
}

fn pad_table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                if c == 0 {
                    format!("{cell:<w$}", w = widths[c])
                } else {
                    format!("{cell:>w$}", w = widths[c])
                }
            })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Descriptive statistics per metric column plus the defect column.
pub fn summaries(metrics: &[MetricsRow], defects: &[DefectRow]) -> Result<Vec<(String, Summary)>> {
    let mut out = Vec::new();
    for m in Metric::ALL {
        let col: Vec<f64> = metrics.iter().map(|r| r.get(m) as f64).collect();
        out.push((m.label().to_string(), describe(&col)?));
    }
    let col: Vec<f64> = defects.iter().map(|r| r.defects as f64).collect();
    out.push(("Defects".to_string(), describe(&col)?));
    Ok(out)
}

pub fn descriptive_text(rows: &[(String, Summary)]) -> String {
    let mut table = vec![["", "Min", "Max", "Median", "Average", "Std. Dev"]
        .map(String::from)
        .to_vec()];
    for (label, s) in rows {
        table.push(vec![
            label.clone(),
            format!("{:.1}", s.min),
            format!("{:.1}", s.max),
            format!("{:.1}", s.median),
            format!("{:.1}", s.mean),
            format!("{:.1}", s.sample_std),
        ]);
    }
    format!("Analysis of data\n\n{}", pad_table(&table))
}

pub fn descriptive_csv(rows: &[(String, Summary)]) -> String {
    let mut out = String::from("variable,n,min,max,median,mean,std\n");
    for (label, s) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            label.to_ascii_lowercase(),
            s.n,
            s.min,
            s.max,
            s.median,
            s.mean,
            s.sample_std
        );
    }
    out
}

pub fn model_summary_text(r: &RegressionResult) -> String {
    let table = vec![
        ["Model", "R", "R Square", "Adjusted R Square", "Std. Error of the Estimate"]
            .map(String::from)
            .to_vec(),
        vec![
            "1".into(),
            stat(r.r, 3),
            stat(r.r2, 3),
            stat(r.adj_r2, 3),
            format!("{:.5}", r.std_error_estimate),
        ],
    ];
    format!("Summary of the Model\n\n{}", pad_table(&table))
}

pub fn anova_text(r: &RegressionResult) -> String {
    let a = &r.anova;
    let table = vec![
        ["", "Sum of Squares", "df", "Mean Square", "F", "Sig."].map(String::from).to_vec(),
        vec![
            "Regression".into(),
            format!("{:.3}", a.ss_regression),
            a.df_regression.to_string(),
            format!("{:.3}", a.ms_regression),
            format!("{:.3}", a.f_value),
            stat(a.f_pvalue, 3),
        ],
        vec![
            "Residual".into(),
            format!("{:.3}", a.ss_residual),
            a.df_residual.to_string(),
            format!("{:.3}", a.ms_residual),
        ],
        vec![
            "Total".into(),
            format!("{:.3}", a.ss_total),
            (a.df_regression + a.df_residual).to_string(),
        ],
    ];
    format!("ANOVA\n\n{}", pad_table(&table))
}

fn term_label(term: &str) -> String {
    match Metric::parse(term) {
        Some(m) => m.label().to_string(),
        None if term == "const" => "(Constant)".to_string(),
        None => term.to_string(),
    }
}

/// `Defects = a + B1*X1 + ...` with coefficients at three decimals.
pub fn regression_equation(r: &RegressionResult) -> String {
    let mut eq = format!("Defects = {:.3}", r.intercept.b);
    for c in &r.coefficients {
        let sign = if c.b < 0.0 { '-' } else { '+' };
        let _ = write!(eq, " {sign} {:.3}*{}", c.b.abs(), term_label(&c.term));
    }
    eq
}

pub fn coefficients_text(r: &RegressionResult) -> String {
    let mut table = vec![["", "B", "Std. Error", "Beta", "t", "Sig."].map(String::from).to_vec()];
    for c in r.terms() {
        table.push(vec![
            term_label(&c.term),
            stat(c.b, 3),
            stat(c.std_error, 3),
            c.beta.map_or_else(String::new, |b| stat(b, 3)),
            stat(c.t, 3),
            stat(c.p, 3),
        ]);
    }
    format!(
        "Individual Regression Coefficients\n\n{}\n{}\n",
        pad_table(&table),
        regression_equation(r)
    )
}

/// Full-precision `term,B,std_error,beta,t,p`.
pub fn coefficients_csv(r: &RegressionResult) -> String {
    let mut out = format!("{COEFFICIENT_HEADER}\n");
    for c in r.terms() {
        let beta = c.beta.map_or_else(String::new, |b| b.to_string());
        let _ = writeln!(out, "{},{},{},{},{},{}", c.term, c.b, c.std_error, beta, c.t, c.p);
    }
    out
}

pub fn regression_text(r: &RegressionResult) -> String {
    format!(
        "{}\n{}\n{}",
        model_summary_text(r),
        anova_text(r),
        coefficients_text(r)
    )
}

fn bin_range(report: &RegionReport, i: usize) -> String {
    let b = &report.bins[i];
    let last = i + 1 == report.bins.len();
    let close = if last { "<=" } else { "<" };
    format!("{} <= {} {close} {}", fmt_num(b.lower), report.metric, fmt_num(b.upper))
}

pub fn region_text(report: &RegionReport) -> String {
    let mut out = String::new();
    let cuts: Vec<String> = report.cuts.cuts.iter().map(|c| fmt_num(*c)).collect();
    let _ = writeln!(
        out,
        "{}: cuts {} ({})",
        report.metric,
        cuts.join(", "),
        report.cuts.provenance
    );
    for c in &report.cuts.out_of_range {
        let _ = writeln!(out, "  note: cut {} lies outside the observed range", fmt_num(*c));
    }
    for (i, bin) in report.bins.iter().enumerate() {
        let _ = writeln!(out, "  {}", bin_range(report, i));
        if bin.members.is_empty() {
            let _ = writeln!(out, "    no modules");
            continue;
        }
        let _ = writeln!(out, "    modules: {}", bin.members.join(", "));
        let ratio = bin.ratio().map_or_else(|| "undefined".to_string(), |r| format!("{r:.2}"));
        let _ = writeln!(
            out,
            "    defects X = {}, {} Y = {}, X/Y = {}/{} = {}",
            bin.defect_sum, report.metric, bin.metric_sum, bin.defect_sum, bin.metric_sum, ratio
        );
    }
    match &report.recommended {
        Some(r) => {
            let _ = writeln!(
                out,
                "  recommended: {} at {:.2}/{}",
                r.range_text(report.metric),
                r.ratio,
                report.metric
            );
        }
        None => {
            let _ = writeln!(out, "  recommended: none (every ratio undefined)");
        }
    }
    out
}

pub fn regions_text(reports: &[RegionReport]) -> String {
    reports.iter().map(region_text).collect::<Vec<_>>().join("\n")
}

pub fn regions_csv(reports: &[RegionReport]) -> String {
    let mut out = String::from("metric,bin,lower,upper,members,defect_sum,metric_sum,ratio,recommended\n");
    for r in reports {
        for (i, b) in r.bins.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.metric.key(),
                i + 1,
                b.lower,
                b.upper,
                b.members.join(" "),
                b.defect_sum,
                b.metric_sum,
                b.ratio().map_or_else(String::new, |v| v.to_string()),
                r.recommended.as_ref().is_some_and(|rec| rec.bin == i),
            );
        }
    }
    out
}

/// Recommended range per metric, in the layout of the summary table.
pub fn findings_text(reports: &[RegionReport], checks: Option<&[RecommendationCheck]>) -> String {
    let mut header = vec!["Sr. #", "CK Metrics", "Findings", "Defect"];
    if checks.is_some() {
        header.extend(["Printed findings", "Printed defect", "Agrees"]);
    }
    let mut table = vec![header.into_iter().map(String::from).collect::<Vec<_>>()];
    for (i, r) in reports.iter().enumerate() {
        let (finding, defect) = match &r.recommended {
            Some(rec) => (rec.range_text(r.metric), format!("{:.2}/{}", rec.ratio, r.metric)),
            None => ("none".to_string(), "undefined".to_string()),
        };
        let mut row = vec![(i + 1).to_string(), r.metric.to_string(), finding, defect];
        if let Some(check) = checks.and_then(|c| c.iter().find(|c| c.metric == r.metric)) {
            row.push(check.printed_text.clone());
            row.push(format!("{}/{}", fmt_num(check.printed_ratio), r.metric));
            row.push(if check.agrees() { "yes" } else { "no" }.to_string());
        }
        table.push(row);
    }
    format!("Summary of the Results (recomputed)\n\n{}", pad_table(&table))
}

pub fn errata_text(divergences: &[Divergence], checks: &[RecommendationCheck]) -> String {
    let mut out = String::from("Region listing errata\n\n");
    if divergences.is_empty() {
        out.push_str("no divergent bins\n");
    }
    for d in divergences {
        let _ = writeln!(out, "- {d}");
    }
    let flips: Vec<&RecommendationCheck> = checks.iter().filter(|c| !c.agrees()).collect();
    out.push_str("\nRecommendations changed by recomputation\n\n");
    if flips.is_empty() {
        out.push_str("none\n");
    }
    for c in flips {
        let _ = writeln!(
            out,
            "- {}: printed {} at {}, computed {} at {}",
            c.metric,
            c.printed_text,
            fmt_num(c.printed_ratio),
            c.computed_text.as_deref().unwrap_or("none"),
            c.computed_ratio.map_or_else(|| "undefined".to_string(), |r| format!("{r:.2}")),
        );
    }
    out
}

/// Divergences and recommendation checks against the printed listings.
pub fn reference_errata(reports: &[RegionReport]) -> (Vec<Divergence>, Vec<RecommendationCheck>) {
    let mut divergences = Vec::new();
    let mut checks = Vec::new();
    for r in reports {
        let printed = reference::printed_regions(r.metric);
        divergences.extend(compare_with_published(r, printed));
        checks.push(check_recommendation(r, printed));
    }
    (divergences, checks)
}

fn write(path: &Path, contents: &str) -> Result<PathBuf> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))?;
    Ok(path.to_path_buf())
}

/// `plots/<metric>.dat` and `plots/<metric>.cuts` for every report.
pub fn write_plots(dir: &Path, metrics: &[MetricsRow], reports: &[RegionReport]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for r in reports {
        let key = r.metric.key();
        written.push(write(&dir.join(format!("{key}.dat")), &plot_points(metrics, r.metric))?);
        written.push(write(&dir.join(format!("{key}.cuts")), &plot_lines(metrics, &r.cuts))?);
    }
    Ok(written)
}

pub fn write_file(path: &Path, contents: &str) -> Result<PathBuf> {
    write(path, contents)
}

/// Regenerates every table from the bundled dataset into `out_dir`.
pub fn write_paper_report(out_dir: &Path) -> Result<Vec<PathBuf>> {
    let metrics = reference::metrics();
    let defects = reference::defects();

    let summary = summaries(&metrics, &defects)?;
    let fit = ols_fit(&DesignMatrix::from_tables(&metrics, &defects)?)?;
    let reports = regions::analyze_all(
        &metrics,
        &defects,
        &VendorThresholds::default(),
        ThresholdChoice::Customary,
    )?;
    let (divergences, checks) = reference_errata(&reports);

    let mut written = vec![
        write(&out_dir.join("Table5.txt"), &descriptive_text(&summary))?,
        write(&out_dir.join("Table5.csv"), &descriptive_csv(&summary))?,
        write(
            &out_dir.join("Table6_recomputed.txt"),
            &format!("{}\n{}", findings_text(&reports, Some(&checks)), regions_text(&reports)),
        )?,
        write(&out_dir.join("Table7.txt"), &model_summary_text(&fit))?,
        write(&out_dir.join("Table8.txt"), &anova_text(&fit))?,
        write(&out_dir.join("Table9.txt"), &coefficients_text(&fit))?,
        write(&out_dir.join("Table9.csv"), &coefficients_csv(&fit))?,
        write(&out_dir.join("errata.txt"), &errata_text(&divergences, &checks))?,
    ];
    written.extend(write_plots(&out_dir.join("plots"), &metrics, &reports)?);
    Ok(written)
}
