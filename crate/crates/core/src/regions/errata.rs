//! Cross-checks computed region bins against a printed listing of the same
//! analysis and records every cell that disagrees.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{fmt_num, RegionBin, RegionReport};
use crate::model::Metric;

/// One bin as it appears in a printed listing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedBin {
    pub members: &'static [&'static str],
    pub defect_sum: u64,
    pub metric_sum: u64,
    /// `None` for a bin printed as empty.
    pub ratio: Option<f64>,
}

/// A printed listing for one metric, plus the bin it recommended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedRegions {
    pub metric: Metric,
    pub bins: &'static [PrintedBin],
    pub recommended_bin: usize,
    pub recommended_text: &'static str,
    pub recommended_ratio: f64,
}

/// Printed ratios are rounded to two decimals; anything this far off is wrong.
pub const RATIO_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum DivergenceKind {
    /// The printed module list differs from the computed one.
    Membership,
    /// Printed defect and metric sums are swapped.
    Transposed,
    DefectSum,
    MetricSum,
    /// Sums agree but the printed quotient does not.
    Ratio,
}

impl DivergenceKind {
    pub fn describe(self) -> &'static str {
        match self {
            DivergenceKind::Membership => "module membership differs",
            DivergenceKind::Transposed => "defect and metric sums printed transposed",
            DivergenceKind::DefectSum => "defect sum differs",
            DivergenceKind::MetricSum => "metric sum differs",
            DivergenceKind::Ratio => "ratio miscomputed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Divergence {
    pub metric: Metric,
    /// 0-based bin index, lowest range first.
    pub bin: usize,
    pub kind: DivergenceKind,
    pub printed_defects: u64,
    pub printed_metric: u64,
    pub printed_ratio: Option<f64>,
    pub computed_defects: u64,
    pub computed_metric: u64,
    pub computed_ratio: Option<f64>,
    /// For membership divergences: modules only in the computed bin.
    pub added: Vec<String>,
    /// For membership divergences: modules only in the printed bin.
    pub removed: Vec<String>,
}

fn fmt_ratio(r: Option<f64>) -> String {
    r.map_or_else(|| "undefined".to_string(), fmt_num)
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} bin {}: {}: printed {}/{} = {}, computed {}/{} = {}",
            self.metric,
            self.bin + 1,
            self.kind.describe(),
            self.printed_defects,
            self.printed_metric,
            fmt_ratio(self.printed_ratio),
            self.computed_defects,
            self.computed_metric,
            fmt_ratio(self.computed_ratio),
        )?;
        if !self.added.is_empty() {
            write!(f, "; computed adds {}", self.added.join(", "))?;
        }
        if !self.removed.is_empty() {
            write!(f, "; computed drops {}", self.removed.join(", "))?;
        }
        Ok(())
    }
}

fn classify(printed: &PrintedBin, computed: &RegionBin) -> Option<DivergenceKind> {
    let p: BTreeSet<&str> = printed.members.iter().copied().collect();
    let c: BTreeSet<&str> = computed.members.iter().map(String::as_str).collect();
    if p != c {
        return Some(DivergenceKind::Membership);
    }
    if p.is_empty() {
        return None;
    }
    let (pd, pm) = (printed.defect_sum, printed.metric_sum);
    let (cd, cm) = (computed.defect_sum, computed.metric_sum);
    if pd != cd && (pd, pm) == (cm, cd) {
        return Some(DivergenceKind::Transposed);
    }
    if pd != cd {
        return Some(DivergenceKind::DefectSum);
    }
    if pm != cm {
        return Some(DivergenceKind::MetricSum);
    }
    match (printed.ratio, computed.ratio()) {
        (Some(p), Some(c)) if (p - c).abs() < RATIO_TOLERANCE => None,
        (None, None) => None,
        _ => Some(DivergenceKind::Ratio),
    }
}

/// One entry per disagreeing bin. A bin is reported once, under the most
/// fundamental kind of disagreement.
pub fn compare_with_published(report: &RegionReport, printed: &PrintedRegions) -> Vec<Divergence> {
    let mut out = Vec::new();
    let empty = RegionBin {
        lower: f64::NAN,
        upper: f64::NAN,
        members: Vec::new(),
        defect_sum: 0,
        metric_sum: 0,
    };
    let blank = PrintedBin {
        members: &[],
        defect_sum: 0,
        metric_sum: 0,
        ratio: None,
    };
    let n = report.bins.len().max(printed.bins.len());
    for i in 0..n {
        let c = report.bins.get(i).unwrap_or(&empty);
        let p = printed.bins.get(i).unwrap_or(&blank);
        let Some(kind) = classify(p, c) else { continue };
        let (added, removed) = if kind == DivergenceKind::Membership {
            let pset: BTreeSet<&str> = p.members.iter().copied().collect();
            let cset: BTreeSet<&str> = c.members.iter().map(String::as_str).collect();
            (
                cset.difference(&pset).map(|s| s.to_string()).collect(),
                pset.difference(&cset).map(|s| s.to_string()).collect(),
            )
        } else {
            (Vec::new(), Vec::new())
        };
        out.push(Divergence {
            metric: report.metric,
            bin: i,
            kind,
            printed_defects: p.defect_sum,
            printed_metric: p.metric_sum,
            printed_ratio: p.ratio,
            computed_defects: c.defect_sum,
            computed_metric: c.metric_sum,
            computed_ratio: c.ratio(),
            added,
            removed,
        });
    }
    out
}

/// Printed versus recomputed recommendation for one metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecommendationCheck {
    pub metric: Metric,
    pub printed_bin: usize,
    pub printed_text: String,
    pub printed_ratio: f64,
    pub computed_bin: Option<usize>,
    pub computed_text: Option<String>,
    pub computed_ratio: Option<f64>,
}

impl RecommendationCheck {
    pub fn agrees(&self) -> bool {
        self.computed_bin == Some(self.printed_bin)
    }
}

pub fn check_recommendation(report: &RegionReport, printed: &PrintedRegions) -> RecommendationCheck {
    let rec = report.recommended.as_ref();
    RecommendationCheck {
        metric: report.metric,
        printed_bin: printed.recommended_bin,
        printed_text: printed.recommended_text.to_string(),
        printed_ratio: printed.recommended_ratio,
        computed_bin: rec.map(|r| r.bin),
        computed_text: rec.map(|r| r.range_text(report.metric)),
        computed_ratio: rec.map(|r| r.ratio),
    }
}
