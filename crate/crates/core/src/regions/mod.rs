//! Threshold-region analysis: modules are binned per metric by one or two
//! cut lines (a vendor threshold and the dataset mean), each bin gets a
//! defects-per-metric-unit ratio, and the lowest-ratio bin is recommended.

pub mod errata;
pub mod vendor;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DefectRow, Metric, MetricsRow};

pub use errata::{
    check_recommendation, compare_with_published, Divergence, DivergenceKind, PrintedBin,
    PrintedRegions, RecommendationCheck,
};
pub use vendor::{Bound, Vendor, VendorThresholds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CutProvenance {
    /// Vendor threshold plus the dataset mean.
    VendorMean,
    /// No threshold available: the mean is the cut, min and max bound the plot.
    MeanFallback,
    User,
}

impl fmt::Display for CutProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutProvenance::VendorMean => "vendor threshold + mean",
            CutProvenance::MeanFallback => "mean (no threshold)",
            CutProvenance::User => "user",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutSpec {
    pub metric: Metric,
    /// One or two strictly ascending cut values.
    pub cuts: Vec<f64>,
    pub provenance: CutProvenance,
    /// Cuts that fall outside the observed [min, max] of the metric.
    pub out_of_range: Vec<f64>,
}

impl CutSpec {
    /// Sorts the cuts; two equal cuts collapse into one.
    pub fn new(metric: Metric, c1: f64, c2: Option<f64>, provenance: CutProvenance) -> Self {
        let mut cuts = vec![c1];
        if let Some(c2) = c2 {
            cuts.push(c2);
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        CutSpec {
            metric,
            cuts,
            provenance,
            out_of_range: Vec::new(),
        }
    }

    fn flag_range(mut self, min: f64, max: f64) -> Self {
        self.out_of_range = self
            .cuts
            .iter()
            .copied()
            .filter(|c| *c < min || *c > max)
            .collect();
        self
    }
}

/// Which threshold to pair with the dataset mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdChoice {
    /// The reference analysis' vendor per metric (see [`VendorThresholds::customary`]).
    Customary,
    Vendor(Vendor),
    /// Explicit cut values; applied to every metric.
    User(f64, Option<f64>),
}

impl ThresholdChoice {
    /// Parses `customary`, a vendor key, or `user:c1[,c2]`.
    pub fn parse(s: &str) -> Option<Self> {
        if s.eq_ignore_ascii_case("customary") || s.eq_ignore_ascii_case("default") {
            return Some(ThresholdChoice::Customary);
        }
        if let Some(rest) = s.strip_prefix("user:") {
            let mut parts = rest.split(',').map(|p| p.trim().parse::<f64>());
            let c1 = parts.next()?.ok()?;
            let c2 = match parts.next() {
                Some(v) => Some(v.ok()?),
                None => None,
            };
            if parts.next().is_some() || !c1.is_finite() || c2.is_some_and(|c| !c.is_finite()) {
                return None;
            }
            return Some(ThresholdChoice::User(c1, c2));
        }
        Vendor::parse(s).map(ThresholdChoice::Vendor)
    }
}

fn column(rows: &[MetricsRow], metric: Metric) -> Vec<f64> {
    rows.iter().map(|r| r.get(metric) as f64).collect()
}

fn min_max_mean(values: &[f64]) -> (f64, f64, f64) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (min, max, mean)
}

/// Cut lines for one metric: the chosen vendor threshold and the dataset
/// mean, or the mean alone when no threshold exists.
pub fn default_cuts(
    metric: Metric,
    rows: &[MetricsRow],
    vendors: &VendorThresholds,
    choice: ThresholdChoice,
) -> Result<CutSpec> {
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (min, max, mean) = min_max_mean(&column(rows, metric));
    let threshold = match choice {
        ThresholdChoice::Customary => vendors.customary(metric).map(|(_, b)| b.cut()),
        ThresholdChoice::Vendor(v) => vendors.get(v, metric).map(Bound::cut),
        ThresholdChoice::User(c1, c2) => {
            return Ok(CutSpec::new(metric, c1, c2, CutProvenance::User).flag_range(min, max))
        }
    };
    let spec = match threshold {
        Some(t) => CutSpec::new(metric, t, Some(mean), CutProvenance::VendorMean),
        None => CutSpec::new(metric, mean, None, CutProvenance::MeanFallback),
    };
    Ok(spec.flag_range(min, max))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionBin {
    /// Dataset minimum for the first bin, otherwise the preceding cut.
    pub lower: f64,
    /// The next cut, or the dataset maximum (inclusive) for the last bin.
    pub upper: f64,
    pub members: Vec<String>,
    pub defect_sum: u64,
    pub metric_sum: u64,
}

impl RegionBin {
    /// Defects per unit of the metric; `None` for an empty bin or a zero sum.
    pub fn ratio(&self) -> Option<f64> {
        region_ratio(self.defect_sum, self.metric_sum, self.members.len())
    }
}

pub fn region_ratio(defect_sum: u64, metric_sum: u64, members: usize) -> Option<f64> {
    (members > 0 && metric_sum > 0).then(|| defect_sum as f64 / metric_sum as f64)
}

/// Bins modules by how many cuts lie at or below their value, so a module
/// exactly on a cut lands in the higher bin.
pub fn partition(
    metrics: &[MetricsRow],
    defects: &[DefectRow],
    spec: &CutSpec,
) -> Result<Vec<RegionBin>> {
    let by_module: BTreeMap<&str, &DefectRow> =
        defects.iter().map(|d| (d.module.as_str(), d)).collect();
    for d in defects {
        if !metrics.iter().any(|m| m.module == d.module) {
            return Err(Error::MissingMetrics(d.module.clone()));
        }
    }
    if metrics.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (min, max, _) = min_max_mean(&column(metrics, spec.metric));

    let k = spec.cuts.len();
    let mut bins: Vec<RegionBin> = (0..=k)
        .map(|i| RegionBin {
            lower: if i == 0 { min } else { spec.cuts[i - 1] },
            upper: if i == k { max } else { spec.cuts[i] },
            members: Vec::new(),
            defect_sum: 0,
            metric_sum: 0,
        })
        .collect();

    for row in metrics {
        let d = by_module
            .get(row.module.as_str())
            .ok_or_else(|| Error::MissingDefects(row.module.clone()))?;
        let value = row.get(spec.metric);
        let idx = spec.cuts.iter().filter(|c| **c <= value as f64).count();
        let bin = &mut bins[idx];
        bin.members.push(row.module.clone());
        bin.defect_sum += d.defects;
        bin.metric_sum += value;
    }
    Ok(bins)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Recommendation {
    pub bin: usize,
    pub lower: f64,
    pub upper: f64,
    pub ratio: f64,
}

impl Recommendation {
    pub fn range_text(&self, metric: Metric) -> String {
        format!("{} < {} < {}", fmt_num(self.lower), metric, fmt_num(self.upper))
    }
}

/// The bin with the smallest defined ratio; ties go to the lower range.
pub fn recommend(bins: &[RegionBin]) -> Result<Recommendation> {
    let mut best: Option<(usize, f64)> = None;
    for (i, bin) in bins.iter().enumerate() {
        if let Some(r) = bin.ratio() {
            if best.is_none_or(|(_, b)| r < b) {
                best = Some((i, r));
            }
        }
    }
    let (bin, ratio) = best.ok_or(Error::AllUndefined)?;
    Ok(Recommendation {
        bin,
        lower: bins[bin].lower,
        upper: bins[bin].upper,
        ratio,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionReport {
    pub metric: Metric,
    pub cuts: CutSpec,
    pub bins: Vec<RegionBin>,
    pub recommended: Option<Recommendation>,
}

pub fn analyze(
    metrics: &[MetricsRow],
    defects: &[DefectRow],
    spec: CutSpec,
) -> Result<RegionReport> {
    let bins = partition(metrics, defects, &spec)?;
    let recommended = match recommend(&bins) {
        Ok(r) => Some(r),
        Err(Error::AllUndefined) => None,
        Err(e) => return Err(e),
    };
    Ok(RegionReport {
        metric: spec.metric,
        cuts: spec,
        bins,
        recommended,
    })
}

/// Region reports for all six metrics, in column order.
pub fn analyze_all(
    metrics: &[MetricsRow],
    defects: &[DefectRow],
    vendors: &VendorThresholds,
    choice: ThresholdChoice,
) -> Result<Vec<RegionReport>> {
    Metric::ALL
        .into_iter()
        .map(|m| analyze(metrics, defects, default_cuts(m, metrics, vendors, choice)?))
        .collect()
}

/// Integers print bare, everything else with two decimals.
pub fn fmt_num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

/// `module_index metric_value` rows (1-based index in input order).
pub fn plot_points(metrics: &[MetricsRow], metric: Metric) -> String {
    metrics
        .iter()
        .enumerate()
        .map(|(i, r)| format!("{} {}\n", i + 1, r.get(metric)))
        .collect()
}

/// Horizontal lines drawn on the metric plot: the cuts, plus min and max
/// when no vendor threshold exists.
pub fn plot_lines(metrics: &[MetricsRow], spec: &CutSpec) -> String {
    let mut lines = spec.cuts.clone();
    if spec.provenance == CutProvenance::MeanFallback {
        let (min, max, _) = min_max_mean(&column(metrics, spec.metric));
        lines.insert(0, min);
        lines.push(max);
    }
    lines.iter().map(|v| format!("{v}\n")).collect()
}
