//! The bundled 18-module reference dataset and the region listings that
//! were printed for it, used to produce the errata section.

use crate::dataset::{read_defects_csv, read_metrics_csv};
use crate::model::{DefectRow, Metric, MetricsRow};
use crate::regions::{PrintedBin, PrintedRegions};

pub const METRICS_CSV: &str = include_str!("../../../fixtures/table4_metrics.csv");
pub const DEFECTS_CSV: &str = include_str!("../../../fixtures/table4_defects.csv");
/// Published coefficients, rounded to three decimals.
pub const ROUNDED_MODEL_CSV: &str = include_str!("../../../fixtures/table9_model.csv");

pub fn metrics() -> Vec<MetricsRow> {
    read_metrics_csv(METRICS_CSV).expect("bundled metrics table is well formed")
}

pub fn defects() -> Vec<DefectRow> {
    read_defects_csv(DEFECTS_CSV).expect("bundled defects table is well formed")
}

/// True when the inputs are exactly the bundled dataset, row order aside.
pub fn is_reference_dataset(metrics_rows: &[MetricsRow], defect_rows: &[DefectRow]) -> bool {
    fn sorted<T: Clone, K: Ord>(rows: &[T], key: impl Fn(&T) -> K) -> Vec<T> {
        let mut v = rows.to_vec();
        v.sort_by_key(|r| key(r));
        v
    }
    let key_m = |r: &MetricsRow| r.module.clone();
    let key_d = |r: &DefectRow| r.module.clone();
    sorted(metrics_rows, key_m) == sorted(&metrics(), key_m)
        && sorted(defect_rows, key_d) == sorted(&defects(), key_d)
}

const fn bin(
    members: &'static [&'static str],
    defect_sum: u64,
    metric_sum: u64,
    ratio: f64,
) -> PrintedBin {
    PrintedBin {
        members,
        defect_sum,
        metric_sum,
        ratio: Some(ratio),
    }
}

const EMPTY: PrintedBin = PrintedBin {
    members: &[],
    defect_sum: 0,
    metric_sum: 0,
    ratio: None,
};

static PRINTED: [PrintedRegions; 6] = [
    PrintedRegions {
        metric: Metric::Cbo,
        bins: &[
            bin(
                &["M2", "M3", "M4", "M5", "M6", "M7", "M10", "M13", "M15", "M17", "M18"],
                260,
                742,
                0.35,
            ),
            EMPTY,
            bin(&["M1", "M8", "M9", "M11", "M12", "M14", "M16"], 477, 321, 1.49),
        ],
        recommended_bin: 0,
        recommended_text: "0 < CBO < 30",
        recommended_ratio: 0.35,
    },
    PrintedRegions {
        metric: Metric::Dit,
        bins: &[
            bin(&["M1", "M2", "M3", "M4", "M5", "M6", "M8", "M9"], 847, 24, 35.29),
            EMPTY,
            bin(
                &["M7", "M10", "M11", "M12", "M13", "M14", "M15", "M16", "M17", "M18"],
                372,
                59,
                6.31,
            ),
        ],
        recommended_bin: 2,
        recommended_text: "4.61 < DIT < 7",
        recommended_ratio: 6.31,
    },
    PrintedRegions {
        metric: Metric::Lcom,
        bins: &[
            bin(
                &["M3", "M7", "M9", "M10", "M11", "M12", "M13", "M15", "M16", "M17", "M18"],
                751,
                12730,
                0.06,
            ),
            bin(&["M1", "M2", "M4", "M5", "M6", "M8", "M14"], 468, 61425, 0.01),
        ],
        recommended_bin: 1,
        recommended_text: "4119.72 < LCOM < 12132.00",
        recommended_ratio: 0.01,
    },
    PrintedRegions {
        metric: Metric::Noc,
        bins: &[
            bin(
                &["M5", "M6", "M7", "M10", "M12", "M13", "M15", "M16", "M17", "M18"],
                617,
                243,
                2.54,
            ),
            bin(&["M1", "M2", "M3", "M4", "M8", "M9", "M11", "M14"], 602, 987, 0.61),
        ],
        recommended_bin: 1,
        recommended_text: "68.33 < NOC < 238.00",
        recommended_ratio: 0.61,
    },
    PrintedRegions {
        metric: Metric::Rfc,
        bins: &[
            bin(&["M1", "M3", "M5", "M6", "M9", "M10", "M11", "M13", "M15"], 680, 1394, 0.48),
            bin(&["M2", "M4", "M8", "M14"], 335, 1210, 0.28),
            bin(&["M7", "M12", "M16", "M17", "M18"], 204, 1971, 0.1),
        ],
        recommended_bin: 2,
        recommended_text: "365 < RFC < 425",
        recommended_ratio: 0.1,
    },
    PrintedRegions {
        metric: Metric::Wmc,
        bins: &[
            bin(&["M12", "M18"], 51, 141, 0.36),
            bin(
                &["M1", "M3", "M7", "M9", "M10", "M11", "M13", "M15", "M16"],
                651,
                3346,
                0.05,
            ),
            bin(&["M2", "M4", "M5", "M6", "M8", "M14", "M17"], 517, 7145, 0.07),
        ],
        recommended_bin: 1,
        recommended_text: "100 < WMC < 590.67",
        recommended_ratio: 0.05,
    },
];

/// The printed region listing for `metric` on the bundled dataset.
pub fn printed_regions(metric: Metric) -> &'static PrintedRegions {
    PRINTED
        .iter()
        .find(|p| p.metric == metric)
        .expect("every metric has a printed listing")
}
