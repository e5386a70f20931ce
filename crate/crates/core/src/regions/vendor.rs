use std::collections::BTreeMap;
use std::fmt;

use crate::model::Metric;

/// A published threshold: a single maximum or an acceptable range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Value(f64),
    Range(f64, f64),
}

impl Bound {
    /// The value used as a cut line; for a range, its upper end.
    pub fn cut(self) -> f64 {
        match self {
            Bound::Value(v) => v,
            Bound::Range(_, hi) => hi,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Value(v) => write!(f, "{v}"),
            Bound::Range(lo, hi) => write!(f, "{lo}-{hi}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vendor {
    RosenbergNasa,
    SdMetrics,
    TogetherSoft,
    Objecteering,
    Cantata,
}

impl Vendor {
    pub const ALL: [Vendor; 5] = [
        Vendor::RosenbergNasa,
        Vendor::SdMetrics,
        Vendor::TogetherSoft,
        Vendor::Objecteering,
        Vendor::Cantata,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Vendor::RosenbergNasa => "nasa",
            Vendor::SdMetrics => "sdmetrics",
            Vendor::TogetherSoft => "togethersoft",
            Vendor::Objecteering => "objecteering",
            Vendor::Cantata => "cantata",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Vendor::RosenbergNasa => "Rosenberg, NASA",
            Vendor::SdMetrics => "SD-Metrics",
            Vendor::TogetherSoft => "Together Soft",
            Vendor::Objecteering => "Objecteering Enterprise Edition",
            Vendor::Cantata => "Cantata++",
        }
    }

    pub fn parse(s: &str) -> Option<Vendor> {
        Vendor::ALL.into_iter().find(|v| v.key().eq_ignore_ascii_case(s))
    }
}

/// Vendor-recommended CK thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct VendorThresholds {
    bounds: BTreeMap<(Vendor, Metric), Bound>,
}

impl Default for VendorThresholds {
    fn default() -> Self {
        use Bound::*;
        use Metric::*;
        use Vendor::*;
        let bounds = [
            ((RosenbergNasa, Wmc), Value(40.0)),
            ((RosenbergNasa, Dit), Value(6.0)),
            ((RosenbergNasa, Cbo), Value(5.0)),
            ((RosenbergNasa, Rfc), Value(100.0)),
            ((SdMetrics, Dit), Range(0.0, 3.0)),
            ((SdMetrics, Cbo), Range(0.0, 31.0)),
            ((SdMetrics, Rfc), Range(3.0, 365.0)),
            ((TogetherSoft, Wmc), Value(100.0)),
            ((TogetherSoft, Dit), Value(4.0)),
            ((TogetherSoft, Cbo), Value(30.0)),
            ((Objecteering, Wmc), Range(3.0, 7.0)),
            ((Objecteering, Dit), Range(0.0, 4.0)),
            ((Objecteering, Noc), Range(1.0, 4.0)),
            ((Objecteering, Cbo), Range(1.0, 4.0)),
        ]
        .into_iter()
        .collect();
        VendorThresholds { bounds }
    }
}

impl VendorThresholds {
    pub fn get(&self, vendor: Vendor, metric: Metric) -> Option<Bound> {
        self.bounds.get(&(vendor, metric)).copied()
    }

    /// The threshold compared against in the reference analysis: Together
    /// Soft for CBO, DIT and WMC, the SD-Metrics maximum for RFC, nothing for
    /// LCOM and NOC.
    pub fn customary(&self, metric: Metric) -> Option<(Vendor, Bound)> {
        let vendor = match metric {
            Metric::Cbo | Metric::Dit | Metric::Wmc => Vendor::TogetherSoft,
            Metric::Rfc => Vendor::SdMetrics,
            Metric::Lcom | Metric::Noc => return None,
        };
        self.get(vendor, metric).map(|b| (vendor, b))
    }
}
