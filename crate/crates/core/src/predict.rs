//! Defect prediction from a linear model over the six metrics, and the
//! conversion of predicted defects into fix effort.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DefectRow, Metric, MetricsRow};
use crate::stats::RegressionResult;

pub const INTERCEPT_TERM: &str = "const";
pub const COEFFICIENT_HEADER: &str = "term,B,std_error,beta,t,p";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Fitted,
    Loaded,
}

/// Intercept plus one unstandardized coefficient per metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionModel {
    pub intercept: f64,
    /// Indexed in `Metric::ALL` order.
    pub coefficients: [f64; 6],
    pub provenance: Provenance,
}

impl PredictionModel {
    pub fn coefficient(&self, metric: Metric) -> f64 {
        self.coefficients[metric_index(metric)]
    }

    /// Takes the B column of a fit over all six metrics.
    pub fn from_regression(result: &RegressionResult) -> Result<Self> {
        let mut coefficients = [f64::NAN; 6];
        let mut seen = [false; 6];
        for c in &result.coefficients {
            let metric = Metric::parse(&c.term)
                .ok_or_else(|| Error::LabelMismatch(format!("unexpected term {}", c.term)))?;
            let i = metric_index(metric);
            if seen[i] {
                return Err(Error::LabelMismatch(format!("term {} appears twice", c.term)));
            }
            seen[i] = true;
            coefficients[i] = c.b;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::LabelMismatch(format!(
                "no coefficient for {}",
                Metric::ALL[i].key()
            )));
        }
        Ok(PredictionModel {
            intercept: result.intercept.b,
            coefficients,
            provenance: Provenance::Fitted,
        })
    }

    /// Reads `term` and `B` from a coefficient CSV; other columns are ignored.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = rdr
            .headers()
            .map_err(|e| Error::schema("coefficients header", e.to_string()))?
            .clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::schema("coefficients header", format!("missing column {name}")))
        };
        let (term_col, b_col) = (col("term")?, col("B")?);

        let mut terms: BTreeMap<String, f64> = BTreeMap::new();
        for (i, rec) in rdr.records().enumerate() {
            let loc = format!("coefficients row {}", i + 2);
            let rec = rec.map_err(|e| Error::schema(&loc, e.to_string()))?;
            let term = rec.get(term_col).unwrap_or_default().to_ascii_lowercase();
            let b: f64 = rec
                .get(b_col)
                .unwrap_or_default()
                .parse()
                .map_err(|_| Error::schema(&loc, "B is not a number"))?;
            if !b.is_finite() {
                return Err(Error::schema(&loc, "B is not finite"));
            }
            if terms.insert(term.clone(), b).is_some() {
                return Err(Error::LabelMismatch(format!("term {term} appears twice")));
            }
        }

        let intercept = terms
            .remove(INTERCEPT_TERM)
            .ok_or_else(|| Error::LabelMismatch("no const term".into()))?;
        let mut coefficients = [0.0; 6];
        for (i, m) in Metric::ALL.into_iter().enumerate() {
            coefficients[i] = terms
                .remove(m.key())
                .ok_or_else(|| Error::LabelMismatch(format!("no coefficient for {}", m.key())))?;
        }
        if let Some(extra) = terms.keys().next() {
            return Err(Error::LabelMismatch(format!("unexpected term {extra}")));
        }
        Ok(PredictionModel {
            intercept,
            coefficients,
            provenance: Provenance::Loaded,
        })
    }

    /// Coefficient CSV with only the B column filled. Floats use the
    /// shortest representation that parses back to the same bits.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{COEFFICIENT_HEADER}\n{INTERCEPT_TERM},{},,,,\n", self.intercept);
        for (m, b) in Metric::ALL.into_iter().zip(self.coefficients) {
            let _ = writeln!(out, "{},{b},,,,", m.key());
        }
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_csv(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }
}

fn metric_index(metric: Metric) -> usize {
    Metric::ALL.iter().position(|m| *m == metric).expect("metric is in ALL")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    /// a + Σ B·x; can be negative.
    pub raw: f64,
    pub floored: f64,
}

pub fn predict_defects(model: &PredictionModel, row: &MetricsRow) -> Prediction {
    let raw = Metric::ALL
        .into_iter()
        .zip(model.coefficients)
        .fold(model.intercept, |acc, (m, b)| acc + b * row.get(m) as f64);
    Prediction {
        raw,
        floored: raw.max(0.0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffortRate {
    pub hours_per_defect: f64,
    /// Modules the rate was computed over.
    pub window: Vec<String>,
}

/// Total fix hours over total defects.
pub fn effort_rate(history: &[DefectRow]) -> Result<EffortRate> {
    let defects: u64 = history.iter().map(|r| r.defects).sum();
    if defects == 0 {
        return Err(Error::NoDefectsInHistory);
    }
    let hours: f64 = history.iter().map(|r| r.fix_hours).sum();
    if hours <= 0.0 {
        return Err(Error::Domain("history records no fix hours".into()));
    }
    Ok(EffortRate {
        hours_per_defect: hours / defects as f64,
        window: history.iter().map(|r| r.module.clone()).collect(),
    })
}

pub fn estimate_fix_hours(rate: &EffortRate, predicted_defects: f64) -> f64 {
    rate.hours_per_defect * predicted_defects
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredModule {
    pub module: String,
    pub prediction: Prediction,
    pub fix_hours: f64,
}

pub fn score(model: &PredictionModel, rate: &EffortRate, rows: &[MetricsRow]) -> Vec<ScoredModule> {
    rows.iter()
        .map(|row| {
            let prediction = predict_defects(model, row);
            ScoredModule {
                module: row.module.clone(),
                prediction,
                fix_hours: estimate_fix_hours(rate, prediction.floored),
            }
        })
        .collect()
}

pub fn scores_to_csv(scores: &[ScoredModule]) -> String {
    let mut out =
        String::from("module,predicted_defects,predicted_defects_floored,estimated_fix_hours\n");
    for s in scores {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            s.module, s.prediction.raw, s.prediction.floored, s.fix_hours
        );
    }
    out
}
