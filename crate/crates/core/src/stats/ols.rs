//! Multiple linear regression with an intercept, fitted by Householder QR on
//! column-equilibrated predictors, with t-tests per coefficient and the
//! regression ANOVA table.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::describe::sample_std;
use super::dist::{f_upper_tail_p, student_t_two_sided_p};
use crate::error::{Error, Result};
use crate::model::{DefectRow, Metric, MetricsRow};

/// Relative tolerance on the R diagonal of the equilibrated design below
/// which a column is treated as linearly dependent.
const RANK_TOL: f64 = 1e-10;

/// Predictor columns (the intercept is implicit) and the response.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    labels: Vec<String>,
    row_ids: Vec<String>,
    columns: Vec<Vec<f64>>,
    response: Vec<f64>,
}

impl DesignMatrix {
    pub fn new(
        labels: Vec<String>,
        row_ids: Vec<String>,
        columns: Vec<Vec<f64>>,
        response: Vec<f64>,
    ) -> Result<Self> {
        let n = response.len();
        let p = columns.len();
        if labels.len() != p {
            return Err(Error::LabelMismatch(format!(
                "{} labels for {} predictor columns",
                labels.len(),
                p
            )));
        }
        if row_ids.len() != n || columns.iter().any(|c| c.len() != n) {
            return Err(Error::Domain("predictor columns and response differ in length".into()));
        }
        if n <= p + 1 {
            return Err(Error::InsufficientRows { rows: n, needed: p + 1 });
        }
        for (label, col) in labels.iter().zip(&columns) {
            if col.iter().all(|v| *v == col[0]) {
                return Err(Error::SingularMatrix(format!("predictor {label} is constant")));
            }
        }
        Ok(DesignMatrix {
            labels,
            row_ids,
            columns,
            response,
        })
    }

    /// Joins metric and defect rows by module: predictors in CBO, DIT, LCOM,
    /// NOC, RFC, WMC order, response = defects. Row order follows `metrics`.
    pub fn from_tables(metrics: &[MetricsRow], defects: &[DefectRow]) -> Result<Self> {
        let by_module: BTreeMap<&str, &DefectRow> =
            defects.iter().map(|d| (d.module.as_str(), d)).collect();
        for d in defects {
            if !metrics.iter().any(|m| m.module == d.module) {
                return Err(Error::MissingMetrics(d.module.clone()));
            }
        }
        let mut response = Vec::with_capacity(metrics.len());
        for m in metrics {
            let d = by_module
                .get(m.module.as_str())
                .ok_or_else(|| Error::MissingDefects(m.module.clone()))?;
            response.push(d.defects as f64);
        }
        let columns = Metric::ALL
            .iter()
            .map(|&k| metrics.iter().map(|m| m.get(k) as f64).collect())
            .collect();
        DesignMatrix::new(
            Metric::ALL.iter().map(|m| m.key().to_owned()).collect(),
            metrics.iter().map(|m| m.module.clone()).collect(),
            columns,
            response,
        )
    }

    pub fn n(&self) -> usize {
        self.response.len()
    }

    pub fn p(&self) -> usize {
        self.columns.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn response(&self) -> &[f64] {
        &self.response
    }

    /// A copy with predictor `j` multiplied by `factor`.
    pub fn with_scaled_column(&self, j: usize, factor: f64) -> Self {
        let mut out = self.clone();
        out.columns[j].iter_mut().for_each(|v| *v *= factor);
        out
    }

    /// A copy with `shift` added to predictor `j`.
    pub fn with_shifted_column(&self, j: usize, shift: f64) -> Self {
        let mut out = self.clone();
        out.columns[j].iter_mut().for_each(|v| *v += shift);
        out
    }

    /// n × (p+1) matrix with the intercept column first.
    fn full_matrix(&self) -> DMatrix<f64> {
        let (n, p) = (self.n(), self.p());
        DMatrix::from_fn(n, p + 1, |i, j| if j == 0 { 1.0 } else { self.columns[j - 1][i] })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficient {
    pub term: String,
    pub b: f64,
    pub std_error: f64,
    /// Standardized coefficient; not defined for the intercept.
    pub beta: Option<f64>,
    pub t: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Anova {
    pub ss_regression: f64,
    pub ss_residual: f64,
    pub ss_total: f64,
    pub df_regression: usize,
    pub df_residual: usize,
    pub ms_regression: f64,
    pub ms_residual: f64,
    pub f_value: f64,
    pub f_pvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionResult {
    pub intercept: Coefficient,
    pub coefficients: Vec<Coefficient>,
    pub r: f64,
    pub r2: f64,
    pub adj_r2: f64,
    pub std_error_estimate: f64,
    pub anova: Anova,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl RegressionResult {
    /// Intercept followed by the predictors.
    pub fn terms(&self) -> impl Iterator<Item = &Coefficient> {
        std::iter::once(&self.intercept).chain(&self.coefficients)
    }

    pub fn coefficient(&self, term: &str) -> Option<&Coefficient> {
        self.terms().find(|c| c.term == term)
    }
}

fn t_stat(b: f64, se: f64) -> f64 {
    if se > 0.0 {
        b / se
    } else if b == 0.0 {
        0.0
    } else {
        b.signum() * f64::INFINITY
    }
}

pub fn ols_fit(design: &DesignMatrix) -> Result<RegressionResult> {
    let (n, p) = (design.n(), design.p());
    let x = design.full_matrix();
    let y = DVector::from_column_slice(design.response());

    // Equilibrate columns to unit norm so the rank test is scale-free.
    let scales: Vec<f64> = x.column_iter().map(|c| c.norm()).collect();
    let mut xs = x.clone();
    for (j, s) in scales.iter().enumerate() {
        xs.column_mut(j).unscale_mut(*s);
    }

    let qr = xs.qr();
    let r = qr.r();
    let q = qr.q();
    for j in 0..=p {
        if r[(j, j)].abs() <= RANK_TOL {
            let label = if j == 0 { "intercept" } else { &design.labels[j - 1] };
            return Err(Error::SingularMatrix(format!(
                "column {label} is linearly dependent on the preceding columns"
            )));
        }
    }

    let qty = q.transpose() * &y;
    let scaled_b = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::SingularMatrix("triangular solve failed".into()))?;
    let b: Vec<f64> = scaled_b
        .iter()
        .zip(&scales)
        .map(|(v, s)| v / s)
        .collect();

    let fitted_v = &x * DVector::from_column_slice(&b);
    let fitted: Vec<f64> = fitted_v.iter().copied().collect();
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(y, f)| y - f).collect();

    let mean_y = y.mean();
    let ss_total: f64 = y.iter().map(|v| (v - mean_y).powi(2)).sum();
    if ss_total == 0.0 {
        return Err(Error::Domain("response is constant".into()));
    }
    let ss_residual: f64 = residuals.iter().map(|e| e * e).sum();
    let ss_regression: f64 = fitted.iter().map(|f| (f - mean_y).powi(2)).sum();

    let df_regression = p;
    let df_residual = n - p - 1;
    let ms_regression = ss_regression / df_regression as f64;
    let ms_residual = ss_residual / df_residual as f64;
    let f_value = if ms_residual > 0.0 {
        ms_regression / ms_residual
    } else {
        f64::INFINITY
    };
    let f_pvalue = f_upper_tail_p(f_value, df_regression as u32, df_residual as u32);

    // diag((XᵀX)⁻¹) = row norms² of R⁻¹, rescaled.
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p + 1, p + 1))
        .ok_or_else(|| Error::SingularMatrix("triangular inverse failed".into()))?;
    let std_errors: Vec<f64> = (0..=p)
        .map(|j| (ms_residual * r_inv.row(j).norm_squared()).sqrt() / scales[j])
        .collect();

    let sd_y = sample_std(design.response());
    let df = df_residual as u32;
    let make = |j: usize| {
        let t = t_stat(b[j], std_errors[j]);
        Coefficient {
            term: if j == 0 {
                "const".to_owned()
            } else {
                design.labels[j - 1].clone()
            },
            b: b[j],
            std_error: std_errors[j],
            beta: (j > 0).then(|| b[j] * sample_std(design.column(j - 1)) / sd_y),
            t,
            p: student_t_two_sided_p(t, df),
        }
    };

    let r2 = (ss_regression / ss_total).clamp(0.0, 1.0);
    Ok(RegressionResult {
        intercept: make(0),
        coefficients: (1..=p).map(make).collect(),
        r: r2.sqrt(),
        r2,
        adj_r2: 1.0 - (1.0 - r2) * (n - 1) as f64 / df_residual as f64,
        std_error_estimate: ms_residual.sqrt(),
        anova: Anova {
            ss_regression,
            ss_residual,
            ss_total,
            df_regression,
            df_residual,
            ms_regression,
            ms_residual,
            f_value,
            f_pvalue,
        },
        fitted,
        residuals,
    })
}
