//! CK design metrics from a small Java-like source subset, with threshold
//! region analysis, OLS defect regression and effort prediction.

pub mod dataset;
pub mod error;
pub mod interchange;
pub mod metrics;
pub mod model;
pub mod predict;
pub mod reference;
pub mod regions;
pub mod report;
pub mod source;
pub mod stats;

pub use error::{Error, Result};
pub use model::{
    ClassInfo, ClassModel, DefectRow, FieldInfo, Invocation, MethodInfo, Metric, MetricsRow,
    Superclass,
};
