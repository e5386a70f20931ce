//! Descriptive statistics, OLS regression with inference, and the
//! distribution functions behind its p-values.

pub mod describe;
pub mod dist;
pub mod ols;

pub use describe::{describe, Summary};
pub use dist::{f_upper_tail_p, ln_gamma, regularized_incomplete_beta, student_t_two_sided_p};
pub use ols::{ols_fit, Anova, Coefficient, DesignMatrix, RegressionResult};
