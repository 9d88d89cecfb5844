//! Empirical statistics for summatory functions of bounded arithmetic
//! functions: sieved function tables, exact prefix sums, moment and
//! pair-moment estimators, single-coordinate strong-mixing coefficients,
//! normality diagnostics for summatory residuals, and a checker for the
//! sufficient conditions of a normal limit law.

pub mod arith;
pub mod error;
pub mod mixing;
pub mod moments;
pub mod normality;
pub mod oeis;
pub mod summatory;
pub mod synthetic;
pub mod verdict;
pub mod window;

pub use arith::{
    builtin_specs, factorize, point_value, sieve_table, sieve_table_with, ArithmeticFunctionSpec,
    Factorization, FunctionId, FunctionTable, SieveConfig,
};
pub use error::{Error, Result};
pub use mixing::{joint_distribution, mixing_coefficient, mixing_profile, JointDistribution, MixingProfile};
pub use moments::{lag_covariance, moment_summary_of, pair_mean_offdiag, pair_mean_product, MomentSummary};
pub use normality::{normal_cdf, normality_report, standardize, NormalityReport};
pub use summatory::{mean_estimate, prefix_sums, residual_series, weighted_prefix_sums, SummatorySeries};
pub use verdict::{check_builtin, check_sufficient_conditions, Thresholds, Verdict, VerdictReport};
pub use window::Window;
