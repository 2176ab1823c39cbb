//! Scalar statistics: moments, correlations, polychoric estimation and the
//! hypothesis tests used for forecast and group comparisons.

mod correlation;
mod descriptive;
mod hypothesis;
mod normal;
mod polychoric;

pub use correlation::{biserial, pearson, point_biserial, spearman, Correlation};
pub use descriptive::{mean, median, midranks, ols_simple, population_sd, quantile, sample_sd, zscore, LinearFit};
pub use hypothesis::{
    cles_paired, t_test_ind, wilcoxon_signed_rank, wilcoxon_signed_rank_with, TestMethod, TestResult, WilcoxonMode,
    WILCOXON_EXACT_LIMIT,
};
pub use normal::{bivariate_normal_cdf, norm_cdf, norm_pdf, norm_quantile};
pub use polychoric::{polychoric, polychoric_pairs, ContingencyTable, PolychoricEstimate, RHO_BOUND};
