#pragma once

#include <cstddef>
#include <vector>

namespace trustsim {

struct OlsFit {
    std::vector<double> coefficients;  // intercept first, then one slope per predictor
    std::vector<double> std_errors;
    std::vector<double> t_values;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    double f_stat = 0.0;
    int df_residual = 0;  // n - k - 1
    std::size_t n = 0;
    std::size_t k = 0;
};

// OLS with intercept. `predictors` is n rows of k values each.
// Throws InsufficientDataError when n <= k + 1, SingularityError on rank deficiency.
OlsFit ols_fit(const std::vector<std::vector<double>>& predictors,
               const std::vector<double>& response);

// Inverse CDF of Student's t via the regularized incomplete beta inverse.
double student_t_quantile(double probability, double df);

double incomplete_beta(double a, double b, double x);  // regularized I_x(a, b)

struct PairedTInterval {
    double lo = 0.0;
    double hi = 0.0;
    int df = 0;
    double mean_diff = 0.0;
    bool degenerate = false;  // zero variance of differences
};

PairedTInterval paired_t_ci(const std::vector<double>& a, const std::vector<double>& b,
                            double level = 0.95);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;  // Welch-Satterthwaite
};

WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b);

// Two-sided p-value for a t statistic.
double student_t_p_value(double t, double df);

}  // namespace trustsim
