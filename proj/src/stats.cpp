#include "trustsim/stats.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "trustsim/errors.hpp"

namespace trustsim {

namespace {

// Continued fraction for the incomplete beta function, modified Lentz.
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double variance(const std::vector<double>& v, double mean) {
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(v.size() - 1);
}

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b)
                            + a * std::log(x) + b * std::log(1.0 - x);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(ln_front) * beta_cf(a, b, x) / a;
    }
    return 1.0 - std::exp(ln_front) * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_p_value(double t, double df) {
    const double x = df / (df + t * t);
    return incomplete_beta(df / 2.0, 0.5, x);
}

double student_t_quantile(double probability, double df) {
    if (!(probability > 0.0 && probability < 1.0)) {
        throw ConfigError("t quantile probability must be in (0,1)");
    }
    if (!(df > 0.0)) throw ConfigError("t quantile df must be > 0");
    if (probability == 0.5) return 0.0;
    const bool upper = probability > 0.5;
    const double p = upper ? probability : 1.0 - probability;

    // cdf(t) = 1 - I_x(df/2, 1/2)/2 with x = df/(df + t^2), for t >= 0
    auto cdf = [df](double t) {
        return 1.0 - 0.5 * incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
    };

    double hi = 1.0;
    while (cdf(hi) < p && hi < 1e15) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-14 * (1.0 + hi)) break;
    }
    const double t = 0.5 * (lo + hi);
    return upper ? t : -t;
}

OlsFit ols_fit(const std::vector<std::vector<double>>& predictors,
               const std::vector<double>& response) {
    const std::size_t n = response.size();
    if (predictors.size() != n) throw DataError("ols_fit: predictor/response size mismatch");
    if (n == 0) throw InsufficientDataError("ols_fit: empty input");
    const std::size_t k = predictors.front().size();
    if (k == 0) throw DataError("ols_fit: no predictors");
    if (n <= k + 1) throw InsufficientDataError("ols_fit: need n > k + 1 observations");

    Eigen::MatrixXd x(n, k + 1);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (predictors[i].size() != k) throw DataError("ols_fit: ragged predictor matrix");
        x(i, 0) = 1.0;
        for (std::size_t j = 0; j < k; ++j) x(i, j + 1) = predictors[i][j];
        y(i) = response[i];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<Eigen::Index>(k + 1)) {
        throw SingularityError("ols_fit: predictor matrix is rank deficient");
    }
    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd resid = y - x * beta;

    const double rss = resid.squaredNorm();
    const double y_mean = y.mean();
    const double tss = (y.array() - y_mean).matrix().squaredNorm();
    const int df = static_cast<int>(n - k - 1);
    const double sigma2 = rss / df;
    const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();

    OlsFit fit;
    fit.n = n;
    fit.k = k;
    fit.df_residual = df;
    fit.coefficients.resize(k + 1);
    fit.std_errors.resize(k + 1);
    fit.t_values.resize(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
        fit.coefficients[j] = beta(j);
        fit.std_errors[j] = std::sqrt(sigma2 * xtx_inv(j, j));
        fit.t_values[j] = fit.std_errors[j] > 0.0 ? beta(j) / fit.std_errors[j] : 0.0;
    }
    fit.r_squared = tss > 0.0 ? 1.0 - rss / tss : 0.0;
    fit.adj_r_squared = 1.0 - (1.0 - fit.r_squared) * static_cast<double>(n - 1) / df;
    fit.f_stat = fit.r_squared >= 1.0
                     ? std::numeric_limits<double>::infinity()
                     : (fit.r_squared / k) / ((1.0 - fit.r_squared) / df);
    return fit;
}

PairedTInterval paired_t_ci(const std::vector<double>& a, const std::vector<double>& b,
                            double level) {
    if (a.size() != b.size()) throw DataError("paired_t_ci: unequal sample sizes");
    if (a.size() < 2) throw InsufficientDataError("paired_t_ci: need n >= 2");
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("paired_t_ci: level must be in (0,1)");

    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];

    PairedTInterval ci;
    ci.df = static_cast<int>(a.size()) - 1;
    ci.mean_diff = mean_of(diff);
    const double var = variance(diff, ci.mean_diff);
    if (var == 0.0) {
        ci.lo = ci.hi = ci.mean_diff;
        ci.degenerate = true;
        return ci;
    }
    const double se = std::sqrt(var / static_cast<double>(a.size()));
    const double q = student_t_quantile(0.5 + level / 2.0, ci.df);
    ci.lo = ci.mean_diff - q * se;
    ci.hi = ci.mean_diff + q * se;
    return ci;
}

WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) throw InsufficientDataError("welch_t: need n >= 2 per sample");
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    const double va = variance(a, ma) / static_cast<double>(a.size());
    const double vb = variance(b, mb) / static_cast<double>(b.size());

    WelchResult r;
    r.t = (ma - mb) / std::sqrt(va + vb);
    r.df = (va + vb) * (va + vb)
           / (va * va / (static_cast<double>(a.size()) - 1.0)
              + vb * vb / (static_cast<double>(b.size()) - 1.0));
    return r;
}

}  // namespace trustsim
