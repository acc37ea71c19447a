#ifndef SGN_STATS_HPP_
#define SGN_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sgn/error.hpp"
#include "sgn/model.hpp"

namespace sgn {

/// Pivot values C_n across replications for one algorithm.
struct PivotSample {
    std::vector<double> values;
    std::uint64_t n_obs = 0;
    std::string algorithm;
};

/// Quadratic form d^T M d with d = theta_hat - theta_true.
template <int Dim>
double pivot_cn(const Vector<Dim>& theta_hat, const Vector<Dim>& theta_true, const Matrix<Dim>& scaling) {
    const Vector<Dim> d = theta_hat - theta_true;
    const double c = d.dot(scaling * d);
    if (c < -1e-10) throw NumericalBreakdown(BreakdownKind::non_finite_update, "pivot_cn: scaling matrix is not PSD");
    return std::max(c, 0.0);
}

/// CDF of the chi-squared law with two degrees of freedom (Exponential(1/2)).
inline double chi2_2_cdf(double x) {
    if (!(x >= 0.0)) throw ConfigError("chi2_2_cdf: x must be non-negative");
    return -std::expm1(-0.5 * x);
}

inline double chi2_2_quantile(double p) {
    if (!(p >= 0.0 && p < 1.0)) throw ConfigError("chi2_2_quantile: p must lie in [0, 1)");
    return -2.0 * std::log1p(-p);
}

/// One-sample Kolmogorov-Smirnov distance sup_x |F_N(x) - F(x)|.
template <class Cdf>
double ks_statistic(std::span<const double> sample, Cdf&& cdf) {
    if (sample.empty()) throw ConfigError("ks_statistic: empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, std::abs((i + 1) / n - f), std::abs(i / n - f)});
    }
    return d;
}

inline double ks_statistic(std::span<const double> sample) {
    return ks_statistic(sample, [](double x) { return chi2_2_cdf(x); });
}

inline double ks_statistic(const PivotSample& sample) {
    return ks_statistic(std::span<const double>(sample.values));
}

/// Asymptotic 99% critical value of the one-sample KS statistic.
inline double ks_critical_99(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

struct MseRow {
    std::uint64_t n = 0;
    double mse = 0.0;
    double stderr_ = 0.0;
};

/// Mean and standard error of squared errors per checkpoint.
/// `sq_errors[r][c]` is replication r at checkpoint c.
inline std::vector<MseRow> mse_aggregate(std::span<const std::uint64_t> checkpoints,
                                         const std::vector<std::vector<double>>& sq_errors) {
    if (sq_errors.empty()) throw ConfigError("mse_aggregate: need at least one replication");
    std::vector<MseRow> rows(checkpoints.size());
    for (const auto& rep : sq_errors)
        if (rep.size() != checkpoints.size()) throw ConfigError("mse_aggregate: mismatched checkpoint grids");
    const double r = static_cast<double>(sq_errors.size());
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        double sum = 0.0;
        for (const auto& rep : sq_errors) sum += rep[c];
        const double mean = sum / r;
        double ss = 0.0;
        for (const auto& rep : sq_errors) ss += (rep[c] - mean) * (rep[c] - mean);
        rows[c].n = checkpoints[c];
        rows[c].mse = mean;
        rows[c].stderr_ = sq_errors.size() > 1 ? std::sqrt(ss / (r - 1.0) / r) : 0.0;
    }
    return rows;
}

/// Least-squares slope of log(mse) against log(n).
inline double rate_slope(std::span<const std::pair<double, double>> points) {
    if (points.size() < 5) throw ConfigError("rate_slope: need at least 5 checkpoints");
    double lo = points.front().first, hi = points.front().first;
    double sx = 0.0, sy = 0.0;
    for (const auto& [n, mse] : points) {
        if (!(n > 0.0) || !(mse > 0.0)) throw ConfigError("rate_slope: n and mse must be positive");
        lo = std::min(lo, n);
        hi = std::max(hi, n);
        sx += std::log(n);
        sy += std::log(mse);
    }
    if (hi < 100.0 * lo) throw ConfigError("rate_slope: checkpoints must span at least two decades");
    const double m = static_cast<double>(points.size());
    const double mx = sx / m, my = sy / m;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [n, mse] : points) {
        const double dx = std::log(n) - mx;
        sxy += dx * (std::log(mse) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

inline double rate_slope(std::span<const MseRow> rows) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(rows.size());
    for (const auto& r : rows) pts.emplace_back(static_cast<double>(r.n), r.mse);
    return rate_slope(std::span<const std::pair<double, double>>(pts));
}

}  // namespace sgn

#endif  // SGN_STATS_HPP_
