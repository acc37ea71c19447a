// Test-only reference computations. Each one takes a route that is
// independent of the library code it is used to check.

#ifndef SGN_TESTS_ORACLES_HPP_
#define SGN_TESTS_ORACLES_HPP_

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Dense inverse by full-pivot LU.
inline Eigen::MatrixXd dense_inverse(const Eigen::MatrixXd& a) { return a.fullPivLu().inverse(); }

/// Central finite-difference gradient of f in h, step scaled per coordinate.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& h,
                                   double rel_step = 1e-5) {
    Eigen::VectorXd g(h.size());
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        const double step = rel_step * std::max(1.0, std::abs(h(i)));
        Eigen::VectorXd hp = h, hm = h;
        hp(i) += step;
        hm(i) -= step;
        g(i) = (f(hp) - f(hm)) / (2.0 * step);
    }
    return g;
}

/// Solves (S0 + sum x x^T) theta = S0 theta0 + sum x y by dense factorization.
inline Eigen::VectorXd batch_ridge(const std::vector<Eigen::VectorXd>& xs, const std::vector<double>& ys,
                                   const Eigen::MatrixXd& s0, const Eigen::VectorXd& theta0) {
    Eigen::MatrixXd a = s0;
    Eigen::VectorXd b = s0 * theta0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        a += xs[k] * xs[k].transpose();
        b += xs[k] * ys[k];
    }
    return a.colPivHouseholderQr().solve(b);
}

/// Textbook recursive least squares, written out with explicit loops.
struct TextbookRls {
    Eigen::MatrixXd p;
    Eigen::VectorXd theta;

    void update(const Eigen::VectorXd& x, double y) {
        const Eigen::Index q = x.size();
        Eigen::VectorXd px(q);
        for (Eigen::Index i = 0; i < q; ++i) {
            px(i) = 0.0;
            for (Eigen::Index j = 0; j < q; ++j) px(i) += p(i, j) * x(j);
        }
        double denom = 1.0;
        for (Eigen::Index i = 0; i < q; ++i) denom += x(i) * px(i);
        for (Eigen::Index i = 0; i < q; ++i)
            for (Eigen::Index j = 0; j < q; ++j) p(i, j) -= px(i) * px(j) / denom;
        double pred = 0.0;
        for (Eigen::Index i = 0; i < q; ++i) pred += theta(i) * x(i);
        for (Eigen::Index i = 0; i < q; ++i) {
            double gain = 0.0;
            for (Eigen::Index j = 0; j < q; ++j) gain += p(i, j) * x(j);
            theta(i) += gain * (y - pred);
        }
    }
};

/// Composite Simpson rule for a scalar integrand on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace oracle

#endif  // SGN_TESTS_ORACLES_HPP_
