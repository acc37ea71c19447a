#ifndef SGN_ESTIMATORS_HPP_
#define SGN_ESTIMATORS_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "sgn/error.hpp"
#include "sgn/model.hpp"
#include "sgn/riccati.hpp"
#include "sgn/rng.hpp"

namespace sgn {

/// Online estimators. RLS is the introductory Gauss-Newton recursion, in
/// which the inverse is updated before the parameter move; with a linear
/// model it is exactly recursive least squares.
enum class Algorithm { sgn, asgn, sgd, asgd, rls };

constexpr std::string_view to_string(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::sgn: return "SGN";
        case Algorithm::asgn: return "ASGN";
        case Algorithm::sgd: return "SGD";
        case Algorithm::asgd: return "ASGD";
        case Algorithm::rls: return "RLS";
    }
    return "unknown";
}

inline Algorithm algorithm_from_string(std::string_view s) {
    for (Algorithm a : {Algorithm::sgn, Algorithm::asgn, Algorithm::sgd, Algorithm::asgd, Algorithm::rls})
        if (s == to_string(a)) return a;
    throw ConfigError("unknown algorithm: " + std::string(s));
}

constexpr bool is_averaged(Algorithm a) noexcept { return a == Algorithm::asgn || a == Algorithm::asgd; }
constexpr bool uses_inverse(Algorithm a) noexcept {
    return a == Algorithm::sgn || a == Algorithm::asgn || a == Algorithm::rls;
}
constexpr bool uses_step_sequence(Algorithm a) noexcept {
    return a == Algorithm::asgn || a == Algorithm::sgd || a == Algorithm::asgd;
}

template <int Dim>
struct Projection {
    Vector<Dim> center;
    double radius = 1.0;
};

/// Euclidean projection onto the closed ball B(center, radius).
template <int Dim>
Vector<Dim> project(const Vector<Dim>& theta, const Vector<Dim>& center, double radius) {
    if (!(radius > 0.0)) throw ConfigError("project: radius must be positive");
    const Vector<Dim> d = theta - center;
    const double norm = d.norm();
    // The slack absorbs rounding in a previous projection, so projecting twice is a no-op.
    if (norm <= radius * (1.0 + 8.0 * std::numeric_limits<double>::epsilon())) return theta;
    return center + (radius / norm) * d;
}

template <int Dim>
struct HyperParams {
    double c_alpha = 1.0;
    double alpha = 0.66;
    double c_beta = 0.0;
    double beta = 0.2;
    Matrix<Dim> s0;
    std::optional<Projection<Dim>> projection;

    static HyperParams defaults(Eigen::Index dim = Dim) {
        HyperParams hp;
        hp.s0 = Matrix<Dim>::Identity(dim, dim);
        return hp;
    }

    double step(std::uint64_t k) const { return c_alpha * std::pow(static_cast<double>(k), -alpha); }

    double z_weight(std::uint64_t k) const {
        return c_beta == 0.0 ? 0.0 : c_beta * std::pow(static_cast<double>(k), -beta);
    }

    /// Checks the declared ranges. With `enforce_theory` off, the upper
    /// bounds on beta that the convergence theory needs are not checked
    /// (some published grids use beta outside them).
    void validate(Algorithm algorithm, Eigen::Index dim, bool enforce_theory = true) const {
        auto fail = [](const std::string& m) { throw ConfigError("HyperParams: " + m); };
        if (uses_step_sequence(algorithm)) {
            if (!(c_alpha > 0.0) || !std::isfinite(c_alpha)) fail("c_alpha must be positive");
            if (!(alpha > 0.5 && alpha < 1.0)) fail("alpha must lie in (1/2, 1)");
        }
        if (!(c_beta >= 0.0) || !std::isfinite(c_beta)) fail("c_beta must be non-negative");
        if (c_beta > 0.0 && (algorithm == Algorithm::sgn || algorithm == Algorithm::asgn)) {
            if (!(beta > 0.0) || !std::isfinite(beta)) fail("beta must be positive");
            if (enforce_theory) {
                if (algorithm == Algorithm::sgn && !(beta < 0.5)) fail("beta must lie in (0, 1/2) for SGN");
                if (algorithm == Algorithm::asgn && !(beta < alpha - 0.5))
                    fail("beta must lie in (0, alpha - 1/2) for ASGN");
            }
        }
        if (uses_inverse(algorithm)) {
            if (s0.rows() != dim || s0.cols() != dim) fail("s0 has wrong dimension");
            if (!s0.allFinite() || (s0 - s0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, s0.cwiseAbs().maxCoeff()))
                fail("s0 must be symmetric");
            if (Eigen::LLT<Matrix<Dim>>(s0).info() != Eigen::Success) fail("s0 must be positive definite");
        }
        if (projection) {
            if (projection->center.size() != dim) fail("projection center has wrong dimension");
            if (!(projection->radius > 0.0)) fail("projection radius must be positive");
        }
    }
};

/// One estimator run. `theta_bar` is set for averaged algorithms and
/// `inverse` for Gauss-Newton type algorithms.
template <int Dim>
struct EstimatorState {
    Algorithm algorithm = Algorithm::asgn;
    Vector<Dim> theta;
    std::optional<Vector<Dim>> theta_bar;
    std::optional<InverseState<Dim>> inverse;
    std::uint64_t n = 0;
    double sse = 0.0;
    Rng rng;

    Eigen::Index dim() const noexcept { return theta.size(); }

    /// The estimate reported for this algorithm (averaged when available).
    const Vector<Dim>& estimate() const noexcept { return theta_bar ? *theta_bar : theta; }
};

/// Fresh state with theta_0 = theta_bar_0 = theta0 and inverse S_0^{-1}.
template <int Dim>
EstimatorState<Dim> make_state(Algorithm algorithm, const HyperParams<Dim>& hp, const Vector<Dim>& theta0,
                               std::uint64_t z_seed, bool enforce_theory = true) {
    hp.validate(algorithm, theta0.size(), enforce_theory);
    if (!theta0.allFinite()) throw ConfigError("make_state: theta0 must be finite");
    EstimatorState<Dim> s;
    s.algorithm = algorithm;
    s.theta = hp.projection ? project<Dim>(theta0, hp.projection->center, hp.projection->radius) : theta0;
    if (is_averaged(algorithm)) s.theta_bar = s.theta;
    if (uses_inverse(algorithm)) {
        Eigen::LLT<Matrix<Dim>> llt(hp.s0);
        Matrix<Dim> inv = llt.solve(Matrix<Dim>::Identity(hp.s0.rows(), hp.s0.cols()));
        s.inverse = InverseState<Dim>(Matrix<Dim>(0.5 * (inv + inv.transpose())));
    }
    s.rng = Rng(z_seed);
    return s;
}

namespace detail {

template <int Dim>
void check_finite(const Vector<Dim>& g, double residual) {
    if (!g.allFinite()) throw NumericalBreakdown(BreakdownKind::non_finite_gradient, "gradient is not finite");
    if (!std::isfinite(residual)) throw NumericalBreakdown(BreakdownKind::non_finite_residual, "residual is not finite");
}

template <int Dim>
void apply_projection(const HyperParams<Dim>& hp, Vector<Dim>& theta) {
    if (hp.projection) theta = project<Dim>(theta, hp.projection->center, hp.projection->radius);
}

template <int Dim>
void regularize_and_add(EstimatorState<Dim>& s, const HyperParams<Dim>& hp, std::uint64_t k,
                        const Vector<Dim>& phi) {
    const double w = hp.z_weight(k);
    if (w > 0.0) {
        Vector<Dim> z(s.dim());
        fill_normal(s.rng, z);
        s.inverse->double_update(z, w, phi);
    } else {
        s.inverse->double_update(Vector<Dim>::Zero(s.dim()), 0.0, phi);
    }
}

template <int Dim>
void average(EstimatorState<Dim>& s, std::uint64_t k) {
    const double kk = static_cast<double>(k);
    *s.theta_bar = (kk * *s.theta_bar + s.theta) / (kk + 1.0);
}

}  // namespace detail

/// Accumulates the squared prediction error of `obs` against the current
/// averaged iterate (or the iterate itself for non-averaged algorithms).
/// Must run before the observation is consumed; the step functions call it.
template <RegressionModelLike M, int Dim>
void sigma2_update(EstimatorState<Dim>& s, const M& model, const Observation<typename M::Covariate>& obs) {
    const double e = model.eval(obs.x, s.estimate()) - obs.y;
    s.sse += e * e;
}

/// Recursive estimate of the noise variance, (1/n) sum (Yhat_k - Y_k)^2.
template <int Dim>
double sigma2(const EstimatorState<Dim>& s) {
    if (s.n == 0) throw ConfigError("sigma2: no observation consumed yet");
    return s.sse / static_cast<double>(s.n);
}

/// Stochastic Gauss-Newton: the parameter moves with the inverse from
/// before this observation, then the inverse absorbs the regularization
/// term and the gradient outer product.
template <RegressionModelLike M, int Dim>
void sgn_step(EstimatorState<Dim>& s, const HyperParams<Dim>& hp, const M& model,
              const Observation<typename M::Covariate>& obs) {
    const std::uint64_t k = s.n + 1;
    sigma2_update(s, model, obs);
    const Vector<Dim> phi = model.grad(obs.x, s.theta);
    const double residual = obs.y - model.eval(obs.x, s.theta);
    detail::check_finite(phi, residual);
    s.theta.noalias() += s.inverse->inv() * (phi * residual);
    detail::regularize_and_add(s, hp, k, phi);
    detail::apply_projection(hp, s.theta);
    s.n = k;
}

/// Averaged Stochastic Gauss-Newton. The move uses the step
/// c_alpha k^{-alpha} times k S^{-1}; the inverse is fed the gradient at
/// the averaged iterate.
template <RegressionModelLike M, int Dim>
void asgn_step(EstimatorState<Dim>& s, const HyperParams<Dim>& hp, const M& model,
               const Observation<typename M::Covariate>& obs) {
    const std::uint64_t k = s.n + 1;
    sigma2_update(s, model, obs);
    const Vector<Dim> phi_bar = model.grad(obs.x, *s.theta_bar);
    const Vector<Dim> g = model.grad(obs.x, s.theta);
    const double residual = obs.y - model.eval(obs.x, s.theta);
    detail::check_finite(g, residual);
    detail::check_finite(phi_bar, 0.0);
    const double gain = hp.step(k) * static_cast<double>(k) * residual;
    s.theta.noalias() += s.inverse->inv() * (gain * g);
    detail::apply_projection(hp, s.theta);
    detail::average(s, k);
    detail::regularize_and_add(s, hp, k, phi_bar);
    s.n = k;
}

/// Stochastic gradient with step c_alpha k^{-alpha}; ASGD also averages.
template <RegressionModelLike M, int Dim>
void sgd_step(EstimatorState<Dim>& s, const HyperParams<Dim>& hp, const M& model,
              const Observation<typename M::Covariate>& obs) {
    const std::uint64_t k = s.n + 1;
    sigma2_update(s, model, obs);
    const Vector<Dim> g = model.grad(obs.x, s.theta);
    const double residual = obs.y - model.eval(obs.x, s.theta);
    detail::check_finite(g, residual);
    s.theta.noalias() += (hp.step(k) * residual) * g;
    detail::apply_projection(hp, s.theta);
    if (s.theta_bar) detail::average(s, k);
    s.n = k;
}

template <RegressionModelLike M, int Dim>
void asgd_step(EstimatorState<Dim>& s, const HyperParams<Dim>& hp, const M& model,
               const Observation<typename M::Covariate>& obs) {
    sgd_step(s, hp, model, obs);
}

/// Gauss-Newton recursion with the inverse updated first:
/// S_k^{-1} = (S_{k-1} + phi phi^T)^{-1}, theta += S_k^{-1} phi residual.
template <RegressionModelLike M, int Dim>
void rls_step(EstimatorState<Dim>& s, const HyperParams<Dim>& hp, const M& model,
              const Observation<typename M::Covariate>& obs) {
    const std::uint64_t k = s.n + 1;
    sigma2_update(s, model, obs);
    const Vector<Dim> phi = model.grad(obs.x, s.theta);
    const double residual = obs.y - model.eval(obs.x, s.theta);
    detail::check_finite(phi, residual);
    s.inverse->update(phi, 1.0);
    s.theta.noalias() += s.inverse->inv() * (phi * residual);
    detail::apply_projection(hp, s.theta);
    s.n = k;
}

template <RegressionModelLike M, int Dim>
void step(EstimatorState<Dim>& s, const HyperParams<Dim>& hp, const M& model,
          const Observation<typename M::Covariate>& obs) {
    switch (s.algorithm) {
        case Algorithm::sgn: sgn_step(s, hp, model, obs); return;
        case Algorithm::asgn: asgn_step(s, hp, model, obs); return;
        case Algorithm::sgd: sgd_step(s, hp, model, obs); return;
        case Algorithm::asgd: asgd_step(s, hp, model, obs); return;
        case Algorithm::rls: rls_step(s, hp, model, obs); return;
    }
}

/// Bundles a model, hyperparameters and a state.
template <RegressionModelLike M>
class OnlineEstimator {
public:
    static constexpr int kDim = M::kParamDim;
    using Obs = Observation<typename M::Covariate>;

    OnlineEstimator(const M& model, Algorithm algorithm, HyperParams<kDim> hp, const Vector<kDim>& theta0,
                    std::uint64_t z_seed = 0, bool enforce_theory = true)
        : model_(&model),
          hp_(std::move(hp)),
          state_(make_state(algorithm, hp_, theta0, z_seed, enforce_theory)) {}

    void consume(const Obs& obs) { step(state_, hp_, *model_, obs); }

    const EstimatorState<kDim>& state() const noexcept { return state_; }
    EstimatorState<kDim>& state() noexcept { return state_; }
    const HyperParams<kDim>& hyperparams() const noexcept { return hp_; }

private:
    const M* model_;
    HyperParams<kDim> hp_;
    EstimatorState<kDim> state_;
};

}  // namespace sgn

#endif  // SGN_ESTIMATORS_HPP_
