#ifndef SGN_MODEL_HPP_
#define SGN_MODEL_HPP_

#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "sgn/error.hpp"
#include "sgn/rng.hpp"

namespace sgn {

inline constexpr int Dynamic = Eigen::Dynamic;

template <int Dim>
using Vector = Eigen::Matrix<double, Dim, 1>;

template <int Dim>
using Matrix = Eigen::Matrix<double, Dim, Dim>;

/// A regression function f(x, h) together with its gradient in h.
///
/// Models expose their parameter dimension both at compile time
/// (kParamDim, possibly Dynamic) and at run time (param_dim()). Model
/// objects are immutable and may be shared between threads.
template <class M>
concept RegressionModelLike = requires(const M& m, const typename M::Covariate& x,
                                       const Vector<M::kParamDim>& h) {
    typename M::Covariate;
    { M::kParamDim } -> std::convertible_to<int>;
    { m.param_dim() } -> std::convertible_to<Eigen::Index>;
    { m.covariate_dim() } -> std::convertible_to<Eigen::Index>;
    { m.eval(x, h) } -> std::convertible_to<double>;
    { m.grad(x, h) } -> std::convertible_to<Vector<M::kParamDim>>;
};

template <class M>
using ParamVector = Vector<M::kParamDim>;

template <class M>
using ParamMatrix = Matrix<M::kParamDim>;

template <class Covariate>
struct Observation {
    Covariate x;
    double y = 0.0;
};

/// Benchmark model f(x, h) = h1 (1 - exp(-h2 x)), with p = 1 and q = 2.
struct ExpSaturation {
    static constexpr int kParamDim = 2;
    using Covariate = Vector<1>;

    static constexpr Eigen::Index param_dim() noexcept { return 2; }
    static constexpr Eigen::Index covariate_dim() noexcept { return 1; }

    static double eval(const Covariate& x, const Vector<2>& h) noexcept {
        return h(0) * (1.0 - std::exp(-h(1) * x(0)));
    }

    static Vector<2> grad(const Covariate& x, const Vector<2>& h) noexcept {
        const double e = std::exp(-h(1) * x(0));
        return Vector<2>(1.0 - e, h(0) * x(0) * e);
    }
};

/// Linear model f(x, h) = h^T x, with p = q.
template <int Dim = Dynamic>
struct LinearModel {
    static constexpr int kParamDim = Dim;
    using Covariate = Vector<Dim>;

    explicit LinearModel(Eigen::Index dim = (Dim == Dynamic ? 1 : Dim)) : dim_(dim) {
        if (dim < 1 || (Dim != Dynamic && dim != Dim)) throw ConfigError("LinearModel: bad dimension");
    }

    Eigen::Index param_dim() const noexcept { return dim_; }
    Eigen::Index covariate_dim() const noexcept { return dim_; }
    double eval(const Covariate& x, const Vector<Dim>& h) const { return h.dot(x); }
    Vector<Dim> grad(const Covariate& x, const Vector<Dim>&) const { return x; }

private:
    Eigen::Index dim_;
};

/// Type-erased model with run-time dimensions.
class RegressionModel {
public:
    static constexpr int kParamDim = Dynamic;
    using Covariate = Eigen::VectorXd;
    using EvalFn = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
    using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

    RegressionModel(std::string name, Eigen::Index param_dim, Eigen::Index covariate_dim,
                    EvalFn eval, GradFn grad)
        : name_(std::move(name)),
          param_dim_(param_dim),
          covariate_dim_(covariate_dim),
          eval_(std::move(eval)),
          grad_(std::move(grad)) {
        if (param_dim < 1 || covariate_dim < 1) throw ConfigError("RegressionModel: dimensions must be positive");
        if (!eval_ || !grad_) throw ConfigError("RegressionModel: eval and grad are required");
    }

    /// Wraps any statically typed model.
    template <RegressionModelLike M>
    static RegressionModel wrap(std::string name, M model) {
        auto shared = std::make_shared<const M>(std::move(model));
        const auto q = shared->param_dim();
        const auto p = shared->covariate_dim();
        return RegressionModel(
            std::move(name), q, p,
            [shared](const Eigen::VectorXd& x, const Eigen::VectorXd& h) {
                return shared->eval(typename M::Covariate(x), ParamVector<M>(h));
            },
            [shared](const Eigen::VectorXd& x, const Eigen::VectorXd& h) -> Eigen::VectorXd {
                return shared->grad(typename M::Covariate(x), ParamVector<M>(h));
            });
    }

    const std::string& name() const noexcept { return name_; }
    Eigen::Index param_dim() const noexcept { return param_dim_; }
    Eigen::Index covariate_dim() const noexcept { return covariate_dim_; }
    double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& h) const { return eval_(x, h); }
    Eigen::VectorXd grad(const Eigen::VectorXd& x, const Eigen::VectorXd& h) const { return grad_(x, h); }

private:
    std::string name_;
    Eigen::Index param_dim_;
    Eigen::Index covariate_dim_;
    EvalFn eval_;
    GradFn grad_;
};

static_assert(RegressionModelLike<ExpSaturation>);
static_assert(RegressionModelLike<LinearModel<>>);
static_assert(RegressionModelLike<RegressionModel>);

inline RegressionModel exp_saturation_model() {
    return RegressionModel::wrap("exp_saturation", ExpSaturation{});
}

inline RegressionModel linear_model(Eigen::Index dim) {
    return RegressionModel::wrap("linear", LinearModel<>(dim));
}

/// Names accepted by make_model().
inline std::vector<std::string> registered_models() { return {"exp_saturation", "linear"}; }

inline RegressionModel make_model(std::string_view name, Eigen::Index dim = 2) {
    if (name == "exp_saturation") return exp_saturation_model();
    if (name == "linear") return linear_model(dim);
    throw ConfigError("unknown model: " + std::string(name));
}

// ---------------------------------------------------------------------------
// Synthetic data

enum class CovariateLaw { uniform01, normal };
enum class NoiseLaw { normal, uniform, rademacher };

constexpr std::string_view to_string(CovariateLaw c) noexcept {
    return c == CovariateLaw::uniform01 ? "uniform01" : "normal";
}

constexpr std::string_view to_string(NoiseLaw n) noexcept {
    switch (n) {
        case NoiseLaw::normal: return "normal";
        case NoiseLaw::uniform: return "uniform";
        case NoiseLaw::rademacher: return "rademacher";
    }
    return "unknown";
}

inline CovariateLaw covariate_law_from_string(std::string_view s) {
    if (s == "uniform01") return CovariateLaw::uniform01;
    if (s == "normal") return CovariateLaw::normal;
    throw ConfigError("unknown covariate law: " + std::string(s));
}

inline NoiseLaw noise_law_from_string(std::string_view s) {
    if (s == "normal") return NoiseLaw::normal;
    if (s == "uniform") return NoiseLaw::uniform;
    if (s == "rademacher") return NoiseLaw::rademacher;
    throw ConfigError("unknown noise law: " + std::string(s));
}

template <class Covariate>
void sample_covariate(CovariateLaw law, Rng& rng, Covariate& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x(i) = law == CovariateLaw::uniform01 ? rng.uniform() : rng.normal();
}

/// Zero-mean noise with standard deviation `sd`.
inline double sample_noise(NoiseLaw law, double sd, Rng& rng) {
    switch (law) {
        case NoiseLaw::normal: return sd * rng.normal();
        case NoiseLaw::uniform: return sd * std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
        case NoiseLaw::rademacher: return (rng() >> 63) ? sd : -sd;
    }
    return 0.0;
}

/// Variance of eps^2 per unit variance, used for the sigma^2 CLT band.
constexpr double noise_fourth_moment_excess(NoiseLaw law) noexcept {
    switch (law) {
        case NoiseLaw::normal: return 2.0;
        case NoiseLaw::uniform: return 0.8;
        case NoiseLaw::rademacher: return 0.0;
    }
    return 0.0;
}

template <RegressionModelLike M>
struct SyntheticSpec {
    M model;
    ParamVector<M> theta_true;
    CovariateLaw covariate_law = CovariateLaw::uniform01;
    NoiseLaw noise_law = NoiseLaw::normal;
    double noise_sd = 1.0;
    std::uint64_t seed = 0;

    double sigma2() const noexcept { return noise_sd * noise_sd; }

    void validate() const {
        if (theta_true.size() != model.param_dim())
            throw ConfigError("SyntheticSpec: theta_true has wrong dimension");
        if (!theta_true.allFinite()) throw ConfigError("SyntheticSpec: theta_true must be finite");
        if (!(noise_sd > 0.0) || !std::isfinite(noise_sd))
            throw ConfigError("SyntheticSpec: noise variance must be positive and finite");
    }
};

/// Streams i.i.d. observations Y = f(X, theta) + eps from an owned RNG.
template <RegressionModelLike M>
class SyntheticSource {
public:
    using Covariate = typename M::Covariate;

    SyntheticSource(const SyntheticSpec<M>& spec, std::uint64_t seed)
        : spec_(&spec), rng_(seed), x_(spec.model.covariate_dim()) {
        spec.validate();
    }

    explicit SyntheticSource(const SyntheticSpec<M>& spec) : SyntheticSource(spec, spec.seed) {}

    Observation<Covariate> next() {
        sample_covariate(spec_->covariate_law, rng_, x_);
        const double eps = sample_noise(spec_->noise_law, spec_->noise_sd, rng_);
        return {x_, spec_->model.eval(x_, spec_->theta_true) + eps};
    }

    const Rng& rng() const noexcept { return rng_; }

private:
    const SyntheticSpec<M>* spec_;
    Rng rng_;
    Covariate x_;
};

template <RegressionModelLike M>
std::vector<Observation<typename M::Covariate>> generate(const SyntheticSpec<M>& spec, std::size_t n) {
    if (n < 1) throw ConfigError("generate: n must be at least 1");
    SyntheticSource<M> source(spec);
    std::vector<Observation<typename M::Covariate>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(source.next());
    return out;
}

// ---------------------------------------------------------------------------
// L(h) = E[grad f(X,h) grad f(X,h)^T]

template <RegressionModelLike M>
struct LThetaMonteCarlo {
    ParamMatrix<M> mean;
    ParamMatrix<M> stderr_;
};

/// Monte Carlo estimate of L(h), with element-wise standard errors.
template <RegressionModelLike M>
LThetaMonteCarlo<M> l_theta_monte_carlo(const M& model, CovariateLaw law, const ParamVector<M>& h,
                                        std::size_t mc_samples, Rng& rng) {
    if (mc_samples < 10000) throw ConfigError("l_theta_monte_carlo: need at least 1e4 samples");
    const auto q = model.param_dim();
    ParamMatrix<M> sum = ParamMatrix<M>::Zero(q, q);
    ParamMatrix<M> sumsq = ParamMatrix<M>::Zero(q, q);
    typename M::Covariate x(model.covariate_dim());
    for (std::size_t i = 0; i < mc_samples; ++i) {
        sample_covariate(law, rng, x);
        const ParamVector<M> g = model.grad(x, h);
        if (!g.allFinite()) throw NumericalBreakdown(BreakdownKind::non_finite_gradient, "l_theta_monte_carlo");
        const ParamMatrix<M> outer = g * g.transpose();
        sum += outer;
        sumsq += outer.cwiseProduct(outer);
    }
    const double m = static_cast<double>(mc_samples);
    LThetaMonteCarlo<M> out;
    out.mean = sum / m;
    const ParamMatrix<M> var = (sumsq / m - out.mean.cwiseProduct(out.mean)) * (m / (m - 1.0));
    out.stderr_ = (var.cwiseMax(0.0) / m).cwiseSqrt();
    return out;
}

/// Composite Simpson quadrature of L(h) for scalar covariates uniform on [0, 1].
template <RegressionModelLike M>
ParamMatrix<M> l_theta_quadrature(const M& model, const ParamVector<M>& h, int nodes = 2001) {
    if (model.covariate_dim() != 1) throw ConfigError("l_theta_quadrature: needs a scalar covariate");
    if (nodes < 1001 || nodes % 2 == 0) throw ConfigError("l_theta_quadrature: need an odd node count >= 1001");
    const auto q = model.param_dim();
    const int intervals = nodes - 1;
    const double step = 1.0 / intervals;
    ParamMatrix<M> acc = ParamMatrix<M>::Zero(q, q);
    typename M::Covariate x(1);
    for (int i = 0; i <= intervals; ++i) {
        x(0) = i * step;
        const ParamVector<M> g = model.grad(x, h);
        if (!g.allFinite()) throw NumericalBreakdown(BreakdownKind::non_finite_gradient, "l_theta_quadrature");
        const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc.noalias() += w * g * g.transpose();
    }
    return acc * (step / 3.0);
}

/// L(h): deterministic quadrature when the covariate is scalar and
/// uniform on [0, 1], Monte Carlo with `mc_samples` draws otherwise.
template <RegressionModelLike M>
ParamMatrix<M> l_theta_oracle(const M& model, CovariateLaw law, const ParamVector<M>& h,
                              std::size_t mc_samples = 100000, std::uint64_t seed = 0) {
    if (model.covariate_dim() == 1 && law == CovariateLaw::uniform01) return l_theta_quadrature(model, h);
    Rng rng(seed);
    ParamMatrix<M> m = l_theta_monte_carlo(model, law, h, mc_samples, rng).mean;
    return 0.5 * (m + m.transpose());
}

}  // namespace sgn

#endif  // SGN_MODEL_HPP_
