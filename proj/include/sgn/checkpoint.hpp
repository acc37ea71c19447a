#ifndef SGN_CHECKPOINT_HPP_
#define SGN_CHECKPOINT_HPP_

#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "sgn/estimators.hpp"

namespace sgn {

namespace detail {

template <class Derived>
nlohmann::json to_json_array(const Eigen::MatrixBase<Derived>& m) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back(m(i, j));
    return a;
}

template <int Dim>
Vector<Dim> vector_from_json(const nlohmann::json& j) {
    Vector<Dim> v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

template <int Dim>
Matrix<Dim> matrix_from_json(const nlohmann::json& j, Eigen::Index dim) {
    if (static_cast<Eigen::Index>(j.size()) != dim * dim) throw ConfigError("checkpoint: matrix has wrong size");
    Matrix<Dim> m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index c = 0; c < dim; ++c) m(i, c) = j[static_cast<std::size_t>(i * dim + c)].get<double>();
    return m;
}

}  // namespace detail

template <int Dim>
nlohmann::json hyperparams_to_json(const HyperParams<Dim>& hp) {
    nlohmann::json j;
    j["c_alpha"] = hp.c_alpha;
    j["alpha"] = hp.alpha;
    j["c_beta"] = hp.c_beta;
    j["beta"] = hp.beta;
    j["s0"] = detail::to_json_array(hp.s0);
    if (hp.projection)
        j["projection"] = {{"center", detail::to_json_array(hp.projection->center)},
                           {"radius", hp.projection->radius}};
    else
        j["projection"] = nullptr;
    return j;
}

template <int Dim>
HyperParams<Dim> hyperparams_from_json(const nlohmann::json& j, Eigen::Index dim) {
    HyperParams<Dim> hp;
    hp.c_alpha = j.at("c_alpha").get<double>();
    hp.alpha = j.at("alpha").get<double>();
    hp.c_beta = j.at("c_beta").get<double>();
    hp.beta = j.at("beta").get<double>();
    hp.s0 = detail::matrix_from_json<Dim>(j.at("s0"), dim);
    if (j.contains("projection") && !j.at("projection").is_null()) {
        const auto& p = j.at("projection");
        hp.projection = Projection<Dim>{detail::vector_from_json<Dim>(p.at("center")), p.at("radius").get<double>()};
    }
    return hp;
}

/// Serializes an estimator as {algorithm, hyperparams, n, theta, theta_bar,
/// inverse (row-major), sse, rng_state}. Doubles are written with
/// round-trip precision so that a restored run continues bit-identically.
template <int Dim>
nlohmann::json checkpoint_to_json(const EstimatorState<Dim>& s, const HyperParams<Dim>& hp) {
    nlohmann::json j;
    j["algorithm"] = std::string(to_string(s.algorithm));
    j["hyperparams"] = hyperparams_to_json(hp);
    j["n"] = s.n;
    j["theta"] = detail::to_json_array(s.theta);
    j["theta_bar"] = s.theta_bar ? detail::to_json_array(*s.theta_bar) : nlohmann::json(nullptr);
    j["inverse"] = s.inverse ? detail::to_json_array(s.inverse->inv()) : nlohmann::json(nullptr);
    j["sse"] = s.sse;
    j["rng_state"] = s.rng.state();
    return j;
}

template <int Dim>
std::pair<EstimatorState<Dim>, HyperParams<Dim>> checkpoint_from_json(const nlohmann::json& j) {
    try {
        EstimatorState<Dim> s;
        s.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
        s.theta = detail::vector_from_json<Dim>(j.at("theta"));
        const Eigen::Index dim = s.theta.size();
        if (dim < 1 || (Dim != Dynamic && dim != Dim)) throw ConfigError("checkpoint: theta has wrong dimension");
        auto hp = hyperparams_from_json<Dim>(j.at("hyperparams"), dim);
        s.n = j.at("n").get<std::uint64_t>();
        if (!j.at("theta_bar").is_null()) s.theta_bar = detail::vector_from_json<Dim>(j.at("theta_bar"));
        if (!j.at("inverse").is_null()) {
            const std::uint64_t per_step = s.algorithm == Algorithm::rls ? 1 : 2;
            s.inverse = InverseState<Dim>::restore(detail::matrix_from_json<Dim>(j.at("inverse"), dim), per_step * s.n);
        }
        if (is_averaged(s.algorithm) != s.theta_bar.has_value() || uses_inverse(s.algorithm) != s.inverse.has_value())
            throw ConfigError("checkpoint: fields do not match the algorithm");
        s.sse = j.at("sse").get<double>();
        s.rng = Rng::from_state(j.at("rng_state").get<Rng::State>());
        return {std::move(s), std::move(hp)};
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("checkpoint: ") + e.what());
    }
}

}  // namespace sgn

#endif  // SGN_CHECKPOINT_HPP_
