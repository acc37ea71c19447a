#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sgn/checkpoint.hpp"
#include "sgn/estimators.hpp"
#include "sgn/harness.hpp"

namespace {

using sgn::Algorithm;
using DynHp = sgn::HyperParams<sgn::Dynamic>;
using DynObs = sgn::Observation<Eigen::VectorXd>;

/// f(x, h) = 0 with constant gradient g: isolates the update arithmetic.
sgn::RegressionModel constant_gradient(Eigen::VectorXd g) {
    const auto q = g.size();
    return sgn::RegressionModel(
        "const_grad", q, 1, [](const Eigen::VectorXd&, const Eigen::VectorXd&) { return 0.0; },
        [g](const Eigen::VectorXd&, const Eigen::VectorXd&) { return g; });
}

/// f(x, h) = h1 (q = 1).
sgn::RegressionModel identity_model() {
    return sgn::RegressionModel(
        "identity", 1, 1, [](const Eigen::VectorXd&, const Eigen::VectorXd& h) { return h(0); },
        [](const Eigen::VectorXd&, const Eigen::VectorXd&) -> Eigen::VectorXd { return Eigen::VectorXd::Ones(1); });
}

DynObs obs(double x, double y) { return {Eigen::VectorXd::Constant(1, x), y}; }

TEST(Project, InsideBallIsUnchanged) {
    const Eigen::Vector2d c(21, 12);
    const Eigen::Vector2d t(25, 10);
    EXPECT_EQ(sgn::project<2>(t, c, 12.0), t);
}

TEST(Project, OutsideBallIsScaledRadially) {
    const Eigen::Vector3d c(1, 2, 3);
    const Eigen::Vector3d t = c + Eigen::Vector3d(2 * 5.0, 0, 0);
    EXPECT_LE((sgn::project<3>(t, c, 5.0) - (c + Eigen::Vector3d(5.0, 0, 0))).norm(), 1e-14);
    EXPECT_THROW(sgn::project<3>(t, c, 0.0), sgn::ConfigError);
}

TEST(Project, IsIdempotent) {
    sgn::Rng rng(6);
    const Eigen::Vector2d c(21, 12);
    for (int i = 0; i < 200; ++i) {
        Eigen::Vector2d t;
        sgn::fill_normal(rng, t);
        t = c + 30.0 * t;
        const Eigen::Vector2d once = sgn::project<2>(t, c, 12.0);
        EXPECT_LE((once - c).norm(), 12.0 + 1e-12);
        EXPECT_EQ(sgn::project<2>(once, c, 12.0), once);
    }
}

TEST(HyperParams, RangeChecks) {
    auto hp = DynHp::defaults(2);
    EXPECT_NO_THROW(hp.validate(Algorithm::asgn, 2));
    hp.alpha = 1.0;
    EXPECT_THROW(hp.validate(Algorithm::asgn, 2), sgn::ConfigError);
    EXPECT_NO_THROW(hp.validate(Algorithm::sgn, 2));  // SGN has no step sequence
    hp = DynHp::defaults(2);
    hp.c_alpha = 0.0;
    EXPECT_THROW(hp.validate(Algorithm::sgd, 2), sgn::ConfigError);
    hp = DynHp::defaults(2);
    hp.c_beta = 1.0;
    hp.beta = 0.2;  // needs beta < alpha - 1/2 = 0.16
    EXPECT_THROW(hp.validate(Algorithm::asgn, 2), sgn::ConfigError);
    EXPECT_NO_THROW(hp.validate(Algorithm::asgn, 2, /*enforce_theory=*/false));
    EXPECT_NO_THROW(hp.validate(Algorithm::sgn, 2));
    hp.beta = 0.5;
    EXPECT_THROW(hp.validate(Algorithm::sgn, 2), sgn::ConfigError);
    hp = DynHp::defaults(2);
    hp.s0 = -hp.s0;
    EXPECT_THROW(hp.validate(Algorithm::sgn, 2), sgn::ConfigError);
    EXPECT_NO_THROW(hp.validate(Algorithm::sgd, 2));  // no inverse for SGD
    hp = DynHp::defaults(2);
    hp.projection = sgn::Projection<sgn::Dynamic>{Eigen::VectorXd::Zero(2), -1.0};
    EXPECT_THROW(hp.validate(Algorithm::sgd, 2), sgn::ConfigError);
}

TEST(SgnStep, ZeroResidualKeepsThetaButUpdatesInverse) {
    const auto model = sgn::exp_saturation_model();
    const Eigen::VectorXd theta = Eigen::Vector2d(21, 12);
    auto hp = DynHp::defaults(2);
    auto s = sgn::make_state(Algorithm::sgn, hp, theta, 1);
    const auto x = Eigen::VectorXd::Constant(1, 0.3);
    sgn::sgn_step(s, hp, model, DynObs{x, model.eval(x, theta)});
    EXPECT_EQ(s.theta, theta);
    EXPECT_NE(s.inverse->inv(), Eigen::MatrixXd::Identity(2, 2));
    EXPECT_EQ(s.n, 1u);
}

TEST(SgnStep, MovesWithPreUpdateInverse) {
    const auto model = constant_gradient(Eigen::Vector2d(1, 1));
    auto hp = DynHp::defaults(2);
    auto s = sgn::make_state(Algorithm::sgn, hp, Eigen::VectorXd(Eigen::VectorXd::Zero(2)), 1);
    s.inverse = sgn::InverseState<sgn::Dynamic>::restore(Eigen::Vector2d(1.0, 0.5).asDiagonal().toDenseMatrix(), 0);
    sgn::sgn_step(s, hp, model, obs(0.0, 2.0));
    EXPECT_NEAR(s.theta(0), 2.0, 1e-15);
    EXPECT_NEAR(s.theta(1), 1.0, 1e-15);
}

TEST(SgnStep, RegularizedInverseMatchesDenseAccumulation) {
    // H_n = I + sum phi phi^T + sum c k^{-beta} Z Z^T, with Z replayed from the state's stream.
    const auto model = sgn::exp_saturation_model();
    auto hp = DynHp::defaults(2);
    hp.c_beta = 0.7;
    hp.beta = 0.3;
    const Eigen::VectorXd theta_true = Eigen::Vector2d(21, 12);
    auto s = sgn::make_state(Algorithm::sgn, hp, Eigen::VectorXd(Eigen::Vector2d(20, 13)), 555);
    sgn::Rng replay(555), data(3);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(2, 2);
    for (int k = 1; k <= 300; ++k) {
        const auto x = Eigen::VectorXd::Constant(1, data.uniform());
        const double y = model.eval(x, theta_true) + data.normal();
        const Eigen::VectorXd phi = model.grad(x, s.theta);
        sgn::sgn_step(s, hp, model, DynObs{x, y});
        Eigen::VectorXd z(2);
        sgn::fill_normal(replay, z);
        acc += phi * phi.transpose() + hp.c_beta * std::pow(k, -hp.beta) * z * z.transpose();
    }
    EXPECT_LE((s.inverse->inv() * acc - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-9);
}

TEST(SgnStep, NonFiniteGradientIsABreakdown) {
    const auto model = constant_gradient(Eigen::Vector2d(std::numeric_limits<double>::infinity(), 0));
    auto hp = DynHp::defaults(2);
    auto s = sgn::make_state(Algorithm::sgn, hp, Eigen::VectorXd(Eigen::VectorXd::Zero(2)), 1);
    try {
        sgn::sgn_step(s, hp, model, obs(0, 1));
        FAIL();
    } catch (const sgn::NumericalBreakdown& e) {
        EXPECT_EQ(e.kind(), sgn::BreakdownKind::non_finite_gradient);
    }
    EXPECT_THROW(sgn::sgn_step(s, hp, constant_gradient(Eigen::Vector2d(1, 1)),
                               obs(0, std::numeric_limits<double>::quiet_NaN())),
                 sgn::NumericalBreakdown);
}

TEST(AsgnStep, FirstStepAveragesTwoIterates) {
    const auto model = sgn::exp_saturation_model();
    auto hp = DynHp::defaults(2);
    const Eigen::VectorXd theta0 = Eigen::Vector2d(25, 9);
    auto s = sgn::make_state(Algorithm::asgn, hp, theta0, 1);
    sgn::asgn_step(s, hp, model, obs(0.4, 15.0));
    EXPECT_NE(s.theta, theta0);
    EXPECT_LE((*s.theta_bar - 0.5 * (theta0 + s.theta)).norm(), 1e-14);
}

TEST(AsgnStep, ZeroResidualKeepsIteratesButUpdatesInverse) {
    const auto model = sgn::exp_saturation_model();
    auto hp = DynHp::defaults(2);
    const Eigen::VectorXd theta = Eigen::Vector2d(21, 12);
    auto s = sgn::make_state(Algorithm::asgn, hp, theta, 1);
    const auto x = Eigen::VectorXd::Constant(1, 0.8);
    sgn::asgn_step(s, hp, model, DynObs{x, model.eval(x, theta)});
    EXPECT_EQ(s.theta, theta);
    EXPECT_EQ(*s.theta_bar, theta);
    EXPECT_NE(s.inverse->inv(), Eigen::MatrixXd::Identity(2, 2));
}

TEST(AsgnStep, StepAndInverseUseTheRightIterates) {
    // theta and theta_bar differ; the move uses grad at theta with gain
    // c_alpha k^{1-alpha} S^{-1}, the inverse absorbs grad at theta_bar.
    const auto model = sgn::exp_saturation_model();
    auto hp = DynHp::defaults(2);
    hp.c_alpha = 0.8;
    hp.alpha = 0.7;
    auto s = sgn::make_state(Algorithm::asgn, hp, Eigen::VectorXd(Eigen::Vector2d(20, 11)), 1);
    for (int i = 0; i < 3; ++i) sgn::asgn_step(s, hp, model, obs(0.1 * (i + 1), 10.0 + i));
    ASSERT_GT((s.theta - *s.theta_bar).norm(), 1e-6);

    const auto x = Eigen::VectorXd::Constant(1, 0.35);
    const double y = 17.0;
    const Eigen::MatrixXd inv_before = s.inverse->inv();
    const Eigen::VectorXd theta_before = s.theta, bar_before = *s.theta_bar;
    const double k = 4.0;
    const Eigen::VectorXd expected_theta = theta_before + hp.c_alpha * std::pow(k, -hp.alpha) * k * inv_before *
                                                              model.grad(x, theta_before) *
                                                              (y - model.eval(x, theta_before));
    const Eigen::VectorXd phi_bar = model.grad(x, bar_before);
    const Eigen::MatrixXd expected_inv =
        oracle::dense_inverse(oracle::dense_inverse(inv_before) + phi_bar * phi_bar.transpose());

    sgn::asgn_step(s, hp, model, DynObs{x, y});
    EXPECT_LE((s.theta - expected_theta).norm(), 1e-12);
    EXPECT_LE((*s.theta_bar - (k * bar_before + expected_theta) / (k + 1.0)).norm(), 1e-12);
    EXPECT_LE((s.inverse->inv() - expected_inv).norm(), 1e-10);
}

TEST(SgdStep, UnitStepMovesByResidual) {
    const auto model = identity_model();
    auto hp = DynHp::defaults(1);
    hp.c_alpha = 1.0;  // gamma_1 = 1
    auto s = sgn::make_state(Algorithm::sgd, hp, Eigen::VectorXd(Eigen::VectorXd::Constant(1, 2.0)), 1);
    sgn::sgd_step(s, hp, model, obs(0.0, 2.3));
    EXPECT_NEAR(s.theta(0), 2.3, 1e-15);
    EXPECT_FALSE(s.theta_bar.has_value());
    EXPECT_FALSE(s.inverse.has_value());
}

TEST(SgdStep, ZeroResidualKeepsTheta) {
    const auto model = identity_model();
    auto hp = DynHp::defaults(1);
    for (auto alg : {Algorithm::sgd, Algorithm::asgd}) {
        auto s = sgn::make_state(alg, hp, Eigen::VectorXd(Eigen::VectorXd::Constant(1, 2.0)), 1);
        sgn::step(s, hp, model, obs(0.0, 2.0));
        EXPECT_EQ(s.theta(0), 2.0);
        if (s.theta_bar) {
            EXPECT_EQ((*s.theta_bar)(0), 2.0);
        }
    }
}

TEST(Averaging, RecursiveMeanMatchesDirectMean) {
    const auto spec = sgn::benchmark_spec();
    auto hp = sgn::HyperParams<2>::defaults();
    for (auto alg : {Algorithm::asgn, Algorithm::asgd}) {
        hp.c_alpha = alg == Algorithm::asgn ? 1.0 : 5.0;
        auto s = sgn::make_state(alg, hp, sgn::Vector<2>(22, 11), 3);
        sgn::SyntheticSource<sgn::ExpSaturation> src(spec, 9);
        sgn::Vector<2> sum = s.theta;
        for (int k = 1; k <= 10000; ++k) {
            sgn::step(s, hp, spec.model, src.next());
            sum += s.theta;
        }
        const sgn::Vector<2> direct = sum / 10001.0;
        EXPECT_LE((*s.theta_bar - direct).norm() / direct.norm(), 1e-10);
    }
}

struct LinearRun {
    std::vector<Eigen::VectorXd> xs;
    std::vector<double> ys;
};

LinearRun linear_data(int q, int n, std::uint64_t seed) {
    sgn::Rng rng(seed);
    const Eigen::VectorXd theta = Eigen::VectorXd::LinSpaced(q, -1.0, 2.0);
    LinearRun out;
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd x(q);
        sgn::fill_normal(rng, x);
        out.xs.push_back(x);
        out.ys.push_back(theta.dot(x) + rng.normal());
    }
    return out;
}

TEST(LinearCase, GaussNewtonRecursionIsRecursiveLeastSquares) {
    const int q = 4;
    const auto data = linear_data(q, 500, 21);
    const sgn::LinearModel<> model(q);
    auto hp = DynHp::defaults(q);
    const Eigen::VectorXd theta0 = Eigen::VectorXd::Constant(q, 0.5);
    auto s = sgn::make_state(Algorithm::rls, hp, theta0, 1);
    oracle::TextbookRls rls{Eigen::MatrixXd::Identity(q, q), theta0};
    for (std::size_t k = 0; k < data.xs.size(); ++k) {
        sgn::rls_step(s, hp, model, DynObs{data.xs[k], data.ys[k]});
        rls.update(data.xs[k], data.ys[k]);
        ASSERT_LE((s.theta - rls.theta).norm(), 1e-8) << "step " << k;
    }
    const auto batch = oracle::batch_ridge(data.xs, data.ys, hp.s0, theta0);
    EXPECT_LE((s.theta - batch).norm(), 1e-6);
}

TEST(LinearCase, DefinitionFormSgnApproachesBatchSolution) {
    // The definition-form SGN moves with the inverse from before the
    // observation, so it is not exactly the batch solution; the gap shrinks.
    const int q = 3;
    const auto data = linear_data(q, 4000, 5);
    const sgn::LinearModel<> model(q);
    auto hp = DynHp::defaults(q);
    const Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(q);
    auto s = sgn::make_state(Algorithm::sgn, hp, theta0, 1);
    std::vector<double> gaps;
    std::vector<Eigen::VectorXd> xs;
    std::vector<double> ys;
    for (std::size_t k = 0; k < data.xs.size(); ++k) {
        sgn::sgn_step(s, hp, model, DynObs{data.xs[k], data.ys[k]});
        xs.push_back(data.xs[k]);
        ys.push_back(data.ys[k]);
        if (k + 1 == 40 || k + 1 == 400 || k + 1 == 4000)
            gaps.push_back((s.theta - oracle::batch_ridge(xs, ys, hp.s0, theta0)).norm());
    }
    EXPECT_GT(gaps[0], gaps[1]);
    EXPECT_GT(gaps[1], gaps[2]);
    EXPECT_GT(gaps[2], 0.0);
}

TEST(Sigma2, SingleObservation) {
    const auto model = constant_gradient(Eigen::Vector2d(0, 0));
    auto hp = DynHp::defaults(2);
    auto s = sgn::make_state(Algorithm::asgn, hp, Eigen::VectorXd(Eigen::VectorXd::Zero(2)), 1);
    EXPECT_THROW(sgn::sigma2(s), sgn::ConfigError);
    sgn::step(s, hp, model, obs(0, 3.0));
    EXPECT_EQ(sgn::sigma2(s), 9.0);
}

TEST(Sigma2, AlternatingUnitNoiseGivesOne) {
    // A flat model keeps theta_bar fixed, so the predictor is exact and the
    // residuals are the +-1 noise.
    const sgn::RegressionModel flat(
        "flat", 2, 1, [](const Eigen::VectorXd&, const Eigen::VectorXd&) { return 4.0; },
        [](const Eigen::VectorXd&, const Eigen::VectorXd&) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(2); });
    auto hp = DynHp::defaults(2);
    for (auto alg : {Algorithm::asgn, Algorithm::sgn, Algorithm::asgd}) {
        auto s = sgn::make_state(alg, hp, Eigen::VectorXd(Eigen::VectorXd::Ones(2)), 1);
        for (int k = 0; k < 1000; ++k) sgn::step(s, hp, flat, obs(0.5, 4.0 + (k % 2 ? 1.0 : -1.0)));
        EXPECT_EQ(sgn::sigma2(s), 1.0);
    }
}

TEST(Sigma2, PredictsWithAverageFromBeforeTheObservation) {
    const auto model = sgn::exp_saturation_model();
    auto hp = DynHp::defaults(2);
    auto s = sgn::make_state(Algorithm::asgn, hp, Eigen::VectorXd(Eigen::Vector2d(20, 13)), 1);
    double sse = 0.0;
    sgn::Rng rng(4);
    for (int k = 0; k < 50; ++k) {
        const auto x = Eigen::VectorXd::Constant(1, rng.uniform());
        const double y = 21 * (1 - std::exp(-12 * x(0))) + rng.normal();
        const double e = model.eval(x, *s.theta_bar) - y;
        sse += e * e;
        sgn::step(s, hp, model, DynObs{x, y});
    }
    EXPECT_NEAR(sgn::sigma2(s), sse / 50.0, 1e-12);
}

TEST(Properties, ProjectionKeepsEveryIterateInBall) {
    const auto spec = sgn::benchmark_spec();
    for (auto alg : {Algorithm::sgn, Algorithm::asgn, Algorithm::sgd, Algorithm::asgd, Algorithm::rls}) {
        auto hp = sgn::HyperParams<2>::defaults();
        hp.c_alpha = 5.0;
        hp.projection = sgn::Projection<2>{spec.theta_true, 12.0};
        for (std::uint64_t rep = 0; rep < 10; ++rep) {
            sgn::Rng init(rep);
            const sgn::Vector<2> theta0 = spec.theta_true + 12.0 * sgn::unit_sphere<2>(init);
            auto s = sgn::make_state(alg, hp, theta0, rep);
            sgn::SyntheticSource<sgn::ExpSaturation> src(spec, rep + 100);
            for (int k = 0; k < 2000; ++k) {
                sgn::step(s, hp, spec.model, src.next());
                ASSERT_LE((s.theta - spec.theta_true).norm(), 12.0 + 1e-12) << to_string(alg);
                if (s.theta_bar) {
                    ASSERT_LE((*s.theta_bar - spec.theta_true).norm(), 12.0 + 1e-12);
                }
            }
        }
    }
}

TEST(Properties, IdenticalSeedsGiveBitIdenticalTrajectories) {
    const auto spec = sgn::benchmark_spec();
    auto hp = sgn::HyperParams<2>::defaults();
    hp.c_beta = 0.1;
    hp.beta = 0.1;
    for (auto alg : {Algorithm::sgn, Algorithm::asgn}) {
        auto a = sgn::make_state(alg, hp, sgn::Vector<2>(25, 10), 17);
        auto b = sgn::make_state(alg, hp, sgn::Vector<2>(25, 10), 17);
        sgn::SyntheticSource<sgn::ExpSaturation> sa(spec, 4), sb(spec, 4);
        for (int k = 0; k < 3000; ++k) {
            sgn::step(a, hp, spec.model, sa.next());
            sgn::step(b, hp, spec.model, sb.next());
            ASSERT_EQ(a.theta, b.theta);
        }
        EXPECT_EQ(a.inverse->inv(), b.inverse->inv());
        EXPECT_EQ(a.sse, b.sse);
    }
}

TEST(Properties, FixedAndDynamicDimensionsAgree) {
    const auto spec = sgn::benchmark_spec();
    const auto dyn_model = sgn::exp_saturation_model();
    auto hp2 = sgn::HyperParams<2>::defaults();
    auto hpd = DynHp::defaults(2);
    auto a = sgn::make_state(Algorithm::asgn, hp2, sgn::Vector<2>(25, 10), 1);
    auto b = sgn::make_state(Algorithm::asgn, hpd, Eigen::VectorXd(Eigen::Vector2d(25, 10)), 1);
    sgn::SyntheticSource<sgn::ExpSaturation> src(spec, 2);
    for (int k = 0; k < 1000; ++k) {
        const auto o = src.next();
        sgn::step(a, hp2, spec.model, o);
        sgn::step(b, hpd, dyn_model, DynObs{Eigen::VectorXd(o.x), o.y});
    }
    EXPECT_LE((Eigen::VectorXd(*a.theta_bar) - *b.theta_bar).norm(), 1e-12);
}

TEST(Checkpoint, RoundTripContinuesBitIdentically) {
    const auto spec = sgn::benchmark_spec();
    auto hp = sgn::HyperParams<2>::defaults();
    hp.c_beta = 0.01;
    hp.beta = 0.1;
    hp.projection = sgn::Projection<2>{spec.theta_true, 12.0};
    for (auto alg : {Algorithm::sgn, Algorithm::asgn, Algorithm::sgd, Algorithm::asgd, Algorithm::rls}) {
        auto s = sgn::make_state(alg, hp, sgn::Vector<2>(27, 6), 99);
        sgn::SyntheticSource<sgn::ExpSaturation> src(spec, 5);
        for (int k = 0; k < 777; ++k) sgn::step(s, hp, spec.model, src.next());

        const std::string text = sgn::checkpoint_to_json(s, hp).dump();
        auto [restored, hp2] = sgn::checkpoint_from_json<2>(nlohmann::json::parse(text));
        EXPECT_EQ(sgn::checkpoint_to_json(restored, hp2).dump(), text);

        auto src2 = src;
        for (int k = 0; k < 500; ++k) {
            const auto o = src.next();
            sgn::step(s, hp, spec.model, o);
            sgn::step(restored, hp2, spec.model, src2.next());
        }
        EXPECT_EQ(s.theta, restored.theta) << to_string(alg);
        EXPECT_EQ(s.sse, restored.sse);
        EXPECT_EQ(s.n, restored.n);
        if (s.inverse) {
            EXPECT_EQ(s.inverse->inv(), restored.inverse->inv());
        }
    }
}

TEST(Checkpoint, SchemaFields) {
    auto hp = sgn::HyperParams<2>::defaults();
    const auto s = sgn::make_state(Algorithm::asgn, hp, sgn::Vector<2>(1, 2), 3);
    const auto j = sgn::checkpoint_to_json(s, hp);
    for (const char* key : {"algorithm", "hyperparams", "n", "theta", "theta_bar", "inverse", "sse", "rng_state"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["inverse"].size(), 4u);
    EXPECT_EQ(j["rng_state"].size(), 4u);
    EXPECT_TRUE(sgn::checkpoint_to_json(sgn::make_state(Algorithm::sgd, hp, sgn::Vector<2>(1, 2), 3), hp)["inverse"].is_null());
}

TEST(Checkpoint, MalformedInputIsAConfigError) {
    EXPECT_THROW(sgn::checkpoint_from_json<2>(nlohmann::json::parse(R"({"algorithm":"ASGN"})")), sgn::ConfigError);
    auto hp = sgn::HyperParams<2>::defaults();
    auto j = sgn::checkpoint_to_json(sgn::make_state(Algorithm::asgn, hp, sgn::Vector<2>(1, 2), 3), hp);
    j["theta_bar"] = nullptr;
    EXPECT_THROW(sgn::checkpoint_from_json<2>(j), sgn::ConfigError);
    j = sgn::checkpoint_to_json(sgn::make_state(Algorithm::asgn, hp, sgn::Vector<2>(1, 2), 3), hp);
    j["algorithm"] = "BFGS";
    EXPECT_THROW(sgn::checkpoint_from_json<2>(j), sgn::ConfigError);
}

}  // namespace
