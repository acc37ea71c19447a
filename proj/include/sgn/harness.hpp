#ifndef SGN_HARNESS_HPP_
#define SGN_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sgn/error.hpp"
#include "sgn/estimators.hpp"
#include "sgn/model.hpp"
#include "sgn/rng.hpp"
#include "sgn/stats.hpp"

namespace sgn {

/// Step-size and regularization constants for one grid cell. An empty
/// `algorithms` list means the point applies to every algorithm.
struct GridPoint {
    double c_alpha = 1.0;
    double alpha = 0.66;
    double c_beta = 0.0;
    double beta = 0.2;
    std::vector<Algorithm> algorithms;

    bool applies_to(Algorithm a) const {
        return algorithms.empty() || std::find(algorithms.begin(), algorithms.end(), a) != algorithms.end();
    }
};

enum class ExperimentKind { table, curves, normality };

constexpr std::string_view to_string(ExperimentKind k) noexcept {
    switch (k) {
        case ExperimentKind::table: return "table";
        case ExperimentKind::curves: return "curves";
        case ExperimentKind::normality: return "normality";
    }
    return "unknown";
}

inline ExperimentKind experiment_kind_from_string(std::string_view s) {
    if (s == "table") return ExperimentKind::table;
    if (s == "curves") return ExperimentKind::curves;
    if (s == "normality") return ExperimentKind::normality;
    throw ConfigError("unknown experiment kind: " + std::string(s));
}

/// Fraction of failed replications above which a cell is flagged.
inline constexpr double kFailureThreshold = 0.05;

struct ExperimentConfig {
    std::string name = "custom";
    ExperimentKind kind = ExperimentKind::table;
    std::vector<Algorithm> algorithms{Algorithm::asgn};
    std::vector<GridPoint> grid{GridPoint{}};
    std::uint64_t n = 10000;
    std::uint64_t replications = 100;
    double init_radius = 10.0;
    /// Empty means: {n} for tables and normality, 30 log-spaced points in [100, n] for curves.
    std::vector<std::uint64_t> checkpoints;
    std::uint64_t master_seed = 1;
    bool projection = true;
    double projection_radius = 12.0;
    bool enforce_theory = true;
    /// Pivots use sigma2-hat instead of the known noise variance.
    bool estimated_sigma2 = false;
};

/// `count` log-spaced integer checkpoints in [lo, hi], deduplicated.
inline std::vector<std::uint64_t> log_spaced_checkpoints(std::uint64_t lo, std::uint64_t hi, int count = 30) {
    if (lo < 1 || hi < lo) throw ConfigError("log_spaced_checkpoints: need 1 <= lo <= hi");
    std::vector<std::uint64_t> out;
    if (count < 2 || lo == hi) return {hi};
    const double a = std::log(static_cast<double>(lo)), b = std::log(static_cast<double>(hi));
    for (int i = 0; i < count; ++i) {
        auto v = static_cast<std::uint64_t>(std::llround(std::exp(a + (b - a) * i / (count - 1))));
        v = std::clamp(v, lo, hi);
        if (out.empty() || v > out.back()) out.push_back(v);
    }
    if (out.back() != hi) out.push_back(hi);
    return out;
}

inline std::vector<std::uint64_t> resolved_checkpoints(const ExperimentConfig& c) {
    if (!c.checkpoints.empty()) return c.checkpoints;
    if (c.kind == ExperimentKind::curves) return log_spaced_checkpoints(std::min<std::uint64_t>(100, c.n), c.n);
    return {c.n};
}

struct Cell {
    Algorithm algorithm;
    GridPoint point;
};

inline std::vector<Cell> expand_cells(const ExperimentConfig& c) {
    std::vector<Cell> cells;
    for (Algorithm a : c.algorithms)
        for (const auto& p : c.grid)
            if (p.applies_to(a)) cells.push_back({a, p});
    return cells;
}

inline void validate(const ExperimentConfig& c) {
    if (c.algorithms.empty()) throw ConfigError("config: no algorithm selected");
    if (c.grid.empty()) throw ConfigError("config: empty grid");
    if (c.n < 1) throw ConfigError("config: n must be at least 1");
    if (c.replications < 1) throw ConfigError("config: replications must be at least 1");
    if (!(c.init_radius >= 0.0) || !std::isfinite(c.init_radius)) throw ConfigError("config: init_radius must be >= 0");
    if (c.projection && !(c.projection_radius > 0.0)) throw ConfigError("config: projection_radius must be positive");
    const auto cps = resolved_checkpoints(c);
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (cps[i] < 1 || cps[i] > c.n) throw ConfigError("config: checkpoints must lie in [1, n]");
        if (i > 0 && cps[i] <= cps[i - 1]) throw ConfigError("config: checkpoints must be strictly increasing");
    }
    if (expand_cells(c).empty()) throw ConfigError("config: no grid point applies to the selected algorithms");
}

/// Error series reported by one run: the algorithm's estimate, plus the
/// raw (non-averaged) iterate for averaged algorithms.
inline std::vector<std::string> series_names(Algorithm a) {
    std::string name(to_string(a));
    if (is_averaged(a)) return {name, name + "/raw"};
    return {name};
}

struct SeriesReport {
    std::string name;
    std::vector<MseRow> curve;
    /// Squared error at n per replication; NaN for failed replications.
    std::vector<double> final_sq_errors;
    std::optional<double> slope;
};

struct PivotReport {
    PivotSample sample;
    double ks = 0.0;
    double ks_critical = 0.0;
    double mean = 0.0;
};

struct CellReport {
    Cell cell;
    std::uint64_t failures = 0;
    bool flagged = false;
    std::vector<std::string> failure_messages;
    std::vector<SeriesReport> series;
    std::optional<PivotReport> pivot;
    /// Final sigma2-hat per successful replication.
    std::vector<double> sigma2;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<std::uint64_t> checkpoints;
    std::vector<CellReport> cells;
    double wall_seconds = 0.0;

    bool any_flagged() const {
        return std::any_of(cells.begin(), cells.end(), [](const CellReport& c) { return c.flagged; });
    }

    const CellReport* find(Algorithm a) const {
        for (const auto& c : cells)
            if (c.cell.algorithm == a) return &c;
        return nullptr;
    }
};

/// Runs `body(i)` for i in [0, count) on `jobs` threads. Exceptions are
/// rethrown after all workers have joined.
template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& body) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

namespace detail {

/// Key identifying a cell by content, so seeds do not depend on grid order.
inline std::uint64_t cell_key(const Cell& c) {
    std::uint64_t h = static_cast<std::uint64_t>(c.algorithm) + 1;
    for (double v : {c.point.c_alpha, c.point.alpha, c.point.c_beta, c.point.beta})
        h = splitmix64_mix(h ^ std::bit_cast<std::uint64_t>(v));
    return h;
}

enum Stream : std::uint64_t { kDataStream = 0, kInitStream = 1, kZStream = 2 };

struct ReplicationResult {
    bool failed = false;
    std::string error;
    std::vector<std::vector<double>> sq_errors;  // [series][checkpoint]
    double pivot = std::numeric_limits<double>::quiet_NaN();
    double sigma2 = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace detail

/// Monte Carlo experiment over a synthetic model. Replication r shares its
/// data stream and theta_0 across all cells, so algorithm comparisons are
/// paired; the regularization stream is specific to (cell, r).
template <RegressionModelLike M>
class Experiment {
public:
    static constexpr int kDim = M::kParamDim;

    Experiment(SyntheticSpec<M> spec, ExperimentConfig config)
        : spec_(std::move(spec)), config_(std::move(config)) {
        spec_.validate();
        validate(config_);
        checkpoints_ = resolved_checkpoints(config_);
        cells_ = expand_cells(config_);
        for (const auto& cell : cells_) hyperparams(cell).validate(cell.algorithm, spec_.model.param_dim(), config_.enforce_theory);
    }

    HyperParams<kDim> hyperparams(const Cell& cell) const {
        auto hp = HyperParams<kDim>::defaults(spec_.model.param_dim());
        hp.c_alpha = cell.point.c_alpha;
        hp.alpha = cell.point.alpha;
        hp.c_beta = cell.point.c_beta;
        hp.beta = cell.point.beta;
        if (config_.projection) hp.projection = Projection<kDim>{spec_.theta_true, config_.projection_radius};
        return hp;
    }

    Vector<kDim> initial_theta(std::uint64_t replication) const {
        Rng rng(derive_seed(config_.master_seed, {replication, detail::kInitStream}));
        const auto u = unit_sphere<kDim>(rng, spec_.model.param_dim());
        return spec_.theta_true + config_.init_radius * u;
    }

    /// Runs one (cell, replication) pair to the horizon and returns the
    /// final estimator state; numerical breakdown propagates.
    EstimatorState<kDim> run_replication(const Cell& cell, std::uint64_t replication,
                                         detail::ReplicationResult* out = nullptr) const {
        const auto hp = hyperparams(cell);
        auto state = make_state(cell.algorithm, hp, initial_theta(replication),
                                derive_seed(config_.master_seed, {replication, detail::kZStream, detail::cell_key(cell)}),
                                config_.enforce_theory);
        SyntheticSource<M> source(spec_, derive_seed(config_.master_seed, {replication, detail::kDataStream}));
        const auto nseries = series_names(cell.algorithm).size();
        if (out) out->sq_errors.assign(nseries, std::vector<double>(checkpoints_.size(), 0.0));
        std::size_t next_cp = 0;
        for (std::uint64_t k = 1; k <= config_.n; ++k) {
            step(state, hp, spec_.model, source.next());
            if (next_cp < checkpoints_.size() && checkpoints_[next_cp] == k) {
                if (out) {
                    out->sq_errors[0][next_cp] = (state.estimate() - spec_.theta_true).squaredNorm();
                    if (nseries > 1) out->sq_errors[1][next_cp] = (state.theta - spec_.theta_true).squaredNorm();
                }
                ++next_cp;
            }
        }
        return state;
    }

    ExperimentReport run(unsigned jobs = 1) const {
        const auto t0 = std::chrono::steady_clock::now();
        const std::size_t reps = config_.replications;
        std::vector<detail::ReplicationResult> results(cells_.size() * reps);
        const bool want_pivot = config_.kind == ExperimentKind::normality;

        parallel_for(results.size(), jobs, [&](std::size_t task) {
            const std::size_t c = task / reps;
            const std::uint64_t r = task % reps;
            auto& res = results[task];
            try {
                const auto state = run_replication(cells_[c], r, &res);
                res.sigma2 = sigma2(state);
                if (want_pivot) res.pivot = pivot(state, res.sigma2);
            } catch (const NumericalBreakdown& e) {
                res = {};
                res.failed = true;
                res.error = e.what();
            }
        });

        ExperimentReport report;
        report.config = config_;
        report.checkpoints = checkpoints_;
        for (std::size_t c = 0; c < cells_.size(); ++c)
            report.cells.push_back(aggregate(cells_[c], std::span(results).subspan(c * reps, reps)));
        report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return report;
    }

    const std::vector<std::uint64_t>& checkpoints() const noexcept { return checkpoints_; }
    const std::vector<Cell>& cells() const noexcept { return cells_; }
    const SyntheticSpec<M>& spec() const noexcept { return spec_; }
    const ExperimentConfig& config() const noexcept { return config_; }

private:
    /// C_n for SGN (accumulated H~_n) and C-bar_n for ASGN (accumulated
    /// S_n), divided by sigma^2. Other algorithms have no pivot.
    double pivot(const EstimatorState<kDim>& s, double sigma2_hat) const {
        if (s.algorithm != Algorithm::sgn && s.algorithm != Algorithm::asgn)
            return std::numeric_limits<double>::quiet_NaN();
        const double s2 = config_.estimated_sigma2 ? sigma2_hat : spec_.sigma2();
        const Matrix<kDim> accumulated = s.inverse->matrix();
        return pivot_cn<kDim>(s.estimate(), spec_.theta_true, accumulated) / s2;
    }

    CellReport aggregate(const Cell& cell, std::span<const detail::ReplicationResult> results) const {
        CellReport out;
        out.cell = cell;
        const auto names = series_names(cell.algorithm);
        std::vector<std::vector<std::vector<double>>> ok(names.size());
        std::vector<double> pivots;
        for (const auto& r : results) {
            if (r.failed) {
                ++out.failures;
                if (out.failure_messages.size() < 5) out.failure_messages.push_back(r.error);
                continue;
            }
            for (std::size_t s = 0; s < names.size(); ++s) ok[s].push_back(r.sq_errors[s]);
            out.sigma2.push_back(r.sigma2);
            if (!std::isnan(r.pivot)) pivots.push_back(r.pivot);
        }
        out.flagged = static_cast<double>(out.failures) > kFailureThreshold * static_cast<double>(results.size());
        for (std::size_t s = 0; s < names.size(); ++s) {
            SeriesReport sr;
            sr.name = names[s];
            if (!ok[s].empty()) sr.curve = mse_aggregate(checkpoints_, ok[s]);
            for (const auto& r : results)
                sr.final_sq_errors.push_back(r.failed ? std::numeric_limits<double>::quiet_NaN() : r.sq_errors[s].back());
            if (checkpoints_.size() >= 5 && checkpoints_.back() >= 100 * checkpoints_.front() && !sr.curve.empty()) {
                const bool positive = std::all_of(sr.curve.begin(), sr.curve.end(), [](const MseRow& m) { return m.mse > 0.0; });
                if (positive) sr.slope = rate_slope(std::span<const MseRow>(sr.curve));
            }
            out.series.push_back(std::move(sr));
        }
        if (!pivots.empty()) {
            PivotReport p;
            p.sample = PivotSample{std::move(pivots), config_.n, std::string(to_string(cell.algorithm))};
            p.ks = ks_statistic(p.sample);
            p.ks_critical = ks_critical_99(p.sample.values.size());
            double sum = 0.0;
            for (double v : p.sample.values) sum += v;
            p.mean = sum / static_cast<double>(p.sample.values.size());
            out.pivot = std::move(p);
        }
        return out;
    }

    SyntheticSpec<M> spec_;
    ExperimentConfig config_;
    std::vector<std::uint64_t> checkpoints_;
    std::vector<Cell> cells_;
};

/// The benchmark setting: f(x,h) = h1 (1 - exp(-h2 x)), theta = (21, 12),
/// X ~ U[0,1], eps ~ N(0,1).
inline SyntheticSpec<ExpSaturation> benchmark_spec() {
    return SyntheticSpec<ExpSaturation>{ExpSaturation{}, Vector<2>(21.0, 12.0), CovariateLaw::uniform01,
                                        NoiseLaw::normal, 1.0, 0};
}

inline ExperimentReport run_table(ExperimentConfig config, unsigned jobs = 1) {
    config.kind = ExperimentKind::table;
    return Experiment<ExpSaturation>(benchmark_spec(), std::move(config)).run(jobs);
}

inline ExperimentReport run_curves(ExperimentConfig config, unsigned jobs = 1) {
    config.kind = ExperimentKind::curves;
    return Experiment<ExpSaturation>(benchmark_spec(), std::move(config)).run(jobs);
}

inline ExperimentReport run_normality(ExperimentConfig config, unsigned jobs = 1) {
    config.kind = ExperimentKind::normality;
    return Experiment<ExpSaturation>(benchmark_spec(), std::move(config)).run(jobs);
}

inline ExperimentReport run_experiment(const ExperimentConfig& config, unsigned jobs = 1) {
    return Experiment<ExpSaturation>(benchmark_spec(), config).run(jobs);
}

}  // namespace sgn

#endif  // SGN_HARNESS_HPP_
