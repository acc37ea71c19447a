#ifndef SGN_IO_HPP_
#define SGN_IO_HPP_

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgn/harness.hpp"
#include "sgn/model.hpp"
#include "sgn/stats.hpp"

namespace sgn {

namespace detail {

inline std::string fmt_num(double v, const char* spec = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Experiment config <-> JSON. Field names mirror ExperimentConfig.

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["name"] = c.name;
    j["kind"] = std::string(to_string(c.kind));
    j["algorithms"] = nlohmann::json::array();
    for (auto a : c.algorithms) j["algorithms"].push_back(std::string(to_string(a)));
    j["grid"] = nlohmann::json::array();
    for (const auto& p : c.grid) {
        nlohmann::json g{{"c_alpha", p.c_alpha}, {"alpha", p.alpha}, {"c_beta", p.c_beta}, {"beta", p.beta}};
        if (!p.algorithms.empty()) {
            g["algorithms"] = nlohmann::json::array();
            for (auto a : p.algorithms) g["algorithms"].push_back(std::string(to_string(a)));
        }
        j["grid"].push_back(std::move(g));
    }
    j["n"] = c.n;
    j["replications"] = c.replications;
    j["init_radius"] = c.init_radius;
    j["checkpoints"] = resolved_checkpoints(c);
    j["master_seed"] = c.master_seed;
    j["projection"] = c.projection;
    j["projection_radius"] = c.projection_radius;
    j["enforce_theory"] = c.enforce_theory;
    j["estimated_sigma2"] = c.estimated_sigma2;
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    static const std::set<std::string> known{"name", "kind", "algorithms", "grid", "n", "replications",
                                             "init_radius", "checkpoints", "master_seed", "projection",
                                             "projection_radius", "enforce_theory", "estimated_sigma2"};
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known.contains(key)) throw ConfigError("config: unknown field '" + key + "'");
    auto algorithms_of = [](const nlohmann::json& arr) {
        std::vector<Algorithm> out;
        for (const auto& a : arr) out.push_back(algorithm_from_string(a.get<std::string>()));
        return out;
    };
    try {
        ExperimentConfig c;
        c.name = j.value("name", c.name);
        if (j.contains("kind")) c.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
        if (j.contains("algorithms")) c.algorithms = algorithms_of(j.at("algorithms"));
        if (j.contains("grid")) {
            c.grid.clear();
            for (const auto& g : j.at("grid")) {
                GridPoint p;
                p.c_alpha = g.value("c_alpha", p.c_alpha);
                p.alpha = g.value("alpha", p.alpha);
                p.c_beta = g.value("c_beta", p.c_beta);
                p.beta = g.value("beta", p.beta);
                if (g.contains("algorithms")) p.algorithms = algorithms_of(g.at("algorithms"));
                c.grid.push_back(std::move(p));
            }
        }
        c.n = j.value("n", c.n);
        c.replications = j.value("replications", c.replications);
        c.init_radius = j.value("init_radius", c.init_radius);
        if (j.contains("checkpoints")) c.checkpoints = j.at("checkpoints").get<std::vector<std::uint64_t>>();
        c.master_seed = j.value("master_seed", c.master_seed);
        c.projection = j.value("projection", c.projection);
        c.projection_radius = j.value("projection_radius", c.projection_radius);
        c.enforce_theory = j.value("enforce_theory", c.enforce_theory);
        c.estimated_sigma2 = j.value("estimated_sigma2", c.estimated_sigma2);
        validate(c);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Report writers

/// Columns: algorithm,c_alpha,alpha,c_beta,beta,n,mse,stderr.
inline void write_mse_csv(std::ostream& os, const ExperimentReport& r) {
    os << "algorithm,c_alpha,alpha,c_beta,beta,n,mse,stderr\n";
    for (const auto& cell : r.cells) {
        const auto& p = cell.cell.point;
        for (const auto& s : cell.series)
            for (const auto& row : s.curve)
                os << s.name << ',' << detail::fmt_num(p.c_alpha) << ',' << detail::fmt_num(p.alpha) << ','
                   << detail::fmt_num(p.c_beta) << ',' << detail::fmt_num(p.beta) << ',' << row.n << ','
                   << detail::fmt_num(row.mse) << ',' << detail::fmt_num(row.stderr_) << '\n';
    }
}

/// One two-way table per series at the horizon: rows c_alpha and columns
/// alpha, or rows c_beta and columns beta when the regularization varies.
inline void write_table_text(std::ostream& os, const ExperimentReport& r) {
    bool beta_grid = false;
    for (const auto& c : r.cells)
        if (c.cell.point.c_beta != r.cells.front().cell.point.c_beta || c.cell.point.beta != r.cells.front().cell.point.beta)
            beta_grid = true;
    auto row_of = [&](const GridPoint& p) { return beta_grid ? p.c_beta : p.c_alpha; };
    auto col_of = [&](const GridPoint& p) { return beta_grid ? p.beta : p.alpha; };
    const std::string corner = beta_grid ? "c_beta \\ beta" : "c_alpha \\ alpha";

    std::vector<std::string> order;
    std::map<std::string, std::map<std::pair<double, double>, const CellReport*>> by_series;
    std::map<std::string, std::map<std::pair<double, double>, double>> values;
    for (const auto& c : r.cells)
        for (const auto& s : c.series) {
            if (!by_series.contains(s.name)) order.push_back(s.name);
            by_series[s.name][{row_of(c.cell.point), col_of(c.cell.point)}] = &c;
            values[s.name][{row_of(c.cell.point), col_of(c.cell.point)}] =
                s.curve.empty() ? std::numeric_limits<double>::quiet_NaN() : s.curve.back().mse;
        }
    for (const auto& name : order) {
        std::set<double> rows, cols;
        for (const auto& [key, _] : values[name]) {
            rows.insert(key.first);
            cols.insert(key.second);
        }
        os << name << "  (mean squared error, n = " << r.config.n << ", " << r.config.replications
           << " replications)\n";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%16s |", corner.c_str());
        os << buf;
        for (double c : cols) {
            std::snprintf(buf, sizeof buf, " %10.4g", c);
            os << buf;
        }
        os << '\n' << std::string(18 + 11 * cols.size(), '-') << '\n';
        for (double rv : rows) {
            std::snprintf(buf, sizeof buf, "%16.4g |", rv);
            os << buf;
            for (double cv : cols) {
                auto it = values[name].find({rv, cv});
                if (it == values[name].end()) {
                    os << std::string(11, ' ');
                    continue;
                }
                const bool flagged = by_series[name][{rv, cv}]->flagged;
                std::snprintf(buf, sizeof buf, " %9.4f%s", it->second, flagged ? "*" : " ");
                os << buf;
            }
            os << '\n';
        }
        os << '\n';
    }
    if (r.any_flagged()) os << "* more than 5% of replications failed numerically\n";
}

/// Columns: replication, then one pivot column per algorithm.
inline void write_pivots_csv(std::ostream& os, const ExperimentReport& r) {
    std::vector<const PivotReport*> cols;
    os << "replication";
    for (const auto& c : r.cells)
        if (c.pivot) {
            cols.push_back(&*c.pivot);
            os << ',' << c.pivot->sample.algorithm;
        }
    os << '\n';
    std::size_t rows = 0;
    for (auto* p : cols) rows = std::max(rows, p->sample.values.size());
    for (std::size_t i = 0; i < rows; ++i) {
        os << i;
        for (auto* p : cols) os << ',' << (i < p->sample.values.size() ? detail::fmt_num(p->sample.values[i], "%.12g") : "");
        os << '\n';
    }
}

/// Empirical CDFs of the pivots next to the chi-squared(2) CDF on [0, 12].
inline void write_ecdf_csv(std::ostream& os, const ExperimentReport& r) {
    std::vector<std::vector<double>> sorted;
    os << "x,chi2_2";
    for (const auto& c : r.cells)
        if (c.pivot) {
            os << ',' << c.pivot->sample.algorithm;
            sorted.push_back(c.pivot->sample.values);
            std::sort(sorted.back().begin(), sorted.back().end());
        }
    os << '\n';
    for (int i = 0; i <= 120; ++i) {
        const double x = 0.1 * i;
        os << detail::fmt_num(x, "%.1f") << ',' << detail::fmt_num(chi2_2_cdf(x), "%.6f");
        for (const auto& s : sorted) {
            const auto count = std::upper_bound(s.begin(), s.end(), x) - s.begin();
            os << ',' << detail::fmt_num(static_cast<double>(count) / static_cast<double>(s.size()), "%.6f");
        }
        os << '\n';
    }
}

/// Columns: algorithm,n,replications,ks,ks_critical_99,mean.
inline void write_ks_csv(std::ostream& os, const ExperimentReport& r) {
    os << "algorithm,n,replications,ks,ks_critical_99,mean\n";
    for (const auto& c : r.cells)
        if (c.pivot)
            os << c.pivot->sample.algorithm << ',' << c.pivot->sample.n_obs << ',' << c.pivot->sample.values.size()
               << ',' << detail::fmt_num(c.pivot->ks) << ',' << detail::fmt_num(c.pivot->ks_critical) << ','
               << detail::fmt_num(c.pivot->mean) << '\n';
}

/// Full report. Wall-clock time is left out so that the document depends
/// only on the configuration.
inline nlohmann::json report_to_json(const ExperimentReport& r) {
    nlohmann::json j;
    j["config"] = config_to_json(r.config);
    j["checkpoints"] = r.checkpoints;
    j["cells"] = nlohmann::json::array();
    for (const auto& c : r.cells) {
        nlohmann::json cj;
        cj["algorithm"] = std::string(to_string(c.cell.algorithm));
        cj["c_alpha"] = c.cell.point.c_alpha;
        cj["alpha"] = c.cell.point.alpha;
        cj["c_beta"] = c.cell.point.c_beta;
        cj["beta"] = c.cell.point.beta;
        cj["failures"] = c.failures;
        cj["flagged"] = c.flagged;
        cj["failure_messages"] = c.failure_messages;
        cj["series"] = nlohmann::json::array();
        for (const auto& s : c.series) {
            nlohmann::json sj;
            sj["name"] = s.name;
            sj["n"] = nlohmann::json::array();
            sj["mse"] = nlohmann::json::array();
            sj["stderr"] = nlohmann::json::array();
            for (const auto& row : s.curve) {
                sj["n"].push_back(row.n);
                sj["mse"].push_back(row.mse);
                sj["stderr"].push_back(row.stderr_);
            }
            sj["final_sq_errors"] = s.final_sq_errors;
            sj["slope"] = s.slope ? nlohmann::json(*s.slope) : nlohmann::json(nullptr);
            cj["series"].push_back(std::move(sj));
        }
        if (c.pivot) {
            cj["pivot"] = {{"values", c.pivot->sample.values},
                           {"ks", c.pivot->ks},
                           {"ks_critical_99", c.pivot->ks_critical},
                           {"mean", c.pivot->mean}};
        }
        cj["sigma2"] = c.sigma2;
        j["cells"].push_back(std::move(cj));
    }
    return j;
}

// ---------------------------------------------------------------------------
// Synthetic datasets: CSV with header x_1,...,x_p,y plus a JSON sidecar.

template <RegressionModelLike M>
void write_dataset_csv(std::ostream& os, const std::vector<Observation<typename M::Covariate>>& data,
                       Eigen::Index covariate_dim) {
    for (Eigen::Index i = 0; i < covariate_dim; ++i) os << "x_" << (i + 1) << ',';
    os << "y\n";
    for (const auto& obs : data) {
        for (Eigen::Index i = 0; i < covariate_dim; ++i) os << detail::fmt_num(obs.x(i), "%.17g") << ',';
        os << detail::fmt_num(obs.y, "%.17g") << '\n';
    }
}

template <RegressionModelLike M>
nlohmann::json dataset_sidecar(const SyntheticSpec<M>& spec, std::size_t n, const std::string& model_name) {
    return {{"model", model_name},
            {"theta_true", std::vector<double>(spec.theta_true.data(), spec.theta_true.data() + spec.theta_true.size())},
            {"covariate_law", std::string(to_string(spec.covariate_law))},
            {"noise_law", std::string(to_string(spec.noise_law))},
            {"noise_variance", spec.sigma2()},
            {"seed", spec.seed},
            {"n", n}};
}

}  // namespace sgn

#endif  // SGN_IO_HPP_
