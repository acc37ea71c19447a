// Monte Carlo front-end: reproduces the benchmark tables, MSE curves and
// the pivot normality study, writing reports plus a run manifest.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "sgn/sgn.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct Options {
    std::uint64_t seed = 1;
    std::uint64_t reps = 0;
    std::uint64_t n = 0;
    std::string out = "out";
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string format = "csv";
    std::string config;
    std::vector<double> r0;
    std::uint64_t data_n = 1000;
};

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

class OutputDir {
public:
    explicit OutputDir(fs::path root) : root_(std::move(root)) {
        std::error_code ec;
        fs::create_directories(root_, ec);
        if (ec || !fs::is_directory(root_)) throw sgn::ConfigError("cannot create output directory: " + root_.string());
    }

    void write(const std::string& name, const std::string& content) {
        std::ofstream f(root_ / name, std::ios::binary);
        f << content;
        if (!f) throw sgn::ConfigError("cannot write " + (root_ / name).string());
        files_.push_back({{"path", name}, {"sha256", sha256_hex(content)}});
    }

    void write_manifest(nlohmann::json manifest) {
        manifest["files"] = files_;
        std::ofstream f(root_ / "manifest.json", std::ios::binary);
        f << manifest.dump(2) << '\n';
        if (!f) throw sgn::ConfigError("cannot write manifest");
    }

private:
    fs::path root_;
    nlohmann::json files_ = nlohmann::json::array();
};

template <class Writer>
std::string render(Writer&& w, const sgn::ExperimentReport& r) {
    std::ostringstream os;
    w(os, r);
    return os.str();
}

void emit(OutputDir& out, const std::string& stem, const sgn::ExperimentReport& r, const std::string& format) {
    if (format == "json") {
        out.write(stem + ".json", sgn::report_to_json(r).dump(2) + "\n");
    } else {
        out.write(stem + "_mse.csv", render(sgn::write_mse_csv, r));
        if (r.config.kind == sgn::ExperimentKind::normality) {
            out.write(stem + "_pivots.csv", render(sgn::write_pivots_csv, r));
            out.write(stem + "_ecdf.csv", render(sgn::write_ecdf_csv, r));
            out.write(stem + "_ks.csv", render(sgn::write_ks_csv, r));
        }
    }
    if (r.config.kind == sgn::ExperimentKind::table) out.write(stem + "_table.txt", render(sgn::write_table_text, r));
}

void apply_overrides(sgn::ExperimentConfig& c, const Options& o, const CLI::App& sub) {
    if (sub.count("--seed")) c.master_seed = o.seed;
    if (sub.count("--reps")) c.replications = o.reps;
    if (sub.count("--n")) {
        c.n = o.n;
        c.checkpoints.clear();
    }
}

void summarize(std::ostream& os, const sgn::ExperimentReport& r) {
    os << r.config.name << ": " << r.cells.size() << " cells x " << r.config.replications << " replications, n = "
       << r.config.n << " (" << std::fixed << std::setprecision(2) << r.wall_seconds << " s)\n";
    os.unsetf(std::ios::floatfield);
    for (const auto& c : r.cells) {
        if (c.flagged)
            os << "  flagged: " << to_string(c.cell.algorithm) << " c_alpha=" << c.cell.point.c_alpha
               << " alpha=" << c.cell.point.alpha << " failures=" << c.failures << '\n';
        if (c.pivot)
            os << "  " << c.pivot->sample.algorithm << " pivot: KS = " << c.pivot->ks << " (99% bound "
               << c.pivot->ks_critical << "), mean = " << c.pivot->mean << '\n';
    }
}

int run(const std::string& command, const std::vector<sgn::ExperimentConfig>& configs, const Options& o) {
    OutputDir out(o.out);
    bool flagged = false;
    double wall = 0.0;
    std::vector<std::string> stems;
    for (const auto& cfg : configs) {
        const auto report = sgn::run_experiment(cfg, o.jobs);
        emit(out, cfg.name, report, o.format);
        summarize(std::cerr, report);
        flagged = flagged || report.any_flagged();
        wall += report.wall_seconds;
    }
    nlohmann::json manifest;
    manifest["command"] = command;
    manifest["seed"] = configs.front().master_seed;
    manifest["versions"] = {{"sgn", SGN_VERSION},
                            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                          "." + std::to_string(EIGEN_MINOR_VERSION)},
                            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                            {"compiler", __VERSION__}};
    manifest["configs"] = nlohmann::json::array();
    for (const auto& cfg : configs) manifest["configs"].push_back(sgn::config_to_json(cfg));
    manifest["jobs"] = o.jobs;
    manifest["wall_seconds"] = wall;
    out.write_manifest(std::move(manifest));
    return flagged ? kExitNumerical : kExitOk;
}

int generate(const Options& o, const std::string& command) {
    auto spec = sgn::benchmark_spec();
    spec.seed = o.seed;
    const auto data = sgn::generate(spec, o.data_n);
    OutputDir out(o.out);
    std::ostringstream csv;
    sgn::write_dataset_csv<sgn::ExpSaturation>(csv, data, 1);
    out.write("dataset.csv", csv.str());
    out.write("dataset.json", sgn::dataset_sidecar(spec, o.data_n, "exp_saturation").dump(2) + "\n");
    out.write_manifest({{"command", command}, {"seed", o.seed}, {"versions", {{"sgn", SGN_VERSION}}}});
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    std::string command;
    for (int i = 0; i < argc; ++i) command += (i ? " " : "") + std::string(argv[i]);

    CLI::App app{"Monte Carlo harness for stochastic Gauss-Newton estimators"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "master seed");
        sub->add_option("--reps", o.reps, "replications per cell")->check(CLI::PositiveNumber);
        sub->add_option("--n", o.n, "horizon (observations per replication)")->check(CLI::PositiveNumber);
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* t1 = app.add_subcommand("table1", "ASGN over the (c_alpha, alpha) grid");
    auto* t2 = app.add_subcommand("table2", "SGD and ASGD over the (c_alpha, alpha) grid");
    auto* t3 = app.add_subcommand("table3", "SGN and ASGN over the (c_beta, beta) grid");
    auto* cv = app.add_subcommand("curves", "MSE against n for r0 in {1, 5, 12}");
    auto* nm = app.add_subcommand("normality", "chi-squared pivots and KS statistics");
    auto* cu = app.add_subcommand("custom", "experiment described by a JSON config");
    auto* gen = app.add_subcommand("generate", "export a synthetic benchmark dataset");
    for (auto* s : {t1, t2, t3, cv, nm, cu}) add_common(s);
    cv->add_option("--r0", o.r0, "initialization radii");
    cu->add_option("--config", o.config, "config file")->required();
    gen->add_option("--seed", o.seed, "data seed");
    gen->add_option("--n", o.data_n, "number of observations")->check(CLI::PositiveNumber);
    gen->add_option("--out", o.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*gen) return generate(o, command);

        std::vector<sgn::ExperimentConfig> configs;
        const CLI::App* sub = nullptr;
        if (*t1) configs = {sgn::presets::table1()}, sub = t1;
        if (*t2) configs = {sgn::presets::table2()}, sub = t2;
        if (*t3) configs = {sgn::presets::table3()}, sub = t3;
        if (*nm) configs = {sgn::presets::normality()}, sub = nm;
        if (*cv) {
            sub = cv;
            for (double r0 : o.r0.empty() ? std::vector<double>{1.0, 5.0, 12.0} : o.r0) {
                auto c = sgn::presets::curves(r0);
                std::ostringstream name;
                name << "curves_r" << r0;
                c.name = name.str();
                configs.push_back(c);
            }
        }
        if (*cu) {
            sub = cu;
            std::ifstream f(o.config);
            if (!f) throw sgn::ConfigError("cannot read config file: " + o.config);
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(f);
            } catch (const nlohmann::json::exception& e) {
                throw sgn::ConfigError(std::string("config is not valid JSON: ") + e.what());
            }
            configs = {sgn::config_from_json(j)};
        }
        for (auto& c : configs) {
            apply_overrides(c, o, *sub);
            sgn::validate(c);
        }
        return run(command, configs, o);
    } catch (const sgn::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const sgn::NumericalBreakdown& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
