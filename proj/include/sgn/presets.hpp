#ifndef SGN_PRESETS_HPP_
#define SGN_PRESETS_HPP_

#include <cstdint>
#include <vector>

#include "sgn/harness.hpp"

namespace sgn::presets {

inline const std::vector<double> kTableCAlpha{0.1, 0.5, 1.0, 2.0, 5.0};
inline const std::vector<double> kTableAlpha{0.55, 0.66, 0.75, 0.9};
inline const std::vector<double> kTableCBeta{1e-10, 1e-5, 1e-2, 1e-1, 1.0};
inline const std::vector<double> kTableBeta{0.01, 0.08, 0.2, 0.5};

inline std::vector<GridPoint> step_grid() {
    std::vector<GridPoint> grid;
    for (double ca : kTableCAlpha)
        for (double a : kTableAlpha) grid.push_back({ca, a, 0.0, 0.2, {}});
    return grid;
}

/// ASGN (raw and averaged) over the (c_alpha, alpha) grid, r0 = 10.
inline ExperimentConfig table1(std::uint64_t seed = 1) {
    ExperimentConfig c;
    c.name = "table1";
    c.kind = ExperimentKind::table;
    c.algorithms = {Algorithm::asgn};
    c.grid = step_grid();
    c.n = 10000;
    c.replications = 100;
    c.init_radius = 10.0;
    c.master_seed = seed;
    return c;
}

/// SGD and ASGD over the (c_alpha, alpha) grid, r0 = 10.
inline ExperimentConfig table2(std::uint64_t seed = 1) {
    ExperimentConfig c = table1(seed);
    c.name = "table2";
    c.algorithms = {Algorithm::sgd, Algorithm::asgd};
    return c;
}

/// ASGN and SGN over the (c_beta, beta) grid with c_alpha = 1,
/// alpha = 0.66, r0 = 5. The grid includes beta values outside the
/// theoretical ranges, so those checks are relaxed.
inline ExperimentConfig table3(std::uint64_t seed = 1) {
    ExperimentConfig c = table1(seed);
    c.name = "table3";
    c.algorithms = {Algorithm::asgn, Algorithm::sgn};
    c.grid.clear();
    for (double cb : kTableCBeta)
        for (double b : kTableBeta) c.grid.push_back({1.0, 0.66, cb, b, {}});
    c.init_radius = 5.0;
    c.enforce_theory = false;
    return c;
}

/// MSE against n for SGN, ASGN (c_alpha = 1) and SGD, ASGD (c_alpha = 5),
/// alpha = 0.66, c_beta = 0.
inline ExperimentConfig curves(double r0 = 1.0, std::uint64_t seed = 1) {
    ExperimentConfig c;
    c.name = "curves";
    c.kind = ExperimentKind::curves;
    c.algorithms = {Algorithm::sgn, Algorithm::asgn, Algorithm::sgd, Algorithm::asgd};
    c.grid = {GridPoint{1.0, 0.66, 0.0, 0.2, {Algorithm::sgn, Algorithm::asgn}},
              GridPoint{5.0, 0.66, 0.0, 0.2, {Algorithm::sgd, Algorithm::asgd}}};
    c.n = 10000;
    c.replications = 100;
    c.init_radius = r0;
    c.master_seed = seed;
    return c;
}

/// 1000 replications at n = 5000 of SGN and ASGN from theta + U.
inline ExperimentConfig normality(std::uint64_t seed = 1) {
    ExperimentConfig c;
    c.name = "normality";
    c.kind = ExperimentKind::normality;
    c.algorithms = {Algorithm::sgn, Algorithm::asgn};
    c.grid = {GridPoint{1.0, 0.66, 0.0, 0.2, {}}};
    c.n = 5000;
    c.replications = 1000;
    c.init_radius = 1.0;
    c.master_seed = seed;
    return c;
}

}  // namespace sgn::presets

#endif  // SGN_PRESETS_HPP_
