#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "irtforge/calibrate.hpp"
#include "irtforge/dataio.hpp"
#include "irtforge/evaluate.hpp"
#include "irtforge/fpc.hpp"

namespace irtforge::testing {

// Small hand-made calibration: ties inside a bin, one extreme item and one
// excluded item.
inline ItemParams wright_fixture_params() {
    ItemParams p;
    p.items = {
        {"q01", 0.42, 0.11, ItemStatus::ok},   {"q02", -1.37, 0.14, ItemStatus::ok},
        {"q03", 0.40, 0.11, ItemStatus::ok},   {"q04", 1.88, 0.17, ItemStatus::ok},
        {"q05", -0.05, 0.10, ItemStatus::ok},  {"q06", -6.0, std::nullopt, ItemStatus::extreme_all_correct},
        {"q07", 0.40, 0.12, ItemStatus::ok},   {"q08", 0.0, std::nullopt, ItemStatus::excluded},
        {"q09", -0.61, 0.12, ItemStatus::ok},  {"q10", 1.02, 0.13, ItemStatus::ok},
    };
    return p;
}

inline AbilityEstimates wright_fixture_abilities() {
    const double thetas[] = {-1.9, -1.1, -0.8, -0.7, -0.3, -0.2, -0.1, 0.0, 0.05, 0.1, 0.3, 0.35, 0.6, 0.9, 1.4, 2.1};
    AbilityEstimates out;
    int i = 0;
    for (double t : thetas) {
        ++i;
        out.push_back({"p" + std::to_string(i), "human", t, 0.4, 10, std::nullopt, std::nullopt});
    }
    return out;
}

inline ComparisonReport report_fixture_comparison() {
    ComparisonReport r;
    r.rows = {
        {"Benchmark", 1.0, 1.0, 0.0, 0.0, 0.0, true, 20},
        {"Experiment 1", 0.9361, 0.8947, 0.2449, 0.3101, 0.2449, true, 20},
        {"Experiment 2", 0.8125, 0.8015, 0.335, 0.6215, 0.335, true, 19},
        {"Experiment 3", 0.7450, 0.7263, 0.4125, 0.7001, 0.4125, true, 20},
        {"Experiment 4", -0.0349, 0.1173, 1.3675, 1.3675, 1.004, true, 18},
    };
    return r;
}

inline std::vector<DistStats> report_fixture_stats() {
    return {
        {"Benchmark", 0.0, 0.98, 3.41, 100},
        {"Experiment 1", 0.125, 0.875, 2.9, 50},
        {"Experiment 4", -0.215, 0.455, 4.125, 100},
        {"tiny", 0.5, 0.0, std::nullopt, 2},
    };
}

inline std::filesystem::path golden_dir() { return IRTFORGE_GOLDEN_DIR; }

}  // namespace irtforge::testing
