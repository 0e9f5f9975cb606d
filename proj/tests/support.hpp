#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "irtforge/random.hpp"
#include "irtforge/response_matrix.hpp"
#include "irtforge/simulate.hpp"

namespace irtforge::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("irtforge_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline ResponseMatrix simulate_group(int n, double mean, double sd, const ItemBank& bank, std::uint64_t seed,
                                     double missing_rate = 0.0, const std::string& label = "group") {
    PopulationSpec spec;
    spec.components = {{label, n, mean, sd}};
    spec.seed = seed;
    const auto thetas = sample_thetas(spec);
    const auto betas = bank.fixed_difficulties();
    return simulate_responses(thetas, bank.item_ids(), betas, missing_rate, derive_seed(seed, 1));
}

}  // namespace irtforge::testing
