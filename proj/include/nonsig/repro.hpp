#pragma once

// Figure recipes: fixed scan/sampling configurations whose CSV outputs (and
// manifests) are written under an output directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nonsig {

struct ReproOptions {
    std::uint64_t seed = 0;
    /// Grid and sample sizes of the original figures instead of the
    /// desk-scale defaults.
    bool full_scale = false;
    std::filesystem::path out_dir = "repro";
    std::optional<int> grid;          // main grid size
    std::optional<int> restarts;
    std::optional<double> s_lo;       // fig6 / fig7 range
    std::optional<double> s_hi;
    std::optional<std::size_t> samples;  // fig5 quantum sample size
    int k = 100;                      // fig6 triple spacing
    std::string command_line;
};

struct ReproResult {
    std::vector<std::filesystem::path> outputs;  // CSV / JSON data files
    std::string summary_json;
};

std::vector<std::string> repro_names();

/// Throws DomainError for an unknown recipe name.
ReproResult run_repro(const std::string& name, const ReproOptions& options);

}  // namespace nonsig
