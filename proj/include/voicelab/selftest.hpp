#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace voicelab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
};

struct SelftestConfig {
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "selftest_out";
    bool write_artifacts = true;
};

struct SelftestReport {
    std::vector<CriterionResult> criteria;
    bool all_pass = true;
};

/// Runs the full acceptance suite (thirteen numbered criteria), printing one
/// pass/fail line per criterion, writing a summary JSON and the byte-identical
/// artifact pair used by the determinism criterion.
SelftestReport run_selftest(const SelftestConfig& config);

/// Writes the deterministic artifact set (kernel CSV, admissibility JSON,
/// coorbit batch CSV, norm profiles CSV) derived from the seed.
void emit_artifacts(const std::filesystem::path& dir, std::uint64_t seed);

}  // namespace voicelab
