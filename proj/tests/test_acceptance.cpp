#include <doctest.h>

#include <filesystem>

#include "voicelab/selftest.hpp"

// Runs the full acceptance suite once; each numbered criterion must pass at
// its pinned tolerance. run_selftest prints one PASS/FAIL line per criterion.
TEST_CASE("acceptance suite") {
    voicelab::SelftestConfig config;
    config.seed = 0;
    config.out_dir = std::filesystem::temp_directory_path() / "voicelab_acceptance";
    const voicelab::SelftestReport report = voicelab::run_selftest(config);
    REQUIRE(report.criteria.size() == 13);
    for (const auto& criterion : report.criteria) {
        INFO("criterion ", criterion.id, " (", criterion.name, "): ", criterion.details);
        CHECK(criterion.pass);
    }
}
