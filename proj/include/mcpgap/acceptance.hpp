#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mcpgap {

// Knobs for the self-test suite.  n is the model-solver resolution; the random
// density campaigns run at a fixed internal resolution so their seeds stay
// comparable across n.  Every sub-seed derives from seed, so two runs with the
// same config produce byte-identical reports.
struct AcceptanceConfig {
    int n = 4096;
    std::uint64_t seed = 1;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

// Runs the full criteria battery; never throws (per-criterion exceptions are
// converted into failures).
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg);

// Prints one PASS/FAIL line per criterion plus a summary; returns true iff all
// criteria pass.  Wall-clock limits are reported as ok/exceeded flags, never as
// times, so reports stay byte-identical across reruns.
bool run_acceptance_report(const AcceptanceConfig& cfg, std::ostream& out);

}  // namespace mcpgap
