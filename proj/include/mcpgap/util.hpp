#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace mcpgap {

// Raised when an eigenvalue solve cannot complete (failed bracket, NaN
// contamination, cross-check mismatch).  Distinct from std::domain_error so the
// CLI can map it to its own exit code.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thread cap: min(hardware_concurrency, MCP_GAP_THREADS if set).  Always >= 1.
unsigned max_threads();

// Static-partition parallel map; fn(i) for i in [0, count).  Results must be
// written by index so aggregation order stays deterministic.  First exception
// thrown inside a worker is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

// All numeric CLI/JSON/CSV output goes through this: 12 significant digits,
// locale-independent, stable across reruns.
std::string fmt_g12(double v);

// Same, but JSON-safe: non-finite values (a divergent Muckenhoupt integral,
// the degenerate closed-form cap at the diameter bound) become null.
std::string fmt_g12_json(double v);

// Map a 64-bit word to a double in [0, 1) using the top 53 bits.  Used instead
// of std::uniform_real_distribution so seeded streams are reproducible beyond
// a single standard-library implementation.
inline double u64_to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace mcpgap
