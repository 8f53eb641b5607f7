#pragma once

#include <string>
#include <vector>

#include "mcpgap/geometry.hpp"

namespace mcpgap {

// lambda[h_{K,N,D'}] for one model diameter, with a Dirichlet-Neumann
// cross-check on the right half interval (the two coincide in the continuum).
struct ModelPoincareResult {
    double value = 0.0;
    double error = 0.0;
    // "solver", "sphere-closed-form" (D == D_{K,N}),
    // or "sphere-blend" (within 0.1% of D_{K,N})
    std::string method;
};

// n is the base grid resolution: the model is sampled at 2n cells and solved
// as the Richardson pair (n, 2n).  Requires even n >= 32.
ModelPoincareResult model_poincare(const CurvatureParams& p, double D, int n = 4096);

struct ScanRow {
    double D_prime = 0.0;
    double lambda = 0.0;
    double scaled = 0.0;  // D'^2 * lambda
    double error = 0.0;
};

enum class Monotonicity {
    Constant,
    StrictlyDecreasing,
    NonIncreasing,
    NonDecreasing,
    StrictlyIncreasing,
    NotMonotone,
};
std::string to_string(Monotonicity m);

// Classification of consecutive differences with per-row error tolerances
// plus a relative slack (default 1e-6).
Monotonicity classify_monotonicity(const std::vector<double>& values,
                                   const std::vector<double>& errors,
                                   double rel_slack = 1e-6);

struct ScanProfile {
    std::vector<ScanRow> rows;
    Monotonicity lambda_verdict = Monotonicity::Constant;
    Monotonicity scaled_verdict = Monotonicity::Constant;
};

// count >= 8 rows at geometrically spaced D' in [D_max/64, D_max]; rows may be
// computed in parallel (MCP_GAP_THREADS caps it) with index-ordered results.
ScanProfile scan_profile(const CurvatureParams& p, double D_max, int count, int n = 4096);

struct SharpConstantResult {
    double value = 0.0;
    double error = 0.0;
    double minimizing_D_prime = 0.0;
    std::string method;  // "direct" (K<=0), "grid+refine", "dense-scan"
    bool dense_disagreement = false;
};

// The sharp class constant: lambda[h_{K,N,D}] directly for K <= 0; for K > 0
// the infimum over D' <= min(D, D_{K,N}) via a 64-point geometric grid on
// [D_max/1024, D_max] plus golden-section refinement to 1e-4 relative width.
// dense_scan adds a 512-point sweep guarding the unimodality assumption.
SharpConstantResult sharp_poincare(const CurvatureParams& p, double D, int n = 4096,
                                   bool dense_scan = false);

}  // namespace mcpgap
