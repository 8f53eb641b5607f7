#pragma once

#include <string>

#include "mcpgap/geometry.hpp"
#include "mcpgap/grid_density.hpp"

namespace mcpgap {

struct BoundsPair {
    double lower = 0.0;
    double upper = 0.0;
    std::string provenance;
    std::string to_json() const;
};

// Muckenhoupt constant A[h, (a,b)] = sup_x int_a^x dt/h * int_x^b h dt, with
// both integrals taken exactly against the piecewise-linear interpolant of h
// and one 8x refinement pass around the maximizing node.  Returns +infinity
// when the left integral is numerically divergent (non-finite or > 1e12).
double muckenhoupt_A(const GridDensity& h);

// Two-sided estimate for the Dirichlet-Neumann gap: 1/(4A) <= Lambda <= 1/A.
// Divergent A collapses to {0, 0, "muckenhoupt-divergent"}.
BoundsPair muckenhoupt_bounds(const GridDensity& h);

// Closed-form bracket for the scaled constant D^2 * lambda of the model
// density.  K = 0: the N-only sandwich; K > 0: zero-curvature comparison;
// K < 0: curvature-aware lower bound plus the zero-curvature upper bound
// transported by the oscillation of the two model densities.
BoundsPair closed_form_bounds(const CurvatureParams& p, double D);

// N K / (N-1), the gap at full diameter D_{K,N} (K > 0 only).
double sphere_eigenvalue(const CurvatureParams& p);

// Curvature-dimension-diameter lower bound for the class constant (unscaled).
double intro_lower_bound(const CurvatureParams& p, double D);

// Two literature comparison points at radius r (reported side by side; no
// ordering between them is asserted):
// (2+N)/(N 2^N) / (2r)^2, times (2r/s(2r))^{N-1} when K < 0,
double sturm_constant(const CurvatureParams& p, double r);
// and the L1 constant (1/2)(1/(2r)) 2^{-(N-1)} (K >= 0) or
// (1/2)(1/(2r)) sigma^{(1/2)}(2r)^{N-1} (K < 0).
double von_renesse_constant(const CurvatureParams& p, double r);

}  // namespace mcpgap
