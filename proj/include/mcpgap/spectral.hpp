#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcpgap/geometry.hpp"
#include "mcpgap/grid_density.hpp"

namespace mcpgap {

enum class BC { Dirichlet, Neumann };

struct BoundaryConditions {
    BC left = BC::Neumann;
    BC right = BC::Neumann;
};

inline constexpr BoundaryConditions kNeumannNeumann{BC::Neumann, BC::Neumann};
inline constexpr BoundaryConditions kDirichletNeumann{BC::Dirichlet, BC::Neumann};

// First nontrivial eigenvalue of -(h u')' = lambda h u with the given
// boundary conditions (first nonzero one for Neumann-Neumann).
struct SpectralResult {
    double eigenvalue = 0.0;      // Richardson-extrapolated from (n/2, n)
    double error_estimate = 0.0;  // |lambda_fine - lambda_coarse| / 3
    double lambda_fine = 0.0;     // raw discrete eigenvalue on the input grid
    double lambda_coarse = 0.0;   // raw eigenvalue on the 2x-coarsened grid
    std::vector<double> eigenfunction;  // n+1 samples, unit weighted L2 norm
    std::optional<double> zero_location;  // Neumann-Neumann sign change
    double a = 0.0, b = 0.0;
    int n = 0;
    std::string to_json(bool with_eigenfunction = false) const;
};

// Flux-form finite differences (arithmetic-mean flux coefficients, trapezoid
// mass, ghost reflection for Neumann, node elimination for Dirichlet), reduced
// to a symmetric tridiagonal pencil and solved by Sturm-sequence bisection;
// eigenvector recovered by inverse iteration at the converged shift.
// Requires an even cell count (the Richardson pair coarsens the input grid).
// Weight samples are floored at 1e-13 * max(h) before assembly.
SpectralResult spectral_gap(const GridDensity& h, BoundaryConditions bc);

// Discrete Rayleigh quotient of f against the same forms the solver uses
// (cell-difference numerator, trapezoid-mass denominator after removing the
// weighted mean).  Always >= the Neumann-Neumann lambda_fine of the same grid.
double rayleigh_quotient(const GridDensity& h, std::span<const double> f);

// Location of the unique sign change of a Neumann-Neumann eigenfunction by
// linear interpolation; throws SolverError when the count differs from one.
double eigenfunction_zero(const SpectralResult& r);

// osc(h1, h2) = sup(h2/h1) * sup(h1/h2) over shared nodes; both strictly
// positive, same grid.
double osc(const GridDensity& h1, const GridDensity& h2);

struct OdeComparisonReport {
    double lambda_model = 0.0;
    double lambda_perturbed = 0.0;
    double err_model = 0.0;
    double err_perturbed = 0.0;
    bool holds = false;  // lambda_perturbed >= lambda_model - combined error
};

// Comparison harness: builds the admissible perturbation of the model density
// through the envelope mixing construction (theta in [0,1]; theta == 1{x>D/2}
// reproduces the model itself) and checks the eigenvalue ordering up to the
// combined Richardson error estimates.
OdeComparisonReport check_ode_comparison(const CurvatureParams& p, double D,
                                         const std::function<double(double)>& theta,
                                         int n);

}  // namespace mcpgap
