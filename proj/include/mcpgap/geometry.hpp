#pragma once

#include <cstdint>
#include <functional>

#include "mcpgap/grid_density.hpp"

namespace mcpgap {

// Curvature-dimension parameters: lower curvature bound K (any real) and
// dimension upper bound N > 1.
struct CurvatureParams {
    double K;
    double N;
    CurvatureParams(double K_, double N_);
    double kappa() const { return K / (N - 1.0); }
};

// Generalized sine: sin(sqrt(k)t)/sqrt(k) for k>0, t for k=0,
// sinh(sqrt(-k)t)/sqrt(-k) for k<0.  Power series near k*t^2 = 0 keeps the
// three branches consistent to machine precision.  For k>0 the domain is
// closed at t = pi/sqrt(k) (the model density at full diameter needs the
// endpoint); beyond it throws std::domain_error.
double s_kappa(double kappa, double theta);

// (d/dt log s_kappa)(theta) = s'/s; same branch/series treatment.
double s_kappa_log_derivative(double kappa, double theta);

// pi/sqrt(K/(N-1)) for K > 0, +infinity otherwise.
double bonnet_myers_diameter(const CurvatureParams& p);

// sigma^{(t)}(theta) = s(t*theta)/s(theta) with s = s_{K/(N-1)};
// +infinity when theta >= bonnet_myers_diameter.
double sigma_coeff(double t, const CurvatureParams& p, double theta);

// tau^{(t)}(theta) = t^{1/N} * sigma^{(t)}(theta)^{(N-1)/N}.
double tau_coeff(double t, const CurvatureParams& p, double theta);

// The extremal density on [0, D]: s(D-x)^{N-1} left of D/2, s(x)^{N-1} right.
double model_density(const CurvatureParams& p, double D, double x);

struct ModelDensity {
    CurvatureParams params;
    double D;
    ModelDensity(const CurvatureParams& p, double D_);
    double operator()(double x) const { return model_density(params, D, x); }
    GridDensity sample(int cells) const;
};

// Pointwise admissible band for (log h)' of a density in the class:
// lower(x) = -(N-1) (s'/s)(D-x),  upper(x) = (N-1) (s'/s)(x), x in (0, D).
struct EnvelopeBounds {
    double lower;
    double upper;
};
EnvelopeBounds log_derivative_envelope(const CurvatureParams& p, double D, double x);

struct ValidationReport {
    bool pass = false;
    double worst_ratio = 0.0;  // max over sampled pairs of (violation ratio)
    double x0 = 0.0, x1 = 0.0; // pair attaining worst_ratio (absolute coords)
    bool diameter_ok = true;
};

// Two-sided ratio test against the model bounds on a pair sample (all pairs
// when n <= 256, a stratified 256^2 subsample plus all adjacent pairs above),
// multiplicative slack 1 + 1e-9.  Interior zeros are rejected outright.
ValidationReport validate_mcp_density(const GridDensity& h, const CurvatureParams& p);

// Membership-preserving random density: a seeded low-order trigonometric
// mixing field theta(x) in [0,1] interpolates per cell between the exact
// antiderivative increments of the two envelope branches; the log-density
// increment per cell is clamped to |dl| <= 4 (i.e. |l'| <= 4n/D) and projected
// back into the envelope band, then h = exp(l) with l(D/2) = 0.
GridDensity random_mcp_density(const CurvatureParams& p, double D, std::uint64_t seed, int n);

// Same construction with a caller-supplied mixing field (evaluated at cell
// midpoints; values must lie in [0,1]).  theta == 1 reproduces the sampled
// right-branch profile s(x)^{N-1} exactly, theta == 0 the left branch,
// and the step 1{x > D/2} the model density itself.
GridDensity envelope_mixed_density(const CurvatureParams& p, double D,
                                   const std::function<double(double)>& theta, int n);

// The seeded mixing field used by random_mcp_density (exposed so perturbation
// campaigns can reuse it).
std::function<double(double)> random_mixing_field(std::uint64_t seed, double D);

}  // namespace mcpgap
