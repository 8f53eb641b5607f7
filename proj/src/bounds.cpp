#include "mcpgap/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mcpgap/kernels.hpp"
#include "mcpgap/util.hpp"

namespace mcpgap {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDivergenceCap = 1e12;

}  // namespace

std::string BoundsPair::to_json() const {
    std::ostringstream out;
    out << "{\"lower\": " << fmt_g12_json(lower) << ", \"upper\": " << fmt_g12_json(upper)
        << ", \"provenance\": \"" << provenance << "\"}";
    return out.str();
}

namespace {

// Integral of 1/h over a segment of width w with h linear from h0 to h1, in
// closed form (the density is piecewise linear by contract, so this is exact
// and avoids the large trapezoid overshoot of the convex integrand on steep
// cells).  Diverges when an endpoint vanishes.
double inv_cell_integral(double h0, double h1, double w) {
    if (!(h0 > 0.0) || !(h1 > 0.0)) return kInf;
    if (h0 == h1) return w / h0;
    double u = (h1 - h0) / h0;
    return w * std::log1p(u) / (h0 * u);
}

}  // namespace

double muckenhoupt_A(const GridDensity& h) {
    const int n = h.n;
    const double dx = h.dx();
    const auto& s = h.samples;

    std::vector<double> left(n + 1), right(n + 1);
    left[0] = 0.0;
    for (int i = 0; i < n; ++i)
        left[i + 1] = left[i] + inv_cell_integral(s[i], s[i + 1], dx);
    right[n] = 0.0;
    for (int i = n; i-- > 0;) right[i] = right[i + 1] + 0.5 * dx * (s[i] + s[i + 1]);

    if (!std::isfinite(left[n]) || left[n] > kDivergenceCap) return kInf;

    double best = kernels::max_product(left, right);
    int imax = 0;
    double best_scan = -kInf;
    for (int i = 0; i <= n; ++i) {
        double v = left[i] * right[i];
        if (v > best_scan) { best_scan = v; imax = i; }
    }

    // One 8x refinement pass around the maximizing node; fine steps subdivide
    // cells exactly, so each piece is still the closed-form cell integral of
    // the linear interpolant.
    int lo = std::max(0, imax - 1), hi = std::min(n, imax + 1);
    int nsub = 8 * (hi - lo);
    double fine = dx / 8.0;
    std::vector<double> hs(nsub + 1), Ls(nsub + 1), Rs(nsub + 1);
    for (int j = 0; j <= nsub; ++j) {
        int c = lo + j / 8;
        double t = (j % 8) / 8.0;
        hs[j] = (c >= n) ? s[n] : s[c] * (1.0 - t) + s[c + 1] * t;
    }
    Ls[0] = left[lo];
    for (int j = 0; j < nsub; ++j)
        Ls[j + 1] = Ls[j] + inv_cell_integral(hs[j], hs[j + 1], fine);
    Rs[nsub] = right[hi];
    for (int j = nsub; j-- > 0;) Rs[j] = Rs[j + 1] + 0.5 * fine * (hs[j] + hs[j + 1]);
    best = std::max(best, kernels::max_product(Ls, Rs));

    if (!std::isfinite(best)) return kInf;
    return best;
}

BoundsPair muckenhoupt_bounds(const GridDensity& h) {
    double A = muckenhoupt_A(h);
    if (!std::isfinite(A) || A <= 0.0) return {0.0, 0.0, "muckenhoupt-divergent"};
    return {1.0 / (4.0 * A), 1.0 / A, "muckenhoupt"};
}

BoundsPair closed_form_bounds(const CurvatureParams& p, double D) {
    if (!(D > 0.0) || !std::isfinite(D))
        throw std::domain_error("closed_form_bounds: need finite D > 0");
    if (D > bonnet_myers_diameter(p) * (1.0 + 1e-12))
        throw std::domain_error("closed_form_bounds: D beyond D_{K,N}");
    const double N = p.N;
    double k0_lower = 0.25 * N * N * std::pow(2.0, -(N - 1.0));
    double k0_upper = kPi * kPi * N * N * std::pow(2.0, -(N - 1.0));
    if (p.K == 0.0) return {k0_lower, k0_upper, "zero-curvature sandwich"};
    if (p.K < 0.0) {
        double sig = sigma_coeff(0.5, p, D);
        double lower = 0.25 * D * D *
                       std::max(std::fabs(p.K) * (N - 1.0), N * N / (D * D)) *
                       std::pow(sig, N - 1.0);
        double upper = kPi * kPi * N * N * std::pow(4.0 * sig, -(N - 1.0));
        return {lower, upper,
                "negative curvature: model lower bound, osc-transported zero-curvature upper"};
    }
    double sig = sigma_coeff(0.5, p, std::min(D, bonnet_myers_diameter(p)));
    double factor = std::pow(2.0 * sig, N - 1.0);
    return {k0_lower, k0_upper * factor, "positive curvature: zero-curvature comparison"};
}

double sphere_eigenvalue(const CurvatureParams& p) {
    if (!(p.K > 0.0)) throw std::domain_error("sphere_eigenvalue: need K > 0");
    return p.N * p.K / (p.N - 1.0);
}

double intro_lower_bound(const CurvatureParams& p, double D) {
    if (!(D > 0.0) || !std::isfinite(D))
        throw std::domain_error("intro_lower_bound: need finite D > 0");
    if (D > bonnet_myers_diameter(p) * (1.0 + 1e-12))
        throw std::domain_error("intro_lower_bound: D beyond D_{K,N}");
    const double N = p.N;
    if (p.K >= 0.0)
        return 0.25 * (N * N / (D * D)) * std::pow(2.0, -(N - 1.0));
    double sig = sigma_coeff(0.5, p, D);
    return 0.25 * std::max(std::fabs(p.K) * (N - 1.0), N * N / (D * D)) *
           std::pow(sig, N - 1.0);
}

double sturm_constant(const CurvatureParams& p, double r) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::domain_error("sturm_constant: need finite r > 0");
    if (2.0 * r > bonnet_myers_diameter(p) * (1.0 + 1e-12))
        throw std::domain_error("sturm_constant: 2r beyond D_{K,N}");
    const double N = p.N;
    double base = (2.0 + N) / (N * std::pow(2.0, N)) / (4.0 * r * r);
    if (p.K < 0.0)
        base *= std::pow(2.0 * r / s_kappa(p.kappa(), 2.0 * r), N - 1.0);
    return base;
}

double von_renesse_constant(const CurvatureParams& p, double r) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::domain_error("von_renesse_constant: need finite r > 0");
    if (2.0 * r > bonnet_myers_diameter(p) * (1.0 + 1e-12))
        throw std::domain_error("von_renesse_constant: 2r beyond D_{K,N}");
    const double N = p.N;
    double base = 0.5 / (2.0 * r);
    if (p.K >= 0.0) return base * std::pow(2.0, -(N - 1.0));
    return base * std::pow(sigma_coeff(0.5, p, 2.0 * r), N - 1.0);
}

}  // namespace mcpgap
