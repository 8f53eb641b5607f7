#include "mcpgap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mcpgap/kernels.hpp"
#include "mcpgap/util.hpp"

namespace mcpgap {

namespace {

constexpr double kFloorFactor = 1e-13;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Symmetric tridiagonal pencil B^{-1/2} A B^{-1/2} plus the mass diagonal
// needed to map eigenvectors back to node space.
struct Pencil {
    std::vector<double> t;     // diagonal
    std::vector<double> e;     // off-diagonal, size t.size()-1
    std::vector<double> e2;    // e squared
    std::vector<double> mass;  // B diagonal per unknown
    int first_node = 0;        // grid node index of unknown 0
};

std::vector<double> floored_weights(const GridDensity& h) {
    double floor_value = kFloorFactor * h.max_sample();
    std::vector<double> w(h.samples);
    for (double& v : w) v = std::max(v, floor_value);
    return w;
}

Pencil assemble(const GridDensity& h, BoundaryConditions bc) {
    const int n = h.n;
    const double dx = h.dx();
    std::vector<double> w = floored_weights(h);

    std::vector<double> p(n);  // flux coefficient per cell
    for (int i = 0; i < n; ++i) p[i] = 0.5 * (w[i] + w[i + 1]);

    int j0 = (bc.left == BC::Dirichlet) ? 1 : 0;
    int j1 = (bc.right == BC::Dirichlet) ? n - 1 : n;
    int m = j1 - j0 + 1;
    if (m < 2) throw SolverError("spectral: too few unknowns");

    Pencil P;
    P.first_node = j0;
    P.t.resize(m);
    P.e.resize(m - 1);
    P.e2.resize(m - 1);
    P.mass.resize(m);
    for (int k = 0; k < m; ++k) {
        int i = j0 + k;
        double diag_s = (i > 0 ? p[i - 1] : 0.0) + (i < n ? p[i] : 0.0);
        double mass_factor = (i == 0 || i == n) ? 0.5 : 1.0;  // trapezoid lump
        P.mass[k] = w[i] * dx * mass_factor;
        P.t[k] = diag_s / (dx * P.mass[k]);
    }
    for (int k = 0; k + 1 < m; ++k) {
        int i = j0 + k;
        P.e[k] = -p[i] / (dx * std::sqrt(P.mass[k] * P.mass[k + 1]));
        P.e2[k] = P.e[k] * P.e[k];
    }
    for (double v : P.t)
        if (!std::isfinite(v)) throw SolverError("spectral: non-finite assembly");
    for (double v : P.e)
        if (!std::isfinite(v)) throw SolverError("spectral: non-finite assembly");
    return P;
}

// Number of eigenvalues strictly below x (Sturm sequence with the classic
// zero-pivot substitution).
int count_below(const Pencil& P, double x, double norm_scale) {
    int count = 0;
    double q = 1.0;
    const std::size_t m = P.t.size();
    for (std::size_t i = 0; i < m; ++i) {
        double v;
        if (i == 0) v = P.t[0] - x;
        else if (q != 0.0) v = P.t[i] - x - P.e2[i - 1] / q;
        else v = P.t[i] - x - std::fabs(P.e[i - 1]) / (kEps * norm_scale);
        if (v < 0.0) ++count;
        q = v;
    }
    return count;
}

double bisect_eigenvalue(const Pencil& P, int k) {
    const std::size_t m = P.t.size();
    double hi = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = P.t[i];
        if (i > 0) r += std::fabs(P.e[i - 1]);
        if (i + 1 < m) r += std::fabs(P.e[i]);
        hi = std::max(hi, r);
    }
    double norm_scale = std::max(hi, 1.0);
    hi = hi * (1.0 + 16.0 * kEps) + 16.0 * kEps;
    double lo = 0.0;
    if (count_below(P, hi, norm_scale) < k)
        throw SolverError("spectral: eigenvalue bracket failed");
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (count_below(P, mid, norm_scale) >= k) hi = mid;
        else lo = mid;
        if (hi - lo <= 1e-13 * std::max(std::fabs(lo), std::fabs(hi)) + 1e-300)
            return 0.5 * (lo + hi);
    }
    throw SolverError("spectral: bisection failed to converge within 200 iterations");
}

// Solve (T - mu I) w = rhs with partial-pivoting tridiagonal LU (the gttrf /
// gtts2 scheme).  Tiny pivots are bumped so near-singular shifts -- the whole
// point of inverse iteration -- stay finite.
void shifted_solve(const Pencil& P, double mu, std::vector<double>& rhs, double pivot_floor) {
    const std::size_t m = P.t.size();
    std::vector<double> d(m), dl(m > 1 ? m - 1 : 0), du(m > 1 ? m - 1 : 0), du2(m > 2 ? m - 2 : 0, 0.0);
    std::vector<char> swapped(m > 1 ? m - 1 : 0, 0);
    for (std::size_t i = 0; i < m; ++i) d[i] = P.t[i] - mu;
    for (std::size_t i = 0; i + 1 < m; ++i) dl[i] = du[i] = P.e[i];

    auto bump = [&](double& piv) {
        if (std::fabs(piv) < pivot_floor) piv = (piv < 0.0 ? -pivot_floor : pivot_floor);
    };
    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (std::fabs(d[i]) >= std::fabs(dl[i])) {
            bump(d[i]);
            double fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
            if (i + 2 < m) du2[i] = 0.0;
        } else {
            double fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            double temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            du[i] = temp;
            if (i + 2 < m) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            swapped[i] = 1;
        }
    }
    bump(d[m - 1]);

    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (!swapped[i]) {
            rhs[i + 1] -= dl[i] * rhs[i];
        } else {
            double temp = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = temp - dl[i] * rhs[i];
        }
    }
    rhs[m - 1] /= d[m - 1];
    if (m >= 2) rhs[m - 2] = (rhs[m - 2] - du[m - 2] * rhs[m - 1]) / d[m - 2];
    for (std::size_t ii = m - 2; ii-- > 0;)
        rhs[ii] = (rhs[ii] - du[ii] * rhs[ii + 1] - du2[ii] * rhs[ii + 2]) / d[ii];
}

std::vector<double> inverse_iteration(const Pencil& P, double lambda) {
    const std::size_t m = P.t.size();
    double tnorm = 0.0;
    for (double v : P.t) tnorm = std::max(tnorm, std::fabs(v));
    double pivot_floor = std::max(tnorm, 1.0) * kEps * 16.0;

    std::vector<double> v(m);
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    for (std::size_t i = 0; i < m; ++i) {  // fixed splitmix-style start vector
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z ^= z >> 31;
        v[i] = u64_to_unit(z) - 0.5;
    }
    for (int it = 0; it < 3; ++it) {
        shifted_solve(P, lambda, v, pivot_floor);
        double norm = std::sqrt(kernels::dot(v, v));
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw SolverError("spectral: inverse iteration collapsed");
        for (double& x : v) x /= norm;
    }
    return v;
}

struct SingleSolve {
    double lambda;
    std::vector<double> eigenfunction;  // node space, n+1 entries
};

SingleSolve solve_single(const GridDensity& h, BoundaryConditions bc, bool want_vector) {
    Pencil P = assemble(h, bc);
    int k = (bc.left == BC::Neumann && bc.right == BC::Neumann) ? 2 : 1;
    SingleSolve out;
    out.lambda = bisect_eigenvalue(P, k);
    if (!want_vector) return out;

    std::vector<double> v = inverse_iteration(P, out.lambda);
    std::vector<double> u(h.n + 1, 0.0);
    for (std::size_t kk = 0; kk < v.size(); ++kk)
        u[P.first_node + kk] = v[kk] / std::sqrt(P.mass[kk]);
    // unit weighted L2 norm wrt the pencil mass
    std::vector<double> uu(v.size());
    for (std::size_t kk = 0; kk < v.size(); ++kk) uu[kk] = u[P.first_node + kk];
    double norm = std::sqrt(kernels::weighted_dot(uu, uu, P.mass));
    int peak = 0;
    double best = -1.0;
    for (int i = 0; i <= h.n; ++i)
        if (std::fabs(u[i]) > best) { best = std::fabs(u[i]); peak = i; }
    double sign = (u[peak] < 0.0) ? -1.0 : 1.0;
    for (double& x : u) x *= sign / norm;
    out.eigenfunction = std::move(u);
    return out;
}

std::optional<double> unique_zero(const GridDensity& h, const std::vector<double>& u) {
    int changes = 0;
    double zero = 0.0;
    double prev = 0.0;
    int prev_idx = -1;
    for (int i = 0; i <= h.n; ++i) {
        double cur = u[i];
        if (cur == 0.0) continue;  // exact zeros extend the previous sign
        if (prev_idx >= 0 && prev * cur < 0.0) {
            ++changes;
            zero = h.x(prev_idx) +
                   (h.x(i) - h.x(prev_idx)) * (prev / (prev - cur));
        }
        prev = cur;
        prev_idx = i;
    }
    if (changes == 1) return zero;
    return std::nullopt;
}

}  // namespace

SpectralResult spectral_gap(const GridDensity& h, BoundaryConditions bc) {
    if (h.n % 2 != 0 || h.n < 4)
        throw std::invalid_argument("spectral_gap: need an even cell count >= 4 (Richardson pair)");
    GridDensity coarse = h.coarsen();
    SingleSolve cs = solve_single(coarse, bc, false);
    SingleSolve fs = solve_single(h, bc, true);

    SpectralResult r;
    r.lambda_fine = fs.lambda;
    r.lambda_coarse = cs.lambda;
    r.eigenvalue = (4.0 * fs.lambda - cs.lambda) / 3.0;
    r.error_estimate = std::fabs(fs.lambda - cs.lambda) / 3.0;
    r.eigenfunction = std::move(fs.eigenfunction);
    r.a = h.a;
    r.b = h.b;
    r.n = h.n;
    if (bc.left == BC::Neumann && bc.right == BC::Neumann)
        r.zero_location = unique_zero(h, r.eigenfunction);
    return r;
}

std::string SpectralResult::to_json(bool with_eigenfunction) const {
    std::ostringstream out;
    out << "{\"lambda\": " << fmt_g12(eigenvalue)
        << ", \"error\": " << fmt_g12(error_estimate) << ", \"zero\": ";
    if (zero_location) out << fmt_g12(*zero_location);
    else out << "null";
    out << ", \"n\": " << n;
    if (with_eigenfunction) {
        out << ", \"eigenfunction\": [";
        for (std::size_t i = 0; i < eigenfunction.size(); ++i) {
            if (i) out << ", ";
            out << fmt_g12(eigenfunction[i]);
        }
        out << "]";
    }
    out << "}";
    return out.str();
}

double rayleigh_quotient(const GridDensity& h, std::span<const double> f) {
    if (f.size() != static_cast<std::size_t>(h.n + 1))
        throw std::invalid_argument("rayleigh_quotient: f must have n+1 samples");
    const int n = h.n;
    const double dx = h.dx();
    std::vector<double> w = floored_weights(h);
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = 0.5 * (w[i] + w[i + 1]);
    std::vector<double> mass(n + 1);
    for (int i = 0; i <= n; ++i) mass[i] = w[i] * dx * ((i == 0 || i == n) ? 0.5 : 1.0);

    double num = kernels::diff_energy(f, p) / dx;
    double total = kernels::sum(mass);
    double mean = kernels::dot(f, mass) / total;
    std::vector<double> g(f.begin(), f.end());
    for (double& x : g) x -= mean;
    double den = kernels::weighted_dot(g, g, mass);
    double fscale = 0.0;
    for (double x : f) fscale = std::max(fscale, std::fabs(x));
    if (!(den > 1e-28 * total * fscale * fscale))
        throw std::invalid_argument("rayleigh_quotient: f is weighted-mean degenerate");
    return num / den;
}

double eigenfunction_zero(const SpectralResult& r) {
    if (!r.zero_location)
        throw SolverError("eigenfunction_zero: sign-change count differs from one");
    return *r.zero_location;
}

double osc(const GridDensity& h1, const GridDensity& h2) {
    if (h1.a != h2.a || h1.b != h2.b || h1.n != h2.n)
        throw std::invalid_argument("osc: densities live on different grids");
    for (int i = 0; i <= h1.n; ++i)
        if (!(h1.samples[i] > 0.0) || !(h2.samples[i] > 0.0))
            throw std::invalid_argument("osc: densities must be strictly positive");
    return kernels::max_ratio(h2.samples, h1.samples) *
           kernels::max_ratio(h1.samples, h2.samples);
}

OdeComparisonReport check_ode_comparison(const CurvatureParams& p, double D,
                                         const std::function<double(double)>& theta,
                                         int n) {
    if (n % 2 != 0) throw std::invalid_argument("check_ode_comparison: need even n");
    GridDensity model = ModelDensity(p, D).sample(n);
    GridDensity perturbed = envelope_mixed_density(p, D, theta, n);
    SpectralResult rm = spectral_gap(model, kNeumannNeumann);
    SpectralResult rp = spectral_gap(perturbed, kNeumannNeumann);
    OdeComparisonReport rep;
    rep.lambda_model = rm.eigenvalue;
    rep.lambda_perturbed = rp.eigenvalue;
    rep.err_model = rm.error_estimate;
    rep.err_perturbed = rp.error_estimate;
    rep.holds = rp.eigenvalue >= rm.eigenvalue - (rm.error_estimate + rp.error_estimate);
    return rep;
}

}  // namespace mcpgap
