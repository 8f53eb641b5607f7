#include "mcpgap/sharp_constant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mcpgap/bounds.hpp"
#include "mcpgap/spectral.hpp"
#include "mcpgap/util.hpp"

namespace mcpgap {

namespace {

constexpr double kBlendWindow = 0.999;  // sphere closed form past this fraction of D_{K,N}

void check_resolution(int n) {
    if (n < 32 || n % 2 != 0)
        throw std::invalid_argument("model_poincare: need even n >= 32");
}

}  // namespace

ModelPoincareResult model_poincare(const CurvatureParams& p, double D, int n) {
    check_resolution(n);
    if (!(D > 0.0) || !std::isfinite(D))
        throw std::domain_error("model_poincare: need finite D > 0");
    double dkn = bonnet_myers_diameter(p);
    if (D > dkn * (1.0 + 1e-12))
        throw std::domain_error("model_poincare: D beyond D_{K,N}");

    if (p.K > 0.0) {
        if (D >= dkn) return {sphere_eigenvalue(p), 0.0, "sphere-closed-form"};
        if (D > kBlendWindow * dkn) {
            double v = sphere_eigenvalue(p);
            return {v, 0.01 * v, "sphere-blend"};  // continuity allowance
        }
    }

    GridDensity h = ModelDensity(p, D).sample(2 * n);
    SpectralResult nn = spectral_gap(h, kNeumannNeumann);
    SpectralResult dn = spectral_gap(h.slice(n, 2 * n), kDirichletNeumann);
    double tol = 4.0 * (nn.error_estimate + dn.error_estimate) +
                 1e-9 * std::fabs(nn.eigenvalue) + 1e-300;
    if (std::fabs(nn.eigenvalue - dn.eigenvalue) > tol)
        throw SolverError("model_poincare: half-interval identity cross-check failed");
    return {nn.eigenvalue, nn.error_estimate, "solver"};
}

std::string to_string(Monotonicity m) {
    switch (m) {
        case Monotonicity::Constant: return "constant";
        case Monotonicity::StrictlyDecreasing: return "strictly decreasing";
        case Monotonicity::NonIncreasing: return "non-increasing";
        case Monotonicity::NonDecreasing: return "non-decreasing";
        case Monotonicity::StrictlyIncreasing: return "strictly increasing";
        case Monotonicity::NotMonotone: return "not monotone";
    }
    return "?";
}

Monotonicity classify_monotonicity(const std::vector<double>& values,
                                   const std::vector<double>& errors,
                                   double rel_slack) {
    if (values.size() < 2 || values.size() != errors.size())
        throw std::invalid_argument("classify_monotonicity: bad input sizes");
    bool any_up = false, any_down = false, all_up = true, all_down = true;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        double tol = errors[i] + errors[i + 1] +
                     rel_slack * std::max(std::fabs(values[i]), std::fabs(values[i + 1]));
        double d = values[i + 1] - values[i];
        if (d > tol) any_up = true;
        else all_up = false;
        if (d < -tol) any_down = true;
        else all_down = false;
    }
    if (!any_up && !any_down) return Monotonicity::Constant;
    if (any_up && any_down) return Monotonicity::NotMonotone;
    if (any_down) return all_down ? Monotonicity::StrictlyDecreasing : Monotonicity::NonIncreasing;
    return all_up ? Monotonicity::StrictlyIncreasing : Monotonicity::NonDecreasing;
}

ScanProfile scan_profile(const CurvatureParams& p, double D_max, int count, int n) {
    check_resolution(n);
    if (count < 8) throw std::invalid_argument("scan_profile: need count >= 8");
    if (!(D_max > 0.0) || !std::isfinite(D_max))
        throw std::domain_error("scan_profile: need finite D_max > 0");
    if (D_max > bonnet_myers_diameter(p) * (1.0 + 1e-12))
        throw std::domain_error("scan_profile: D_max beyond D_{K,N}");

    constexpr double kSpan = 64.0;
    ScanProfile out;
    out.rows.resize(count);
    parallel_for(count, [&](std::size_t i) {
        double frac = static_cast<double>(i) / (count - 1);
        double Dp = D_max * std::pow(kSpan, frac - 1.0);
        if (i + 1 == static_cast<std::size_t>(count)) Dp = D_max;
        ModelPoincareResult r = model_poincare(p, Dp, n);
        out.rows[i] = {Dp, r.value, Dp * Dp * r.value, r.error};
    });

    std::vector<double> lam, sc, err, err_sc;
    for (const auto& row : out.rows) {
        lam.push_back(row.lambda);
        sc.push_back(row.scaled);
        err.push_back(row.error);
        err_sc.push_back(row.D_prime * row.D_prime * row.error);
    }
    out.lambda_verdict = classify_monotonicity(lam, err);
    out.scaled_verdict = classify_monotonicity(sc, err_sc);
    return out;
}

namespace {

struct Probe {
    double D;
    double value;
    double error;
};

Probe probe(const CurvatureParams& p, double D, int n) {
    ModelPoincareResult r = model_poincare(p, D, n);
    return {D, r.value, r.error};
}

// Golden-section minimization of lambda(D') on [a, b] to 1e-4 relative width;
// returns the best probe seen.
Probe golden_refine(const CurvatureParams& p, double a, double b, int n, Probe best) {
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    Probe pc = probe(p, c, n), pd = probe(p, d, n);
    auto keep = [&](const Probe& q) {
        if (q.value < best.value) best = q;
    };
    keep(pc);
    keep(pd);
    for (int iter = 0; iter < 200 && (b - a) > 1e-4 * b; ++iter) {
        if (pc.value < pd.value) {
            b = d;
            d = c;
            pd = pc;
            c = b - kInvPhi * (b - a);
            pc = probe(p, c, n);
            keep(pc);
        } else {
            a = c;
            c = d;
            pc = pd;
            d = a + kInvPhi * (b - a);
            pd = probe(p, d, n);
            keep(pd);
        }
    }
    return best;
}

}  // namespace

SharpConstantResult sharp_poincare(const CurvatureParams& p, double D, int n, bool dense_scan) {
    check_resolution(n);
    if (!(D > 0.0) || !std::isfinite(D))
        throw std::domain_error("sharp_poincare: need finite D > 0");

    SharpConstantResult out;
    if (p.K <= 0.0) {
        ModelPoincareResult r = model_poincare(p, D, n);
        out.value = r.value;
        out.error = r.error;
        out.minimizing_D_prime = D;
        out.method = "direct";
        return out;
    }

    double dkn = bonnet_myers_diameter(p);
    double Dmax = std::min(D, dkn);
    constexpr int kGrid = 64;
    constexpr double kSpan = 1024.0;
    std::vector<Probe> grid(kGrid);
    parallel_for(kGrid, [&](std::size_t i) {
        double frac = static_cast<double>(i) / (kGrid - 1);
        double Dp = (i + 1 == kGrid) ? Dmax : Dmax * std::pow(kSpan, frac - 1.0);
        grid[i] = probe(p, Dp, n);
    });
    std::size_t istar = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i].value < grid[istar].value) istar = i;

    double lo = grid[istar > 0 ? istar - 1 : 0].D;
    double hi = grid[std::min<std::size_t>(istar + 1, kGrid - 1)].D;
    Probe best = golden_refine(p, lo, hi, n, grid[istar]);
    out.method = "grid+refine";

    if (dense_scan) {
        constexpr int kDense = 512;
        std::vector<Probe> dense(kDense);
        parallel_for(kDense, [&](std::size_t i) {
            double frac = static_cast<double>(i) / (kDense - 1);
            double Dp = (i + 1 == kDense) ? Dmax : Dmax * std::pow(kSpan, frac - 1.0);
            dense[i] = probe(p, Dp, n);
        });
        std::size_t jstar = 0;
        for (std::size_t i = 1; i < dense.size(); ++i)
            if (dense[i].value < dense[jstar].value) jstar = i;
        double step = std::log(kSpan) / (kDense - 1);  // dense grid log spacing
        bool other_basin =
            std::fabs(std::log(dense[jstar].D / best.D)) > 1.5 * step + 1e-4;
        if (dense[jstar].value < best.value - (dense[jstar].error + best.error)) {
            out.dense_disagreement = true;
            double dlo = dense[jstar > 0 ? jstar - 1 : 0].D;
            double dhi = dense[std::min<std::size_t>(jstar + 1, kDense - 1)].D;
            best = golden_refine(p, dlo, dhi, n, dense[jstar]);
        } else if (other_basin) {
            out.dense_disagreement = true;
        }
        out.method = "dense-scan";
    }

    out.value = best.value;
    out.error = best.error;
    out.minimizing_D_prime = best.D;
    return out;
}

}  // namespace mcpgap
