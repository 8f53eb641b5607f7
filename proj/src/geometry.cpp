#include "mcpgap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "mcpgap/util.hpp"

namespace mcpgap {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this, |kappa|*theta^2 terms are evaluated by series so the three
// curvature branches agree through kappa = 0.
constexpr double kSeriesCut = 1e-8;

void check_theta(double theta) {
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw std::domain_error("s_kappa: theta must be finite and >= 0");
}

}  // namespace

CurvatureParams::CurvatureParams(double K_, double N_) : K(K_), N(N_) {
    if (!std::isfinite(K) || !std::isfinite(N))
        throw std::domain_error("CurvatureParams: K, N must be finite");
    if (!(N > 1.0)) throw std::domain_error("CurvatureParams: need N > 1");
}

double s_kappa(double kappa, double theta) {
    check_theta(theta);
    double z = kappa * theta * theta;
    if (std::fabs(z) < kSeriesCut) {
        // theta*(1 - z/6 + z^2/120), truncation below 1e-24 relative
        return theta * (1.0 - z / 6.0 + z * z / 120.0);
    }
    if (kappa > 0.0) {
        double root = std::sqrt(kappa);
        double phi = root * theta;
        if (phi > kPi * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()))
            throw std::domain_error("s_kappa: theta beyond pi/sqrt(kappa)");
        return std::sin(std::min(phi, kPi)) / root;
    }
    double root = std::sqrt(-kappa);
    return std::sinh(root * theta) / root;
}

double s_kappa_log_derivative(double kappa, double theta) {
    check_theta(theta);
    if (theta == 0.0) return kInf;
    double z = kappa * theta * theta;
    if (std::fabs(z) < kSeriesCut) {
        // cot-type series: 1/theta - kappa*theta/3 - kappa^2*theta^3/45
        return 1.0 / theta - kappa * theta / 3.0 - kappa * kappa * theta * theta * theta / 45.0;
    }
    if (kappa > 0.0) {
        double root = std::sqrt(kappa);
        double phi = root * theta;
        if (phi > kPi * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()))
            throw std::domain_error("s_kappa_log_derivative: theta beyond pi/sqrt(kappa)");
        return root * std::cos(phi) / std::sin(phi);
    }
    double root = std::sqrt(-kappa);
    return root / std::tanh(root * theta);
}

double bonnet_myers_diameter(const CurvatureParams& p) {
    if (p.K > 0.0) return kPi / std::sqrt(p.kappa());
    return kInf;
}

double sigma_coeff(double t, const CurvatureParams& p, double theta) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("sigma_coeff: t must be in [0,1]");
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw std::domain_error("sigma_coeff: theta must be finite and > 0");
    if (theta >= bonnet_myers_diameter(p)) return kInf;
    return s_kappa(p.kappa(), t * theta) / s_kappa(p.kappa(), theta);
}

double tau_coeff(double t, const CurvatureParams& p, double theta) {
    double sig = sigma_coeff(t, p, theta);
    if (t == 0.0) return 0.0;
    return std::pow(t, 1.0 / p.N) * std::pow(sig, (p.N - 1.0) / p.N);
}

double model_density(const CurvatureParams& p, double D, double x) {
    if (!(D > 0.0) || D > bonnet_myers_diameter(p))
        throw std::domain_error("model_density: need 0 < D <= D_{K,N}");
    if (!(x >= 0.0 && x <= D)) throw std::domain_error("model_density: x outside [0, D]");
    double kap = p.kappa();
    double arg = (x <= D / 2.0) ? D - x : x;
    return std::pow(s_kappa(kap, arg), p.N - 1.0);
}

ModelDensity::ModelDensity(const CurvatureParams& p, double D_) : params(p), D(D_) {
    if (!(D > 0.0) || D > bonnet_myers_diameter(params))
        throw std::domain_error("ModelDensity: need 0 < D <= D_{K,N}");
}

GridDensity ModelDensity::sample(int cells) const {
    if (cells < 2) throw std::invalid_argument("ModelDensity::sample: need >= 2 cells");
    std::vector<double> s(cells + 1);
    for (int i = 0; i <= cells; ++i) {
        double xi = D * i / cells;
        s[i] = model_density(params, D, xi);
    }
    return GridDensity(0.0, D, std::move(s));
}

EnvelopeBounds log_derivative_envelope(const CurvatureParams& p, double D, double x) {
    if (!(D > 0.0) || D > bonnet_myers_diameter(p))
        throw std::domain_error("log_derivative_envelope: need 0 < D <= D_{K,N}");
    if (!(x > 0.0 && x < D))
        throw std::domain_error("log_derivative_envelope: x outside (0, D)");
    double kap = p.kappa();
    double nm1 = p.N - 1.0;
    return {-nm1 * s_kappa_log_derivative(kap, D - x),
            nm1 * s_kappa_log_derivative(kap, x)};
}

namespace {

// Log of s_kappa, -inf at the endpoints where s vanishes.
double log_s(double kappa, double theta) {
    double v = s_kappa(kappa, theta);
    return v > 0.0 ? std::log(v) : -kInf;
}

}  // namespace

GridDensity envelope_mixed_density(const CurvatureParams& p, double D,
                                   const std::function<double(double)>& theta, int n) {
    if (!(D > 0.0) || D > bonnet_myers_diameter(p))
        throw std::domain_error("envelope_mixed_density: need 0 < D <= D_{K,N}");
    if (n < 64) throw std::invalid_argument("envelope_mixed_density: need n >= 64");
    double kap = p.kappa();
    double nm1 = p.N - 1.0;

    std::vector<double> logs_right(n + 1), logs_left(n + 1);
    for (int i = 0; i <= n; ++i) {
        double xi = D * i / n;
        logs_right[i] = log_s(kap, xi);      // antiderivative/(N-1) of upper
        logs_left[i] = log_s(kap, D - xi);   // antiderivative/(N-1) of lower
    }

    // Per-cell increments of l = log h, kept inside the envelope band
    // [L_i, U_i] so the two-sided ratio condition telescopes exactly over
    // every node pair.  The +-4 clamp realizes |l'| <= 4n/D and yields to the
    // band whenever they conflict (outside the band membership is lost).
    std::vector<double> ell(n + 1, 0.0);
    int mid = n / 2;
    std::vector<double> inc(n);
    for (int i = 0; i < n; ++i) {
        double U = nm1 * (logs_right[i + 1] - logs_right[i]);
        double L = nm1 * (logs_left[i + 1] - logs_left[i]);
        double xm = D * (i + 0.5) / n;
        double t = theta(xm);
        if (!(t >= 0.0 && t <= 1.0))
            throw std::invalid_argument("envelope_mixed_density: mixing field outside [0,1]");
        double raw;
        if (std::isinf(U) && std::isinf(L)) raw = (t >= 0.5) ? U : L;
        else if (std::isinf(U)) raw = (t > 0.0) ? U : L;
        else if (std::isinf(L)) raw = (t < 1.0) ? L : U;
        else raw = t * U + (1.0 - t) * L;
        if (L > U) std::swap(L, U);  // ulp-level inversion of the exact L <= U
        double d = std::clamp(raw, -4.0, 4.0);
        inc[i] = std::clamp(d, L, U);
    }
    for (int i = mid; i < n; ++i) ell[i + 1] = ell[i] + inc[i];
    for (int i = mid; i > 0; --i) ell[i - 1] = ell[i] - inc[i - 1];

    std::vector<double> h(n + 1);
    for (int i = 0; i <= n; ++i) h[i] = std::exp(ell[i]);
    return GridDensity(0.0, D, std::move(h));
}

std::function<double(double)> random_mixing_field(std::uint64_t seed, double D) {
    std::mt19937_64 rng(seed);
    constexpr int kHarmonics = 4;
    std::vector<double> a(kHarmonics), b(kHarmonics);
    for (int k = 0; k < kHarmonics; ++k) {
        a[k] = 3.0 * (2.0 * u64_to_unit(rng()) - 1.0) / (k + 1);
        b[k] = 3.0 * (2.0 * u64_to_unit(rng()) - 1.0) / (k + 1);
    }
    return [a, b, D](double x) {
        double u = x / D;
        double g = 0.0;
        for (int k = 0; k < kHarmonics; ++k) {
            double w = 2.0 * kPi * (k + 1) * u;
            g += a[k] * std::cos(w) + b[k] * std::sin(w);
        }
        return 1.0 / (1.0 + std::exp(-g));
    };
}

GridDensity random_mcp_density(const CurvatureParams& p, double D, std::uint64_t seed, int n) {
    return envelope_mixed_density(p, D, random_mixing_field(seed, D), n);
}

ValidationReport validate_mcp_density(const GridDensity& h, const CurvatureParams& p) {
    const int n = h.n;
    const double D = h.diameter();
    constexpr double kSlack = 1.0 + 1e-9;

    for (int i = 1; i < n; ++i)
        if (!(h.samples[i] > 0.0))
            throw std::invalid_argument("validate_mcp_density: interior zero sample");

    ValidationReport rep;
    double dkn = bonnet_myers_diameter(p);
    rep.diameter_ok = D <= dkn * (1.0 + 1e-12);
    if (!rep.diameter_ok) {
        rep.pass = false;
        rep.worst_ratio = kInf;
        rep.x0 = h.a;
        rep.x1 = h.b;
        return rep;
    }

    double kap = p.kappa();
    double nm1 = p.N - 1.0;
    // Precompute logs once; pairs then cost O(1).  log(0) = -inf encodes the
    // vanishing endpoints and the guards below resolve the inf arithmetic.
    std::vector<double> lh(n + 1), ls(n + 1), lsd(n + 1);
    for (int i = 0; i <= n; ++i) {
        double xi = D * static_cast<double>(i) / n;
        lh[i] = h.samples[i] > 0.0 ? std::log(h.samples[i]) : -kInf;
        double sv = s_kappa(kap, std::min(xi, D));
        double sdv = s_kappa(kap, std::max(D - xi, 0.0));
        ls[i] = sv > 0.0 ? std::log(sv) : -kInf;
        lsd[i] = sdv > 0.0 ? std::log(sdv) : -kInf;
    }

    rep.worst_ratio = 0.0;
    rep.pass = true;
    int wi = 0, wj = 0;
    auto check_pair = [&](int i, int j) {
        // upper: h_j/h_i <= (s_j/s_i)^{N-1}; lower: (sd_j/sd_i)^{N-1} <= h_j/h_i
        double up, lo;
        if (ls[i] == -kInf) up = (lh[i] == -kInf && ls[j] == -kInf) ? 1.0 : 0.0;
        else if (lh[i] == -kInf) up = kInf;
        else up = std::exp(lh[j] - lh[i] - nm1 * (ls[j] - ls[i]));

        if (lh[j] == -kInf) lo = (lsd[j] == -kInf) ? 1.0 : kInf;
        else if (lsd[j] == -kInf) lo = 0.0;
        else lo = std::exp(nm1 * (lsd[j] - lsd[i]) + lh[i] - lh[j]);

        double worst = std::max(up, lo);
        if (worst > rep.worst_ratio) {
            rep.worst_ratio = worst;
            wi = i;
            wj = j;
        }
    };

    if (n <= 256) {
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) check_pair(i, j);
    } else {
        // 257 strata per axis plus every adjacent pair (local violations are
        // the common failure mode and cost only O(n)).
        std::vector<int> strata;
        strata.reserve(257);
        for (int k = 0; k <= 256; ++k) {
            int idx = static_cast<int>(static_cast<long long>(k) * n / 256);
            if (strata.empty() || idx != strata.back()) strata.push_back(idx);
        }
        for (size_t ii = 0; ii < strata.size(); ++ii)
            for (size_t jj = ii + 1; jj < strata.size(); ++jj)
                check_pair(strata[ii], strata[jj]);
        for (int i = 0; i < n; ++i) check_pair(i, i + 1);
    }

    rep.x0 = h.x(wi);
    rep.x1 = h.x(wj);
    rep.pass = rep.worst_ratio <= kSlack;
    return rep;
}

}  // namespace mcpgap
