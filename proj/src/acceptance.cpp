#include "mcpgap/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "mcpgap/bounds.hpp"
#include "mcpgap/geometry.hpp"
#include "mcpgap/sharp_constant.hpp"
#include "mcpgap/spectral.hpp"
#include "mcpgap/util.hpp"

namespace mcpgap {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;
constexpr int kCampaignN = 512;  // resolution for the random-density campaigns

GridDensity constant_density(int n) {
    return GridDensity(0.0, 1.0, std::vector<double>(static_cast<std::size_t>(n) + 1, 1.0));
}

std::uint64_t sub_seed(std::uint64_t base, std::uint64_t k) {
    return base * 1000003ull + k;
}

struct Violation {
    std::atomic<int> count{0};
    std::atomic<int> first{-1};
    void record(int k) {
        count.fetch_add(1);
        int expect = -1;
        first.compare_exchange_strong(expect, k);
    }
};

// 1. h == 1 calibration: Neumann-Neumann gap pi^2, Dirichlet-Neumann pi^2/4,
//    both to 1e-6 relative after Richardson, in under a second.
CriterionResult crit_calibration(const AcceptanceConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    GridDensity h = constant_density(2 * cfg.n);
    SpectralResult nn = spectral_gap(h, kNeumannNeumann);
    SpectralResult dn = spectral_gap(h, kDirichletNeumann);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double rel_nn = std::fabs(nn.eigenvalue - kPi * kPi) / (kPi * kPi);
    double rel_dn = std::fabs(dn.eigenvalue - kPi * kPi / 4.0) / (kPi * kPi / 4.0);
    bool runtime_ok = secs < 1.0;
    CriterionResult r{1, "uniform density calibration", false, ""};
    r.pass = rel_nn <= 1e-6 && rel_dn <= 1e-6 && runtime_ok;
    r.detail = "nn_rel=" + fmt_g12(rel_nn) + " dn_rel=" + fmt_g12(rel_dn) +
               (runtime_ok ? " runtime_ok=yes" : " runtime_ok=no");
    return r;
}

// 2. Positive-curvature endpoint: near the diameter bound the solver lands on
//    the sphere gap N K/(N-1) within 2e-2; at the bound the closed form is
//    returned exactly.
CriterionResult crit_sphere(const AcceptanceConfig& cfg) {
    CriterionResult r{2, "sphere endpoint value", true, ""};
    double worst = 0.0;
    for (double N : {2.0, 3.0, 5.0, 10.0}) {
        CurvatureParams p(1.0, N);
        double dkn = bonnet_myers_diameter(p);
        double want = sphere_eigenvalue(p);
        ModelPoincareResult near_end = model_poincare(p, 0.999 * dkn, cfg.n);
        double rel = std::fabs(near_end.value - want) / want;
        worst = std::max(worst, rel);
        if (rel > 2e-2) r.pass = false;
        ModelPoincareResult at_end = model_poincare(p, dkn, cfg.n);
        if (at_end.value != want || at_end.method != "sphere-closed-form") r.pass = false;
    }
    r.detail = "worst_rel=" + fmt_g12(worst);
    return r;
}

// 3. Flat-curvature sandwich: N^2 2^{-(N-1)}/4 <= lambda <= pi^2 N^2 2^{-(N-1)}
//    at D = 1, with solver error folded in.
CriterionResult crit_sandwich(const AcceptanceConfig& cfg) {
    CriterionResult r{3, "flat-curvature sandwich", true, ""};
    double worst_margin = 1e300;
    for (double N : {1.5, 2.0, 4.0, 10.0, 20.0}) {
        double base = N * N * std::pow(2.0, -(N - 1.0));
        ModelPoincareResult m = model_poincare(CurvatureParams(0.0, N), 1.0, cfg.n);
        double lo = base / 4.0, hi = kPi * kPi * base;
        if (m.value + m.error < lo || m.value - m.error > hi) r.pass = false;
        worst_margin = std::min({worst_margin, m.value + m.error - lo, hi - m.value + m.error});
    }
    r.detail = "worst_margin=" + fmt_g12(worst_margin);
    return r;
}

// 4. Scaling laws: D^2 lambda constant at K = 0 across two decades of D; the
//    scaled scan column is non-increasing for K = -1 and non-decreasing for
//    K = 1 within per-row error.
CriterionResult crit_scaling(const AcceptanceConfig& cfg) {
    CriterionResult r{4, "scaling and profile monotonicity", true, ""};
    std::vector<double> scaled;
    for (double D : {0.1, 1.0, 10.0})
        scaled.push_back(D * D * model_poincare(CurvatureParams(0.0, 3.0), D, cfg.n).value);
    double mid = scaled[1];
    double spread =
        (*std::max_element(scaled.begin(), scaled.end()) -
         *std::min_element(scaled.begin(), scaled.end())) / mid;
    if (!(spread <= 1e-6)) r.pass = false;

    ScanProfile neg = scan_profile(CurvatureParams(-1.0, 3.0), 4.0, 32, cfg.n);
    bool neg_ok = neg.scaled_verdict == Monotonicity::NonIncreasing ||
                  neg.scaled_verdict == Monotonicity::StrictlyDecreasing ||
                  neg.scaled_verdict == Monotonicity::Constant;
    CurvatureParams pos(1.0, 3.0);
    ScanProfile posn = scan_profile(pos, 0.995 * bonnet_myers_diameter(pos), 32, cfg.n);
    bool pos_ok = posn.scaled_verdict == Monotonicity::NonDecreasing ||
                  posn.scaled_verdict == Monotonicity::StrictlyIncreasing ||
                  posn.scaled_verdict == Monotonicity::Constant;
    if (!neg_ok || !pos_ok) r.pass = false;
    r.detail = "spread=" + fmt_g12(spread) + " negative=[" + to_string(neg.scaled_verdict) +
               "] positive=[" + to_string(posn.scaled_verdict) + "]";
    return r;
}

// 5. For K = 1, N = 13 the gap at half the diameter bound drops strictly below
//    the endpoint value 13/12, by more than the combined solver error.
CriterionResult crit_nonmonotone(const AcceptanceConfig& cfg) {
    CurvatureParams p(1.0, 13.0);
    double dkn = bonnet_myers_diameter(p);
    ModelPoincareResult half = model_poincare(p, dkn / 2.0, cfg.n);
    ModelPoincareResult full = model_poincare(p, dkn, cfg.n);
    double margin = full.value - half.value;
    CriterionResult r{5, "high-dimension non-monotonicity", false, ""};
    r.pass = full.value == sphere_eigenvalue(p) && margin > half.error + full.error;
    r.detail = "margin=" + fmt_g12(margin) + " err=" + fmt_g12(half.error + full.error);
    return r;
}

struct Setting {
    CurvatureParams p;
    double D;
};

std::vector<Setting> campaign_settings() {
    CurvatureParams sphere(1.0, 5.0);
    return {{CurvatureParams(0.0, 3.0), 1.0},
            {CurvatureParams(-1.0, 2.0), 2.0},
            {sphere, 0.9 * bonnet_myers_diameter(sphere)}};
}

// 6. Muckenhoupt bracketing 1/(4A) <= Lambda^{D,N} <= 1/A on 100 seeded random
//    class densities across three parameter settings.  The Dirichlet-Neumann
//    problem lives on the right half [D/2, D], where the Dirichlet end carries
//    a healthy weight (class densities may degenerate at the outer endpoints,
//    which would make a full-interval Dirichlet condition invisible: A
//    diverges and the gap closes).
CriterionResult crit_muckenhoupt(const AcceptanceConfig& cfg) {
    auto settings = campaign_settings();
    constexpr int kTotal = 100;
    Violation bad;
    parallel_for(kTotal, [&](std::size_t k) {
        const Setting& s = settings[k % settings.size()];
        GridDensity full = random_mcp_density(s.p, s.D, sub_seed(cfg.seed, k), kCampaignN);
        GridDensity h = full.slice(full.n / 2, full.n);
        BoundsPair mb = muckenhoupt_bounds(h);
        SpectralResult dn = spectral_gap(h, kDirichletNeumann);
        double tol = dn.error_estimate + 1e-6 * dn.eigenvalue;
        if (dn.eigenvalue < mb.lower - tol || dn.eigenvalue > mb.upper + tol)
            bad.record(static_cast<int>(k));
    });
    CriterionResult r{6, "muckenhoupt bracketing", bad.count.load() == 0, ""};
    r.detail = "violations=" + std::to_string(bad.count.load()) + "/" + std::to_string(kTotal);
    if (bad.first.load() >= 0) r.detail += " first_case=" + std::to_string(bad.first.load());
    return r;
}

// 7. Sharpness: 200 seeded random class densities with diameter D never beat
//    the model value beyond combined error.
CriterionResult crit_sharpness(const AcceptanceConfig& cfg) {
    auto settings = campaign_settings();
    std::vector<ModelPoincareResult> model;
    for (const auto& s : settings) model.push_back(model_poincare(s.p, s.D, cfg.n));
    constexpr int kTotal = 200;
    Violation bad;
    parallel_for(kTotal, [&](std::size_t k) {
        std::size_t j = k % settings.size();
        const Setting& s = settings[j];
        GridDensity h = random_mcp_density(s.p, s.D, sub_seed(cfg.seed, 1000 + k), kCampaignN);
        SpectralResult nn = spectral_gap(h, kNeumannNeumann);
        double floor = model[j].value - 1e-6 * model[j].value -
                       (nn.error_estimate + model[j].error);
        if (nn.eigenvalue < floor) bad.record(static_cast<int>(k));
    });
    CriterionResult r{7, "model sharpness under random densities", bad.count.load() == 0, ""};
    r.detail = "violations=" + std::to_string(bad.count.load()) + "/" + std::to_string(kTotal);
    if (bad.first.load() >= 0) r.detail += " first_case=" + std::to_string(bad.first.load());
    return r;
}

// 8. Comparison principle: 50 seeded admissible perturbations of the flat
//    model never lower the gap; the identity perturbation reproduces it to
//    1e-8 relative.
CriterionResult crit_comparison(const AcceptanceConfig& cfg) {
    CurvatureParams p(0.0, 3.0);
    constexpr int kTotal = 50;
    Violation bad;
    parallel_for(kTotal, [&](std::size_t k) {
        auto theta = random_mixing_field(sub_seed(cfg.seed, 2000 + k), 1.0);
        OdeComparisonReport rep = check_ode_comparison(p, 1.0, theta, kCampaignN);
        if (!rep.holds) bad.record(static_cast<int>(k));
    });
    auto step = [](double x) { return x > 0.5 ? 1.0 : 0.0; };
    OdeComparisonReport id = check_ode_comparison(p, 1.0, step, kCampaignN);
    double id_rel = std::fabs(id.lambda_perturbed - id.lambda_model) / id.lambda_model;
    CriterionResult r{8, "comparison principle under perturbations", false, ""};
    r.pass = bad.count.load() == 0 && id_rel <= 1e-8;
    r.detail = "violations=" + std::to_string(bad.count.load()) + "/" + std::to_string(kTotal) +
               " identity_rel=" + fmt_g12(id_rel);
    return r;
}

// 9. Two-sided positive-curvature control against the flat model:
//    lambda_flat <= lambda_K <= lambda_flat * (2 sin(cD/2)/sin(cD))^{N-1}.
CriterionResult crit_two_sided(const AcceptanceConfig& cfg) {
    CriterionResult r{9, "positive-curvature two-sided control", true, ""};
    double worst = 1e300;
    for (double N : {2.0, 5.0}) {
        CurvatureParams pk(1.0, N);
        double dkn = bonnet_myers_diameter(pk);
        for (double f : {0.3, 0.6, 0.9}) {
            double D = f * dkn;
            ModelPoincareResult flat = model_poincare(CurvatureParams(0.0, N), D, cfg.n);
            ModelPoincareResult curv = model_poincare(pk, D, cfg.n);
            double c = std::sqrt(1.0 / (N - 1.0));
            double factor = std::pow(2.0 * std::sin(c * D / 2.0) / std::sin(c * D), N - 1.0);
            double lo_gap = curv.value - (flat.value - (flat.error + curv.error));
            double hi_gap = flat.value * factor + (flat.error * factor + curv.error) - curv.value;
            if (lo_gap < 0.0 || hi_gap < 0.0) r.pass = false;
            worst = std::min({worst, lo_gap, hi_gap});
        }
    }
    r.detail = "worst_margin=" + fmt_g12(worst);
    return r;
}

// 10. Explicit negative-curvature lower bound stays below the solver value.
CriterionResult crit_neg_lower(const AcceptanceConfig& cfg) {
    CriterionResult r{10, "negative-curvature lower bound", true, ""};
    double worst = 1e300;
    for (double N : {2.0, 5.0}) {
        for (double D : {1.0, 3.0}) {
            CurvatureParams p(-1.0, N);
            double lb = intro_lower_bound(p, D);
            ModelPoincareResult m = model_poincare(p, D, cfg.n);
            double gap = m.value + m.error - lb;
            if (gap < 0.0) r.pass = false;
            worst = std::min(worst, gap);
        }
    }
    r.detail = "worst_margin=" + fmt_g12(worst);
    return r;
}

// 11. Raw (pre-extrapolation) eigenvalue error on h == 1 shrinks by >= 3.5x
//     per grid doubling across n = 256 .. 8192.
CriterionResult crit_convergence(const AcceptanceConfig&) {
    std::vector<int> ladder = {256, 512, 1024, 2048, 4096, 8192};
    std::vector<double> errs(ladder.size());
    parallel_for(ladder.size(), [&](std::size_t i) {
        SpectralResult s = spectral_gap(constant_density(ladder[i]), kNeumannNeumann);
        errs[i] = std::fabs(s.lambda_fine - kPi * kPi);
    });
    double min_ratio = 1e300;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i)
        min_ratio = std::min(min_ratio, errs[i] / errs[i + 1]);
    CriterionResult r{11, "convergence order", min_ratio >= 3.5, ""};
    r.detail = "min_ratio=" + fmt_g12(min_ratio);
    return r;
}

CriterionResult guarded(CriterionResult (*fn)(const AcceptanceConfig&),
                        const AcceptanceConfig& cfg, int id, const char* name) {
    try {
        return fn(cfg);
    } catch (const std::exception& e) {
        return {id, name, false, std::string("exception: ") + e.what()};
    }
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg) {
    struct Entry {
        CriterionResult (*fn)(const AcceptanceConfig&);
        const char* name;
    };
    const Entry entries[] = {
        {crit_calibration, "uniform density calibration"},
        {crit_sphere, "sphere endpoint value"},
        {crit_sandwich, "flat-curvature sandwich"},
        {crit_scaling, "scaling and profile monotonicity"},
        {crit_nonmonotone, "high-dimension non-monotonicity"},
        {crit_muckenhoupt, "muckenhoupt bracketing"},
        {crit_sharpness, "model sharpness under random densities"},
        {crit_comparison, "comparison principle under perturbations"},
        {crit_two_sided, "positive-curvature two-sided control"},
        {crit_neg_lower, "negative-curvature lower bound"},
        {crit_convergence, "convergence order"},
    };
    std::vector<CriterionResult> out;
    int id = 1;
    for (const Entry& e : entries) {
        out.push_back(guarded(e.fn, cfg, id, e.name));
        ++id;
    }
    return out;
}

bool run_acceptance_report(const AcceptanceConfig& cfg, std::ostream& out) {
    auto t0 = std::chrono::steady_clock::now();
    out << "acceptance suite: n=" << cfg.n << " seed=" << cfg.seed << "\n";
    std::vector<CriterionResult> rs = run_acceptance(cfg);
    int passed = 0;
    for (const CriterionResult& r : rs) {
        std::ostringstream line;
        line << "[" << (r.id < 10 ? " " : "") << r.id << "] "
             << (r.pass ? "PASS" : "FAIL") << " " << r.name;
        std::string s = line.str();
        s.append(s.size() < 52 ? 52 - s.size() : 1, ' ');
        out << s << r.detail << "\n";
        if (r.pass) ++passed;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool runtime_ok = secs < 120.0;
    bool all = passed == static_cast<int>(rs.size());
    out << "result: " << passed << "/" << rs.size() << " pass, runtime_ok="
        << (runtime_ok ? "yes" : "no") << "\n";
    return all && runtime_ok;
}

}  // namespace mcpgap
