#include "doctest.h"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mcpgap/geometry.hpp"
#include "mcpgap/grid_density.hpp"
#include "mcpgap/spectral.hpp"
#include "mcpgap/util.hpp"

using namespace mcpgap;

namespace {
constexpr double kPi = std::numbers::pi_v<double>;

GridDensity unit_density(int n) { return GridDensity(0.0, 1.0, std::vector<double>(n + 1, 1.0)); }
}  // namespace

TEST_CASE("constant density reproduces the classical eigenvalues") {
    GridDensity h = unit_density(512);
    CHECK(spectral_gap(h, kNeumannNeumann).eigenvalue ==
          doctest::Approx(kPi * kPi).epsilon(1e-8));
    CHECK(spectral_gap(h, kDirichletNeumann).eigenvalue ==
          doctest::Approx(kPi * kPi / 4.0).epsilon(1e-8));
    CHECK(spectral_gap(h, {BC::Dirichlet, BC::Dirichlet}).eigenvalue ==
          doctest::Approx(kPi * kPi).epsilon(1e-8));
    CHECK(spectral_gap(h, {BC::Neumann, BC::Dirichlet}).eigenvalue ==
          doctest::Approx(kPi * kPi / 4.0).epsilon(1e-8));

    SpectralResult r = spectral_gap(h, kNeumannNeumann);
    CHECK(r.n == 512);
    CHECK(r.error_estimate < 1e-4);  // raw-pair estimate, not the extrapolated error
    CHECK(std::fabs(r.lambda_fine - r.eigenvalue) <= 4.0 * r.error_estimate);
    REQUIRE(r.zero_location.has_value());
    CHECK(*r.zero_location == doctest::Approx(0.5).epsilon(1e-6));
    CHECK_FALSE(spectral_gap(h, kDirichletNeumann).zero_location.has_value());
}

TEST_CASE("sine weight on [0, pi] has gap 2") {
    std::vector<double> s(2049);
    for (int i = 0; i <= 2048; ++i) s[i] = std::sin(kPi * i / 2048.0);
    GridDensity h(0.0, kPi, std::move(s));
    SpectralResult r = spectral_gap(h, kNeumannNeumann);
    CHECK(r.eigenvalue == doctest::Approx(2.0).epsilon(5e-3));
    CHECK(*r.zero_location == doctest::Approx(kPi / 2.0).epsilon(1e-2));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(spectral_gap(unit_density(511), kNeumannNeumann), std::invalid_argument);
    CHECK_THROWS_AS(spectral_gap(unit_density(2), kNeumannNeumann), std::invalid_argument);
}

TEST_CASE("Rayleigh quotient against known trial functions") {
    GridDensity h = unit_density(256);
    std::vector<double> cosx(257), ramp(257), flat(257, 1.0);
    for (int i = 0; i <= 256; ++i) {
        double x = i / 256.0;
        cosx[i] = std::cos(kPi * x);
        ramp[i] = x;
    }
    CHECK(rayleigh_quotient(h, cosx) == doctest::Approx(kPi * kPi).epsilon(1e-3));
    CHECK(rayleigh_quotient(h, ramp) == doctest::Approx(12.0).epsilon(5e-3));

    SpectralResult r = spectral_gap(h, kNeumannNeumann);
    CHECK(rayleigh_quotient(h, r.eigenfunction) ==
          doctest::Approx(r.lambda_fine).epsilon(1e-8));
    // any trial function bounds the discrete minimum from above
    CHECK(rayleigh_quotient(h, cosx) >= r.lambda_fine * (1.0 - 1e-12));
    CHECK(rayleigh_quotient(h, ramp) >= r.lambda_fine);

    CHECK_THROWS_AS(rayleigh_quotient(h, flat), std::invalid_argument);
    CHECK_THROWS_AS(rayleigh_quotient(h, std::vector<double>(19, 0.5)),
                    std::invalid_argument);
}

TEST_CASE("eigenfunction zero of symmetric weights sits at the midpoint") {
    CurvatureParams p(0.0, 3.0);
    GridDensity h = ModelDensity(p, 1.0).sample(512);
    SpectralResult r = spectral_gap(h, kNeumannNeumann);
    CHECK(eigenfunction_zero(r) == doctest::Approx(0.5).epsilon(2.0 / 512));

    GridDensity g = random_mcp_density(p, 1.0, 42, 512);
    SpectralResult rr = spectral_gap(g, kNeumannNeumann);
    double z = eigenfunction_zero(rr);
    CHECK(z > 0.0);
    CHECK(z < 1.0);

    SpectralResult dn = spectral_gap(h, kDirichletNeumann);
    CHECK_THROWS_AS(eigenfunction_zero(dn), SolverError);
}

TEST_CASE("oscillation functional") {
    GridDensity h = unit_density(64);
    std::vector<double> lin(65);
    for (int i = 0; i <= 64; ++i) lin[i] = 1.0 + i / 64.0;
    GridDensity g(0.0, 1.0, std::vector<double>(lin));

    CHECK(osc(h, h) == 1.0);
    CHECK(osc(h, g) == doctest::Approx(2.0));
    CHECK(osc(g, h) == doctest::Approx(2.0));

    // scale factors cancel
    std::vector<double> scaled(65);
    for (int i = 0; i <= 64; ++i) scaled[i] = 7.0 * lin[i];
    CHECK(osc(g, GridDensity(0.0, 1.0, std::move(scaled))) == doctest::Approx(1.0));

    CHECK_THROWS_AS(osc(h, unit_density(32)), std::invalid_argument);
}

TEST_CASE("eigenvalue scaling covariance under curvature rescaling") {
    // h_{K a^2, N, D/a} is a rescaling of h_{K, N, D}; the discrete pencils
    // are exactly similar, so eigenvalues scale by a^2 to rounding accuracy.
    SpectralResult base =
        spectral_gap(ModelDensity(CurvatureParams(-1.0, 3.0), 2.0).sample(512), kNeumannNeumann);
    SpectralResult half =
        spectral_gap(ModelDensity(CurvatureParams(-4.0, 3.0), 1.0).sample(512), kNeumannNeumann);
    CHECK(half.lambda_fine == doctest::Approx(4.0 * base.lambda_fine).epsilon(1e-10));
    CHECK(half.eigenvalue == doctest::Approx(4.0 * base.eigenvalue).epsilon(1e-9));
}

TEST_CASE("Dirichlet-side domain monotonicity on nested slices") {
    GridDensity h = ModelDensity(CurvatureParams(-1.0, 3.0), 2.0).sample(1024);
    SpectralResult big = spectral_gap(h.slice(512, 1024), kDirichletNeumann);
    SpectralResult small = spectral_gap(h.slice(768, 1024), kDirichletNeumann);
    CHECK(small.eigenvalue >
          big.eigenvalue - (small.error_estimate + big.error_estimate));
}

TEST_CASE("pointwise comparable weights pinch the gap by their oscillation") {
    CurvatureParams p(0.0, 3.0);
    GridDensity model = ModelDensity(p, 1.0).sample(512);
    for (std::uint64_t seed : {3u, 11u, 19u}) {
        GridDensity g = random_mcp_density(p, 1.0, seed, 512);
        double om = osc(model, g);
        double lm = spectral_gap(model, kNeumannNeumann).lambda_fine;
        double lg = spectral_gap(g, kNeumannNeumann).lambda_fine;
        CHECK(lg <= om * lm * (1.0 + 1e-12));
        CHECK(lg >= lm / om * (1.0 - 1e-12));
    }
}

TEST_CASE("first nontrivial Neumann eigenfunction of the model is monotone") {
    for (double K : {-1.0, 0.0, 1.0}) {
        CurvatureParams p(K, 4.0);
        double D = K > 0.0 ? 0.9 * bonnet_myers_diameter(p) : 1.5;
        SpectralResult r = spectral_gap(ModelDensity(p, D).sample(512), kNeumannNeumann);
        double sign = r.eigenfunction.back() > r.eigenfunction.front() ? 1.0 : -1.0;
        double scale = 0.0;
        for (double v : r.eigenfunction) scale = std::max(scale, std::fabs(v));
        for (std::size_t i = 0; i + 1 < r.eigenfunction.size(); ++i) {
            CHECK(sign * (r.eigenfunction[i + 1] - r.eigenfunction[i]) >= -1e-9 * scale);
        }
    }
}

TEST_CASE("comparison harness: step field reproduces the model, random fields hold") {
    CurvatureParams p(0.0, 3.0);
    OdeComparisonReport id = check_ode_comparison(
        p, 1.0, [](double x) { return x > 0.5 ? 1.0 : 0.0; }, 256);
    CHECK(id.holds);
    CHECK(id.lambda_perturbed == doctest::Approx(id.lambda_model).epsilon(1e-12));

    CurvatureParams q(-1.0, 2.0);
    for (std::uint64_t seed : {5u, 6u, 7u, 8u}) {
        OdeComparisonReport rep =
            check_ode_comparison(q, 2.0, random_mixing_field(seed, 2.0), 256);
        CHECK(rep.holds);
        CHECK(rep.lambda_perturbed >=
              rep.lambda_model - (rep.err_model + rep.err_perturbed));
    }

    std::function<double(double)> half_mix = [](double) { return 0.5; };
    CHECK_THROWS_AS(check_ode_comparison(p, 1.0, half_mix, 255), std::invalid_argument);
}

TEST_CASE("Richardson error estimates contract with refinement") {
    GridDensity h1 = ModelDensity(CurvatureParams(-1.0, 3.0), 2.0).sample(128);
    GridDensity h2 = ModelDensity(CurvatureParams(-1.0, 3.0), 2.0).sample(256);
    GridDensity h3 = ModelDensity(CurvatureParams(-1.0, 3.0), 2.0).sample(512);
    double e1 = spectral_gap(h1, kNeumannNeumann).error_estimate;
    double e2 = spectral_gap(h2, kNeumannNeumann).error_estimate;
    double e3 = spectral_gap(h3, kNeumannNeumann).error_estimate;
    CHECK(e2 < e1);
    CHECK(e3 < e2);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
    CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.2));
}
