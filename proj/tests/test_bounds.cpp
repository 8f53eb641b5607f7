#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <vector>

#include "mcpgap/bounds.hpp"
#include "mcpgap/geometry.hpp"
#include "mcpgap/grid_density.hpp"
#include "mcpgap/sharp_constant.hpp"
#include "mcpgap/spectral.hpp"

using namespace mcpgap;

namespace {
constexpr double kPi = std::numbers::pi_v<double>;

GridDensity power_density(double a, double b, double p, int n) {
    std::vector<double> s(n + 1);
    for (int i = 0; i <= n; ++i) {
        double x = a + (b - a) * i / n;
        s[i] = std::pow(x, p);
    }
    return GridDensity(a, b, std::move(s));
}
}  // namespace

TEST_CASE("Muckenhoupt constant: closed-form references") {
    // h == 1 on [0,1]: sup_x x(1-x) = 1/4, attained at a grid node
    GridDensity ones(0.0, 1.0, std::vector<double>(257, 1.0));
    CHECK(muckenhoupt_A(ones) == doctest::Approx(0.25).epsilon(1e-12));
    BoundsPair b = muckenhoupt_bounds(ones);
    CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.upper == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(b.provenance == "muckenhoupt");
    CHECK(kPi * kPi / 4.0 >= b.lower);  // the actual Dirichlet-Neumann gap
    CHECK(kPi * kPi / 4.0 <= b.upper);

    // h = x^3 on [1/2, 1]: sup of ((4 - x^-2)/2)((1 - x^4)/4)
    CHECK(muckenhoupt_A(power_density(0.5, 1.0, 3.0, 4096)) ==
          doctest::Approx(0.190254840543988582).epsilon(1e-6));

    // h = 1 + x on [0,1] is piecewise linear, so the cell integrals are exact
    // and only the sup restriction to the refined lattice remains
    GridDensity lin(0.0, 1.0, [] {
        std::vector<double> s(4097);
        for (int i = 0; i <= 4096; ++i) s[i] = 1.0 + i / 4096.0;
        return s;
    }());
    CHECK(muckenhoupt_A(lin) == doctest::Approx(0.35489253042424103).epsilon(1e-7));
}

TEST_CASE("Muckenhoupt constant: divergent mass near a Dirichlet endpoint") {
    // h = x^4 vanishes too fast at the left end: int 1/h diverges
    GridDensity h = power_density(0.0, 1.0, 4.0, 1024);
    CHECK(std::isinf(muckenhoupt_A(h)));
    BoundsPair b = muckenhoupt_bounds(h);
    CHECK(b.lower == 0.0);
    CHECK(b.upper == 0.0);
    CHECK(b.provenance == "muckenhoupt-divergent");
}

TEST_CASE("Muckenhoupt bracket captures the Dirichlet-Neumann gap (half intervals)") {
    struct Setting {
        double K, N, D;
    };
    const Setting settings[] = {
        {0.0, 3.0, 1.0},
        {-1.0, 2.0, 2.0},
        {1.0, 5.0, 0.9 * bonnet_myers_diameter(CurvatureParams(1.0, 5.0))},
    };
    for (const Setting& s : settings) {
        CurvatureParams p(s.K, s.N);
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            GridDensity full = random_mcp_density(p, s.D, 90000 + seed, 512);
            GridDensity h = full.slice(full.n / 2, full.n);
            BoundsPair br = muckenhoupt_bounds(h);
            SpectralResult dn = spectral_gap(h, kDirichletNeumann);
            double tol = dn.error_estimate + 1e-6 * dn.eigenvalue;
            CHECK(dn.eigenvalue >= br.lower - tol);
            CHECK(dn.eigenvalue <= br.upper + tol);
        }
    }
}

TEST_CASE("closed-form bracket: flat-case values and small-curvature continuity") {
    BoundsPair b2 = closed_form_bounds(CurvatureParams(0.0, 2.0), 1.0);
    CHECK(b2.lower == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(b2.upper == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-14));

    BoundsPair b5 = closed_form_bounds(CurvatureParams(0.0, 5.0), 3.0);  // D-independent
    CHECK(b5.lower == doctest::Approx(0.390625).epsilon(1e-14));
    CHECK(b5.upper == doctest::Approx(15.421256876702124).epsilon(1e-12));

    for (double N : {2.0, 4.0}) {
        BoundsPair flat = closed_form_bounds(CurvatureParams(0.0, N), 1.0);
        BoundsPair near = closed_form_bounds(CurvatureParams(-1e-10, N), 1.0);
        CHECK(near.lower == doctest::Approx(flat.lower).epsilon(1e-6));
        CHECK(near.upper == doctest::Approx(flat.upper).epsilon(1e-6));
    }
}

TEST_CASE("closed-form bracket contains the scaled model constant") {
    for (double K : {-1.0, 0.0, 1.0}) {
        for (double N : {1.5, 2.0, 4.0, 10.0, 20.0}) {
            CurvatureParams p(K, N);
            for (double D : {0.5, 1.0, 2.0}) {
                if (K > 0.0 && D > 0.99 * bonnet_myers_diameter(p)) continue;
                CAPTURE(K);
                CAPTURE(N);
                CAPTURE(D);
                BoundsPair br = closed_form_bounds(p, D);
                ModelPoincareResult m = model_poincare(p, D, 256);
                double scaled = D * D * m.value;
                double tol = D * D * (4.0 * m.error + 1e-9 * m.value);
                CHECK(scaled >= br.lower - tol);
                CHECK(scaled <= br.upper + tol);
            }
        }
    }
}

TEST_CASE("full-diameter eigenvalue") {
    CHECK(sphere_eigenvalue(CurvatureParams(1.0, 2.0)) == doctest::Approx(2.0));
    CHECK(sphere_eigenvalue(CurvatureParams(2.0, 3.0)) == doctest::Approx(3.0));
    CHECK(sphere_eigenvalue(CurvatureParams(1.0, 10.0)) == doctest::Approx(10.0 / 9.0));
    CHECK_THROWS_AS(sphere_eigenvalue(CurvatureParams(0.0, 2.0)), std::domain_error);
    CHECK_THROWS_AS(sphere_eigenvalue(CurvatureParams(-1.0, 2.0)), std::domain_error);
}

TEST_CASE("curvature-dimension-diameter lower bound") {
    CHECK(intro_lower_bound(CurvatureParams(-1.0, 2.0), 1.0) ==
          doctest::Approx(0.44340944198503695).epsilon(1e-13));
    // continuity across K = 0
    CHECK(intro_lower_bound(CurvatureParams(-1e-10, 3.0), 1.0) ==
          doctest::Approx(intro_lower_bound(CurvatureParams(0.0, 3.0), 1.0)).epsilon(1e-6));

    // never exceeds the computed model constant
    for (double K : {-1.0, 0.0}) {
        for (double N : {2.0, 5.0}) {
            for (double D : {1.0, 2.0}) {
                CurvatureParams p(K, N);
                ModelPoincareResult m = model_poincare(p, D, 256);
                CHECK(intro_lower_bound(p, D) <= m.value + 4.0 * m.error);
            }
        }
    }
    CHECK_THROWS_AS(intro_lower_bound(CurvatureParams(1.0, 2.0), 4.0), std::domain_error);
}

TEST_CASE("literature comparison constants") {
    CHECK(sturm_constant(CurvatureParams(0.0, 2.0), 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sturm_constant(CurvatureParams(-1.0, 3.0), 1.0) ==
          doctest::Approx(0.027818700151862396).epsilon(1e-13));
    CHECK(sturm_constant(CurvatureParams(-1e-12, 3.0), 1.0) ==
          doctest::Approx(sturm_constant(CurvatureParams(0.0, 3.0), 1.0)).epsilon(1e-9));

    CHECK(von_renesse_constant(CurvatureParams(0.0, 2.0), 0.5) ==
          doctest::Approx(0.25).epsilon(1e-14));
    CHECK(von_renesse_constant(CurvatureParams(1.0, 2.0), 0.5) ==
          doctest::Approx(0.25).epsilon(1e-14));  // K >= 0 branch ignores K
    CHECK(von_renesse_constant(CurvatureParams(-1.0, 3.0), 1.0) ==
          doctest::Approx(0.039330642102178354).epsilon(1e-13));

    CHECK_THROWS_AS(sturm_constant(CurvatureParams(0.0, 2.0), 0.0), std::domain_error);
    CHECK_THROWS_AS(von_renesse_constant(CurvatureParams(1.0, 2.0), 1.6), std::domain_error);
}

TEST_CASE("class nesting orders the model constants") {
    // weaker curvature or higher dimension admits more densities, so the
    // class constant can only drop
    auto lam = [](double K, double N) {
        return model_poincare(CurvatureParams(K, N), 1.0, 256);
    };
    ModelPoincareResult flat3 = lam(0.0, 3.0);
    ModelPoincareResult hyp3 = lam(-1.0, 3.0);
    ModelPoincareResult flat5 = lam(0.0, 5.0);
    ModelPoincareResult pos3 = lam(1.0, 3.0);
    double slack = 4.0 * (flat3.error + hyp3.error + flat5.error + pos3.error);
    CHECK(pos3.value >= flat3.value - slack);
    CHECK(flat3.value >= hyp3.value - slack);
    CHECK(flat3.value >= flat5.value - slack);
}
