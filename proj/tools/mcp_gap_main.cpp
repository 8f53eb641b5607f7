// Command-line front end: compute | scan | validate | bounds | selftest.
// JSON/CSV on stdout, diagnostics on stderr.
// Exit codes: 0 ok, 1 selftest/validation failure, 2 domain error, 3 solver failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "mcpgap/acceptance.hpp"
#include "mcpgap/bounds.hpp"
#include "mcpgap/geometry.hpp"
#include "mcpgap/sharp_constant.hpp"
#include "mcpgap/spectral.hpp"
#include "mcpgap/util.hpp"

namespace {

using namespace mcpgap;

constexpr double kUnset = -1.0;

struct Options {
    double K = 0.0;
    double N = 0.0;
    double D = kUnset;
    int n = 4096;
    int count = 32;
    std::uint64_t seed = 1;
    std::string output;
    std::string input;
    bool dense_scan = false;
    bool emit_density = false;
    bool eigenfunction = false;
};

std::string jnum(double v) { return fmt_g12_json(v); }

std::string read_input(const std::string& path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin),
                           std::istreambuf_iterator<char>());
    }
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open input file: " + path);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

void require_output(const Options& o, const char* wanted) {
    if (!o.output.empty() && o.output != wanted)
        throw std::invalid_argument(std::string("this command only emits ") + wanted);
}

// D' <= D_{K,N} is structural for K > 0: the class is empty beyond it.
double capped_diameter(const CurvatureParams& p, double D) {
    return std::min(D, bonnet_myers_diameter(p));
}

int cmd_compute(const Options& o) {
    require_output(o, "json");
    CurvatureParams p(o.K, o.N);
    if (!(o.D > 0.0)) throw std::domain_error("compute: need --D > 0");
    double D = capped_diameter(p, o.D);

    SharpConstantResult sharp = sharp_poincare(p, D, o.n, o.dense_scan);
    ModelPoincareResult model = model_poincare(p, D, o.n);
    BoundsPair cf = closed_form_bounds(p, D);
    double r = D / 2.0;  // literature constants quoted for balls of radius r, 2r = D

    std::ostringstream out;
    out << "{\n";
    out << "  \"value\": " << jnum(sharp.value) << ",\n";
    out << "  \"argmin\": " << jnum(sharp.minimizing_D_prime) << ",\n";
    out << "  \"method\": \"" << sharp.method << "\",\n";
    out << "  \"K\": " << jnum(p.K) << ",\n";
    out << "  \"N\": " << jnum(p.N) << ",\n";
    out << "  \"D\": " << jnum(D) << ",\n";
    out << "  \"error\": " << jnum(sharp.error) << ",\n";
    if (o.dense_scan)
        out << "  \"dense_disagreement\": " << (sharp.dense_disagreement ? "true" : "false")
            << ",\n";
    out << "  \"model\": {\"value\": " << jnum(model.value) << ", \"error\": "
        << jnum(model.error) << ", \"method\": \"" << model.method << "\"},\n";
    out << "  \"comparisons\": {\n";
    out << "    \"intro_lower\": " << jnum(intro_lower_bound(p, D)) << ",\n";
    out << "    \"closed_form_lower\": " << jnum(cf.lower / (D * D)) << ",\n";
    out << "    \"closed_form_upper\": " << jnum(cf.upper / (D * D)) << ",\n";
    out << "    \"closed_form_provenance\": \"" << cf.provenance << "\",\n";
    out << "    \"sturm\": " << jnum(sturm_constant(p, r)) << ",\n";
    out << "    \"von_renesse\": " << jnum(von_renesse_constant(p, r)) << "\n";
    out << "  }\n";
    out << "}\n";
    std::cout << out.str();
    return 0;
}

int cmd_scan(const Options& o) {
    require_output(o, "csv");
    CurvatureParams p(o.K, o.N);
    double D = o.D;
    if (D == kUnset) {
        if (!(p.K > 0.0)) throw std::domain_error("scan: need --D for K <= 0");
        D = bonnet_myers_diameter(p);
    }
    D = capped_diameter(p, D);

    ScanProfile prof = scan_profile(p, D, o.count, o.n);
    std::ostringstream out;
    out << "D_prime,lambda,scaled,error\n";
    for (const ScanRow& row : prof.rows)
        out << jnum(row.D_prime) << "," << jnum(row.lambda) << "," << jnum(row.scaled)
            << "," << jnum(row.error) << "\n";
    out << "# lambda: " << to_string(prof.lambda_verdict)
        << "; scaled: " << to_string(prof.scaled_verdict) << "\n";
    std::cout << out.str();
    return 0;
}

int cmd_validate(const Options& o) {
    require_output(o, "json");
    CurvatureParams p(o.K, o.N);
    GridDensity h;
    if (!o.input.empty()) {
        h = GridDensity::from_json(read_input(o.input));
    } else {
        if (!(o.D > 0.0)) throw std::domain_error("validate: need --D > 0 or --input");
        h = random_mcp_density(p, o.D, o.seed, o.n);
    }
    if (o.emit_density) {
        std::cout << h.to_json() << "\n";
        return 0;
    }
    ValidationReport rep = validate_mcp_density(h, p);
    std::ostringstream out;
    out << "{\n";
    out << "  \"pass\": " << (rep.pass ? "true" : "false") << ",\n";
    out << "  \"worst_ratio\": " << jnum(rep.worst_ratio) << ",\n";
    out << "  \"x0\": " << jnum(rep.x0) << ",\n";
    out << "  \"x1\": " << jnum(rep.x1) << ",\n";
    out << "  \"diameter_ok\": " << (rep.diameter_ok ? "true" : "false") << "\n";
    out << "}\n";
    std::cout << out.str();
    return rep.pass ? 0 : 1;
}

int cmd_bounds(const Options& o) {
    require_output(o, "json");
    std::ostringstream out;
    if (!o.input.empty()) {
        GridDensity h = GridDensity::from_json(read_input(o.input));
        double A = muckenhoupt_A(h);
        BoundsPair mb = muckenhoupt_bounds(h);
        SpectralResult dn = spectral_gap(h, kDirichletNeumann);
        out << "{\n";
        out << "  \"A\": " << jnum(A) << ",\n";
        out << "  \"bracket\": " << mb.to_json() << ",\n";
        out << "  \"spectral\": " << dn.to_json(o.eigenfunction) << "\n";
        out << "}\n";
    } else {
        CurvatureParams p(o.K, o.N);
        if (!(o.D > 0.0)) throw std::domain_error("bounds: need --D > 0 or --input");
        double D = capped_diameter(p, o.D);
        BoundsPair cf = closed_form_bounds(p, D);
        out << "{\n";
        out << "  \"K\": " << jnum(p.K) << ",\n";
        out << "  \"N\": " << jnum(p.N) << ",\n";
        out << "  \"D\": " << jnum(D) << ",\n";
        out << "  \"scaled_bracket\": " << cf.to_json() << ",\n";
        out << "  \"lambda_bracket\": {\"lower\": " << jnum(cf.lower / (D * D))
            << ", \"upper\": " << jnum(cf.upper / (D * D)) << "},\n";
        out << "  \"intro_lower\": " << jnum(intro_lower_bound(p, D)) << "\n";
        out << "}\n";
    }
    std::cout << out.str();
    return 0;
}

int cmd_selftest(const Options& o) {
    AcceptanceConfig cfg;
    cfg.n = o.n;
    cfg.seed = o.seed;
    return run_acceptance_report(cfg, std::cout) ? 0 : 1;
}

int dispatch(int (*fn)(const Options&), const Options& o) {
    try {
        return fn(o);
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sharp Poincare constants of one-dimensional curvature-dimension "
                 "model densities"};
    app.require_subcommand(1);

    Options o;
    auto add_params = [&](CLI::App* cmd, bool need_kn) {
        auto* k = cmd->add_option("--K", o.K, "curvature lower bound");
        auto* n = cmd->add_option("--N", o.N, "dimension upper bound (> 1)");
        if (need_kn) {
            k->required();
            n->required();
        }
        cmd->add_option("--D", o.D, "diameter (capped at the positive-curvature maximum)");
        cmd->add_option("--n", o.n, "grid cells (even, >= 32)")->capture_default_str();
        cmd->add_option("--output", o.output, "output format: json or csv");
    };

    CLI::App* compute = app.add_subcommand("compute", "sharp class constant plus bounds");
    add_params(compute, true);
    compute->add_flag("--dense-scan", o.dense_scan,
                      "512-point sweep guarding the unimodality assumption");

    CLI::App* scan = app.add_subcommand("scan", "diameter sweep of the model constant (CSV)");
    add_params(scan, true);
    scan->add_option("--count", o.count, "scan rows (>= 8)")->capture_default_str();

    CLI::App* validate = app.add_subcommand("validate", "class membership check of a density");
    add_params(validate, true);
    validate->add_option("--seed", o.seed, "generator seed")->capture_default_str();
    validate->add_option("--input", o.input, "density JSON file ('-' for stdin)");
    validate->add_flag("--emit-density", o.emit_density,
                       "print the generated density instead of the report");

    CLI::App* bounds = app.add_subcommand("bounds", "two-sided estimates for a density or model");
    add_params(bounds, false);
    bounds->add_option("--input", o.input, "density JSON file ('-' for stdin)");
    bounds->add_flag("--eigenfunction", o.eigenfunction, "include the eigenfunction samples");

    CLI::App* selftest = app.add_subcommand("selftest", "run the acceptance criteria battery");
    selftest->add_option("--n", o.n, "grid cells")->capture_default_str();
    selftest->add_option("--seed", o.seed, "campaign seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (compute->parsed()) return dispatch(cmd_compute, o);
    if (scan->parsed()) return dispatch(cmd_scan, o);
    if (validate->parsed()) return dispatch(cmd_validate, o);
    if (bounds->parsed()) return dispatch(cmd_bounds, o);
    return dispatch(cmd_selftest, o);
}
