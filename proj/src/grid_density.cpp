#include "mcpgap/grid_density.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mcpgap/util.hpp"

namespace mcpgap {

GridDensity::GridDensity(double a_, double b_, std::vector<double> samples_)
    : a(a_), b(b_), n(static_cast<int>(samples_.size()) - 1), samples(std::move(samples_)) {
    if (!(std::isfinite(a) && std::isfinite(b) && b > a))
        throw std::invalid_argument("GridDensity: need finite b > a");
    if (n < 2) throw std::invalid_argument("GridDensity: need at least 2 cells");
    bool any_positive = false;
    for (double v : samples) {
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("GridDensity: samples must be finite and >= 0");
        if (v > 0.0) any_positive = true;
    }
    if (!any_positive) throw std::invalid_argument("GridDensity: all samples are zero");
}

double GridDensity::max_sample() const {
    return *std::max_element(samples.begin(), samples.end());
}

GridDensity GridDensity::slice(int p, int q) const {
    if (p < 0 || q > n || q - p < 2)
        throw std::invalid_argument("GridDensity::slice: bad node range");
    return GridDensity(x(p), x(q),
                       std::vector<double>(samples.begin() + p, samples.begin() + q + 1));
}

GridDensity GridDensity::coarsen() const {
    if (n % 2 != 0) throw std::invalid_argument("GridDensity::coarsen: odd cell count");
    std::vector<double> s;
    s.reserve(n / 2 + 1);
    for (int i = 0; i <= n; i += 2) s.push_back(samples[i]);
    return GridDensity(a, b, std::move(s));
}

std::string GridDensity::to_json() const {
    std::ostringstream out;
    out << "{\"a\": " << fmt_g12(a) << ", \"b\": " << fmt_g12(b)
        << ", \"n\": " << n << ", \"samples\": [";
    for (int i = 0; i <= n; ++i) {
        if (i) out << ", ";
        out << fmt_g12(samples[i]);
    }
    out << "]}";
    return out.str();
}

GridDensity GridDensity::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("GridDensity: JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("a") || !j.contains("b") || !j.contains("n") ||
        !j.contains("samples"))
        throw std::invalid_argument("GridDensity: JSON needs keys a, b, n, samples");
    double a = j.at("a").get<double>();
    double b = j.at("b").get<double>();
    int n = j.at("n").get<int>();
    auto samples = j.at("samples").get<std::vector<double>>();
    if (static_cast<int>(samples.size()) != n + 1)
        throw std::invalid_argument("GridDensity: samples length must be n+1");
    return GridDensity(a, b, std::move(samples));
}

}  // namespace mcpgap
