#include "mcpgap/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcpgap::kernels {

namespace scalar {

double sum(const double* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i];
    return s;
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double weighted_dot(const double* a, const double* b, const double* w, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * w[i];
    return s;
}

double diff_energy(const double* u, const double* p, std::size_t n_cells) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_cells; ++i) {
        double d = u[i + 1] - u[i];
        s += p[i] * d * d;
    }
    return s;
}

double max_ratio(const double* a, const double* b, std::size_t n) {
    double m = -HUGE_VAL;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, a[i] / b[i]);
    return m;
}

double max_product(const double* a, const double* b, std::size_t n) {
    double m = -HUGE_VAL;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, a[i] * b[i]);
    return m;
}

}  // namespace scalar

namespace {

struct Dispatch {
    double (*sum)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*weighted_dot)(const double*, const double*, const double*, std::size_t);
    double (*diff_energy)(const double*, const double*, std::size_t);
    double (*max_ratio)(const double*, const double*, std::size_t);
    double (*max_product)(const double*, const double*, std::size_t);
    bool avx2;
};

Dispatch select() {
#if defined(MCPGAP_X86) && (defined(__GNUC__) || defined(__clang__))
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return {avx2::sum, avx2::dot, avx2::weighted_dot,
                avx2::diff_energy, avx2::max_ratio, avx2::max_product, true};
    }
#endif
    return {scalar::sum, scalar::dot, scalar::weighted_dot,
            scalar::diff_energy, scalar::max_ratio, scalar::max_product, false};
}

const Dispatch& table() {
    static const Dispatch d = select();
    return d;
}

void check_sizes(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

double sum(std::span<const double> a) { return table().sum(a.data(), a.size()); }

double dot(std::span<const double> a, std::span<const double> b) {
    check_sizes(a.size(), b.size());
    return table().dot(a.data(), b.data(), a.size());
}

double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w) {
    check_sizes(a.size(), b.size());
    check_sizes(a.size(), w.size());
    return table().weighted_dot(a.data(), b.data(), w.data(), a.size());
}

double diff_energy(std::span<const double> u, std::span<const double> p) {
    if (u.size() < 2 || p.size() != u.size() - 1)
        throw std::invalid_argument("diff_energy: need p.size() == u.size()-1");
    return table().diff_energy(u.data(), p.data(), p.size());
}

double max_ratio(std::span<const double> a, std::span<const double> b) {
    check_sizes(a.size(), b.size());
    if (a.empty()) throw std::invalid_argument("max_ratio: empty input");
    return table().max_ratio(a.data(), b.data(), a.size());
}

double max_product(std::span<const double> a, std::span<const double> b) {
    check_sizes(a.size(), b.size());
    if (a.empty()) throw std::invalid_argument("max_product: empty input");
    return table().max_product(a.data(), b.data(), a.size());
}

bool using_avx2() { return table().avx2; }

}  // namespace mcpgap::kernels
