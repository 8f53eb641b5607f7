#pragma once

#include <cstddef>
#include <span>

// Reduction kernels behind the quadrature, norm, and sup computations.
// Scalar reference implementations always exist; on x86-64 an AVX2+FMA variant
// of each is selected once at startup when the CPU supports it.  The two lanes
// may reassociate sums, so equivalence is tested to rounding accuracy, not
// bitwise.

namespace mcpgap::kernels {

double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
// sum_i a[i]*b[i]*w[i]  (weighted inner product; w is a quadrature mass)
double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w);
// sum_i p[i]*(u[i+1]-u[i])^2 with p.size() == u.size()-1 (stiffness energy)
double diff_energy(std::span<const double> u, std::span<const double> p);
// max_i a[i]/b[i]; caller guarantees b[i] > 0
double max_ratio(std::span<const double> a, std::span<const double> b);
// max_i a[i]*b[i]
double max_product(std::span<const double> a, std::span<const double> b);

bool using_avx2();

namespace scalar {
double sum(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double weighted_dot(const double* a, const double* b, const double* w, std::size_t n);
double diff_energy(const double* u, const double* p, std::size_t n_cells);
double max_ratio(const double* a, const double* b, std::size_t n);
double max_product(const double* a, const double* b, std::size_t n);
}  // namespace scalar

#if defined(MCPGAP_X86)
namespace avx2 {
double sum(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double weighted_dot(const double* a, const double* b, const double* w, std::size_t n);
double diff_energy(const double* u, const double* p, std::size_t n_cells);
double max_ratio(const double* a, const double* b, std::size_t n);
double max_product(const double* a, const double* b, std::size_t n);
}  // namespace avx2
#endif

}  // namespace mcpgap::kernels
