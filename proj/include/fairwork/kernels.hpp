#pragma once

// Dense double-precision kernels used by the Newton solves.
//
// Every kernel has a scalar reference implementation and, where the CPU
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant. The variant is
// picked once at startup; FAIRWORK_SIMD=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace fairwork::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

/// Currently dispatched instruction set.
Isa active_isa();

/// Switches the dispatch table. Throws std::invalid_argument when the CPU
/// lacks the requested instruction set.
void select_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double max_abs(std::span<const double> a);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double max_abs(const double* a, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define FAIRWORK_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double max_abs(const double* a, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define FAIRWORK_HAVE_NEON_KERNELS 1
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double max_abs(const double* a, std::size_t n);
}  // namespace neon
#endif

}  // namespace fairwork::kernels
