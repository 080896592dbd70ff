#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "fairwork/kernels.hpp"

namespace fairwork::kernels {
namespace {

struct Table {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
};

constexpr Table kScalar{Isa::scalar, scalar::dot, scalar::axpy, scalar::max_abs};
#ifdef FAIRWORK_HAVE_AVX2_KERNELS
constexpr Table kAvx2{Isa::avx2, avx2::dot, avx2::axpy, avx2::max_abs};
#endif
#ifdef FAIRWORK_HAVE_NEON_KERNELS
constexpr Table kNeon{Isa::neon, neon::dot, neon::axpy, neon::max_abs};
#endif

const Table* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &kScalar;
    case Isa::avx2:
#ifdef FAIRWORK_HAVE_AVX2_KERNELS
      return isa_available(isa) ? &kAvx2 : nullptr;
#else
      return nullptr;
#endif
    case Isa::neon:
#ifdef FAIRWORK_HAVE_NEON_KERNELS
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const Table* initial_table() {
  if (const char* env = std::getenv("FAIRWORK_SIMD")) {
    if (std::string(env) == "scalar") return &kScalar;
  }
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (const Table* t = table_for(isa)) return t;
  }
  return &kScalar;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#ifdef FAIRWORK_HAVE_AVX2_KERNELS
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#ifdef FAIRWORK_HAVE_NEON_KERNELS
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return current().load()->isa; }

void select_isa(Isa isa) {
  const Table* t = table_for(isa);
  if (t == nullptr) {
    throw std::invalid_argument("instruction set not available: " + std::string(isa_name(isa)));
  }
  current().store(t);
}

double dot(std::span<const double> a, std::span<const double> b) {
  return current().load()->dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  current().load()->axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

double max_abs(std::span<const double> a) { return current().load()->max_abs(a.data(), a.size()); }

}  // namespace fairwork::kernels
