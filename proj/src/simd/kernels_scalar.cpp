#include <cmath>

#include "fso/simd/kernels.hpp"

namespace fso::simd {

namespace {

void accumulate_direction(const double* counts, double dx, double dy, double* xs, double* ys,
                          std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] += counts[i] * dx;
    ys[i] += counts[i] * dy;
  }
}

void floor_cells(const double* values, double origin, double size, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::floor((values[i] - origin) / size);
}

template <class Term>
double striped(std::size_t n, Term term) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t blocks = n - n % 4;
  for (std::size_t i = 0; i < blocks; i += 4) {
    for (std::size_t j = 0; j < 4; ++j) lane[j] += term(i + j);
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = blocks; i < n; ++i) total += term(i);
  return total;
}

double abs_diff_sum(const double* a, const double* b, std::size_t n) {
  return striped(n, [&](std::size_t i) { return std::fabs(a[i] - b[i]); });
}

double sum(const double* a, std::size_t n) {
  return striped(n, [&](std::size_t i) { return a[i]; });
}

void axpby(double alpha, const double* x, double beta, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

void mul(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

constexpr KernelTable kScalar{
    "scalar", accumulate_direction, floor_cells, abs_diff_sum, sum, axpby, mul,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace fso::simd
