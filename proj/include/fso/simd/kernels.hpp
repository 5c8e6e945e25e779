#pragma once

#include <cstddef>
#include <string_view>

namespace fso::simd {

// Data-parallel inner loops used by the embedding, box counting and the
// stationary-law solvers. Every implementation must return bit-identical
// results to the scalar reference: element-wise kernels do one rounding per
// operation in the same order, and reductions use a fixed four-lane striped
// order, (s0 + s1) + (s2 + s3), followed by the tail in index order.
struct KernelTable {
  std::string_view name;

  // xs[i] += counts[i] * dx; ys[i] += counts[i] * dy
  void (*accumulate_direction)(const double* counts, double dx, double dy, double* xs, double* ys,
                               std::size_t n);

  // out[i] = floor((values[i] - origin) / size)
  void (*floor_cells)(const double* values, double origin, double size, double* out, std::size_t n);

  // sum |a[i] - b[i]|
  double (*abs_diff_sum)(const double* a, const double* b, std::size_t n);

  // sum a[i]
  double (*sum)(const double* a, std::size_t n);

  // out[i] = alpha * x[i] + beta * y[i]
  void (*axpby)(double alpha, const double* x, double beta, const double* y, double* out, std::size_t n);

  // out[i] = x[i] * y[i]
  void (*mul)(const double* x, const double* y, double* out, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the build or the running CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;

/// Kernel set chosen at first use: AVX2 when the CPU supports it, unless the
/// environment variable FSO_SIMD is set to "scalar".
const KernelTable& active() noexcept;

}  // namespace fso::simd
