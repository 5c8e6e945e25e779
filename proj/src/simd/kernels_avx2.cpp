#include <immintrin.h>

#include <cmath>

#include "fso/simd/kernels.hpp"

namespace fso::simd::avx2 {

namespace {

void accumulate_direction(const double* counts, double dx, double dy, double* xs, double* ys,
                          std::size_t n) {
  const __m256d vdx = _mm256_set1_pd(dx);
  const __m256d vdy = _mm256_set1_pd(dy);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c = _mm256_loadu_pd(counts + i);
    _mm256_storeu_pd(xs + i, _mm256_add_pd(_mm256_loadu_pd(xs + i), _mm256_mul_pd(c, vdx)));
    _mm256_storeu_pd(ys + i, _mm256_add_pd(_mm256_loadu_pd(ys + i), _mm256_mul_pd(c, vdy)));
  }
  for (; i < n; ++i) {
    xs[i] += counts[i] * dx;
    ys[i] += counts[i] * dy;
  }
}

void floor_cells(const double* values, double origin, double size, double* out, std::size_t n) {
  const __m256d vo = _mm256_set1_pd(origin);
  const __m256d vs = _mm256_set1_pd(size);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d q = _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(values + i), vo), vs);
    _mm256_storeu_pd(out + i, _mm256_floor_pd(q));
  }
  for (; i < n; ++i) out[i] = std::floor((values[i] - origin) / size);
}

double reduce_lanes(__m256d acc) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double abs_diff_sum(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, d));
  }
  double total = reduce_lanes(acc);
  for (; i < n; ++i) total += std::fabs(a[i] - b[i]);
  return total;
}

double sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double total = reduce_lanes(acc);
  for (; i < n; ++i) total += a[i];
  return total;
}

void axpby(double alpha, const double* x, double beta, const double* y, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d l = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    const __m256d r = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(l, r));
  }
  for (; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

void mul(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

}  // namespace

extern const KernelTable kTable{
    "avx2", accumulate_direction, floor_cells, abs_diff_sum, sum, axpby, mul,
};

}  // namespace fso::simd::avx2
