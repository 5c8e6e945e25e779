#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "fso/rng.hpp"
#include "fso/simd/kernels.hpp"

using fso::simd::KernelTable;

namespace {

std::vector<double> random_vector(fso::Rng& rng, std::size_t n, double scale) {
  std::vector<double> v(n);
  for (double& x : v) x = (rng.uniform01() - 0.5) * scale;
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// Every vector variant available on this machine, compared with scalar.
std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> out;
  if (auto* t = fso::simd::avx2_kernels()) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("scalar reference values") {
  const auto& k = fso::simd::scalar_kernels();
  const std::vector<double> a{1, 2, 3, 4, 5}, b{0, 4, 3, 1, 10};
  CHECK(k.sum(a.data(), a.size()) == 15.0);
  CHECK(k.abs_diff_sum(a.data(), b.data(), a.size()) == 1 + 2 + 0 + 3 + 5);
  std::vector<double> out(5);
  k.axpby(2.0, a.data(), -1.0, b.data(), out.data(), 5);
  CHECK(out == std::vector<double>{2, 0, 3, 7, 0});
  k.mul(a.data(), b.data(), out.data(), 5);
  CHECK(out == std::vector<double>{0, 8, 9, 4, 50});
  const std::vector<double> v{-0.5, 0.0, 0.49, 0.5, 2.75};
  k.floor_cells(v.data(), -0.5, 0.5, out.data(), 5);
  CHECK(out == std::vector<double>{0, 1, 1, 2, 6});
  std::vector<double> xs(5, 1.0), ys(5, 0.0);
  k.accumulate_direction(a.data(), 0.5, 2.0, xs.data(), ys.data(), 5);
  CHECK(xs == std::vector<double>{1.5, 2, 2.5, 3, 3.5});
  CHECK(ys == std::vector<double>{2, 4, 6, 8, 10});
}

TEST_CASE("active table is one of the known ones") {
  const auto& active = fso::simd::active();
  CHECK((&active == &fso::simd::scalar_kernels() || &active == fso::simd::avx2_kernels()));
  MESSAGE("active kernels: " << active.name);
}

TEST_CASE("vector kernels are bit-identical to scalar") {
  const auto& ref = fso::simd::scalar_kernels();
  fso::Rng rng(31);
  for (const KernelTable* t : variants()) {
    CAPTURE(t->name);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 31u, 128u, 1001u}) {
      CAPTURE(n);
      const auto a = random_vector(rng, n, 10.0);
      const auto b = random_vector(rng, n, 1e-3);
      CHECK(same_bits(ref.sum(a.data(), n), t->sum(a.data(), n)));
      CHECK(same_bits(ref.abs_diff_sum(a.data(), b.data(), n), t->abs_diff_sum(a.data(), b.data(), n)));

      std::vector<double> r1(n), r2(n);
      ref.axpby(0.3, a.data(), 0.7, b.data(), r1.data(), n);
      t->axpby(0.3, a.data(), 0.7, b.data(), r2.data(), n);
      CHECK(same_bits(r1, r2));

      ref.mul(a.data(), b.data(), r1.data(), n);
      t->mul(a.data(), b.data(), r2.data(), n);
      CHECK(same_bits(r1, r2));

      ref.floor_cells(a.data(), -5.0, 0.37, r1.data(), n);
      t->floor_cells(a.data(), -5.0, 0.37, r2.data(), n);
      CHECK(same_bits(r1, r2));

      std::vector<double> counts(n);
      for (double& c : counts) c = static_cast<double>(rng.below(5));
      auto x1 = b, y1 = a, x2 = b, y2 = a;
      ref.accumulate_direction(counts.data(), 0.123, -0.456, x1.data(), y1.data(), n);
      t->accumulate_direction(counts.data(), 0.123, -0.456, x2.data(), y2.data(), n);
      CHECK(same_bits(x1, x2));
      CHECK(same_bits(y1, y2));
    }
  }
}
