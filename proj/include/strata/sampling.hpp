#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "strata/error.hpp"
#include "strata/field.hpp"
#include "strata/group.hpp"

namespace strata {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform double in [0,1) built from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 0x51ed27ULL)));
}

inline double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

inline unsigned nth_prime(std::size_t n) {
  static const unsigned primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                    59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113};
  require(n < std::size(primes), ErrorKind::invalid_argument, "Halton sequence limited to 30 dimensions");
  return primes[n];
}

/// Halton points in a box with a seeded Cranley-Patterson shift (seed 0: unshifted).
inline std::vector<Point> halton_points(const Box& box, std::size_t count, std::uint64_t seed) {
  const std::size_t d = box.dim();
  std::vector<double> shift(d, 0.0);
  if (seed != 0) {
    auto rng = make_rng(seed, 0x4a17);
    for (auto& s : shift) s = unit_uniform(rng);
  }
  std::vector<Point> pts(count, Point(d));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double u = radical_inverse(i + 1, nth_prime(j)) + shift[j];
      u -= std::floor(u);
      pts[i][j] = box.lo[j] + u * (box.hi[j] - box.lo[j]);
    }
  return pts;
}

inline Box cube(std::size_t d, double lo, double hi) {
  return Box{std::vector<double>(d, lo), std::vector<double>(d, hi)};
}

}  // namespace strata
