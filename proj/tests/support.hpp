#pragma once

#include <cstdint>
#include <random>

#include "krein/linalg.hpp"

namespace krein::testing {

/// Seeded engine so every property run is reproducible.
inline std::mt19937_64 engine(std::uint64_t salt) { return std::mt19937_64(0x6b7265696eULL ^ salt); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Point random_point(std::mt19937_64& rng, double half_width) {
  return {uniform(rng, -half_width, half_width), uniform(rng, -half_width, half_width),
          uniform(rng, -half_width, half_width)};
}

/// Relative deviation ||x - y|| / ||y|| in the spectral norm.
inline double relative_deviation(const CMatrix& x, const CMatrix& y) {
  return spectral_norm(x - y) / spectral_norm(y);
}

inline double rel(cplx x, cplx y) { return std::abs(x - y) / std::abs(y); }

}  // namespace krein::testing
