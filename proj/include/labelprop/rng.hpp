#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace labelprop {

// std::mt19937_64 is bit-portable; the std distributions are not, so draws
// go through these helpers to keep seeded runs reproducible everywhere.

inline double uniform_unit(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(gen);
}

inline std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
  return static_cast<std::size_t>(uniform_unit(gen) * static_cast<double>(n));
}

inline double gaussian(std::mt19937_64& gen, double sigma) {
  // Box-Muller; the log argument is kept away from zero.
  const double u1 = 1.0 - uniform_unit(gen);
  const double u2 = uniform_unit(gen);
  return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace labelprop
