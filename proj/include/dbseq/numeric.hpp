#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "dbseq/error.hpp"

namespace dbseq {

/// Exact non-negative counts (arborescences, Eulerian paths, heights).
using BigCount = boost::multiprecision::cpp_int;
/// Signed arbitrary-precision integer used inside determinant elimination.
using BigInt = boost::multiprecision::cpp_int;
/// Always stored in lowest terms with a positive denominator.
using ExactRational = boost::multiprecision::cpp_rational;
/// 50 significant decimal digits; every transcendental quantity goes through this.
using Real = boost::multiprecision::cpp_bin_float_50;

inline BigCount pow_big(const BigCount& base, std::uint64_t exponent) {
  BigCount result = 1;
  BigCount b = base;
  while (exponent > 0) {
    if (exponent & 1u) result *= b;
    exponent >>= 1u;
    if (exponent > 0) b *= b;
  }
  return result;
}

/// Checked integer power; throws Resource on overflow of 64 bits.
inline std::uint64_t pow_u64(std::uint64_t base, std::uint64_t exponent) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    require(base == 0 || result <= std::numeric_limits<std::uint64_t>::max() / base,
            ErrorKind::Resource, "integer power overflows 64 bits");
    result *= base;
  }
  return result;
}

/// n! with the convention (-1)! = 1.
inline BigCount factorial(long long n) {
  require(n >= -1, ErrorKind::Domain, "factorial of n < -1");
  BigCount result = 1;
  for (long long i = 2; i <= n; ++i) result *= i;
  return result;
}

inline std::string to_decimal(const BigCount& value) { return value.str(); }

inline std::string to_decimal(const ExactRational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline Real to_real(const ExactRational& value) {
  return Real(boost::multiprecision::numerator(value)) /
         Real(boost::multiprecision::denominator(value));
}

/// Determinant by fraction-free (Bareiss) elimination. Every intermediate
/// division is exact, so the result is exact for integer input.
inline BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    require(row.size() == n, ErrorKind::Precondition, "determinant of a non-square matrix");
  if (n == 0) return 1;

  int sign = 1;
  BigInt previous_pivot = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / previous_pivot;
      }
      m[i][k] = 0;
    }
    previous_pivot = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

/// Seeded generator with platform-independent draws. std::uniform_int_distribution
/// is implementation-defined, so bounded draws use rejection on raw mt19937_64 output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    require(bound > 0, ErrorKind::Precondition, "Rng::below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw = engine_();
    while (draw >= limit) draw = engine_();
    return draw % bound;
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Seed for shard `index` derived from a base seed (splitmix64 finaliser).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace dbseq
