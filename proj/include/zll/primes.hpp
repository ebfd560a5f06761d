#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zll/constants.hpp"

namespace zll {

// Largest x accepted by prime_pi; the segmented sieve stays fast and exact
// up to here.
inline constexpr double kSieveBudget = 1e9;

namespace detail {

inline std::vector<std::uint32_t> base_primes(std::uint64_t limit) {
  // Simple odd-only sieve up to sqrt(limit).
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  std::vector<bool> composite(root + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= root; j += i) composite[j] = true;
  }
  return primes;
}

}  // namespace detail

// Exact count of primes <= x via a segmented sieve (2^18-entry segments).
inline std::int64_t prime_pi(double x) {
  if (!(x >= 2.0)) throw std::domain_error("prime_pi: x must be >= 2");
  if (x > kSieveBudget) throw std::range_error("prime_pi: x exceeds sieve budget");
  const auto n = static_cast<std::uint64_t>(x);
  if (n < 2) return 0;

  const auto primes = detail::base_primes(n);
  constexpr std::uint64_t kSegment = 1u << 18;
  std::vector<bool> flags(kSegment);

  std::int64_t count = 0;
  for (std::uint64_t low = 2; low <= n; low += kSegment) {
    const std::uint64_t high = std::min(low + kSegment - 1, n);
    std::fill(flags.begin(), flags.end(), false);
    for (const std::uint64_t p : primes) {
      if (p * p > high) break;
      std::uint64_t start = ((low + p - 1) / p) * p;
      if (start < p * p) start = p * p;
      for (std::uint64_t j = start; j <= high; j += p) flags[j - low] = true;
    }
    for (std::uint64_t v = low; v <= high; ++v) {
      if (!flags[v - low]) ++count;
    }
  }
  return count;
}

// (1 - c) * pi(t): the prime-counting reference the ladder defect is
// measured against.
inline double pnt_defect_reference(double t) {
  if (!(t >= 2.0)) throw std::domain_error("pnt_defect_reference: t must be >= 2");
  return constants().one_minus_c * static_cast<double>(prime_pi(t));
}

}  // namespace zll
