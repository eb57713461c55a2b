#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

// std::mt19937_64's output sequence is fixed by the standard, but the
// std:: distributions and std::shuffle are not. Everything seeded in this
// project draws through these helpers so outputs are identical everywhere.
namespace surveymon::rng {

using Engine = std::mt19937_64;

/// SplitMix64 finaliser; used to derive independent child seeds.
constexpr std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return mix(mix(mix(seed) ^ a) ^ b);
}

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Engine& e) { return static_cast<double>(e() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n), unbiased (rejection sampling). n must be > 0.
inline std::uint64_t below(Engine& e, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = e();
  } while (x >= limit);
  return x % n;
}

/// Uniform integer in [lo, hi].
inline long between(Engine& e, long lo, long hi) {
  return lo + static_cast<long>(below(e, static_cast<std::uint64_t>(hi - lo) + 1));
}

inline bool bernoulli(Engine& e, double p) { return uniform01(e) < p; }

inline long binomial(Engine& e, long n, double p) {
  long k = 0;
  for (long i = 0; i < n; ++i) k += bernoulli(e, p) ? 1 : 0;
  return k;
}

/// Fisher-Yates.
template <typename T>
void shuffle(std::span<T> items, Engine& e) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(below(e, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace surveymon::rng
