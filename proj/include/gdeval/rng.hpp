#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace gdeval {

// Seedable random stream with portable transforms on top of mt19937_64.
// All distribution math is done here rather than with std::*_distribution,
// so that identical seeds give identical draws on any platform.
//
// Streams are derived from a root seed plus a text label, so enabling one
// noise channel never shifts the draws of another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t derive_seed(std::uint64_t root, std::string_view label) {
    // FNV-1a over the root bytes then the label.
    std::uint64_t h = 14695981039346656037ull;
    for (int i = 0; i < 8; ++i) {
      h ^= (root >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    return h;
  }

  static Rng child(std::uint64_t root, std::string_view label) {
    return Rng(derive_seed(root, label));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; the spare draw is cached.
  double normal(double mu, double sigma) {
    if (has_spare_) {
      has_spare_ = false;
      return mu + sigma * spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return mu + sigma * r * std::cos(theta);
  }

  // Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    // Rejection sampling to avoid modulo bias.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[index(v.size())];
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gdeval
