#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace hardlattice {

// std::mt19937_64 with per-stream seeding through std::seed_seq over the
// 32-bit halves of (master seed, stream index). Uniform variates use the top
// 53 bits of each draw, so streams are reproducible independently of the
// standard library's distribution implementations.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64/seed_seq(master_lo,master_hi,stream_lo,stream_hi)";

  explicit Rng(std::uint64_t master_seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::string state() const;
  void set_state(const std::string& s);

  friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hardlattice
