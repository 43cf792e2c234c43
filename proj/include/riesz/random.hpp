#pragma once

// Counter-based random streams. Every (seed, stream index) pair addresses an
// independent Philox4x32-10 sequence, so a sample's draws depend only on the
// seed and its index, never on which thread produced it.

#include <array>
#include <cstdint>
#include <limits>

namespace riesz {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., Random123).
PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key);

class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream_index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Gamma(shape, rate 1). Marsaglia-Tsang; shapes below 1 are boosted to
  /// shape + 1 and multiplied by U^(1/shape).
  double gamma(double shape);

  std::uint64_t stream_index() const { return stream_; }

 private:
  void refill();

  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxBlock buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace riesz
