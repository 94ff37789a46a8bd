#pragma once

#include <array>
#include <cstdint>

namespace mixsde {

/// Philox4x32-10 block function (Salmon et al., Random123). Stateless: maps a
/// 128-bit counter and a 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

// Roles that get independent key spaces under one user seed.
enum class StreamRole : std::uint64_t {
  wiener = 1,
  rough = 2,
  coupled_wiener = 3,
  coupled_rough = 4,
  validator = 5,
};

/// Key for one (seed, role, component) triple. Path indices are mixed in by
/// the counter, so stream id = hash(seed, role, component) x path index.
std::uint64_t derive_key(std::uint64_t seed, StreamRole role, std::uint64_t component = 0);

/// Sequential draws from one counter-based stream. Each uniform consumes
/// exactly 64 bits; each normal consumes exactly one uniform.
class CounterStream {
 public:
  CounterStream(std::uint64_t key, std::uint64_t stream);

  double uniform();  // open interval (0, 1)
  double normal();   // inverse-CDF standard normal

 private:
  void refill();

  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

/// Standard normal quantile. Acklam's rational approximation followed by one
/// Halley step against erfc; accurate to a few ulps over (0, 1).
double normal_quantile(double p);

}  // namespace mixsde
