// Counter-based Philox4x32-10. A draw is a pure function of (seed, stream,
// index), so results never depend on thread count or evaluation order.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace irsplan {

using PhiloxBlock = std::array<std::uint32_t, 4>;

inline PhiloxBlock philox4x32_10(PhiloxBlock ctr, std::uint32_t k0, std::uint32_t k1) {
  constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
  constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
    k0 += w0;
    k1 += w1;
  }
  return ctr;
}

// 64 random bits -> uniform on the open interval (0, 1).
// 52 bits so that the largest value, 1 - 2^-53, is exact and never rounds to 1.
inline double to_unit_open(std::uint64_t bits) { return (static_cast<double>(bits >> 12) + 0.5) * 0x1p-52; }

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  // Two independent uniforms for one counter value.
  std::pair<double, double> uniforms(std::uint64_t index) const {
    const PhiloxBlock ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                          static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const auto b = philox4x32_10(ctr, static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32));
    const std::uint64_t x = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
    const std::uint64_t y = (static_cast<std::uint64_t>(b[2]) << 32) | b[3];
    return {to_unit_open(x), to_unit_open(y)};
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

// Unit-mean exponential, i.e. the power of a unit Rayleigh amplitude.
inline double unit_exponential(double u) { return -std::log(u); }

// Rayleigh amplitude with scale delta, inverse CDF: delta sqrt(-2 ln u).
inline double rayleigh_amplitude(double delta, double u) { return delta * std::sqrt(-2.0 * std::log(u)); }

// Stream ids. Bit 63 marks the shared pool, bits 32..62 the topology.
inline std::uint64_t pool_stream(std::uint64_t entry) { return (1ull << 63) | entry; }
inline std::uint64_t ue_stream(std::uint64_t topology, std::uint64_t ue) {
  return ((topology & 0x7fffffffull) << 32) | (ue & 0xffffffffull);
}

}  // namespace irsplan
