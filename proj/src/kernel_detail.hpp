// Per-item bodies shared by the serial and OpenMP kernels.
#pragma once

#include "irsplan/kernels.hpp"
#include "irsplan/numerics.hpp"
#include "irsplan/powerctl.hpp"
#include "irsplan/rng.hpp"

namespace irsplan::detail {

inline double sector_job(const RadioConfig& cfg, const IrsSpec& irs, const ScaledGammaQuantile& kappa,
                         const SectorJob& job, const QuadratureOptions& opt) {
  Ring ring;
  ring.outer = job.outer;
  ring.inner = job.inner;
  ring.irs = job.irs;
  ring.irs_radius = job.irs_radius;
  return sector_energy_integral(cfg, irs, ring, kappa, opt);
}

inline double unit_sum(std::uint64_t seed, int elements, std::uint64_t entry) {
  const CounterRng rng(seed, pool_stream(entry));
  double s = 0.0;
  for (int n = 0; n < elements; ++n) {
    const auto [u1, u2] = rng.uniforms(static_cast<std::uint64_t>(n));
    s += std::sqrt(unit_exponential(u1) * unit_exponential(u2));
  }
  return s;
}

inline bool irs_success(std::uint64_t seed, std::span<const double> pool, const IrsUeDraws& ue, double eta0,
                        std::int64_t j) {
  const CounterRng rng(seed, ue.stream);
  const auto [u1, u2] = rng.uniforms(static_cast<std::uint64_t>(j));
  double s;
  if (pool.empty()) {
    s = ue.surrogate_mean + ue.surrogate_sd * normal_quantile(u2);
  } else {
    s = pool[(ue.pool_offset + static_cast<std::uint64_t>(j)) % pool.size()];
  }
  const double z = ue.cascade_amp * s + std::sqrt(ue.direct_gain * unit_exponential(u1));
  return ue.snr_scale * z * z >= eta0;
}

inline bool direct_success(std::uint64_t seed, const DirectUeDraws& ue, double eta0, std::int64_t j) {
  const CounterRng rng(seed, ue.stream);
  const double u = rng.uniforms(static_cast<std::uint64_t>(j)).first;
  return ue.snr_scale * ue.direct_gain * unit_exponential(u) >= eta0;
}

inline void check_sizes(std::size_t a, std::size_t b, const char* who) {
  if (a != b) throw DomainError(std::string(who) + ": output size does not match the input");
}

}  // namespace irsplan::detail
