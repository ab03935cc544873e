// Hot loops with a serial reference and an OpenMP version. Each pair must
// produce bit-identical results; tests compare them directly.
#pragma once

#include <cstdint>
#include <span>

#include "irsplan/channel.hpp"
#include "irsplan/numerics.hpp"

namespace irsplan {

// One annulus sector: UEs in [inner, outer] around an IRS at irs_radius,
// sector angle 2 pi / irs.
struct SectorJob {
  double outer = 0.0;
  double inner = 0.0;
  double irs_radius = 0.0;
  int irs = 1;
};

// out[k] = sector_energy_integral for jobs[k] (0 for zero-width jobs).
void sector_integrals_serial(const RadioConfig& cfg, const IrsSpec& irs, const ScaledGammaQuantile& kappa,
                             std::span<const SectorJob> jobs, std::span<double> out, const QuadratureOptions& opt);
void sector_integrals_parallel(const RadioConfig& cfg, const IrsSpec& irs, const ScaledGammaQuantile& kappa,
                               std::span<const SectorJob> jobs, std::span<double> out, const QuadratureOptions& opt);

// Pool of draws of S = sum_n sqrt(e1_n e2_n) with e1, e2 unit exponentials,
// i.e. the phase-aligned sum of N unit-power double-Rayleigh amplitudes.
// Entry k depends only on (seed, k).
void unit_sum_pool_serial(std::uint64_t seed, int elements, std::span<double> out);
void unit_sum_pool_parallel(std::uint64_t seed, int elements, std::span<double> out);

// Non-outage counting for one IRS-served UE: draw j uses pool entry
// (offset + j) mod pool size and the direct-link exponential from counter j
// of the UE stream. Success when power/W * (sqrt(g_i g_r) S + sqrt(g_d e))^2 >= eta0.
struct IrsUeDraws {
  double cascade_amp = 0.0;   // sqrt(g_i g_r)
  double direct_gain = 0.0;   // g_d
  double snr_scale = 0.0;     // power / W
  std::uint64_t stream = 0;   // per-UE RNG stream key
  std::uint64_t pool_offset = 0;
  // Used instead of the pool when it is empty: S ~ Normal(mean, sd).
  double surrogate_mean = 0.0;
  double surrogate_sd = 0.0;
};
struct DirectUeDraws {
  double direct_gain = 0.0;
  double snr_scale = 0.0;
  std::uint64_t stream = 0;
};

std::int64_t count_irs_successes_serial(std::uint64_t seed, std::span<const double> pool, const IrsUeDraws& ue,
                                        double eta0, std::int64_t draws);
std::int64_t count_irs_successes_parallel(std::uint64_t seed, std::span<const double> pool, const IrsUeDraws& ue,
                                          double eta0, std::int64_t draws);
std::int64_t count_direct_successes_serial(std::uint64_t seed, const DirectUeDraws& ue, double eta0,
                                           std::int64_t draws);
std::int64_t count_direct_successes_parallel(std::uint64_t seed, const DirectUeDraws& ue, double eta0,
                                             std::int64_t draws);

}  // namespace irsplan
