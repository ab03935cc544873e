#include "kernel_detail.hpp"

namespace irsplan {

void sector_integrals_serial(const RadioConfig& cfg, const IrsSpec& irs, const ScaledGammaQuantile& kappa,
                             std::span<const SectorJob> jobs, std::span<double> out, const QuadratureOptions& opt) {
  detail::check_sizes(jobs.size(), out.size(), "sector_integrals_serial");
  for (std::size_t k = 0; k < jobs.size(); ++k) out[k] = detail::sector_job(cfg, irs, kappa, jobs[k], opt);
}

void unit_sum_pool_serial(std::uint64_t seed, int elements, std::span<double> out) {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = detail::unit_sum(seed, elements, k);
}

std::int64_t count_irs_successes_serial(std::uint64_t seed, std::span<const double> pool, const IrsUeDraws& ue,
                                        double eta0, std::int64_t draws) {
  std::int64_t hits = 0;
  for (std::int64_t j = 0; j < draws; ++j) hits += detail::irs_success(seed, pool, ue, eta0, j);
  return hits;
}

std::int64_t count_direct_successes_serial(std::uint64_t seed, const DirectUeDraws& ue, double eta0,
                                           std::int64_t draws) {
  std::int64_t hits = 0;
  for (std::int64_t j = 0; j < draws; ++j) hits += detail::direct_success(seed, ue, eta0, j);
  return hits;
}

}  // namespace irsplan
