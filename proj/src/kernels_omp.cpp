#include <exception>

#include "kernel_detail.hpp"

namespace irsplan {

void sector_integrals_parallel(const RadioConfig& cfg, const IrsSpec& irs, const ScaledGammaQuantile& kappa,
                               std::span<const SectorJob> jobs, std::span<double> out, const QuadratureOptions& opt) {
  detail::check_sizes(jobs.size(), out.size(), "sector_integrals_parallel");
  const auto n = static_cast<std::int64_t>(jobs.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t k = 0; k < n; ++k) {
    try {
      out[k] = detail::sector_job(cfg, irs, kappa, jobs[k], opt);
    } catch (...) {
#pragma omp critical(irsplan_kernel_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void unit_sum_pool_parallel(std::uint64_t seed, int elements, std::span<double> out) {
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) out[k] = detail::unit_sum(seed, elements, static_cast<std::uint64_t>(k));
}

std::int64_t count_irs_successes_parallel(std::uint64_t seed, std::span<const double> pool, const IrsUeDraws& ue,
                                          double eta0, std::int64_t draws) {
  std::int64_t hits = 0;
#pragma omp parallel reduction(+ : hits)
  {
    // Thread-local copies; the outlined body otherwise reloads them every draw.
    const IrsUeDraws local = ue;
    const std::span<const double> p = pool;
    std::int64_t h = 0;
#pragma omp for schedule(static)
    for (std::int64_t j = 0; j < draws; ++j) h += detail::irs_success(seed, p, local, eta0, j);
    hits += h;
  }
  return hits;
}

std::int64_t count_direct_successes_parallel(std::uint64_t seed, const DirectUeDraws& ue, double eta0,
                                             std::int64_t draws) {
  std::int64_t hits = 0;
#pragma omp parallel reduction(+ : hits)
  {
    const DirectUeDraws local = ue;
    std::int64_t h = 0;
#pragma omp for schedule(static)
    for (std::int64_t j = 0; j < draws; ++j) h += detail::direct_success(seed, local, eta0, j);
    hits += h;
  }
  return hits;
}

}  // namespace irsplan
