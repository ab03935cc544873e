// Special functions, quadrature and root finding used by the analytical
// models. Nothing in here knows about radios.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace irsplan {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double last, double previous)
      : std::runtime_error(what), last_(last), previous_(previous) {}
  double last() const noexcept { return last_; }
  double previous() const noexcept { return previous_; }

 private:
  double last_;
  double previous_;
};

class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_iter = 200;

  void validate() const;
};

// Regularized upper incomplete gamma Q(alpha, x) = Gamma(alpha, x) / Gamma(alpha).
double reg_upper_gamma(double alpha, double x);
// Regularized lower incomplete gamma P(alpha, x) = 1 - Q(alpha, x).
double reg_lower_gamma(double alpha, double x);
// Gamma(alpha) pdf at x: x^(alpha-1) e^(-x) / Gamma(alpha).
double gamma_pdf(double alpha, double x);

// x >= 0 with reg_upper_gamma(alpha, x) == p. Newton with a bisection
// safeguard, started from the Wilson-Hilferty approximation.
double inv_reg_upper_gamma(double alpha, double p, const Tolerance& tol = {});

// Standard normal quantile (Acklam's rational approximation, one Halley step).
double normal_quantile(double p);

// alpha -> alpha / inv_reg_upper_gamma(alpha, p) for one fixed p, tabulated as
// piecewise Chebyshev series of its logarithm in s = 1/sqrt(alpha). Values of
// alpha outside the table fall back to the exact inversion.
class ScaledGammaQuantile {
 public:
  static constexpr double kMinAlpha = 0.5;
  static constexpr double kMaxAlpha = 1e5;

  explicit ScaledGammaQuantile(double p);

  double operator()(double alpha) const;
  double exact(double alpha) const;
  double p() const noexcept { return p_; }

 private:
  static constexpr int kPanels = 48;
  static constexpr int kTerms = 18;

  double p_;
  double s_lo_;
  double s_hi_;
  double panel_width_;
  std::vector<double> coeffs_;  // kPanels * kTerms
};

class GaussLegendre {
 public:
  explicit GaussLegendre(int points);

  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  std::vector<double> nodes_;    // on [-1, 1], ascending
  std::vector<double> weights_;
};

// Cached rules for 8, 16, 32, 64 and 128 points.
const GaussLegendre& gauss_legendre(int points);

struct QuadratureOptions {
  int points = 32;
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_levels = 12;  // dyadic refinements before giving up
};

template <class F>
  requires std::invocable<F&, double>
double integrate_radial(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  if (!(a <= b)) throw DomainError("integrate_radial: need a <= b");
  if (a == b) return 0.0;
  const auto& rule = gauss_legendre(opt.points);
  auto nodes = rule.nodes();
  auto weights = rule.weights();

  auto composite = [&](int panels) {
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
      const double mid = a + (k + 0.5) * h;
      double s = 0.0;
      for (std::size_t j = 0; j < nodes.size(); ++j) s += weights[j] * f(mid + 0.5 * h * nodes[j]);
      total += 0.5 * h * s;
    }
    return total;
  };

  double prev = composite(1);
  for (int level = 1; level <= opt.max_levels; ++level) {
    const double cur = composite(1 << level);
    if (!std::isfinite(cur)) throw NumericError("integrate_radial: non-finite integrand", cur, prev);
    if (std::abs(cur - prev) <= std::max(opt.abs_tol, opt.rel_tol * std::abs(cur))) return cur;
    prev = cur;
  }
  throw NumericError("integrate_radial: no convergence", composite(1 << opt.max_levels), prev);
}

// Integral over the annulus sector r_in <= r <= r_out, 0 <= azimuth <= phi of
// f(r, azimuth) r dr d(azimuth). The Jacobian r is applied here.
template <class F>
  requires std::invocable<F&, double, double>
double integrate_polar_sector(F&& f, double r_in, double r_out, double phi,
                              const QuadratureOptions& opt = {}) {
  if (!(r_in >= 0.0 && r_in <= r_out)) throw DomainError("integrate_polar_sector: need 0 <= r_in <= r_out");
  if (!(phi > 0.0 && phi <= 2.0 * M_PI + 1e-12)) throw DomainError("integrate_polar_sector: need 0 < phi <= 2 pi");
  if (r_in == r_out) return 0.0;
  const auto& rule = gauss_legendre(opt.points);
  auto nodes = rule.nodes();
  auto weights = rule.weights();
  const std::size_t n = nodes.size();

  // Start from roughly square panels so thin rings with wide sectors do not
  // pay for radial refinement they do not need.
  const double aspect = phi * 0.5 * (r_in + r_out) / (r_out - r_in);
  const int base_a = static_cast<int>(std::clamp(std::round(std::sqrt(aspect)), 1.0, 64.0));
  const int base_r = static_cast<int>(std::clamp(std::round(std::sqrt(1.0 / aspect)), 1.0, 64.0));

  auto composite = [&](int level_panels) {
    const int panels = level_panels * base_r;
    const int panels_a = level_panels * base_a;
    const double hr = (r_out - r_in) / panels;
    const double ha = phi / panels_a;
    double total = 0.0;
    for (int kr = 0; kr < panels; ++kr) {
      const double rmid = r_in + (kr + 0.5) * hr;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = rmid + 0.5 * hr * nodes[i];
        double row = 0.0;
        for (int ka = 0; ka < panels_a; ++ka) {
          const double amid = (ka + 0.5) * ha;
          for (std::size_t j = 0; j < n; ++j) row += weights[j] * f(r, amid + 0.5 * ha * nodes[j]);
        }
        total += weights[i] * r * row;
      }
    }
    return total * 0.25 * hr * ha;
  };

  double prev = composite(1);
  for (int level = 1; level <= opt.max_levels; ++level) {
    const double cur = composite(1 << level);
    if (!std::isfinite(cur)) throw NumericError("integrate_polar_sector: non-finite integrand", cur, prev);
    if (std::abs(cur - prev) <= std::max(opt.abs_tol, opt.rel_tol * std::abs(cur))) return cur;
    prev = cur;
  }
  throw NumericError("integrate_polar_sector: no convergence", prev, prev);
}

// Root of a function with a sign change on [lo, hi].
template <class G>
  requires std::invocable<G&, double>
double bisect(G&& g, double lo, double hi, const Tolerance& tol = {}) {
  double glo = g(lo);
  const double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if (std::signbit(glo) == std::signbit(ghi) || std::isnan(glo) || std::isnan(ghi))
    throw BracketError("bisect: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  // Enough halvings for abs_tol regardless of max_iter; bounded by the
  // resolution of double.
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 2.0 * tol.abs_tol || mid == lo || mid == hi) return mid;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if (std::signbit(gm) == std::signbit(glo)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace irsplan
