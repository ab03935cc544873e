#include "irsplan/numerics.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <numbers>

namespace irsplan {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kSeriesCap = 200000;

void check_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError(std::string(who) + ": alpha must be finite and > 0");
}

// lgamma(a) - ((a - 1/2) ln a - a + ln(2 pi)/2) for a >= 10.
double stirling_tail(double a) {
  const double r = 1.0 / a;
  const double r2 = r * r;
  return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 * (1.0 / 1680 - r2 / 1188))));
}

// log(x^a e^-x / Gamma(a)). The large-a branch avoids cancelling a ln x
// against lgamma(a).
double log_prefix(double a, double x) {
  if (a < 10.0) return a * std::log(x) - x - std::lgamma(a);
  const double t = (x - a) / a;
  return a * (std::log1p(t) - t) + 0.5 * std::log(a / (2.0 * std::numbers::pi)) - stirling_tail(a);
}

double lower_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kSeriesCap; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) return std::exp(log_prefix(a, x)) * sum;
  }
  throw NumericError("incomplete gamma series did not converge", sum, sum - term);
}

// Modified Lentz evaluation of the continued fraction for Q.
double upper_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kSeriesCap; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return std::exp(log_prefix(a, x)) * h;
  }
  throw NumericError("incomplete gamma continued fraction did not converge", h, h);
}

}  // namespace

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter < 1)
    throw DomainError("Tolerance: abs_tol > 0, rel_tol > 0 and max_iter >= 1 required");
}

double reg_upper_gamma(double alpha, double x) {
  check_alpha(alpha, "reg_upper_gamma");
  if (!(x >= 0.0) || std::isnan(x)) throw DomainError("reg_upper_gamma: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < alpha + 1.0) return 1.0 - lower_series(alpha, x);
  return upper_fraction(alpha, x);
}

double reg_lower_gamma(double alpha, double x) {
  check_alpha(alpha, "reg_lower_gamma");
  if (!(x >= 0.0) || std::isnan(x)) throw DomainError("reg_lower_gamma: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < alpha + 1.0) return lower_series(alpha, x);
  return 1.0 - upper_fraction(alpha, x);
}

double gamma_pdf(double alpha, double x) {
  check_alpha(alpha, "gamma_pdf");
  if (!(x > 0.0)) return 0.0;
  return std::exp(log_prefix(alpha, x)) / x;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must be in (0, 1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement against erfc.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double inv_reg_upper_gamma(double alpha, double p, const Tolerance& tol) {
  check_alpha(alpha, "inv_reg_upper_gamma");
  tol.validate();
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("inv_reg_upper_gamma: p must be in (0, 1]");
  if (p == 1.0) return 0.0;

  const double q = 1.0 - p;
  double x;
  if (q > 0.0 && q < 1.0) {
    const double z = normal_quantile(q);
    const double v = 1.0 / (9.0 * alpha);
    const double cube = 1.0 - v + z * std::sqrt(v);
    x = alpha * cube * cube * cube;
  } else {
    x = alpha;
  }
  if (!(x > 0.0)) {
    // Lower tail: P(alpha, x) ~ x^alpha / Gamma(alpha + 1).
    x = std::exp((std::log(std::max(q, kTiny)) + std::lgamma(alpha + 1.0)) / alpha);
  }

  double lo = 0.0;
  double hi = std::max(x, alpha) * 2.0 + 1.0;
  while (reg_upper_gamma(alpha, hi) > p) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericError("inv_reg_upper_gamma: bracket expansion failed", hi, lo);
  }
  x = std::clamp(x, lo, hi);
  if (x == lo || x == hi) x = 0.5 * (lo + hi);

  double residual = 0.0;
  for (int it = 0; it < tol.max_iter; ++it) {
    const double qx = reg_upper_gamma(alpha, x);
    residual = qx - p;
    if (residual == 0.0) return x;
    if (residual > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next;
    if (p < 1e-8 && qx > 0.0) {
      // Deep upper tail: Newton on log Q, slope -pdf/Q formed in logs.
      const double log_ratio = log_prefix(alpha, x) - std::log(x) - std::log(qx);
      next = x + (std::log(qx) - std::log(p)) / std::exp(log_ratio);
      if (std::abs(std::log(qx) - std::log(p)) <= tol.rel_tol * 1e-2 && std::isfinite(next)) return next;
    } else {
      const double slope = -gamma_pdf(alpha, x);
      next = (slope < 0.0) ? x - residual / slope : 0.5 * (lo + hi);
    }
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (std::abs(residual) <= tol.abs_tol && step <= tol.rel_tol * x) return x;
    if (step <= 4.0 * kEps * x) return x;
  }
  throw NumericError("inv_reg_upper_gamma: no convergence", residual, x);
}

ScaledGammaQuantile::ScaledGammaQuantile(double p)
    : p_(p),
      s_lo_(1.0 / std::sqrt(kMaxAlpha)),
      s_hi_(1.0 / std::sqrt(kMinAlpha)),
      panel_width_((s_hi_ - s_lo_) / kPanels),
      coeffs_(static_cast<std::size_t>(kPanels) * kTerms) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("ScaledGammaQuantile: p must be in (0, 1)");
  std::array<double, kTerms> values{};
  for (int panel = 0; panel < kPanels; ++panel) {
    const double left = s_lo_ + panel * panel_width_;
    for (int k = 0; k < kTerms; ++k) {
      const double t = std::cos(std::numbers::pi * (k + 0.5) / kTerms);
      const double s = left + 0.5 * panel_width_ * (t + 1.0);
      values[k] = std::log(exact(1.0 / (s * s)));
    }
    double* c = &coeffs_[static_cast<std::size_t>(panel) * kTerms];
    for (int j = 0; j < kTerms; ++j) {
      double acc = 0.0;
      for (int k = 0; k < kTerms; ++k) acc += values[k] * std::cos(std::numbers::pi * j * (k + 0.5) / kTerms);
      c[j] = 2.0 * acc / kTerms;
    }
    c[0] *= 0.5;
  }
}

double ScaledGammaQuantile::exact(double alpha) const {
  return alpha / inv_reg_upper_gamma(alpha, p_, Tolerance{1e-15, 1e-15, 400});
}

double ScaledGammaQuantile::operator()(double alpha) const {
  if (!(alpha >= kMinAlpha && alpha <= kMaxAlpha)) return exact(alpha);
  const double s = 1.0 / std::sqrt(alpha);
  const int panel = std::min(kPanels - 1, static_cast<int>((s - s_lo_) / panel_width_));
  const double left = s_lo_ + panel * panel_width_;
  const double t = 2.0 * (s - left) / panel_width_ - 1.0;
  const double* c = &coeffs_[static_cast<std::size_t>(panel) * kTerms];
  // Clenshaw
  double b1 = 0.0;
  double b2 = 0.0;
  for (int j = kTerms - 1; j >= 1; --j) {
    const double b0 = 2.0 * t * b1 - b2 + c[j];
    b2 = b1;
    b1 = b0;
  }
  return std::exp(t * b1 - b2 + c[0]);
}

GaussLegendre::GaussLegendre(int points) : nodes_(points), weights_(points) {
  if (points < 1) throw DomainError("GaussLegendre: need at least one point");
  const int n = points;
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes_[i] = -z;
    nodes_[n - 1 - i] = z;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
}

const GaussLegendre& gauss_legendre(int points) {
  static const std::array<GaussLegendre, 5> rules{GaussLegendre(8), GaussLegendre(16), GaussLegendre(32),
                                                 GaussLegendre(64), GaussLegendre(128)};
  for (const auto& rule : rules)
    if (rule.size() == points) return rule;
  throw DomainError("gauss_legendre: supported sizes are 8, 16, 32, 64, 128");
}

}  // namespace irsplan
