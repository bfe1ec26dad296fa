#include "vsuq/marginal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "vsuq/error.hpp"
#include "vsuq/numerics.hpp"
#include "vsuq/stats.hpp"

namespace vsuq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double gamma_quantile(double shape, double scale, double p) {
  // Wilson-Hilferty start, then safeguarded Newton inside a bracket.
  const double z = num::normal_quantile(p);
  const double c = 1.0 / (9.0 * shape);
  double x = shape * std::pow(std::max(1.0 - c + z * std::sqrt(c), 1e-3), 3.0);
  double lo = 0.0, hi = std::max(2.0 * x, shape + 10.0 * std::sqrt(shape) + 10.0);
  while (num::gamma_p(shape, hi) < p) hi *= 2.0;
  x = std::clamp(x, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double f = num::gamma_p(shape, x) - p;
    if (f == 0.0) break;
    if (f < 0.0) lo = x; else hi = x;
    const double dens = std::exp((shape - 1.0) * std::log(x) - x - std::lgamma(shape));
    double next = (dens > 0.0 && std::isfinite(dens)) ? x - f / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, x)) {
      x = next;
      break;
    }
    x = next;
  }
  return x * scale;
}

}  // namespace

std::string_view to_string(MarginalFamily family) {
  switch (family) {
    case MarginalFamily::Gauss: return "Gauss";
    case MarginalFamily::Gamma: return "Gamma";
    case MarginalFamily::Lognormal: return "Lognormal";
    case MarginalFamily::Uniform: return "Uniform";
  }
  return "?";
}

MarginalFamily marginal_family_from_string(std::string_view name) {
  const std::string key = lower(name);
  if (key == "gauss" || key == "gaussian" || key == "normal") return MarginalFamily::Gauss;
  if (key == "gamma" || key == "gama") return MarginalFamily::Gamma;
  if (key == "lognormal") return MarginalFamily::Lognormal;
  if (key == "uniform") return MarginalFamily::Uniform;
  throw ConfigError("unknown marginal family '" + std::string(name) + "'");
}

int parameter_count(MarginalFamily) { return 2; }

bool valid_parameters(MarginalFamily family, std::span<const double> p) {
  if (p.size() != 2 || !std::isfinite(p[0]) || !std::isfinite(p[1])) return false;
  switch (family) {
    case MarginalFamily::Gauss:
    case MarginalFamily::Lognormal: return p[1] > 0.0;
    case MarginalFamily::Gamma: return p[0] > 0.0 && p[1] > 0.0;
    case MarginalFamily::Uniform: return p[0] < p[1];
  }
  return false;
}

MarginalModel::MarginalModel(MarginalFamily family, std::vector<double> params)
    : family_(family), params_(std::move(params)) {
  if (!valid_parameters(family_, params_)) {
    throw DomainError("invalid parameters for " + std::string(to_string(family_)) + " marginal");
  }
}

std::string MarginalModel::describe() const {
  std::ostringstream os;
  os << to_string(family_) << "(" << params_[0] << ", " << params_[1] << ")";
  return os.str();
}

double MarginalModel::log_pdf(double x) const {
  const double a = params_[0], b = params_[1];
  switch (family_) {
    case MarginalFamily::Gauss: {
      const double z = (x - a) / b;
      return -0.5 * z * z - std::log(b) - kLogSqrt2Pi;
    }
    case MarginalFamily::Lognormal: {
      if (x <= 0.0) return -kInf;
      const double lx = std::log(x);
      const double z = (lx - a) / b;
      return -0.5 * z * z - std::log(b) - kLogSqrt2Pi - lx;
    }
    case MarginalFamily::Gamma: {
      if (x < 0.0) return -kInf;
      if (x == 0.0) return a == 1.0 ? -std::log(b) : (a < 1.0 ? kInf : -kInf);
      return (a - 1.0) * std::log(x) - x / b - std::lgamma(a) - a * std::log(b);
    }
    case MarginalFamily::Uniform:
      if (x < a || x > b) return -kInf;
      return -std::log(b - a);
  }
  return -kInf;
}

double MarginalModel::pdf(double x) const { return std::exp(log_pdf(x)); }

double MarginalModel::cdf(double x) const {
  const double a = params_[0], b = params_[1];
  switch (family_) {
    case MarginalFamily::Gauss: return num::normal_cdf((x - a) / b);
    case MarginalFamily::Lognormal:
      if (x <= 0.0) return 0.0;
      return num::normal_cdf((std::log(x) - a) / b);
    case MarginalFamily::Gamma:
      if (x <= 0.0) return 0.0;
      return num::gamma_p(a, x / b);
    case MarginalFamily::Uniform:
      if (x <= a) return 0.0;
      if (x >= b) return 1.0;
      return (x - a) / (b - a);
  }
  return 0.0;
}

double MarginalModel::quantile(double p) const {
  const double a = params_[0], b = params_[1];
  if (std::isnan(p)) return p;
  p = std::clamp(p, 0.0, 1.0);
  switch (family_) {
    case MarginalFamily::Gauss:
      if (p == 0.0) return -kInf;
      if (p == 1.0) return kInf;
      return a + b * num::normal_quantile(p);
    case MarginalFamily::Lognormal:
      if (p == 0.0) return 0.0;
      if (p == 1.0) return kInf;
      return std::exp(a + b * num::normal_quantile(p));
    case MarginalFamily::Gamma:
      if (p == 0.0) return 0.0;
      if (p == 1.0) return kInf;
      return gamma_quantile(a, b, p);
    case MarginalFamily::Uniform: return a + p * (b - a);
  }
  return 0.0;
}

double MarginalModel::mean() const {
  const double a = params_[0], b = params_[1];
  switch (family_) {
    case MarginalFamily::Gauss: return a;
    case MarginalFamily::Lognormal: return std::exp(a + 0.5 * b * b);
    case MarginalFamily::Gamma: return a * b;
    case MarginalFamily::Uniform: return 0.5 * (a + b);
  }
  return 0.0;
}

double MarginalModel::stddev() const {
  const double a = params_[0], b = params_[1];
  switch (family_) {
    case MarginalFamily::Gauss: return b;
    case MarginalFamily::Lognormal: return std::sqrt(std::expm1(b * b) * std::exp(2.0 * a + b * b));
    case MarginalFamily::Gamma: return std::sqrt(a) * b;
    case MarginalFamily::Uniform: return (b - a) / std::sqrt(12.0);
  }
  return 0.0;
}

bool supports_data(MarginalFamily family, std::span<const double> data) {
  for (double x : data) {
    if (!std::isfinite(x)) return false;
    if ((family == MarginalFamily::Gamma || family == MarginalFamily::Lognormal) && x <= 0.0) {
      return false;
    }
  }
  return true;
}

double ParameterBox::measure() const {
  double m = 1.0;
  for (const auto& d : dims) m *= d.length();
  return m;
}

bool ParameterBox::valid() const {
  if (dims.empty()) return false;
  return std::all_of(dims.begin(), dims.end(), [](const Interval& d) {
    return std::isfinite(d.lo) && std::isfinite(d.hi) && d.lo < d.hi;
  });
}

std::vector<double> moment_estimate(MarginalFamily family, std::span<const double> data) {
  if (data.size() < 2) throw ConfigError("moment_estimate needs at least two observations");
  if (!supports_data(family, data)) {
    throw ConfigError("data outside the support of the " + std::string(to_string(family)) +
                      " family");
  }
  switch (family) {
    case MarginalFamily::Gauss:
      return {stats::mean(data), std::sqrt(stats::variance(data))};
    case MarginalFamily::Lognormal: {
      std::vector<double> logs(data.size());
      std::transform(data.begin(), data.end(), logs.begin(), [](double x) { return std::log(x); });
      return {stats::mean(logs), std::sqrt(stats::variance(logs))};
    }
    case MarginalFamily::Gamma: {
      const double m = stats::mean(data), v = stats::variance(data);
      return {m * m / v, v / m};
    }
    case MarginalFamily::Uniform: {
      const auto [mn, mx] = std::minmax_element(data.begin(), data.end());
      const double n = static_cast<double>(data.size());
      const double pad = (*mx - *mn) / (n - 1.0);
      return {*mn - pad, *mx + pad};
    }
  }
  return {};
}

ParameterBox default_box(MarginalFamily family, std::span<const double> data) {
  const std::vector<double> est = moment_estimate(family, data);
  const double n = static_cast<double>(data.size());
  ParameterBox box;
  switch (family) {
    case MarginalFamily::Gauss:
    case MarginalFamily::Lognormal: {
      const double se_loc = est[1] / std::sqrt(n);
      const double se_scale = est[1] / std::sqrt(2.0 * n);
      box.dims.push_back({est[0] - 3.0 * se_loc, est[0] + 3.0 * se_loc});
      box.dims.push_back({std::max(est[1] - 3.0 * se_scale, 1e-3 * est[1]), est[1] + 3.0 * se_scale});
      break;
    }
    case MarginalFamily::Gamma: {
      const double k = est[0], s = est[1];
      const double det = k * num::trigamma(k) - 1.0;
      const double se_k = std::sqrt(k / (n * det));
      const double se_s = std::sqrt(num::trigamma(k) * s * s / (n * det));
      box.dims.push_back({std::max(k - 3.0 * se_k, 1e-3 * k), k + 3.0 * se_k});
      box.dims.push_back({std::max(s - 3.0 * se_s, 1e-3 * s), s + 3.0 * se_s});
      break;
    }
    case MarginalFamily::Uniform: {
      const double se = (est[1] - est[0]) / n;
      box.dims.push_back({est[0] - 3.0 * se, est[0] + 3.0 * se});
      box.dims.push_back({est[1] - 3.0 * se, est[1] + 3.0 * se});
      break;
    }
  }
  if (!box.valid()) throw ConfigError("degenerate parameter box (constant data?)");
  return box;
}

}  // namespace vsuq
