#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vsuq {

enum class MarginalFamily { Gauss, Gamma, Lognormal, Uniform };

std::string_view to_string(MarginalFamily family);
MarginalFamily marginal_family_from_string(std::string_view name);

/// Number of parameters of a family (all current families have two).
int parameter_count(MarginalFamily family);

/// Univariate distribution with parameter vector:
///   Gauss: (mean, std)  Gamma: (shape, scale)
///   Lognormal: (log-mean, log-std)  Uniform: (lower, upper)
class MarginalModel {
 public:
  /// Throws DomainError for invalid parameters.
  MarginalModel(MarginalFamily family, std::vector<double> params);

  static MarginalModel gauss(double mean, double sd) { return {MarginalFamily::Gauss, {mean, sd}}; }
  static MarginalModel uniform(double lo, double hi) { return {MarginalFamily::Uniform, {lo, hi}}; }

  MarginalFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  /// p = 0 and p = 1 map to the support boundary (possibly +-infinity).
  double quantile(double p) const;

  double mean() const;
  double stddev() const;

  std::string describe() const;

 private:
  MarginalFamily family_;
  std::vector<double> params_;
};

/// Parameter validation without constructing a model (used in quadrature loops).
bool valid_parameters(MarginalFamily family, std::span<const double> params);

/// True when every observation lies in the family's support.
bool supports_data(MarginalFamily family, std::span<const double> data);

struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
};

/// Axis-aligned parameter box; the prior is uniform on it.
struct ParameterBox {
  std::vector<Interval> dims;
  /// Product of the side lengths (Lebesgue measure).
  double measure() const;
  bool valid() const;
};

/// Moment-matched point estimate of the family's parameters.
std::vector<double> moment_estimate(MarginalFamily family, std::span<const double> data);

/// Point estimate widened to +-3 estimated standard errors, intersected with the
/// family's positivity constraints. Throws ConfigError if the data are outside
/// the family's support.
ParameterBox default_box(MarginalFamily family, std::span<const double> data);

}  // namespace vsuq
