#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace vsuq {

enum class CopulaFamily { Clayton, AMH, Gumbel, Frank, Gauss, Joe, FGM, Independence };

std::string_view to_string(CopulaFamily family);
/// Case-insensitive; throws ConfigError for unknown names.
CopulaFamily copula_family_from_string(std::string_view name);
const std::vector<CopulaFamily>& all_copula_families();

/// Admissible parameter set of a family. Frank additionally excludes 0.
struct ParameterInterval {
  double lo;
  double hi;
  bool lo_closed;
  bool hi_closed;
  bool contains(double x) const;
  std::string describe() const;
};

ParameterInterval admissible_interval(CopulaFamily family);

/// Closed range of Kendall's tau reachable by the family (endpoints may be limits).
struct TauRange {
  double lo;
  double hi;
};
TauRange attainable_tau(CopulaFamily family);

/// One-parameter exchangeable bivariate copula.
///
/// All members are const and pure. Frank and Clayton parameters with
/// |theta| < 1e-6 evaluate as the independence copula.
class BivariateCopula {
 public:
  static constexpr double kClamp = 1e-12;
  static constexpr double kIndependenceThreshold = 1e-6;

  BivariateCopula() = default;
  /// Throws DomainError when theta is outside the family's admissible set.
  BivariateCopula(CopulaFamily family, double theta);

  /// Calibrates theta from Kendall's tau (see theta_from_tau).
  static BivariateCopula from_tau(CopulaFamily family, double tau);

  CopulaFamily family() const { return family_; }
  /// Family actually evaluated (Independence after near-zero dispatch).
  CopulaFamily kernel() const { return kernel_; }
  double theta() const { return theta_; }

  double cdf(double u, double v) const;
  double density(double u, double v) const;
  double log_density(double u, double v) const;

  /// Conditional CDF h(x | v) = dC(x, v)/dv.
  double h(double x, double v) const;

  /// Solves h(x | v) = p for x by bisection to width 1e-12 plus Newton polish.
  double h_inverse(double p, double v) const;

  double kendall_tau() const;

  std::string describe() const;

 private:
  CopulaFamily family_ = CopulaFamily::Independence;
  CopulaFamily kernel_ = CopulaFamily::Independence;
  double theta_ = 0.0;
};

/// Debye function D1(x) = (1/x) * integral_0^x t / (e^t - 1) dt.
double debye1(double x);

/// Inverts the family's monotone tau(theta) map. Throws RangeError when tau is
/// outside the attainable range. Returns 0 for Independence or a zero-tau
/// Frank/Clayton request.
double theta_from_tau(CopulaFamily family, double tau);

}  // namespace vsuq
