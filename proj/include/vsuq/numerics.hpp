#pragma once

#include <functional>
#include <vector>

namespace vsuq::num {

inline constexpr double kPi = 3.14159265358979323846;

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points on [-1, 1]. Cached per n; thread-safe.
const QuadratureRule& gauss_legendre(int n);

/// Maps a Gauss-Legendre rule onto [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 50);

/// Brent's method on a sign-changing bracket [a, b].
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol = 1e-14, int max_iter = 300);

double normal_pdf(double z);
double normal_cdf(double z);
/// Wichura's AS241 (PPND16); relative accuracy about 1e-16.
double normal_quantile(double p);

/// Bivariate standard normal CDF P(X <= h, Y <= k) with correlation rho (Genz BVND).
double bivariate_normal_cdf(double h, double k, double rho);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

double digamma(double x);
double trigamma(double x);

}  // namespace vsuq::num
