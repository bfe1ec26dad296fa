#include "vsuq/copula.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "vsuq/error.hpp"
#include "vsuq/numerics.hpp"

namespace vsuq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double clamp_unit(double x) {
  return std::clamp(x, BivariateCopula::kClamp, 1.0 - BivariateCopula::kClamp);
}

// log(a^-theta + b^-theta - 1) for Clayton, without overflow.
double clayton_log_sum(double u, double v, double theta) {
  const double lu = -theta * std::log(u);
  const double lv = -theta * std::log(v);
  const double m = std::max(lu, lv);
  return m + std::log(std::exp(lu - m) + std::exp(lv - m) - std::exp(-m));
}

double amh_tau(double t) {
  if (std::abs(t) < 1e-3) return 2.0 * t / 9.0 + t * t / 18.0;
  if (t == 1.0) return 1.0 / 3.0;
  const double one_minus = 1.0 - t;
  return 1.0 - 2.0 * (one_minus * one_minus * std::log(one_minus) + t) / (3.0 * t * t);
}

double joe_tau(double t) {
  if (t == 1.0) return 0.0;
  constexpr int kTerms = 100000;
  double sum = 0.0;
  for (int k = kTerms; k >= 1; --k) {
    sum += 1.0 / (k * (t * k + 2.0) * (t * (k - 1.0) + 2.0));
  }
  // Tail beyond kTerms behaves like 1 / (t^2 k^3).
  sum += 1.0 / (2.0 * t * t * double(kTerms) * double(kTerms));
  return 1.0 - 4.0 * sum;
}

double frank_tau(double t) {
  if (std::abs(t) < 1e-2) return t / 9.0 - t * t * t / 900.0;
  return 1.0 - 4.0 / t * (1.0 - debye1(t));
}

}  // namespace

std::string_view to_string(CopulaFamily family) {
  switch (family) {
    case CopulaFamily::Clayton: return "Clayton";
    case CopulaFamily::AMH: return "AMH";
    case CopulaFamily::Gumbel: return "Gumbel";
    case CopulaFamily::Frank: return "Frank";
    case CopulaFamily::Gauss: return "Gauss";
    case CopulaFamily::Joe: return "Joe";
    case CopulaFamily::FGM: return "FGM";
    case CopulaFamily::Independence: return "Independence";
  }
  return "?";
}

const std::vector<CopulaFamily>& all_copula_families() {
  static const std::vector<CopulaFamily> all{
      CopulaFamily::Clayton, CopulaFamily::AMH, CopulaFamily::Gumbel, CopulaFamily::Frank,
      CopulaFamily::Gauss,   CopulaFamily::Joe, CopulaFamily::FGM,    CopulaFamily::Independence};
  return all;
}

CopulaFamily copula_family_from_string(std::string_view name) {
  const std::string key = lower(name);
  for (auto f : all_copula_families()) {
    if (lower(to_string(f)) == key) return f;
  }
  if (key == "gaussian" || key == "normal") return CopulaFamily::Gauss;
  throw ConfigError("unknown copula family '" + std::string(name) + "'");
}

bool ParameterInterval::contains(double x) const {
  if (!std::isfinite(x)) return false;
  const bool lo_ok = lo_closed ? x >= lo : x > lo;
  const bool hi_ok = hi_closed ? x <= hi : x < hi;
  return lo_ok && hi_ok;
}

std::string ParameterInterval::describe() const {
  std::ostringstream os;
  os << (lo_closed ? '[' : '(') << lo << ", " << hi << (hi_closed ? ']' : ')');
  return os.str();
}

ParameterInterval admissible_interval(CopulaFamily family) {
  switch (family) {
    case CopulaFamily::Clayton: return {0.0, kInf, false, false};
    case CopulaFamily::AMH: return {-1.0, 1.0, true, false};
    case CopulaFamily::Gumbel: return {1.0, kInf, true, false};
    case CopulaFamily::Frank: return {-kInf, kInf, false, false};
    case CopulaFamily::Gauss: return {-1.0, 1.0, false, false};
    case CopulaFamily::Joe: return {1.0, kInf, true, false};
    case CopulaFamily::FGM: return {-1.0, 1.0, true, true};
    case CopulaFamily::Independence: return {0.0, 0.0, true, true};
  }
  return {0.0, 0.0, true, true};
}

TauRange attainable_tau(CopulaFamily family) {
  switch (family) {
    case CopulaFamily::Clayton: return {0.0, 1.0};
    case CopulaFamily::AMH: return {amh_tau(-1.0), 1.0 / 3.0};
    case CopulaFamily::Gumbel: return {0.0, 1.0};
    case CopulaFamily::Frank: return {-1.0, 1.0};
    case CopulaFamily::Gauss: return {-1.0, 1.0};
    case CopulaFamily::Joe: return {0.0, 1.0};
    case CopulaFamily::FGM: return {-2.0 / 9.0, 2.0 / 9.0};
    case CopulaFamily::Independence: return {0.0, 0.0};
  }
  return {0.0, 0.0};
}

BivariateCopula::BivariateCopula(CopulaFamily family, double theta)
    : family_(family), kernel_(family), theta_(theta) {
  const bool near_zero_ok = (family == CopulaFamily::Frank || family == CopulaFamily::Clayton) &&
                            std::abs(theta) < kIndependenceThreshold;
  if (near_zero_ok) {
    if (family == CopulaFamily::Clayton && theta < 0.0) {
      throw DomainError("Clayton parameter " + std::to_string(theta) + " outside " +
                        admissible_interval(family).describe());
    }
    kernel_ = CopulaFamily::Independence;
    return;
  }
  if (family == CopulaFamily::Independence) {
    theta_ = 0.0;
    return;
  }
  const auto iv = admissible_interval(family);
  if (!iv.contains(theta)) {
    std::ostringstream os;
    os << std::string(to_string(family)) << " parameter " << theta << " outside admissible interval "
       << iv.describe();
    throw DomainError(os.str());
  }
  if (family == CopulaFamily::Gumbel && theta == 1.0) kernel_ = CopulaFamily::Independence;
  if (family == CopulaFamily::Joe && theta == 1.0) kernel_ = CopulaFamily::Independence;
  if ((family == CopulaFamily::AMH || family == CopulaFamily::FGM || family == CopulaFamily::Gauss) &&
      theta == 0.0) {
    kernel_ = CopulaFamily::Independence;
  }
}

BivariateCopula BivariateCopula::from_tau(CopulaFamily family, double tau) {
  return BivariateCopula(family, theta_from_tau(family, tau));
}

std::string BivariateCopula::describe() const {
  std::ostringstream os;
  os << to_string(family_) << "(theta=" << theta_ << ")";
  return os.str();
}

double BivariateCopula::cdf(double u, double v) const {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0) return std::min(v, 1.0);
  if (v >= 1.0) return u;
  const double t = theta_;
  double c = u * v;
  switch (kernel_) {
    case CopulaFamily::Independence: break;
    case CopulaFamily::Clayton:
      c = std::exp(-clayton_log_sum(u, v, t) / t);
      break;
    case CopulaFamily::Frank: {
      // Radially symmetric; evaluate in the lower corner to avoid cancellation near (1, 1).
      const bool flip = u + v > 1.0;
      const double uu = flip ? 1.0 - u : u, vv = flip ? 1.0 - v : v;
      const double a = std::expm1(-t * uu);
      const double b = std::expm1(-t * vv);
      const double big = std::expm1(-t);
      c = -std::log1p(a * b / big) / t;
      if (flip) c += u + v - 1.0;
      break;
    }
    case CopulaFamily::Gumbel: {
      const double x = -std::log(u), y = -std::log(v);
      const double s = std::pow(x, t) + std::pow(y, t);
      c = std::exp(-std::pow(s, 1.0 / t));
      break;
    }
    case CopulaFamily::Joe: {
      const double p = std::pow(1.0 - u, t), q = std::pow(1.0 - v, t);
      c = 1.0 - std::pow(p + q - p * q, 1.0 / t);
      break;
    }
    case CopulaFamily::AMH:
      c = u * v / (1.0 - t * (1.0 - u) * (1.0 - v));
      break;
    case CopulaFamily::FGM:
      c = u * v * (1.0 + t * (1.0 - u) * (1.0 - v));
      break;
    case CopulaFamily::Gauss:
      c = num::bivariate_normal_cdf(num::normal_quantile(u), num::normal_quantile(v), t);
      break;
  }
  return std::clamp(c, 0.0, std::min(u, v));
}

double BivariateCopula::log_density(double u, double v) const {
  u = clamp_unit(u);
  v = clamp_unit(v);
  const double t = theta_;
  switch (kernel_) {
    case CopulaFamily::Independence: return 0.0;
    case CopulaFamily::Clayton:
      return std::log1p(t) - (t + 1.0) * (std::log(u) + std::log(v)) -
             (1.0 / t + 2.0) * clayton_log_sum(u, v, t);
    case CopulaFamily::Frank: {
      const double a = std::expm1(-t * u);
      const double b = std::expm1(-t * v);
      const double big = std::expm1(-t);
      return std::log(t * -big) - t * (u + v) - 2.0 * std::log(std::abs(big + a * b));
    }
    case CopulaFamily::Gumbel: {
      const double lx = std::log(-std::log(u)), ly = std::log(-std::log(v));
      const double xt = std::exp(t * lx), yt = std::exp(t * ly);
      const double s = xt + yt;
      const double s_root = std::pow(s, 1.0 / t);
      return -s_root - std::log(u) - std::log(v) + (t - 1.0) * (lx + ly) -
             (2.0 - 1.0 / t) * std::log(s) + std::log(s_root + t - 1.0);
    }
    case CopulaFamily::Joe: {
      const double lub = std::log1p(-u), lvb = std::log1p(-v);
      const double p = std::exp(t * lub), q = std::exp(t * lvb);
      const double s = p + q - p * q;
      return (1.0 / t - 2.0) * std::log(s) + (t - 1.0) * (lub + lvb) + std::log(t - 1.0 + s);
    }
    case CopulaFamily::AMH: {
      const double d = 1.0 - t * (1.0 - u) * (1.0 - v);
      const double num = 1.0 + t * ((1.0 + u) * (1.0 + v) - 3.0) + t * t * (1.0 - u) * (1.0 - v);
      return std::log(num) - 3.0 * std::log(d);
    }
    case CopulaFamily::FGM:
      return std::log1p(t * (1.0 - 2.0 * u) * (1.0 - 2.0 * v));
    case CopulaFamily::Gauss: {
      const double x = num::normal_quantile(u), y = num::normal_quantile(v);
      const double r2 = t * t;
      return -0.5 * std::log1p(-r2) - (r2 * (x * x + y * y) - 2.0 * t * x * y) / (2.0 * (1.0 - r2));
    }
  }
  return 0.0;
}

double BivariateCopula::density(double u, double v) const { return std::exp(log_density(u, v)); }

double BivariateCopula::h(double x, double v) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  v = clamp_unit(v);
  const double t = theta_;
  double r = x;
  switch (kernel_) {
    case CopulaFamily::Independence: break;
    case CopulaFamily::Clayton: {
      const double w = std::exp(t * std::log(v)) * std::expm1(-t * std::log(x));
      r = std::exp(-(1.0 + 1.0 / t) * std::log1p(w));
      break;
    }
    case CopulaFamily::Frank: {
      const bool flip = x + v > 1.0;
      const double xx = flip ? 1.0 - x : x, vv = flip ? 1.0 - v : v;
      const double a = std::expm1(-t * xx);
      const double b = std::expm1(-t * vv);
      const double big = std::expm1(-t);
      r = (b + 1.0) * a / (big + a * b);
      if (flip) r = 1.0 - r;
      break;
    }
    case CopulaFamily::Gumbel: {
      const double lx = std::log(-std::log(x)), ly = std::log(-std::log(v));
      const double s = std::exp(t * lx) + std::exp(t * ly);
      const double log_c = -std::pow(s, 1.0 / t);
      r = std::exp(log_c + (1.0 / t - 1.0) * std::log(s) + (t - 1.0) * ly - std::log(v));
      break;
    }
    case CopulaFamily::Joe: {
      const double p = std::pow(1.0 - x, t);
      const double lvb = std::log1p(-v);
      const double q = std::exp(t * lvb);
      const double s = p + q - p * q;
      r = std::exp((1.0 / t - 1.0) * std::log(s) + (t - 1.0) * lvb) * (1.0 - p);
      break;
    }
    case CopulaFamily::AMH: {
      const double d = 1.0 - t * (1.0 - x) * (1.0 - v);
      r = x * (1.0 - t * (1.0 - x)) / (d * d);
      break;
    }
    case CopulaFamily::FGM:
      r = x * (1.0 + t * (1.0 - x) * (1.0 - 2.0 * v));
      break;
    case CopulaFamily::Gauss: {
      const double z = (num::normal_quantile(x) - t * num::normal_quantile(v)) / std::sqrt(1.0 - t * t);
      r = num::normal_cdf(z);
      break;
    }
  }
  return std::clamp(r, 0.0, 1.0);
}

double BivariateCopula::h_inverse(double p, double v) const {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  if (kernel_ == CopulaFamily::Independence) return p;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid, v) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  double resid = h(x, v) - p;
  for (int step = 0; step < 2; ++step) {
    const double slope = density(x, v);
    if (!(slope > 0.0) || !std::isfinite(slope)) break;
    const double cand = x - resid / slope;
    if (!(cand > 0.0 && cand < 1.0)) break;
    const double cand_resid = h(cand, v) - p;
    if (std::abs(cand_resid) >= std::abs(resid)) break;
    x = cand;
    resid = cand_resid;
  }
  if (std::abs(resid) > 1e-6) {
    std::ostringstream os;
    os << "h_inverse did not converge for " << describe() << ": p=" << p << " v=" << v
       << " x=" << x << " residual=" << resid;
    throw ConvergenceError(os.str());
  }
  return x;
}

double debye1(double x) {
  if (x == 0.0) return 1.0;
  auto integrand = [](double t) { return t == 0.0 ? 1.0 : t / std::expm1(t); };
  return num::adaptive_simpson(integrand, 0.0, x, 1e-10) / x;
}

double BivariateCopula::kendall_tau() const {
  const double t = theta_;
  switch (kernel_) {
    case CopulaFamily::Independence: return 0.0;
    case CopulaFamily::Clayton: return t / (t + 2.0);
    case CopulaFamily::Frank: return frank_tau(t);
    case CopulaFamily::Gumbel: return 1.0 - 1.0 / t;
    case CopulaFamily::Joe: return joe_tau(t);
    case CopulaFamily::AMH: return amh_tau(t);
    case CopulaFamily::FGM: return 2.0 * t / 9.0;
    case CopulaFamily::Gauss: return 2.0 / num::kPi * std::asin(t);
  }
  return 0.0;
}

double theta_from_tau(CopulaFamily family, double tau) {
  const TauRange range = attainable_tau(family);
  auto out_of_range = [&]() {
    std::ostringstream os;
    os << "Kendall tau " << tau << " not attainable by " << to_string(family)
       << " copula; attainable interval [" << range.lo << ", " << range.hi << "]";
    return RangeError(os.str());
  };
  if (!std::isfinite(tau)) throw out_of_range();
  switch (family) {
    case CopulaFamily::Independence:
      if (tau != 0.0) throw out_of_range();
      return 0.0;
    case CopulaFamily::Clayton:
      if (tau < 0.0 || tau >= 1.0) throw out_of_range();
      return 2.0 * tau / (1.0 - tau);
    case CopulaFamily::Gumbel:
      if (tau < 0.0 || tau >= 1.0) throw out_of_range();
      return 1.0 / (1.0 - tau);
    case CopulaFamily::Gauss:
      if (tau <= -1.0 || tau >= 1.0) throw out_of_range();
      return std::sin(num::kPi * tau / 2.0);
    case CopulaFamily::FGM:
      if (std::abs(tau) > 2.0 / 9.0) throw out_of_range();
      return std::clamp(4.5 * tau, -1.0, 1.0);
    case CopulaFamily::AMH: {
      if (tau < range.lo || tau >= range.hi) throw out_of_range();
      if (tau == 0.0) return 0.0;
      if (tau == range.lo) return -1.0;
      return num::brent_root([tau](double t) { return amh_tau(t) - tau; }, -1.0, 1.0 - 1e-12,
                             1e-15);
    }
    case CopulaFamily::Joe: {
      if (tau < 0.0 || tau >= 1.0) throw out_of_range();
      if (tau == 0.0) return 1.0;
      double hi = 2.0;
      while (joe_tau(hi) < tau) {
        hi *= 2.0;
        if (hi > 1e6) throw out_of_range();
      }
      return num::brent_root([tau](double t) { return joe_tau(t) - tau; }, 1.0, hi, 1e-13);
    }
    case CopulaFamily::Frank: {
      if (tau <= -1.0 || tau >= 1.0) throw out_of_range();
      if (std::abs(tau) < 1e-9) return 0.0;
      const double sign = tau > 0 ? 1.0 : -1.0;
      const double target = std::abs(tau);
      double hi = 1.0;
      while (frank_tau(hi) < target) {
        hi *= 2.0;
        if (hi > 700.0) throw out_of_range();
      }
      const double lo = 1e-12;
      return sign * num::brent_root([target](double t) { return frank_tau(t) - target; }, lo, hi,
                                    1e-13);
    }
  }
  throw out_of_range();
}

}  // namespace vsuq
