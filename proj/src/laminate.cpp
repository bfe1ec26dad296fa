#include "vsuq/laminate.hpp"

#include <cmath>
#include <sstream>

#include "vsuq/error.hpp"
#include "vsuq/numerics.hpp"

namespace vsuq {

void MaterialProps::validate() const {
  if (!(E_L > 0 && E_T > 0 && G_LT > 0 && G_TN > 0 && G_LN > 0)) {
    throw DomainError("material moduli must be positive");
  }
  if (!(1.0 - nu_LT * nu_TL() > 0.0)) throw DomainError("material Poisson ratios are not admissible");
}

MaterialProps MaterialProps::scaled(double f) const {
  MaterialProps m = *this;
  m.E_L *= f;
  m.E_T *= f;
  m.G_LT *= f;
  m.G_TN *= f;
  m.G_LN *= f;
  return m;
}

PathFunction::PathFunction(PathKind k, std::vector<double> coeffs) : kind(k), a(std::move(coeffs)) {
  const std::size_t want = (k == PathKind::Quadratic) ? 4 : 8;
  if (a.size() != want) {
    throw ConfigError("path function needs " + std::to_string(want) + " coefficients, got " +
                      std::to_string(a.size()));
  }
}

double PathFunction::value(double x, double y) const {
  double z = x + a[0] * y + a[1] * x * y + a[2] * x * x + a[3] * y * y;
  if (kind == PathKind::Cubic) {
    z += a[4] * x * x * y + a[5] * x * y * y + a[6] * x * x * x + a[7] * y * y * y;
  }
  return z;
}

std::array<double, 2> PathFunction::gradient(double x, double y) const {
  double gx = 1.0 + a[1] * y + 2.0 * a[2] * x;
  double gy = a[0] + a[1] * x + 2.0 * a[3] * y;
  if (kind == PathKind::Cubic) {
    gx += 2.0 * a[4] * x * y + a[5] * y * y + 3.0 * a[6] * x * x;
    gy += a[4] * x * x + 2.0 * a[5] * x * y + 3.0 * a[7] * y * y;
  }
  return {gx, gy};
}

double fiber_angle_from_gradient(double gx, double gy) {
  if (std::hypot(gx, gy) < 1e-12) throw NumericalError("degenerate fiber path: vanishing gradient");
  double t = std::atan2(-gx, gy);
  // Fibers are undirected: fold into (-pi/2, pi/2].
  if (t <= -num::kPi / 2) t += num::kPi;
  if (t > num::kPi / 2) t -= num::kPi;
  return t;
}

double fiber_angle(const PathFunction& path, double x, double y) {
  const auto g = path.gradient(x, y);
  try {
    return fiber_angle_from_gradient(g[0], g[1]);
  } catch (const NumericalError&) {
    std::ostringstream os;
    os << "degenerate fiber path at (" << x << ", " << y << ")";
    throw NumericalError(os.str());
  }
}

PlyStack::PlyStack(std::vector<Ply> plies) : plies_(std::move(plies)) {
  if (plies_.empty()) throw ConfigError("ply stack is empty");
  double total = 0.0;
  for (const auto& p : plies_) {
    if (!(p.thickness > 0.0)) throw ConfigError("ply thickness must be positive");
    total += p.thickness;
  }
  z_.push_back(-0.5 * total);
  for (const auto& p : plies_) z_.push_back(z_.back() + p.thickness);
}

bool PlyStack::symmetric_thickness() const {
  const std::size_t n = plies_.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    if (plies_[i].thickness != plies_[n - 1 - i].thickness) return false;
  }
  return true;
}

PlyStack PlyStack::scaled_thickness(double factor) const {
  std::vector<Ply> p = plies_;
  for (auto& ply : p) ply.thickness *= factor;
  return PlyStack(std::move(p));
}

Eigen::Matrix3d reduced_stiffness(const MaterialProps& mat) {
  const double den = 1.0 - mat.nu_LT * mat.nu_TL();
  Eigen::Matrix3d q = Eigen::Matrix3d::Zero();
  q(0, 0) = mat.E_L / den;
  q(1, 1) = mat.E_T / den;
  q(0, 1) = q(1, 0) = mat.nu_LT * mat.E_T / den;
  q(2, 2) = mat.G_LT;
  return q;
}

Eigen::Matrix3d strain_rotation(double t) {
  const double c = std::cos(t), s = std::sin(t);
  Eigen::Matrix3d T;
  T << c * c, s * s, c * s,
       s * s, c * c, -c * s,
       -2 * c * s, 2 * c * s, c * c - s * s;
  return T;
}

Eigen::Matrix2d shear_rotation(double t) {
  const double c = std::cos(t), s = std::sin(t);
  // [gamma_23, gamma_13] from [gamma_yz, gamma_xz].
  Eigen::Matrix2d T;
  T << c, -s,
       s, c;
  return T;
}

PlyConstitutive ply_constitutive(const MaterialProps& mat, double theta) {
  const Eigen::Matrix3d Q = reduced_stiffness(mat);
  const Eigen::Matrix3d T = strain_rotation(theta);
  const Eigen::Matrix2d Ts = shear_rotation(theta);
  Eigen::Matrix2d Ds = Eigen::Matrix2d::Zero();
  Ds(0, 0) = mat.G_TN;
  Ds(1, 1) = mat.G_LN;
  PlyConstitutive out;
  out.membrane = T.transpose() * Q * T;
  out.bending = out.membrane;
  out.shear = Ts.transpose() * Ds * Ts;
  return out;
}

}  // namespace vsuq
