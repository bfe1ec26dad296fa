#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vsuq {

/// Orthotropic ply material.
struct MaterialProps {
  double E_L = 137.9;
  double E_T = 10.34;
  double nu_LT = 0.29;
  double G_LT = 6.89;
  double G_TN = 3.9;
  double G_LN = 6.89;

  double nu_TL() const { return nu_LT * E_T / E_L; }
  /// Throws DomainError unless every modulus is positive and the plane-stress
  /// reduction is positive definite.
  void validate() const;
  MaterialProps scaled(double factor) const;
};

enum class PathKind { Quadratic, Cubic };

/// Level-set fiber path z(x, y) = x + a1 y + a2 xy + a3 x^2 + a4 y^2
/// (+ a5 x^2 y + a6 x y^2 + a7 x^3 + a8 y^3 for cubic paths).
struct PathFunction {
  PathKind kind = PathKind::Quadratic;
  std::vector<double> a;

  PathFunction() : a(4, 0.0) {}
  PathFunction(PathKind k, std::vector<double> coeffs);

  double value(double x, double y) const;
  /// Analytic gradient (dz/dx, dz/dy).
  std::array<double, 2> gradient(double x, double y) const;
};

/// Fiber direction along the level curve through (x, y): atan2(-z_x, z_y),
/// reduced into (-pi/2, pi/2]. Throws NumericalError for a vanishing gradient.
double fiber_angle(const PathFunction& path, double x, double y);
double fiber_angle_from_gradient(double gx, double gy);

struct Ply {
  double thickness = 0.0;
  PathFunction path;
};

/// Plies listed bottom to top; z measured from the mid-plane.
class PlyStack {
 public:
  PlyStack() = default;
  explicit PlyStack(std::vector<Ply> plies);

  std::size_t size() const { return plies_.size(); }
  const Ply& ply(std::size_t i) const { return plies_[i]; }
  double z_bottom(std::size_t i) const { return z_[i]; }
  double z_top(std::size_t i) const { return z_[i + 1]; }
  double total_thickness() const { return z_.back() - z_.front(); }
  /// True when thicknesses mirror about the mid-plane.
  bool symmetric_thickness() const;
  PlyStack scaled_thickness(double factor) const;

 private:
  std::vector<Ply> plies_;
  std::vector<double> z_;
};

/// Transformed ply stiffness for a local fiber angle. Strain vectors are
/// [eps_x, eps_y, gamma_xy] and [gamma_yz, gamma_xz].
struct PlyConstitutive {
  Eigen::Matrix3d membrane;
  Eigen::Matrix3d bending;
  Eigen::Matrix2d shear;
};

Eigen::Matrix3d reduced_stiffness(const MaterialProps& mat);
Eigen::Matrix3d strain_rotation(double theta);
Eigen::Matrix2d shear_rotation(double theta);
PlyConstitutive ply_constitutive(const MaterialProps& mat, double theta_local);

}  // namespace vsuq
