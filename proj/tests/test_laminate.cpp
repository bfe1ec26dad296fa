#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "vsuq/case_config.hpp"
#include "vsuq/error.hpp"
#include "vsuq/laminate.hpp"
#include "vsuq/mesh.hpp"
#include "vsuq/numerics.hpp"
#include "vsuq/rng.hpp"

using namespace vsuq;

TEST_SUITE("laminate") {
  TEST_CASE("fiber angle examples") {
    // z = x: level curves are vertical lines.
    CHECK(fiber_angle(PathFunction(), 0.3, 0.7) == doctest::Approx(num::kPi / 2).epsilon(1e-15));
    CHECK(fiber_angle(PathFunction(PathKind::Quadratic, {1, 0, 0, 0}), 0.2, 0.1) ==
          doctest::Approx(-num::kPi / 4).epsilon(1e-15));
    CHECK(fiber_angle(PathFunction(PathKind::Quadratic, {-1, 0, 0, 0}), 0.2, 0.1) ==
          doctest::Approx(num::kPi / 4).epsilon(1e-15));
    // Angle is tangent to the level set: grad z . (cos t, sin t) = 0.
    const PathFunction p(PathKind::Quadratic, hole_plate_coefficients()[2]);
    const auto g = p.gradient(0.4, 0.6);
    const double t = fiber_angle(p, 0.4, 0.6);
    CHECK(std::abs(g[0] * std::cos(t) + g[1] * std::sin(t)) < 1e-12 * std::hypot(g[0], g[1]));
    CHECK(t > -num::kPi / 2);
    CHECK(t <= num::kPi / 2);
    CHECK_THROWS_AS(fiber_angle_from_gradient(0.0, 0.0), NumericalError);
  }

  TEST_CASE("analytic path gradients match finite differences") {
    std::vector<PathFunction> paths;
    for (const auto& c : hole_plate_coefficients()) paths.emplace_back(PathKind::Quadratic, c);
    for (const auto& c : beam_coefficients()) paths.emplace_back(PathKind::Cubic, c);
    CounterStream rng(31, 0);
    for (const auto& p : paths) {
      for (int k = 0; k < 100; ++k) {
        const double x = rng.uniform(), y = rng.uniform(), h = 1e-6;
        const auto g = p.gradient(x, y);
        const double fx = (p.value(x + h, y) - p.value(x - h, y)) / (2 * h);
        const double fy = (p.value(x, y + h) - p.value(x, y - h)) / (2 * h);
        CHECK(std::abs(g[0] - fx) < 1e-7 * std::max(1.0, std::abs(fx)));
        CHECK(std::abs(g[1] - fy) < 1e-7 * std::max(1.0, std::abs(fy)));
      }
    }
    CHECK_THROWS_AS(PathFunction(PathKind::Cubic, {1, 2, 3, 4}), ConfigError);
  }

  TEST_CASE("transformed stiffness at 30 degrees matches the textbook expansion") {
    const MaterialProps mat;
    const Eigen::Matrix3d Q = reduced_stiffness(mat);
    const double t = num::kPi / 6, c = std::cos(t), s = std::sin(t);
    const double Q11 = Q(0, 0), Q12 = Q(0, 1), Q22 = Q(1, 1), Q66 = Q(2, 2);
    const double b11 = Q11 * std::pow(c, 4) + 2 * (Q12 + 2 * Q66) * s * s * c * c + Q22 * std::pow(s, 4);
    const double b22 = Q11 * std::pow(s, 4) + 2 * (Q12 + 2 * Q66) * s * s * c * c + Q22 * std::pow(c, 4);
    const double b12 = (Q11 + Q22 - 4 * Q66) * s * s * c * c + Q12 * (std::pow(s, 4) + std::pow(c, 4));
    const double b66 = (Q11 + Q22 - 2 * Q12 - 2 * Q66) * s * s * c * c + Q66 * (std::pow(s, 4) + std::pow(c, 4));
    const double b16 = (Q11 - Q12 - 2 * Q66) * s * std::pow(c, 3) + (Q12 - Q22 + 2 * Q66) * std::pow(s, 3) * c;
    const double b26 = (Q11 - Q12 - 2 * Q66) * std::pow(s, 3) * c + (Q12 - Q22 + 2 * Q66) * s * std::pow(c, 3);
    const Eigen::Matrix3d Qb = ply_constitutive(mat, t).membrane;
    const double tol = 1e-12 * Q11;
    CHECK(std::abs(Qb(0, 0) - b11) < tol);
    CHECK(std::abs(Qb(1, 1) - b22) < tol);
    CHECK(std::abs(Qb(0, 1) - b12) < tol);
    CHECK(std::abs(Qb(2, 2) - b66) < tol);
    CHECK(std::abs(Qb(0, 2) - b16) < tol);
    CHECK(std::abs(Qb(1, 2) - b26) < tol);
    CHECK((Qb - Qb.transpose()).cwiseAbs().maxCoeff() < tol);
  }

  TEST_CASE("reduced stiffness and transverse shear") {
    const MaterialProps mat;
    const Eigen::Matrix3d Q = reduced_stiffness(mat);
    const double den = 1 - mat.nu_LT * mat.nu_LT * mat.E_T / mat.E_L;
    CHECK(Q(0, 0) == doctest::Approx(mat.E_L / den).epsilon(1e-15));
    CHECK(Q(0, 1) == doctest::Approx(mat.nu_LT * mat.E_T / den).epsilon(1e-15));
    const PlyConstitutive c90 = ply_constitutive(mat, num::kPi / 2);
    CHECK(c90.shear(0, 0) == doctest::Approx(mat.G_LN).epsilon(1e-14));
    CHECK(c90.shear(1, 1) == doctest::Approx(mat.G_TN).epsilon(1e-14));
    CHECK(std::abs(c90.shear(0, 1)) < 1e-14);
    // Rotations preserve the determinant.
    for (double t : {0.1, 0.7, -1.2}) {
      CHECK(ply_constitutive(mat, t).membrane.determinant() == doctest::Approx(Q.determinant()).epsilon(1e-10));
    }
  }

  TEST_CASE("material validation") {
    CHECK_NOTHROW(MaterialProps{}.validate());
    MaterialProps bad;
    bad.G_TN = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    MaterialProps pois;
    pois.E_T = pois.E_L;
    pois.nu_LT = 1.5;
    CHECK_THROWS_AS(pois.validate(), DomainError);
    CHECK(MaterialProps{}.scaled(2.0).E_L == 2 * MaterialProps{}.E_L);
    CHECK(MaterialProps{}.scaled(2.0).nu_LT == MaterialProps{}.nu_LT);
  }

  TEST_CASE("ply stack coordinates") {
    const PlyStack st({{0.1, {}}, {0.2, {}}, {0.1, {}}});
    CHECK(st.total_thickness() == doctest::Approx(0.4));
    CHECK(st.z_bottom(0) == doctest::Approx(-0.2));
    CHECK(st.z_top(1) == doctest::Approx(0.1));
    CHECK(st.symmetric_thickness());
    CHECK(st.scaled_thickness(3).total_thickness() == doctest::Approx(1.2));
    CHECK_FALSE(PlyStack(std::vector<Ply>{{0.1, {}}, {0.2, {}}}).symmetric_thickness());
    CHECK_THROWS_AS(PlyStack(std::vector<Ply>{}), ConfigError);
    CHECK_THROWS_AS(PlyStack(std::vector<Ply>{{0.0, {}}}), ConfigError);
  }

  TEST_CASE("rectangle mesh") {
    const Mesh m = rectangle_mesh(4, 3, 2.0, 1.5);
    CHECK(m.node_count() == 20);
    CHECK(m.element_count() == 12);
    CHECK_NOTHROW(m.validate());
    const auto b = m.bounds();
    CHECK(b[2] == doctest::Approx(2.0));
    CHECK(b[3] == doctest::Approx(1.5));
    CHECK(m.nodes_on_line(0, 0.0).size() == 4);
    CHECK(m.nodes_on_line(1, 1.5).size() == 5);
    CHECK(m.nearest_node(2.0, 1.5) == 19);
  }

  TEST_CASE("hole plate mesh") {
    const Mesh m = hole_plate_mesh(10, 8, 1.0, 0.25);
    CHECK(m.node_count() == 9 * 40);
    CHECK(m.element_count() == 8 * 40);
    CHECK_NOTHROW(m.validate());
    double area = 0.0;
    for (const auto& e : m.elements) {
      // Shoelace area of each quad.
      for (int k = 0; k < 4; ++k) {
        const auto& p = m.nodes[e[k]];
        const auto& q = m.nodes[e[(k + 1) % 4]];
        area += 0.5 * (p[0] * q[1] - q[0] * p[1]);
      }
    }
    // Straight chords make the hole slightly smaller.
    CHECK(area == doctest::Approx(1.0 - num::kPi * 0.0625).epsilon(2e-3));
    for (const auto& p : m.nodes) {
      const double r = std::hypot(p[0] - 0.5, p[1] - 0.5);
      CHECK(r >= 0.25 - 1e-12);
    }
    CHECK(m.nodes_on_line(0, 0.0).size() == 11);
    CHECK(m.nodes_on_line(0, 1.0).size() == 11);
    CHECK_THROWS_AS(hole_plate_mesh(10, 8, 1.0, 0.6), ConfigError);
  }

  TEST_CASE("mesh validation rejects bad elements") {
    Mesh m = rectangle_mesh(1, 1, 1.0, 1.0);
    Mesh cw = m;
    std::swap(cw.elements[0][1], cw.elements[0][3]);
    CHECK_THROWS_AS(cw.validate(), MeshError);
    Mesh oob = m;
    oob.elements[0][2] = 17;
    CHECK_THROWS_AS(oob.validate(), MeshError);
    Mesh dup = m;
    dup.elements[0][2] = dup.elements[0][1];
    CHECK_THROWS_AS(dup.validate(), MeshError);
  }
}
