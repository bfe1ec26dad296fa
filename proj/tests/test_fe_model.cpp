#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/Eigenvalues>

#include "vsuq/case_config.hpp"
#include "vsuq/error.hpp"
#include "vsuq/fe_model.hpp"
#include "vsuq/io.hpp"
#include "vsuq/numerics.hpp"

using namespace vsuq;

namespace {

MaterialProps isotropic(double E, double nu) {
  MaterialProps m;
  m.E_L = m.E_T = E;
  m.nu_LT = nu;
  m.G_LT = m.G_TN = m.G_LN = E / (2 * (1 + nu));
  return m;
}

std::unique_ptr<LaminateModel> hole_plate() {
  return parse_model(io::read_file(std::string(VSUQ_SOURCE_DIR) + "/configs/hole_plate.json"));
}

// Plane-stress bilinear quad stiffness for (u, v) at each node, 2x2 Gauss.
Eigen::Matrix<double, 8, 8> plane_stress_quad(const std::array<std::array<double, 2>, 4>& p, double E, double nu,
                                               double t) {
  Eigen::Matrix3d C;
  C << 1, nu, 0, nu, 1, 0, 0, 0, (1 - nu) / 2;
  C *= E / (1 - nu * nu);
  const double xi_n[4] = {-1, 1, 1, -1}, eta_n[4] = {-1, -1, 1, 1};
  const double g = 1 / std::sqrt(3.0);
  Eigen::Matrix<double, 8, 8> K = Eigen::Matrix<double, 8, 8>::Zero();
  for (double xi : {-g, g}) {
    for (double eta : {-g, g}) {
      Eigen::Matrix<double, 2, 4> dN;
      for (int i = 0; i < 4; ++i) {
        dN(0, i) = 0.25 * xi_n[i] * (1 + eta * eta_n[i]);
        dN(1, i) = 0.25 * eta_n[i] * (1 + xi * xi_n[i]);
      }
      Eigen::Matrix<double, 4, 2> X;
      for (int i = 0; i < 4; ++i) X.row(i) << p[i][0], p[i][1];
      const Eigen::Matrix2d J = dN * X;
      const Eigen::Matrix<double, 2, 4> dx = J.inverse() * dN;
      Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
      for (int i = 0; i < 4; ++i) {
        B(0, 2 * i) = dx(0, i);
        B(1, 2 * i + 1) = dx(1, i);
        B(2, 2 * i) = dx(1, i);
        B(2, 2 * i + 1) = dx(0, i);
      }
      K += B.transpose() * C * B * J.determinant() * t;
    }
  }
  return K;
}

std::vector<DirichletBC> clamp_nodes(const std::vector<int>& nodes) {
  std::vector<DirichletBC> bcs;
  for (int n : nodes) {
    for (int d = 0; d < kDofsPerNode; ++d) bcs.push_back({n, d, 0.0});
  }
  return bcs;
}

int zero_modes(const Eigen::MatrixXd& K) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  int n = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) n += std::abs(es.eigenvalues()[i]) < 1e-10 * top;
  return n;
}

}  // namespace

TEST_SUITE("fe_model") {
  TEST_CASE("element stiffness is symmetric") {
    const auto m = hole_plate();
    const std::vector<double> eps{0.1, -0.2, 0.3, 0.0, 0.05, -0.4, 0.2, 0.1};
    for (std::size_t e = 0; e < m->mesh().element_count(); e += 13) {
      const ElementMatrix k = m->element_stiffness(e, eps);
      CHECK((k - k.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * k.cwiseAbs().maxCoeff());
    }
    const SparseMatrix K = m->assemble(eps);
    CHECK((Eigen::MatrixXd(K) - Eigen::MatrixXd(K.transpose())).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("membrane block equals an isotropic plane-stress quad") {
    Mesh mesh;
    mesh.nodes = {{0.1, 0.0}, {1.3, 0.2}, {1.1, 0.9}, {-0.1, 1.2}};
    mesh.elements = {{0, 1, 2, 3}};
    const double E = 70.0, nu = 0.33, t = 0.02;
    const LaminateModel m(mesh, PlyStack(std::vector<Ply>{{t, {}}}), isotropic(E, nu), {}, {});
    const ElementMatrix k = m.element_stiffness(0, {0.0});
    const auto oracle = plane_stress_quad({mesh.nodes[0], mesh.nodes[1], mesh.nodes[2], mesh.nodes[3]}, E, nu, t);
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        const double got = k((i / 2) * kDofsPerNode + i % 2, (j / 2) * kDofsPerNode + j % 2);
        CHECK(std::abs(got - oracle(i, j)) < 1e-12 * oracle.cwiseAbs().maxCoeff());
      }
    }
  }

  TEST_CASE("rigid body modes of a free plate") {
    const Mesh mesh = rectangle_mesh(3, 2, 1.5, 1.0);
    const PlyStack st({{0.01, {}}, {0.01, PathFunction(PathKind::Quadratic, {0.7, 0.1, 0.0, 0.2})}});
    ModelOptions full;
    full.shear = ShearRule::Full;
    const LaminateModel mf(mesh, st, MaterialProps{}, {}, {}, full);
    const std::vector<double> eps{0.1, -0.1};
    CHECK(zero_modes(mf.assemble_unconstrained_dense(eps)) == 6);
    const LaminateModel mr(mesh, st, MaterialProps{}, {}, {});
    // One-point shear adds spurious modes on a free patch but keeps the six rigid ones.
    CHECK(zero_modes(mr.assemble_unconstrained_dense(eps)) >= 6);
  }

  TEST_CASE("nominal stiffness is reproducible and the zero deviation has no delta") {
    const auto m = hole_plate();
    const std::vector<double> zero(8, 0.0);
    const SparseMatrix a = m->assemble(zero), b = m->assemble(zero);
    REQUIRE(a.nonZeros() == b.nonZeros());
    bool same = true;
    for (Eigen::Index k = 0; k < a.nonZeros(); ++k) same = same && a.valuePtr()[k] == b.valuePtr()[k];
    CHECK(same);
    const SparseMatrix d = m->assemble_delta(zero);
    CHECK(Eigen::MatrixXd(d).cwiseAbs().maxCoeff() == 0.0);
    const std::vector<double> eps{0.2, 0, 0, 0, 0, 0, 0, -0.1};
    const SparseMatrix diff = m->assemble(eps) - a - m->assemble_delta(eps);
    CHECK(Eigen::MatrixXd(diff).cwiseAbs().maxCoeff() < 1e-12 * Eigen::MatrixXd(a).cwiseAbs().maxCoeff());
  }

  TEST_CASE("linearity in the load and zero load") {
    const auto m = hole_plate();
    const std::vector<double> eps{0.1, 0.2, -0.1, 0.0, 0.3, -0.2, 0.1, 0.05};
    const Eigen::VectorXd r1 = m->solve_full(eps);
    const Eigen::VectorXd r2 = m->with_load_scale(2.0).solve_full(eps);
    CHECK((r2 - 2.0 * r1).norm() < 1e-12 * r2.norm());
    CHECK(m->with_load_scale(0.0).solve_full(eps).norm() == 0.0);
  }

  TEST_CASE("residual of the direct solve") {
    const auto m = hole_plate();
    const std::vector<double> eps{-0.3, 0.2, 0.1, 0.4, -0.1, 0.0, 0.2, -0.25};
    FullSolver solver(*m);
    const Eigen::VectorXd r = solver.solve(eps);
    Eigen::VectorXd rf(m->free_dof_count());
    for (int g = 0; g < m->dof_count(); ++g) {
      if (m->free_index(g) >= 0) rf[m->free_index(g)] = r[g];
    }
    CHECK(relative_residual(m->assemble(eps), rf, m->rhs(eps)) < 1e-10);
    const auto mon = monitored_displacements(*m, r);
    CHECK(mon.size() == 2);
    CHECK(mon[0] > 0.0);
    solver.solve(eps);
    CHECK(solver.factorizations() == 2);
  }

  TEST_CASE("patch test with a distorted interior node") {
    Mesh m;
    m.nodes = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {0.82, 1.21}, {2, 1}, {0, 2}, {1, 2}, {2, 2}};
    m.elements = {{0, 1, 4, 3}, {1, 2, 5, 4}, {3, 4, 7, 6}, {4, 5, 8, 7}};
    auto ux = [](double x, double y) { return 2e-3 * x + 1e-3 * y; };
    auto vy = [](double x, double y) { return -1e-3 * x + 3e-3 * y + 5e-4; };
    std::vector<DirichletBC> bcs;
    for (int n = 0; n < 9; ++n) {
      bcs.push_back({n, W, 0.0});
      bcs.push_back({n, ThetaX, 0.0});
      bcs.push_back({n, ThetaY, 0.0});
      if (n == 4) continue;
      bcs.push_back({n, U, ux(m.nodes[n][0], m.nodes[n][1])});
      bcs.push_back({n, V, vy(m.nodes[n][0], m.nodes[n][1])});
    }
    const PlyStack st({{0.01, PathFunction(PathKind::Quadratic, {0.5, 0, 0, 0})}, {0.01, {}}});
    const LaminateModel model(m, st, MaterialProps{}, bcs, {});
    CHECK_FALSE(model.homogeneous_constraints());
    const Eigen::VectorXd r = model.solve_full({0.2, -0.1});
    CHECK(r[4 * kDofsPerNode + U] == doctest::Approx(ux(0.82, 1.21)).epsilon(1e-10));
    CHECK(r[4 * kDofsPerNode + V] == doctest::Approx(vy(0.82, 1.21)).epsilon(1e-10));
  }

  TEST_CASE("in-plane cantilever converges to beam theory") {
    const double L = 10.0, h = 1.0, t = 0.1, E = 100.0, nu = 0.3, P = 1e-3;
    const double I = t * h * h * h / 12, G = E / (2 * (1 + nu));
    const double exact = P * L * L * L / (3 * E * I) + P * L / (5.0 / 6.0 * G * h * t);
    std::vector<double> errors;
    for (int refine : {1, 2, 4}) {
      const Mesh mesh = rectangle_mesh(20 * refine, 2 * refine, L, h);
      const auto tip = mesh.nodes_on_line(0, L);
      std::vector<NodalLoad> loads;
      for (int n : tip) loads.push_back({n, V, P / tip.size()});
      const LaminateModel m(mesh, PlyStack(std::vector<Ply>{{t, {}}}), isotropic(E, nu), clamp_nodes(mesh.nodes_on_line(0, 0.0)),
                            loads);
      const Eigen::VectorXd r = m.solve_full({0.0});
      const int mid = mesh.nearest_node(L, h / 2);
      errors.push_back(std::abs(r[mid * kDofsPerNode + V] - exact) / exact);
    }
    CHECK(errors[1] < errors[0]);
    CHECK(errors[2] < errors[1]);
    CHECK(errors[2] < 0.03);
  }

  TEST_CASE("thickness scaling of the section") {
    const auto m = hole_plate();
    const LaminateModel thick = m->with_thickness_scale(0.5);
    const std::vector<double> eps{0.1, -0.1, 0.2, 0.0, 0.0, 0.3, -0.2, 0.1};
    for (std::size_t e = 0; e < m->mesh().element_count(); e += 31) {
      const SectionStiffness a = m->section(e, eps), b = thick.section(e, eps);
      CHECK((b.A - 0.5 * a.A).cwiseAbs().maxCoeff() < 1e-14 * a.A.cwiseAbs().maxCoeff());
      CHECK((b.D - 0.125 * a.D).cwiseAbs().maxCoeff() < 1e-14 * a.D.cwiseAbs().maxCoeff());
      CHECK((b.S - 0.5 * a.S).cwiseAbs().maxCoeff() < 1e-14 * a.S.cwiseAbs().maxCoeff());
    }
  }

  TEST_CASE("deviation vector checks") {
    const auto m = hole_plate();
    CHECK_THROWS_AS(m->check_deviation({0.1, 0.2}), DomainError);
    std::vector<double> eps(8, 0.0);
    eps[3] = std::nan("");
    CHECK_THROWS_AS(m->check_deviation(eps), DomainError);
    eps[3] = 1.6;
    CHECK_THROWS_AS(m->check_deviation(eps), DomainError);
    eps[3] = 1.5;
    CHECK_NOTHROW(m->check_deviation(eps));
    ModelOptions tight;
    tight.deviation_cap = 15.0 * num::kPi / 180;
    const LaminateModel capped(m->mesh(), m->plies(), m->material(), m->constraints(), m->loads(), tight);
    eps[3] = 0.3;
    CHECK_THROWS_AS(capped.check_deviation(eps), DomainError);
  }

  TEST_CASE("deviation adds to the nominal angle") {
    const Mesh mesh = rectangle_mesh(2, 2, 1.0, 1.0);
    const double t = 0.004;
    const LaminateModel m(mesh, PlyStack(std::vector<Ply>{{t, {}}}), MaterialProps{}, {}, {});
    CHECK(m.nominal_angle(3, 0) == doctest::Approx(num::kPi / 2));
    const Eigen::Matrix3d expect = t * ply_constitutive(MaterialProps{}, num::kPi / 2 + 0.3).membrane;
    const SectionStiffness s = m.section(3, {0.3});
    CHECK((s.A - expect).cwiseAbs().maxCoeff() < 1e-14 * expect.cwiseAbs().maxCoeff());
    CHECK((s.D - expect * t * t / 12).cwiseAbs().maxCoeff() < 1e-14 * s.D.cwiseAbs().maxCoeff());
  }
}
