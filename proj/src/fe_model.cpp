#include "vsuq/fe_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vsuq/error.hpp"

namespace vsuq {

namespace {

constexpr std::array<std::array<int, 2>, 6> kSym3{{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
constexpr std::array<std::array<int, 2>, 3> kSym2{{{0, 0}, {1, 1}, {0, 1}}};
constexpr double kXi[4] = {-1.0, 1.0, 1.0, -1.0};
constexpr double kEta[4] = {-1.0, -1.0, 1.0, 1.0};

struct ShapeAt {
  double N[4];
  double dNx[4];
  double dNy[4];
  double detJ;
};

ShapeAt shape_at(const std::array<double, 4>& X, const std::array<double, 4>& Y, double xi, double eta,
                 std::size_t element) {
  ShapeAt s{};
  double dxi[4], deta[4];
  for (int i = 0; i < 4; ++i) {
    s.N[i] = 0.25 * (1 + xi * kXi[i]) * (1 + eta * kEta[i]);
    dxi[i] = 0.25 * kXi[i] * (1 + eta * kEta[i]);
    deta[i] = 0.25 * kEta[i] * (1 + xi * kXi[i]);
  }
  double j11 = 0, j12 = 0, j21 = 0, j22 = 0;
  for (int i = 0; i < 4; ++i) {
    j11 += dxi[i] * X[i];
    j12 += dxi[i] * Y[i];
    j21 += deta[i] * X[i];
    j22 += deta[i] * Y[i];
  }
  s.detJ = j11 * j22 - j12 * j21;
  if (!(s.detJ > 0.0)) throw MeshError("element " + std::to_string(element) + " has a non-positive Jacobian");
  for (int i = 0; i < 4; ++i) {
    s.dNx[i] = (j22 * dxi[i] - j12 * deta[i]) / s.detJ;
    s.dNy[i] = (-j21 * dxi[i] + j11 * deta[i]) / s.detJ;
  }
  return s;
}

template <int Rows, int Cols, std::size_t K>
void add_products(std::array<Eigen::Matrix<double, Cols, Cols>, K>& out,
                  const std::array<std::array<int, 2>, K>& pairs, const Eigen::Matrix<double, Rows, Cols>& B,
                  double w) {
  for (std::size_t k = 0; k < K; ++k) {
    const int p = pairs[k][0], q = pairs[k][1];
    if (p == q) {
      out[k].noalias() += w * B.row(p).transpose() * B.row(p);
    } else {
      out[k].noalias() += w * (B.row(p).transpose() * B.row(q) + B.row(q).transpose() * B.row(p));
    }
  }
}

int inplane_local(int m, int offset) { return (m / 2) * kDofsPerNode + offset + (m % 2); }
int shear_local(int m) { return (m / 3) * kDofsPerNode + 2 + (m % 3); }

}  // namespace

LaminateModel::LaminateModel(Mesh mesh, PlyStack plies, MaterialProps material, std::vector<DirichletBC> bcs,
                             std::vector<NodalLoad> loads, ModelOptions options)
    : mesh_(std::move(mesh)),
      plies_(std::move(plies)),
      material_(material),
      bcs_(std::move(bcs)),
      loads_(std::move(loads)),
      options_(options) {
  mesh_.validate();
  material_.validate();
  if (plies_.size() == 0) throw ConfigError("laminate needs at least one ply");
  const int ndof = dof_count();
  prescribed_.assign(ndof, 0.0);
  std::vector<bool> fixed(ndof, false);
  for (const auto& bc : bcs_) {
    if (bc.node < 0 || bc.node >= static_cast<int>(mesh_.node_count()) || bc.dof < 0 || bc.dof >= kDofsPerNode) {
      throw ConfigError("boundary condition references a missing node or DOF");
    }
    const int g = bc.node * kDofsPerNode + bc.dof;
    fixed[g] = true;
    prescribed_[g] = bc.value;
    if (bc.value != 0.0) homogeneous_ = false;
  }
  for (const auto& l : loads_) {
    if (l.node < 0 || l.node >= static_cast<int>(mesh_.node_count()) || l.dof < 0 || l.dof >= kDofsPerNode) {
      throw ConfigError("load references a missing node or DOF");
    }
  }
  free_map_.assign(ndof, -1);
  for (int g = 0; g < ndof; ++g) {
    if (!fixed[g]) free_map_[g] = n_free_++;
  }
  if (n_free_ == 0) throw ConfigError("every DOF is constrained");

  // Nominal local angles at element centroids.
  const auto b = mesh_.bounds();
  const double sx = options_.normalize_path_coordinates ? b[2] - b[0] : 1.0;
  const double sy = options_.normalize_path_coordinates ? b[3] - b[1] : 1.0;
  const double x0 = options_.normalize_path_coordinates ? b[0] : 0.0;
  const double y0 = options_.normalize_path_coordinates ? b[1] : 0.0;
  nominal_angles_.resize(mesh_.element_count() * plies_.size());
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    double cx = 0, cy = 0;
    for (int k = 0; k < 4; ++k) {
      cx += 0.25 * mesh_.nodes[mesh_.elements[e][k]][0];
      cy += 0.25 * mesh_.nodes[mesh_.elements[e][k]][1];
    }
    for (std::size_t p = 0; p < plies_.size(); ++p) {
      const auto g = plies_.ply(p).path.gradient((cx - x0) / sx, (cy - y0) / sy);
      double theta_g;
      try {
        theta_g = fiber_angle_from_gradient(g[0] / sx, g[1] / sy);
      } catch (const NumericalError&) {
        throw NumericalError("degenerate fiber path of ply " + std::to_string(p + 1) + " in element " +
                             std::to_string(e));
      }
      nominal_angles_[e * plies_.size() + p] = theta_g - options_.theta_T;
    }
  }

  build_element_bases();
  build_pattern();
  nominal_sections_.resize(mesh_.element_count());
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    nominal_sections_[e] = section_from_angles(&nominal_angles_[e * plies_.size()]);
  }
}

void LaminateModel::build_element_bases() {
  const double g = 1.0 / std::sqrt(3.0);
  basis_.resize(mesh_.element_count());
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    std::array<double, 4> X, Y;
    for (int k = 0; k < 4; ++k) {
      X[k] = mesh_.nodes[mesh_.elements[e][k]][0];
      Y[k] = mesh_.nodes[mesh_.elements[e][k]][1];
    }
    ElementBasis& eb = basis_[e];
    for (auto& m : eb.inplane) m.setZero();
    for (auto& m : eb.shear) m.setZero();
    for (int gi = 0; gi < 2; ++gi) {
      for (int gj = 0; gj < 2; ++gj) {
        const ShapeAt s = shape_at(X, Y, gi ? g : -g, gj ? g : -g, e);
        Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
        for (int i = 0; i < 4; ++i) {
          B(0, 2 * i) = s.dNx[i];
          B(1, 2 * i + 1) = s.dNy[i];
          B(2, 2 * i) = s.dNy[i];
          B(2, 2 * i + 1) = s.dNx[i];
        }
        add_products<3, 8, 6>(eb.inplane, kSym3, B, s.detJ);
      }
    }
    std::vector<std::array<double, 3>> shear_points;  // xi, eta, weight
    if (options_.shear == ShearRule::Reduced) {
      shear_points.push_back({0.0, 0.0, 4.0});
    } else {
      for (int gi = 0; gi < 2; ++gi) {
        for (int gj = 0; gj < 2; ++gj) shear_points.push_back({gi ? g : -g, gj ? g : -g, 1.0});
      }
    }
    for (const auto& sp : shear_points) {
      const ShapeAt s = shape_at(X, Y, sp[0], sp[1], e);
      Eigen::Matrix<double, 2, 12> B = Eigen::Matrix<double, 2, 12>::Zero();
      for (int i = 0; i < 4; ++i) {
        // gamma_yz = w,y - theta_y ; gamma_xz = w,x - theta_x
        B(0, 3 * i) = s.dNy[i];
        B(0, 3 * i + 2) = -s.N[i];
        B(1, 3 * i) = s.dNx[i];
        B(1, 3 * i + 1) = -s.N[i];
      }
      add_products<2, 12, 3>(eb.shear, kSym2, B, s.detJ * sp[2]);
    }
    // Exact symmetry, so assembled matrices are symmetric bit for bit.
    for (auto& m : eb.inplane) m = (0.5 * (m + m.transpose())).eval();
    for (auto& m : eb.shear) m = (0.5 * (m + m.transpose())).eval();
  }
}

void LaminateModel::build_pattern() {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh_.element_count() * 400);
  auto global_free = [this](std::size_t e, int local) {
    return free_map_[mesh_.elements[e][local / kDofsPerNode] * kDofsPerNode + local % kDofsPerNode];
  };
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    for (int i = 0; i < 20; ++i) {
      const int fi = global_free(e, i);
      if (fi < 0) continue;
      for (int j = 0; j < 20; ++j) {
        const int fj = global_free(e, j);
        if (fj >= 0) trip.emplace_back(fi, fj, 0.0);
      }
    }
  }
  pattern_.resize(n_free_, n_free_);
  pattern_.setFromTriplets(trip.begin(), trip.end());
  pattern_.makeCompressed();
  const int* outer = pattern_.outerIndexPtr();
  const int* inner = pattern_.innerIndexPtr();
  slots_.resize(mesh_.element_count());
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    for (int i = 0; i < 20; ++i) {
      const int fi = global_free(e, i);
      for (int j = 0; j < 20; ++j) {
        const int fj = global_free(e, j);
        int slot = -1;
        if (fi >= 0 && fj >= 0) {
          const int* pos = std::lower_bound(inner + outer[fj], inner + outer[fj + 1], fi);
          slot = static_cast<int>(pos - inner);
        }
        slots_[e][i * 20 + j] = slot;
      }
    }
  }
}

double LaminateModel::nominal_angle(std::size_t e, std::size_t p) const {
  return nominal_angles_.at(e * plies_.size() + p);
}

void LaminateModel::check_deviation(const std::vector<double>& eps) const {
  if (eps.size() != plies_.size()) {
    throw DomainError("deviation vector has " + std::to_string(eps.size()) + " entries, expected " +
                      std::to_string(plies_.size()));
  }
  for (std::size_t p = 0; p < eps.size(); ++p) {
    if (!std::isfinite(eps[p]) || std::abs(eps[p]) > options_.deviation_cap) {
      std::ostringstream os;
      os << "deviation " << eps[p] << " of ply " << p + 1 << " exceeds the cap " << options_.deviation_cap;
      throw DomainError(os.str());
    }
  }
}

SectionStiffness LaminateModel::section_from_angles(const double* angles) const {
  SectionStiffness s;
  s.A.setZero();
  s.D.setZero();
  s.S.setZero();
  for (std::size_t p = 0; p < plies_.size(); ++p) {
    const PlyConstitutive c = ply_constitutive(material_, angles[p]);
    const double t = plies_.ply(p).thickness;
    const double z0 = plies_.z_bottom(p), z1 = plies_.z_top(p);
    s.A += t * c.membrane;
    s.D += (z1 * z1 * z1 - z0 * z0 * z0) / 3.0 * c.bending;
    s.S += t * c.shear;
  }
  return s;
}

SectionStiffness LaminateModel::section(std::size_t e, const std::vector<double>& eps) const {
  check_deviation(eps);
  std::vector<double> angles(plies_.size());
  for (std::size_t p = 0; p < plies_.size(); ++p) angles[p] = nominal_angles_[e * plies_.size() + p] + eps[p];
  return section_from_angles(angles.data());
}

ElementMatrix LaminateModel::element_stiffness(std::size_t e, const std::vector<double>& eps) const {
  const SectionStiffness s = section(e, eps);
  const ElementBasis& eb = basis_[e];
  ElementMatrix k = ElementMatrix::Zero();
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      double vm = 0, vb = 0;
      for (std::size_t q = 0; q < 6; ++q) {
        vm += s.A(kSym3[q][0], kSym3[q][1]) * eb.inplane[q](i, j);
        vb += s.D(kSym3[q][0], kSym3[q][1]) * eb.inplane[q](i, j);
      }
      k(inplane_local(i, 0), inplane_local(j, 0)) += vm;
      k(inplane_local(i, 3), inplane_local(j, 3)) += vb;
    }
  }
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      double v = 0;
      for (std::size_t q = 0; q < 3; ++q) v += s.S(kSym2[q][0], kSym2[q][1]) * eb.shear[q](i, j);
      k(shear_local(i), shear_local(j)) += v;
    }
  }
  return k;
}

void LaminateModel::scatter(std::vector<double>& values, std::size_t e, const SectionStiffness& s) const {
  const ElementBasis& eb = basis_[e];
  const auto& slot = slots_[e];
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      double vm = 0, vb = 0;
      for (std::size_t q = 0; q < 6; ++q) {
        vm += s.A(kSym3[q][0], kSym3[q][1]) * eb.inplane[q](i, j);
        vb += s.D(kSym3[q][0], kSym3[q][1]) * eb.inplane[q](i, j);
      }
      const int sm = slot[inplane_local(i, 0) * 20 + inplane_local(j, 0)];
      const int sb = slot[inplane_local(i, 3) * 20 + inplane_local(j, 3)];
      if (sm >= 0) values[sm] += vm;
      if (sb >= 0) values[sb] += vb;
    }
  }
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      const int ss = slot[shear_local(i) * 20 + shear_local(j)];
      if (ss < 0) continue;
      double v = 0;
      for (std::size_t q = 0; q < 3; ++q) v += s.S(kSym2[q][0], kSym2[q][1]) * eb.shear[q](i, j);
      values[ss] += v;
    }
  }
}

SparseMatrix LaminateModel::assemble(const std::vector<double>& eps) const {
  check_deviation(eps);
  std::vector<double> values(static_cast<std::size_t>(pattern_.nonZeros()), 0.0);
  std::vector<double> angles(plies_.size());
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    for (std::size_t p = 0; p < plies_.size(); ++p) angles[p] = nominal_angles_[e * plies_.size() + p] + eps[p];
    scatter(values, e, section_from_angles(angles.data()));
  }
  SparseMatrix K = pattern_;
  std::copy(values.begin(), values.end(), K.valuePtr());
  return K;
}

SparseMatrix LaminateModel::assemble_delta(const std::vector<double>& eps) const {
  check_deviation(eps);
  std::vector<double> values(static_cast<std::size_t>(pattern_.nonZeros()), 0.0);
  const bool unchanged = std::all_of(eps.begin(), eps.end(), [](double x) { return x == 0.0; });
  if (!unchanged) {
    std::vector<double> angles(plies_.size());
    for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
      for (std::size_t p = 0; p < plies_.size(); ++p) angles[p] = nominal_angles_[e * plies_.size() + p] + eps[p];
      SectionStiffness d = section_from_angles(angles.data());
      const SectionStiffness& n = nominal_sections_[e];
      d.A -= n.A;
      d.D -= n.D;
      d.S -= n.S;
      scatter(values, e, d);
    }
  }
  SparseMatrix dK = pattern_;
  std::copy(values.begin(), values.end(), dK.valuePtr());
  return dK;
}

Eigen::MatrixXd LaminateModel::assemble_unconstrained_dense(const std::vector<double>& eps) const {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dof_count(), dof_count());
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    const ElementMatrix ke = element_stiffness(e, eps);
    for (int i = 0; i < 20; ++i) {
      const int gi = mesh_.elements[e][i / 5] * 5 + i % 5;
      for (int j = 0; j < 20; ++j) K(gi, mesh_.elements[e][j / 5] * 5 + j % 5) += ke(i, j);
    }
  }
  return K;
}

Eigen::VectorXd LaminateModel::load_vector() const {
  Eigen::VectorXd R = Eigen::VectorXd::Zero(n_free_);
  for (const auto& l : loads_) {
    const int f = free_map_[l.node * kDofsPerNode + l.dof];
    if (f >= 0) R[f] += l.value;
  }
  return R;
}

Eigen::VectorXd LaminateModel::rhs(const std::vector<double>& eps) const {
  Eigen::VectorXd R = load_vector();
  if (homogeneous_) return R;
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    bool touched = false;
    for (int i = 0; i < 20 && !touched; ++i) {
      touched = prescribed_[mesh_.elements[e][i / 5] * 5 + i % 5] != 0.0;
    }
    if (!touched) continue;
    const ElementMatrix ke = element_stiffness(e, eps);
    for (int i = 0; i < 20; ++i) {
      const int fi = free_map_[mesh_.elements[e][i / 5] * 5 + i % 5];
      if (fi < 0) continue;
      for (int j = 0; j < 20; ++j) {
        const int gj = mesh_.elements[e][j / 5] * 5 + j % 5;
        if (free_map_[gj] < 0) R[fi] -= ke(i, j) * prescribed_[gj];
      }
    }
  }
  return R;
}

Eigen::VectorXd LaminateModel::expand(const Eigen::VectorXd& free) const {
  Eigen::VectorXd r(dof_count());
  for (int g = 0; g < dof_count(); ++g) r[g] = free_map_[g] >= 0 ? free[free_map_[g]] : prescribed_[g];
  return r;
}

Eigen::VectorXd LaminateModel::solve_full(const std::vector<double>& eps) const {
  FullSolver solver(*this);
  return solver.solve(eps);
}

LaminateModel LaminateModel::with_load_scale(double factor) const {
  std::vector<NodalLoad> l = loads_;
  for (auto& x : l) x.value *= factor;
  return LaminateModel(mesh_, plies_, material_, bcs_, std::move(l), options_);
}

LaminateModel LaminateModel::with_thickness_scale(double factor) const {
  return LaminateModel(mesh_, plies_.scaled_thickness(factor), material_, bcs_, loads_, options_);
}

void check_factorization(const Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower>& llt) {
  if (llt.info() != Eigen::Success) {
    throw NumericalError("stiffness factorization failed: matrix is not positive definite "
                         "(check boundary conditions)");
  }
  const Eigen::VectorXd d = SparseMatrix(llt.matrixL()).diagonal();
  const double lo = d.minCoeff(), hi = d.maxCoeff();
  if (!(lo > 0.0) || !std::isfinite(hi)) {
    std::ostringstream os;
    os << "stiffness factorization produced pivots in [" << lo << ", " << hi << "]";
    throw NumericalError(os.str());
  }
}

double relative_residual(const SparseMatrix& K, const Eigen::VectorXd& r, const Eigen::VectorXd& R) {
  const double nr = R.norm();
  const double res = (K * r - R).norm();
  return nr > 0.0 ? res / nr : res;
}

FullSolver::FullSolver(const LaminateModel& model) : model_(model) { llt_.analyzePattern(model.pattern_); }

Eigen::VectorXd FullSolver::solve(const std::vector<double>& eps) {
  const SparseMatrix K = model_.assemble(eps);
  llt_.factorize(K);
  ++factorizations_;
  check_factorization(llt_);
  const Eigen::VectorXd R = model_.rhs(eps);
  Eigen::VectorXd r = llt_.solve(R);
  // Iterative refinement guards against the stiffness contrast of thin laminates.
  for (int it = 0; it < 3 && relative_residual(K, r, R) > 1e-13; ++it) r += llt_.solve(R - K * r);
  const double res = relative_residual(K, r, R);
  if (res > 1e-10) {
    std::ostringstream os;
    os << "full solve residual " << res << " above 1e-10";
    throw NumericalError(os.str());
  }
  return model_.expand(r);
}

std::vector<double> monitored_displacements(const LaminateModel& model, const Eigen::VectorXd& r) {
  double ux = 0, uy = 0;
  for (std::size_t n = 0; n < model.mesh().node_count(); ++n) {
    ux = std::max(ux, std::abs(r[n * kDofsPerNode + U]));
    uy = std::max(uy, std::abs(r[n * kDofsPerNode + V]));
  }
  return {ux, uy};
}

}  // namespace vsuq
