#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "vsuq/laminate.hpp"
#include "vsuq/mesh.hpp"

namespace vsuq {

/// Nodal degrees of freedom, in storage order.
enum Dof : int { U = 0, V = 1, W = 2, ThetaX = 3, ThetaY = 4 };
inline constexpr int kDofsPerNode = 5;

struct DirichletBC {
  int node;
  int dof;
  double value = 0.0;
};

struct NodalLoad {
  int node;
  int dof;
  double value;
};

enum class ShearRule { Reduced, Full };

struct ModelOptions {
  /// Angle between global and material datum axes (radians).
  double theta_T = 0.0;
  ShearRule shear = ShearRule::Reduced;
  /// Largest admissible |deviation| per ply (radians).
  double deviation_cap = 3.14159265358979323846 / 2;
  /// Evaluate path functions on coordinates mapped to [0, 1]^2.
  bool normalize_path_coordinates = true;
};

/// Thickness-integrated stiffness of one element: membrane A, bending D, shear S.
struct SectionStiffness {
  Eigen::Matrix3d A;
  Eigen::Matrix3d D;
  Eigen::Matrix2d S;
};

using SparseMatrix = Eigen::SparseMatrix<double>;
using ElementMatrix = Eigen::Matrix<double, 20, 20>;

/// Variable-stiffness Mindlin laminate on a quadrilateral mesh.
///
/// Global matrices returned by assemble / assemble_delta act on the free DOFs
/// only (constrained DOFs are eliminated). Immutable after construction.
class LaminateModel {
 public:
  LaminateModel(Mesh mesh, PlyStack plies, MaterialProps material, std::vector<DirichletBC> bcs,
                std::vector<NodalLoad> loads, ModelOptions options = {});

  const Mesh& mesh() const { return mesh_; }
  const PlyStack& plies() const { return plies_; }
  const MaterialProps& material() const { return material_; }
  const ModelOptions& options() const { return options_; }
  const std::vector<DirichletBC>& constraints() const { return bcs_; }
  const std::vector<NodalLoad>& loads() const { return loads_; }
  std::size_t ply_count() const { return plies_.size(); }
  int dof_count() const { return static_cast<int>(mesh_.node_count()) * kDofsPerNode; }
  int free_dof_count() const { return n_free_; }
  /// Free-system index of a global DOF, or -1 when constrained.
  int free_index(int global_dof) const { return free_map_[global_dof]; }
  bool homogeneous_constraints() const { return homogeneous_; }

  /// Local fiber angle of ply p in element e before deviation.
  double nominal_angle(std::size_t element, std::size_t ply) const;
  /// Throws DomainError for a wrong width, non-finite value or a value above the cap.
  void check_deviation(const std::vector<double>& eps) const;

  SectionStiffness section(std::size_t element, const std::vector<double>& eps) const;
  ElementMatrix element_stiffness(std::size_t element, const std::vector<double>& eps) const;

  SparseMatrix assemble(const std::vector<double>& eps) const;
  /// K(eps) - K(0) on the free DOFs, same sparsity as assemble.
  SparseMatrix assemble_delta(const std::vector<double>& eps) const;
  /// Unconstrained dense stiffness over all DOFs (small meshes only).
  Eigen::MatrixXd assemble_unconstrained_dense(const std::vector<double>& eps) const;

  /// Nodal load vector on the free DOFs.
  Eigen::VectorXd load_vector() const;
  /// Load vector minus the work-equivalent of nonzero prescribed values.
  Eigen::VectorXd rhs(const std::vector<double>& eps) const;
  /// Free-DOF solution to a full-length vector with prescribed values inserted.
  Eigen::VectorXd expand(const Eigen::VectorXd& free) const;

  /// Factorizes K(eps) and solves; returns the full-length displacement vector.
  Eigen::VectorXd solve_full(const std::vector<double>& eps) const;

  /// Model identical except for a load factor.
  LaminateModel with_load_scale(double factor) const;
  /// Model identical except for thicknesses scaled by factor.
  LaminateModel with_thickness_scale(double factor) const;

  /// Symmetric assembly pattern shared by every matrix from assemble.
  const SparseMatrix& pattern() const { return pattern_; }

 private:
  friend class FullSolver;
  void build_element_bases();
  void build_pattern();
  void scatter(std::vector<double>& values, std::size_t e, const SectionStiffness& s) const;
  SectionStiffness section_from_angles(const double* angles) const;

  Mesh mesh_;
  PlyStack plies_;
  MaterialProps material_;
  std::vector<DirichletBC> bcs_;
  std::vector<NodalLoad> loads_;
  ModelOptions options_;

  std::vector<int> free_map_;
  int n_free_ = 0;
  bool homogeneous_ = true;

  // Per element: stiffness contributions of each independent constitutive entry.
  struct ElementBasis {
    // Membrane and bending strain operators share one layout.
    std::array<Eigen::Matrix<double, 8, 8>, 6> inplane;
    std::array<Eigen::Matrix<double, 12, 12>, 3> shear;
  };
  std::vector<ElementBasis> basis_;
  std::vector<double> nominal_angles_;  // element-major, ply-minor
  std::vector<SectionStiffness> nominal_sections_;
  std::vector<double> prescribed_;
  std::vector<std::array<int, 400>> slots_;  // value index of (i, j) or -1
  SparseMatrix pattern_;
};

/// Reusable direct solver for K(eps) r = R; the symbolic analysis is shared
/// across calls. Not thread-safe: use one instance per worker.
class FullSolver {
 public:
  explicit FullSolver(const LaminateModel& model);
  Eigen::VectorXd solve(const std::vector<double>& eps);
  int factorizations() const { return factorizations_; }

 private:
  const LaminateModel& model_;
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower> llt_;
  int factorizations_ = 0;
};

/// Maximum |u| and maximum |v| over all nodes.
std::vector<double> monitored_displacements(const LaminateModel& model, const Eigen::VectorXd& r);

/// Relative residual |K r - R| / |R| on the free DOFs.
double relative_residual(const SparseMatrix& K, const Eigen::VectorXd& r_free, const Eigen::VectorXd& R);

/// Throws NumericalError when the factorization failed; reports a pivot-ratio diagnostic.
void check_factorization(const Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower>& llt);

}  // namespace vsuq
