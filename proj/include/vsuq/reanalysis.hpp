#pragma once

#include <atomic>
#include <vector>

#include <Eigen/Dense>

#include "vsuq/fe_model.hpp"

namespace vsuq {

struct ReducedSolution {
  /// Orthonormal basis spanning r_1..r_s (free DOFs); may have fewer than s columns.
  Eigen::MatrixXd basis;
  Eigen::VectorXd y;
  /// Approximate displacement on the free DOFs.
  Eigen::VectorXd r;
  /// Set when the reduced system was singular and a full solve was used instead.
  bool fallback = false;
};

/// Combined-approximations reanalysis around the nominal (zero-deviation) design.
///
/// K0 is factorized once in the constructor; approximate() only performs
/// triangular solves against it. Safe to share across threads.
class ReanalysisContext {
 public:
  explicit ReanalysisContext(const LaminateModel& model, int basis_size = 6);

  const LaminateModel& model() const { return model_; }
  int basis_size() const { return basis_size_; }
  /// Nominal free-DOF displacement K0^-1 R.
  const Eigen::VectorXd& r0() const { return r0_; }
  const Eigen::VectorXd& load() const { return R_; }
  /// Number of matrix factorizations performed so far (1 unless a fallback occurred).
  int factorizations() const { return factorizations_.load(); }

  /// Reduced solution for K0 + dK using s basis vectors (s <= 0 uses the default).
  ReducedSolution approximate(const SparseMatrix& dK, int s = 0) const;
  /// Full-length displacement for a deviation vector.
  Eigen::VectorXd approximate(const std::vector<double>& eps, int s = 0) const;

 private:
  const LaminateModel& model_;
  int basis_size_;
  SparseMatrix K0_;
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower> llt_;
  Eigen::VectorXd R_;
  Eigen::VectorXd r0_;
  mutable std::atomic<int> factorizations_{0};
};

struct BasisStudyRow {
  int s;
  /// Relative error of the monitored X and Y displacements against the full solve.
  double error_x;
  double error_y;
  /// Relative 2-norm error of the whole displacement vector.
  double error_norm;
};

/// Runs approximate at each basis size against one full solve of the same deviation.
std::vector<BasisStudyRow> basis_study(const ReanalysisContext& ctx, const std::vector<double>& eps,
                                       const std::vector<int>& s_values);

}  // namespace vsuq
