#include "vsuq/reanalysis.hpp"

#include <cmath>

#include "vsuq/error.hpp"

namespace vsuq {

ReanalysisContext::ReanalysisContext(const LaminateModel& model, int basis_size)
    : model_(model), basis_size_(basis_size) {
  if (basis_size < 1) throw ConfigError("reanalysis basis size must be at least 1");
  if (!model.homogeneous_constraints()) {
    throw ConfigError("reanalysis requires homogeneous displacement constraints");
  }
  const std::vector<double> zero(model.ply_count(), 0.0);
  K0_ = model.assemble(zero);
  llt_.compute(K0_);
  factorizations_ = 1;
  check_factorization(llt_);
  R_ = model.load_vector();
  r0_ = llt_.solve(R_);
  for (int it = 0; it < 3 && relative_residual(K0_, r0_, R_) > 1e-13; ++it) r0_ += llt_.solve(R_ - K0_ * r0_);
}

ReducedSolution ReanalysisContext::approximate(const SparseMatrix& dK, int s) const {
  if (s <= 0) s = basis_size_;
  if (dK.rows() != K0_.rows() || dK.cols() != K0_.cols()) throw ConfigError("perturbation has wrong dimension");
  ReducedSolution out;
  bool zero = true;
  for (Eigen::Index k = 0; k < dK.nonZeros() && zero; ++k) zero = dK.valuePtr()[k] == 0.0;
  const double r0_norm = r0_.norm();
  if (zero || r0_norm == 0.0) {
    out.basis = r0_norm > 0.0 ? Eigen::MatrixXd(r0_ / r0_norm) : Eigen::MatrixXd(r0_.size(), 0);
    out.y = Eigen::VectorXd::Constant(out.basis.cols(), r0_norm);
    out.r = r0_;
    return out;
  }

  // Binomial-series vectors r_i = -K0^-1 dK r_{i-1}, orthonormalized as they arrive.
  std::vector<Eigen::VectorXd> q;
  Eigen::VectorXd raw = r0_;
  for (int i = 0; i < s; ++i) {
    if (i > 0) raw = -llt_.solve(dK * raw);
    Eigen::VectorXd v = raw;
    const double n0 = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : q) v -= b.dot(v) * b;
    }
    const double n1 = v.norm();
    if (!(n1 > 1e-12 * n0) || n0 == 0.0) break;  // numerically dependent: span is complete
    q.push_back(v / n1);
  }
  const Eigen::Index m = static_cast<Eigen::Index>(q.size());
  out.basis.resize(r0_.size(), m);
  for (Eigen::Index j = 0; j < m; ++j) out.basis.col(j) = q[j];

  const Eigen::MatrixXd KrB = K0_ * out.basis + dK * out.basis;
  const Eigen::MatrixXd Kr = out.basis.transpose() * KrB;
  const Eigen::VectorXd Rr = out.basis.transpose() * R_;
  Eigen::LLT<Eigen::MatrixXd> red(0.5 * (Kr + Kr.transpose()));
  if (red.info() == Eigen::Success) {
    out.y = red.solve(Rr);
    out.r = out.basis * out.y;
    if (out.r.allFinite()) return out;
  }
  // Singular reduced system: solve the perturbed system directly.
  out.fallback = true;
  ++factorizations_;
  const SparseMatrix K = K0_ + dK;
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower> full(K);
  check_factorization(full);
  out.r = full.solve(R_);
  out.y.resize(0);
  return out;
}

Eigen::VectorXd ReanalysisContext::approximate(const std::vector<double>& eps, int s) const {
  return model_.expand(approximate(model_.assemble_delta(eps), s).r);
}

std::vector<BasisStudyRow> basis_study(const ReanalysisContext& ctx, const std::vector<double>& eps,
                                       const std::vector<int>& s_values) {
  const LaminateModel& model = ctx.model();
  const Eigen::VectorXd exact = model.solve_full(eps);
  const std::vector<double> mon = monitored_displacements(model, exact);
  const SparseMatrix dK = model.assemble_delta(eps);
  auto rel = [](double a, double b) { return b != 0.0 ? std::abs(a - b) / std::abs(b) : std::abs(a - b); };
  std::vector<BasisStudyRow> rows;
  for (int s : s_values) {
    if (s < 1) throw ConfigError("basis sizes must be positive");
    const Eigen::VectorXd r = model.expand(ctx.approximate(dK, s).r);
    const std::vector<double> m = monitored_displacements(model, r);
    const double en = exact.norm();
    rows.push_back({s, rel(m[0], mon[0]), rel(m[1], mon[1]), en > 0 ? (r - exact).norm() / en : (r - exact).norm()});
  }
  return rows;
}

}  // namespace vsuq
