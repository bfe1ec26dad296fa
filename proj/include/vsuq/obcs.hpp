#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vsuq/copula.hpp"
#include "vsuq/marginal.hpp"

namespace vsuq {

/// Two equally long columns of paired observations.
struct PairedSample {
  std::vector<double> x1;
  std::vector<double> x2;
  std::size_t size() const { return x1.size(); }
};

/// A (marginal, copula, marginal) triple with uniform-prior parameter boxes.
struct CandidateModel {
  MarginalFamily m1 = MarginalFamily::Gauss;
  CopulaFamily copula = CopulaFamily::Frank;
  MarginalFamily m2 = MarginalFamily::Gauss;
  ParameterBox box1;
  ParameterBox box2;
  Interval theta_box{0.0, 0.0};
  /// False when a marginal family cannot describe the data (e.g. Gamma on
  /// negative values); such candidates have zero evidence.
  bool admissible = true;
  std::string note;

  std::string name() const;
};

struct CandidatePool {
  std::vector<CandidateModel> candidates;
  bool equal_marginals = false;
  std::size_t size() const { return candidates.size(); }
};

struct EvidenceOptions {
  /// Gauss-Legendre nodes per marginal-parameter coordinate.
  int marginal_nodes = 7;
  /// Gauss-Legendre nodes for the copula parameter.
  int copula_nodes = 15;
  /// Worker threads used by select (candidates are scored independently).
  int threads = 1;
};

struct CandidateEvidence {
  /// log w_l; -infinity when the integrand underflows everywhere.
  double log_evidence = 0.0;
  bool underflow = false;
  std::string diagnostic;
  std::vector<double> mean_beta1;
  std::vector<double> mean_beta2;
  double mean_theta = 0.0;

  double evidence() const;
};

struct SelectionResult {
  std::vector<std::string> names;
  std::vector<double> weights;
  std::vector<CandidateEvidence> evidence;
  std::size_t best = 0;
  bool tie = false;
};

/// Data-driven box for a copula parameter: tau-inverted point estimate widened by
/// +-3 delta-method standard errors, intersected with the admissible set.
Interval default_theta_box(CopulaFamily family, const PairedSample& data);

/// Ordered marginal pairs per copula: n(n-1)m candidates, or n*n*m when
/// allow_equal_marginals is set.
CandidatePool build_pool(const std::vector<MarginalFamily>& marginals,
                         const std::vector<CopulaFamily>& copulas, const PairedSample& data,
                         bool allow_equal_marginals = false);

/// w_l: box-averaged likelihood divided by the pool size, via tensor
/// Gauss-Legendre quadrature in log space.
CandidateEvidence candidate_evidence(const CandidateModel& candidate, const PairedSample& data,
                                     std::size_t pool_size, const EvidenceOptions& options = {});

/// Normalized weights and argmax (ties resolved toward the lower index).
SelectionResult select(const CandidatePool& pool, const PairedSample& data,
                       const EvidenceOptions& options = {});

/// Normalizes log-evidences into weights that sum to one.
std::vector<double> normalize_log_weights(const std::vector<double>& log_w);

}  // namespace vsuq
