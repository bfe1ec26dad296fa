#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vsuq/dvine.hpp"
#include "vsuq/fe_model.hpp"
#include "vsuq/marginal.hpp"
#include "vsuq/reanalysis.hpp"
#include "vsuq/surrogate.hpp"

namespace vsuq {

enum class EvaluatorKind { Full, Reanalysis, Surrogate };

std::string_view to_string(EvaluatorKind kind);
EvaluatorKind evaluator_from_string(std::string_view name);

struct McsConfig {
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  EvaluatorKind evaluator = EvaluatorKind::Reanalysis;
  /// Marginal of each ply deviation.
  MarginalModel deviation = MarginalModel::gauss(0.0, 0.2);
  /// Interpret deviation values as degrees instead of radians.
  bool degrees = false;
  DVineSpec vine = DVineSpec(2);
  int threads = 1;
  int basis_size = 6;
  /// Largest tolerated share of failed samples.
  double max_failure_fraction = 0.01;
};

/// Evaluators needed by a run; only the selected one must be present.
struct Evaluators {
  const ReanalysisContext* reanalysis = nullptr;
  const SurrogateNet* surrogate = nullptr;
};

struct ResponseSummary {
  double mean = 0.0;
  double variance = 0.0;
  double bandwidth = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

struct McsResult {
  /// Per-ply deviations in radians (rows = samples).
  SampleMatrix deviations;
  /// rows = samples, cols = monitored responses; failed rows hold NaN.
  SampleMatrix responses;
  std::vector<bool> failed;
  std::size_t failures = 0;
  std::vector<ResponseSummary> summary;
  /// running_mean[k][i]: mean of response k over the successful samples up to index i.
  std::vector<std::vector<double>> running_mean;
  /// Mean wall time per evaluation (seconds); not part of the deterministic output.
  double seconds_per_sample = 0.0;
};

/// Deviation vectors (radians) from the vine and the deviation marginal.
SampleMatrix sample_deviations(const McsConfig& config);

/// Monitored responses of one deviation vector with a given evaluator.
class ResponseFunction {
 public:
  ResponseFunction(const LaminateModel& model, EvaluatorKind kind, const Evaluators& ev);
  std::vector<double> operator()(const std::vector<double>& eps);

 private:
  const LaminateModel& model_;
  EvaluatorKind kind_;
  Evaluators ev_;
  std::optional<FullSolver> full_;
};

McsResult run(const McsConfig& config, const LaminateModel& model, const Evaluators& ev);

/// Summary over the successful rows; running mean over the same rows.
std::vector<ResponseSummary> summarize(const SampleMatrix& responses, const std::vector<bool>& failed,
                                       std::vector<std::vector<double>>* running_mean = nullptr);
ResponseSummary summarize_values(const std::vector<double>& values);

struct DistributionFit {
  std::string family;  // "normal" or "lognormal"
  double mu = 0.0;
  double sigma = 0.0;
  bool ok = false;
  std::string error;
  double pdf(double x) const;
  double cdf(double x) const;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  /// counts / (n * width): integrates to one.
  std::vector<double> density;
  DistributionFit normal;
  DistributionFit lognormal;
};

/// Freedman-Diaconis bins plus moment-matched normal and log-moment lognormal fits.
Histogram histogram(const std::vector<double>& values);
DistributionFit fit_normal(const std::vector<double>& values);
DistributionFit fit_lognormal(const std::vector<double>& values);

/// Sorted values with their empirical CDF levels i / n.
std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> values);

struct EfficiencyRow {
  EvaluatorKind kind;
  double seconds_per_iteration;
  /// Full-solve time divided by this evaluator's time.
  double speedup_vs_full;
  std::size_t iterations;
};

/// Times each evaluator over the first `iterations` deviation samples.
std::vector<EfficiencyRow> compare_evaluators(const McsConfig& config, const LaminateModel& model,
                                              const Evaluators& ev, std::size_t iterations = 100);

}  // namespace vsuq
