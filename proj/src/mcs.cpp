#include "vsuq/mcs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "vsuq/error.hpp"
#include "vsuq/numerics.hpp"

namespace vsuq {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double quantile_sorted(const std::vector<double>& s, double p) {
  const double pos = p * (s.size() - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(pos));
  const double f = pos - i;
  return i + 1 < s.size() ? s[i] * (1 - f) + s[i + 1] * f : s[i];
}

}  // namespace

std::string_view to_string(EvaluatorKind kind) {
  switch (kind) {
    case EvaluatorKind::Full: return "full";
    case EvaluatorKind::Reanalysis: return "reanalysis";
    case EvaluatorKind::Surrogate: return "surrogate";
  }
  return "?";
}

EvaluatorKind evaluator_from_string(std::string_view name) {
  if (name == "full") return EvaluatorKind::Full;
  if (name == "reanalysis") return EvaluatorKind::Reanalysis;
  if (name == "surrogate") return EvaluatorKind::Surrogate;
  throw ConfigError("unknown evaluator '" + std::string(name) + "' (expected full, reanalysis or surrogate)");
}

SampleMatrix sample_deviations(const McsConfig& config) {
  SampleMatrix dev = push_to_marginals(sample(config.vine, config.samples, config.seed, config.threads),
                                       config.deviation);
  if (config.degrees) {
    for (auto& v : dev.data) v *= num::kPi / 180.0;
  }
  return dev;
}

ResponseFunction::ResponseFunction(const LaminateModel& model, EvaluatorKind kind, const Evaluators& ev)
    : model_(model), kind_(kind), ev_(ev) {
  if (kind == EvaluatorKind::Reanalysis && !ev.reanalysis) {
    throw DependencyError("reanalysis evaluator requested without a reanalysis context");
  }
  if (kind == EvaluatorKind::Surrogate && !ev.surrogate) {
    throw DependencyError("surrogate evaluator requested without a trained network");
  }
  if (kind == EvaluatorKind::Surrogate && ev.surrogate->inputs() != static_cast<int>(model.ply_count())) {
    throw ConfigError("surrogate input width does not match the ply count");
  }
  if (kind == EvaluatorKind::Full) full_.emplace(model);
}

std::vector<double> ResponseFunction::operator()(const std::vector<double>& eps) {
  switch (kind_) {
    case EvaluatorKind::Full: return monitored_displacements(model_, full_->solve(eps));
    case EvaluatorKind::Reanalysis: return monitored_displacements(model_, ev_.reanalysis->approximate(eps));
    case EvaluatorKind::Surrogate: {
      model_.check_deviation(eps);
      return ev_.surrogate->forward(eps);
    }
  }
  return {};
}

McsResult run(const McsConfig& config, const LaminateModel& model, const Evaluators& ev) {
  if (config.samples < 1) throw ConfigError("sample count must be at least 1");
  if (config.vine.dimension() != static_cast<int>(model.ply_count())) {
    throw ConfigError("vine dimension " + std::to_string(config.vine.dimension()) + " does not match ply count " +
                      std::to_string(model.ply_count()));
  }
  McsResult res;
  res.deviations = sample_deviations(config);
  const std::size_t n = config.samples;
  constexpr std::size_t kResponses = 2;
  res.responses.rows = n;
  res.responses.cols = kResponses;
  res.responses.seed = config.seed;
  res.responses.data.assign(n * kResponses, std::numeric_limits<double>::quiet_NaN());
  std::vector<char> failed(n, 0);

  const int threads = std::max(1, std::min<int>(config.threads, static_cast<int>(n)));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](int t) {
    try {
      ResponseFunction f(model, config.evaluator, ev);
      std::vector<double> eps(model.ply_count());
      for (std::size_t i = static_cast<std::size_t>(t); i < n; i += threads) {
        for (std::size_t p = 0; p < eps.size(); ++p) eps[p] = res.deviations(i, p);
        try {
          const std::vector<double> y = f(eps);
          for (std::size_t k = 0; k < kResponses; ++k) res.responses(i, k) = y[k];
        } catch (const DomainError&) {
          failed[i] = 1;
        } catch (const NumericalError&) {
          failed[i] = 1;
        } catch (const ConvergenceError&) {
          failed[i] = 1;
        }
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  const auto t0 = std::chrono::steady_clock::now();
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  res.seconds_per_sample = seconds_since(t0) / static_cast<double>(n);
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  res.failed.assign(failed.begin(), failed.end());
  res.failures = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  if (static_cast<double>(res.failures) > config.max_failure_fraction * static_cast<double>(n)) {
    throw NumericalError(std::to_string(res.failures) + " of " + std::to_string(n) +
                         " samples failed, above the tolerated fraction");
  }
  res.summary = summarize(res.responses, res.failed, &res.running_mean);
  return res;
}

ResponseSummary summarize_values(const std::vector<double>& values) {
  ResponseSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.variance = values.size() > 1 ? ss / static_cast<double>(values.size() - 1) : 0.0;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  s.min = *mn;
  s.max = *mx;
  s.bandwidth = s.max - s.min;
  return s;
}

std::vector<ResponseSummary> summarize(const SampleMatrix& responses, const std::vector<bool>& failed,
                                       std::vector<std::vector<double>>* running_mean) {
  std::vector<ResponseSummary> out;
  if (running_mean) running_mean->assign(responses.cols, {});
  for (std::size_t k = 0; k < responses.cols; ++k) {
    std::vector<double> v;
    double sum = 0.0;
    for (std::size_t i = 0; i < responses.rows; ++i) {
      if (!failed.empty() && failed[i]) continue;
      v.push_back(responses(i, k));
      sum += v.back();
      if (running_mean) (*running_mean)[k].push_back(sum / static_cast<double>(v.size()));
    }
    if (v.empty()) throw NumericalError("summary needs at least one successful sample");
    out.push_back(summarize_values(v));
  }
  return out;
}

double DistributionFit::pdf(double x) const {
  if (!ok) return 0.0;
  if (family == "lognormal") {
    if (x <= 0.0) return 0.0;
    return num::normal_pdf((std::log(x) - mu) / sigma) / (sigma * x);
  }
  return num::normal_pdf((x - mu) / sigma) / sigma;
}

double DistributionFit::cdf(double x) const {
  if (!ok) return 0.0;
  if (family == "lognormal") return x <= 0.0 ? 0.0 : num::normal_cdf((std::log(x) - mu) / sigma);
  return num::normal_cdf((x - mu) / sigma);
}

DistributionFit fit_normal(const std::vector<double>& values) {
  DistributionFit f;
  f.family = "normal";
  const ResponseSummary s = summarize_values(values);
  f.mu = s.mean;
  f.sigma = std::sqrt(s.variance);
  f.ok = values.size() >= 2 && f.sigma > 0.0;
  if (!f.ok) f.error = "degenerate sample";
  return f;
}

DistributionFit fit_lognormal(const std::vector<double>& values) {
  DistributionFit f;
  f.family = "lognormal";
  std::vector<double> logs;
  for (double v : values) {
    if (!(v > 0.0)) {
      f.error = "lognormal fit needs positive data";
      return f;
    }
    logs.push_back(std::log(v));
  }
  const ResponseSummary s = summarize_values(logs);
  f.mu = s.mean;
  f.sigma = std::sqrt(s.variance);
  f.ok = values.size() >= 2 && f.sigma > 0.0;
  if (!f.ok) f.error = "degenerate sample";
  return f;
}

Histogram histogram(const std::vector<double>& values) {
  if (values.empty()) throw NumericalError("histogram of an empty sample");
  std::vector<double> s = values;
  std::sort(s.begin(), s.end());
  const double lo = s.front(), hi = s.back();
  const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  std::size_t bins = 1;
  if (hi > lo && iqr > 0.0) {
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(s.size()));
    bins = static_cast<std::size_t>(std::clamp(std::ceil((hi - lo) / width), 1.0, 1000.0));
  }
  Histogram h;
  const double span = hi > lo ? hi - lo : 1.0;
  const double start = hi > lo ? lo : lo - 0.5;
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(start + span * static_cast<double>(b) / bins);
  h.counts.assign(bins, 0);
  for (double v : s) {
    std::size_t b = static_cast<std::size_t>((v - start) / span * bins);
    h.counts[std::min(b, bins - 1)]++;
  }
  const double width = span / bins;
  for (auto c : h.counts) h.density.push_back(static_cast<double>(c) / (s.size() * width));
  h.normal = fit_normal(values);
  h.lognormal = fit_lognormal(values);
  return h;
}

std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out.emplace_back(values[i], (i + 1) / n);
  return out;
}

std::vector<EfficiencyRow> compare_evaluators(const McsConfig& config, const LaminateModel& model,
                                              const Evaluators& ev, std::size_t iterations) {
  if (iterations < 1) throw ConfigError("comparison needs at least one iteration");
  McsConfig cfg = config;
  cfg.samples = iterations;
  const SampleMatrix dev = sample_deviations(cfg);
  std::vector<EfficiencyRow> rows;
  for (EvaluatorKind kind : {EvaluatorKind::Full, EvaluatorKind::Reanalysis, EvaluatorKind::Surrogate}) {
    ResponseFunction f(model, kind, ev);
    std::vector<double> eps(model.ply_count());
    volatile double sink = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < iterations; ++i) {
      for (std::size_t p = 0; p < eps.size(); ++p) eps[p] = dev(i, p);
      sink = sink + f(eps)[0];
    }
    rows.push_back({kind, seconds_since(t0) / static_cast<double>(iterations), 0.0, iterations});
  }
  for (auto& r : rows) r.speedup_vs_full = rows[0].seconds_per_iteration / r.seconds_per_iteration;
  return rows;
}

}  // namespace vsuq
