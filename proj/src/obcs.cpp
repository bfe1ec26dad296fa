#include "vsuq/obcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "vsuq/error.hpp"
#include "vsuq/numerics.hpp"
#include "vsuq/stats.hpp"

namespace vsuq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming log-sum-exp accumulator that also tracks weighted parameter sums.
class LogAccumulator {
 public:
  explicit LogAccumulator(std::size_t dims) : moments_(dims, 0.0) {}

  void add(double log_value, const std::vector<double>& params) {
    if (log_value == kNegInf || std::isnan(log_value)) return;
    if (log_value > max_) {
      const double scale = (max_ == kNegInf) ? 0.0 : std::exp(max_ - log_value);
      sum_ *= scale;
      for (auto& m : moments_) m *= scale;
      max_ = log_value;
    }
    const double w = std::exp(log_value - max_);
    sum_ += w;
    for (std::size_t i = 0; i < moments_.size(); ++i) moments_[i] += w * params[i];
  }

  double log_total() const { return max_ == kNegInf ? kNegInf : max_ + std::log(sum_); }
  double moment(std::size_t i) const { return sum_ > 0.0 ? moments_[i] / sum_ : 0.0; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
  std::vector<double> moments_;
};

struct NodeSet {
  std::vector<std::vector<double>> points;  // parameter vectors
  std::vector<double> log_weights;
};

NodeSet tensor_nodes(const ParameterBox& box, int n) {
  NodeSet set;
  std::vector<num::QuadratureRule> rules;
  for (const auto& d : box.dims) rules.push_back(num::gauss_legendre(n, d.lo, d.hi));
  const std::size_t dims = rules.size();
  std::vector<int> idx(dims, 0);
  while (true) {
    std::vector<double> p(dims);
    double lw = 0.0;
    for (std::size_t j = 0; j < dims; ++j) {
      p[j] = rules[j].nodes[idx[j]];
      lw += std::log(rules[j].weights[idx[j]]);
    }
    set.points.push_back(std::move(p));
    set.log_weights.push_back(lw);
    std::size_t j = 0;
    while (j < dims && ++idx[j] == n) idx[j++] = 0;
    if (j == dims) break;
  }
  return set;
}

// Per-node marginal quantities: CDF values and summed log-density.
struct MarginalNodes {
  std::vector<std::vector<double>> cdf;
  std::vector<double> log_lik;
};

MarginalNodes evaluate_marginal(MarginalFamily family, const NodeSet& nodes,
                                const std::vector<double>& x) {
  MarginalNodes out;
  out.cdf.resize(nodes.points.size());
  out.log_lik.assign(nodes.points.size(), kNegInf);
  for (std::size_t a = 0; a < nodes.points.size(); ++a) {
    if (!valid_parameters(family, nodes.points[a])) continue;
    const MarginalModel m(family, nodes.points[a]);
    double ll = 0.0;
    auto& u = out.cdf[a];
    u.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      ll += m.log_pdf(x[i]);
      u[i] = m.cdf(x[i]);
    }
    out.log_lik[a] = std::isnan(ll) ? kNegInf : ll;
  }
  return out;
}

PairedSample canonical_order(const PairedSample& data) {
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return data.x1[a] < data.x1[b] || (data.x1[a] == data.x1[b] && data.x2[a] < data.x2[b]);
  });
  PairedSample out;
  out.x1.reserve(idx.size());
  out.x2.reserve(idx.size());
  for (auto i : idx) {
    out.x1.push_back(data.x1[i]);
    out.x2.push_back(data.x2[i]);
  }
  return out;
}

void check_data(const PairedSample& data) {
  if (data.x1.size() != data.x2.size()) throw ConfigError("paired sample columns differ in length");
  if (data.size() < 10) throw ConfigError("at least 10 paired observations are required");
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data.x1[i]) || !std::isfinite(data.x2[i])) {
      throw ConfigError("paired sample contains non-finite values");
    }
  }
}

// Asymptotic standard error of Kendall's tau from the U-statistic projection.
double kendall_tau_se(const PairedSample& data) {
  const std::size_t n = data.size();
  std::vector<double> score(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = (data.x1[i] - data.x1[j]) * (data.x2[i] - data.x2[j]);
      const double sg = (s > 0) - (s < 0);
      score[i] += sg;
      score[j] += sg;
    }
  }
  for (auto& s : score) s /= static_cast<double>(n - 1);
  const double var = 4.0 * stats::variance(score) / static_cast<double>(n);
  return std::max(std::sqrt(var), 1.0 / static_cast<double>(n));
}

Interval admissible_box_limits(CopulaFamily family) {
  switch (family) {
    case CopulaFamily::Clayton: return {1e-6, 1e3};
    case CopulaFamily::AMH: return {-1.0, 1.0 - 1e-6};
    case CopulaFamily::Gumbel: return {1.0, 1e3};
    case CopulaFamily::Frank: return {-700.0, 700.0};
    case CopulaFamily::Gauss: return {-1.0 + 1e-6, 1.0 - 1e-6};
    case CopulaFamily::Joe: return {1.0, 1e3};
    case CopulaFamily::FGM: return {-1.0, 1.0};
    case CopulaFamily::Independence: return {0.0, 0.0};
  }
  return {0.0, 0.0};
}

}  // namespace

std::string CandidateModel::name() const {
  return std::string(to_string(m1)) + "-" + std::string(to_string(copula)) + "-" +
         std::string(to_string(m2));
}

double CandidateEvidence::evidence() const {
  return log_evidence == kNegInf ? 0.0 : std::exp(log_evidence);
}

Interval default_theta_box(CopulaFamily family, const PairedSample& data) {
  if (family == CopulaFamily::Independence) return {0.0, 0.0};
  const double tau_hat = stats::kendall_tau(data.x1, data.x2);
  const double se_tau = kendall_tau_se(data);
  const TauRange range = attainable_tau(family);
  const double width = range.hi - range.lo;
  const double tau_c = std::clamp(tau_hat, range.lo + 1e-6 * width, range.hi - 1e-3 * width);
  const double theta = theta_from_tau(family, tau_c);
  const Interval limits = admissible_box_limits(family);

  // d tau / d theta by finite differences inside the admissible set.
  auto tau_at = [family](double t) { return BivariateCopula(family, t).kendall_tau(); };
  const double step = 1e-4 * std::max(1.0, std::abs(theta));
  const double t_lo = std::max(theta - step, limits.lo);
  const double t_hi = std::min(theta + step, limits.hi);
  double slope = (tau_at(t_hi) - tau_at(t_lo)) / (t_hi - t_lo);
  if (!(slope > 0.0)) slope = 1e-3;
  const double se_theta = se_tau / slope;
  Interval box{std::max(theta - 3.0 * se_theta, limits.lo), std::min(theta + 3.0 * se_theta, limits.hi)};
  if (!(box.hi > box.lo)) throw ConfigError("degenerate copula parameter box");
  return box;
}

CandidatePool build_pool(const std::vector<MarginalFamily>& marginals,
                         const std::vector<CopulaFamily>& copulas, const PairedSample& data,
                         bool allow_equal_marginals) {
  if (marginals.size() < 2) throw ConfigError("candidate pool needs at least two marginal families");
  if (copulas.empty()) throw ConfigError("candidate pool needs at least one copula family");
  check_data(data);
  const PairedSample sorted = canonical_order(data);

  std::vector<Interval> theta_boxes;
  for (auto c : copulas) theta_boxes.push_back(default_theta_box(c, sorted));

  CandidatePool pool;
  pool.equal_marginals = allow_equal_marginals;
  for (auto m1 : marginals) {
    for (auto m2 : marginals) {
      if (m1 == m2 && !allow_equal_marginals) continue;
      for (std::size_t k = 0; k < copulas.size(); ++k) {
        CandidateModel cand;
        cand.m1 = m1;
        cand.m2 = m2;
        cand.copula = copulas[k];
        cand.theta_box = theta_boxes[k];
        if (!supports_data(m1, sorted.x1) || !supports_data(m2, sorted.x2)) {
          cand.admissible = false;
          cand.note = "data outside marginal support";
        } else {
          cand.box1 = default_box(m1, sorted.x1);
          cand.box2 = default_box(m2, sorted.x2);
        }
        pool.candidates.push_back(std::move(cand));
      }
    }
  }
  return pool;
}

CandidateEvidence candidate_evidence(const CandidateModel& cand, const PairedSample& data,
                                     std::size_t pool_size, const EvidenceOptions& options) {
  check_data(data);
  CandidateEvidence ev;
  if (!cand.admissible) {
    ev.log_evidence = kNegInf;
    ev.underflow = true;
    ev.diagnostic = cand.note.empty() ? "inadmissible candidate" : cand.note;
    return ev;
  }
  if (!cand.box1.valid() || !cand.box2.valid()) throw ConfigError("invalid marginal parameter box");
  const bool independent = cand.copula == CopulaFamily::Independence;
  if (!independent && !(cand.theta_box.hi > cand.theta_box.lo)) {
    throw ConfigError("invalid copula parameter box for " + cand.name());
  }
  const PairedSample sorted = canonical_order(data);
  const std::size_t n = sorted.size();

  const NodeSet nodes1 = tensor_nodes(cand.box1, options.marginal_nodes);
  const NodeSet nodes2 = tensor_nodes(cand.box2, options.marginal_nodes);
  const MarginalNodes mar1 = evaluate_marginal(cand.m1, nodes1, sorted.x1);
  const MarginalNodes mar2 = evaluate_marginal(cand.m2, nodes2, sorted.x2);

  std::vector<BivariateCopula> copulas;
  std::vector<double> theta_nodes, theta_log_w;
  if (independent) {
    copulas.emplace_back();
    theta_nodes.push_back(0.0);
    theta_log_w.push_back(0.0);
  } else {
    const auto rule = num::gauss_legendre(options.copula_nodes, cand.theta_box.lo, cand.theta_box.hi);
    for (int k = 0; k < options.copula_nodes; ++k) {
      copulas.emplace_back(cand.copula, rule.nodes[k]);
      theta_nodes.push_back(rule.nodes[k]);
      theta_log_w.push_back(std::log(rule.weights[k]));
    }
  }

  const std::size_t d1 = cand.box1.dims.size(), d2 = cand.box2.dims.size();
  LogAccumulator acc(d1 + d2 + 1);
  std::vector<double> params(d1 + d2 + 1);
  for (std::size_t a = 0; a < nodes1.points.size(); ++a) {
    if (mar1.log_lik[a] == kNegInf) continue;
    const auto& u = mar1.cdf[a];
    std::copy(nodes1.points[a].begin(), nodes1.points[a].end(), params.begin());
    for (std::size_t b = 0; b < nodes2.points.size(); ++b) {
      if (mar2.log_lik[b] == kNegInf) continue;
      const auto& v = mar2.cdf[b];
      std::copy(nodes2.points[b].begin(), nodes2.points[b].end(), params.begin() + d1);
      const double base = mar1.log_lik[a] + mar2.log_lik[b] + nodes1.log_weights[a] + nodes2.log_weights[b];
      for (std::size_t k = 0; k < copulas.size(); ++k) {
        double lc = 0.0;
        const auto& cop = copulas[k];
        if (cop.kernel() != CopulaFamily::Independence) {
          for (std::size_t i = 0; i < n; ++i) lc += cop.log_density(u[i], v[i]);
        }
        params[d1 + d2] = theta_nodes[k];
        acc.add(base + lc + theta_log_w[k], params);
      }
    }
  }

  const double log_integral = acc.log_total();
  if (log_integral == kNegInf) {
    ev.log_evidence = kNegInf;
    ev.underflow = true;
    ev.diagnostic = "likelihood underflows at every quadrature node of " + cand.name();
    return ev;
  }
  double log_measure = std::log(cand.box1.measure()) + std::log(cand.box2.measure());
  if (!independent) log_measure += std::log(cand.theta_box.length());
  ev.log_evidence = log_integral - std::log(static_cast<double>(pool_size)) - log_measure;
  for (std::size_t j = 0; j < d1; ++j) ev.mean_beta1.push_back(acc.moment(j));
  for (std::size_t j = 0; j < d2; ++j) ev.mean_beta2.push_back(acc.moment(d1 + j));
  ev.mean_theta = independent ? 0.0 : acc.moment(d1 + d2);
  return ev;
}

std::vector<double> normalize_log_weights(const std::vector<double>& log_w) {
  const double mx = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> w(log_w.size(), 0.0);
  if (mx == kNegInf) return w;
  double sum = 0.0;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    w[i] = (log_w[i] == kNegInf) ? 0.0 : std::exp(log_w[i] - mx);
    sum += w[i];
  }
  for (auto& x : w) x /= sum;
  return w;
}

SelectionResult select(const CandidatePool& pool, const PairedSample& data,
                       const EvidenceOptions& options) {
  if (pool.candidates.empty()) throw ConfigError("candidate pool is empty");
  const std::size_t n = pool.size();
  SelectionResult res;
  res.evidence.resize(n);
  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) res.evidence[i] = candidate_evidence(pool.candidates[i], data, n, options);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < n; i += threads) {
            res.evidence[i] = candidate_evidence(pool.candidates[i], data, n, options);
          }
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<double> log_w;
  for (std::size_t i = 0; i < n; ++i) {
    res.names.push_back(pool.candidates[i].name());
    log_w.push_back(res.evidence[i].log_evidence);
  }
  if (std::all_of(log_w.begin(), log_w.end(), [](double l) { return l == kNegInf; })) {
    throw NumericalError("all candidate evidences are zero; widen the parameter boxes");
  }
  res.weights = normalize_log_weights(log_w);
  for (std::size_t i = 1; i < n; ++i) {
    if (res.weights[i] > res.weights[res.best]) res.best = i;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i != res.best && res.weights[i] == res.weights[res.best]) res.tie = true;
  }
  return res;
}

}  // namespace vsuq
