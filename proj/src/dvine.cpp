#include "vsuq/dvine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "vsuq/error.hpp"
#include "vsuq/rng.hpp"

namespace vsuq {

DVineSpec::DVineSpec(int d) : d_(d) {
  if (d < 2) throw ConfigError("D-vine dimension must be at least 2");
  pairs_.resize(static_cast<std::size_t>(edge_count()));
}

std::size_t DVineSpec::index(int tree, int edge) const {
  if (tree < 1 || tree >= d_ || edge < 0 || edge >= d_ - tree) {
    std::ostringstream os;
    os << "D-vine edge (" << tree << ", " << edge << ") out of range for d=" << d_;
    throw ConfigError(os.str());
  }
  // Trees are stored consecutively; tree t holds d - t edges.
  std::size_t offset = 0;
  for (int t = 1; t < tree; ++t) offset += static_cast<std::size_t>(d_ - t);
  return offset + static_cast<std::size_t>(edge);
}

const BivariateCopula& DVineSpec::pair(int tree, int edge) const { return pairs_[index(tree, edge)]; }

void DVineSpec::set_pair(int tree, int edge, const BivariateCopula& c) { pairs_[index(tree, edge)] = c; }

DVineSpec spec_from_taus(int d, const std::vector<double>& tree1_taus, double deep_tau,
                         CopulaFamily family) {
  DVineSpec spec(d);
  if (static_cast<int>(tree1_taus.size()) != d - 1) {
    throw ConfigError("expected " + std::to_string(d - 1) + " tree-1 Kendall taus, got " +
                      std::to_string(tree1_taus.size()));
  }
  auto make = [family](double tau) {
    if (tau == 0.0) return BivariateCopula();
    return BivariateCopula::from_tau(family, tau);
  };
  for (int e = 0; e < d - 1; ++e) spec.set_pair(1, e, make(tree1_taus[e]));
  if (d > 2) {
    const BivariateCopula deep = make(deep_tau);
    for (int t = 2; t < d; ++t) {
      for (int e = 0; e < d - t; ++e) spec.set_pair(t, e, deep);
    }
  }
  return spec;
}

std::vector<double> SampleMatrix::column(std::size_t c) const {
  std::vector<double> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r] = (*this)(r, c);
  return out;
}

namespace {

// fwd[m][k] = F(x_k | x_{k-m}, ..., x_{k-1}); bwd[m][k] = F(x_k | x_{k+1}, ..., x_{k+m}).
struct Workspace {
  explicit Workspace(int d) : d(d), fwd(static_cast<std::size_t>(d * d)), bwd(static_cast<std::size_t>(d * d)) {}
  double& f(int m, int k) { return fwd[static_cast<std::size_t>(m * d + k)]; }
  double& b(int m, int k) { return bwd[static_cast<std::size_t>(m * d + k)]; }
  int d;
  std::vector<double> fwd, bwd;
};

void sample_into(const DVineSpec& spec, const double* w, double* x, Workspace& ws) {
  const int d = spec.dimension();
  ws.f(0, 0) = ws.b(0, 0) = x[0] = w[0];
  for (int i = 1; i < d; ++i) {
    double p = w[i];
    for (int j = i; j >= 1; --j) {
      p = spec.pair(j, i - j).h_inverse(p, ws.b(j - 1, i - j));
      ws.f(j - 1, i) = p;
    }
    x[i] = ws.f(0, i);
    ws.b(0, i) = x[i];
    for (int j = 1; j <= i; ++j) {
      ws.b(j, i - j) = spec.pair(j, i - j).h(ws.b(j - 1, i - j), ws.f(j - 1, i));
    }
  }
}

}  // namespace

std::vector<double> sample_row(const DVineSpec& spec, const std::vector<double>& w) {
  if (static_cast<int>(w.size()) != spec.dimension()) throw ConfigError("uniform vector has wrong width");
  Workspace ws(spec.dimension());
  std::vector<double> x(w.size());
  sample_into(spec, w.data(), x.data(), ws);
  return x;
}

SampleMatrix sample(const DVineSpec& spec, std::size_t n, std::uint64_t seed, int threads) {
  if (n == 0) throw ConfigError("sample count must be at least 1");
  const int d = spec.dimension();
  SampleMatrix out;
  out.rows = n;
  out.cols = static_cast<std::size_t>(d);
  out.seed = seed;
  out.data.resize(n * out.cols);
  const Philox4x32 gen(seed);

  auto work = [&](std::size_t begin, std::size_t end) {
    Workspace ws(d);
    std::vector<double> w(out.cols);
    for (std::size_t r = begin; r < end; ++r) {
      for (int c = 0; c < d; ++c) w[c] = gen.uniform(static_cast<std::uint64_t>(c), r);
      try {
        sample_into(spec, w.data(), &out.data[r * out.cols], ws);
      } catch (const ConvergenceError& e) {
        throw ConvergenceError("vine sample " + std::to_string(r) + ": " + e.what());
      }
    }
  };

  threads = std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::size_t>(n, 1024))));
  if (threads == 1) {
    work(0, n);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::size_t b = std::min(n, t * chunk), e = std::min(n, b + chunk);
    pool.emplace_back([&, t, b, e] {
      try {
        work(b, e);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

SampleMatrix push_to_marginals(const SampleMatrix& batch, const MarginalModel& m) {
  SampleMatrix out = batch;
  for (auto& v : out.data) v = m.quantile(v);
  return out;
}

double log_density(const DVineSpec& spec, const std::vector<double>& u) {
  const int d = spec.dimension();
  if (static_cast<int>(u.size()) != d) throw ConfigError("point has wrong width");
  Workspace ws(d);
  for (int k = 0; k < d; ++k) ws.f(0, k) = ws.b(0, k) = u[k];
  double total = 0.0;
  for (int j = 1; j < d; ++j) {
    for (int e = 0; e + j < d; ++e) {
      const BivariateCopula& c = spec.pair(j, e);
      const double a = ws.b(j - 1, e), b = ws.f(j - 1, e + j);
      total += c.log_density(a, b);
      ws.f(j, e + j) = c.h(b, a);
      ws.b(j, e) = c.h(a, b);
    }
  }
  return total;
}

}  // namespace vsuq
