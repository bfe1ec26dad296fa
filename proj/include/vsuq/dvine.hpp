#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vsuq/copula.hpp"
#include "vsuq/marginal.hpp"

namespace vsuq {

/// D-vine on d variables. Tree j (1-based) has d - j edges; edge e (0-based)
/// couples variables e and e + j given the variables strictly between them.
class DVineSpec {
 public:
  explicit DVineSpec(int d);

  int dimension() const { return d_; }
  int edge_count() const { return d_ * (d_ - 1) / 2; }

  const BivariateCopula& pair(int tree, int edge) const;
  void set_pair(int tree, int edge, const BivariateCopula& c);

 private:
  std::size_t index(int tree, int edge) const;
  int d_;
  std::vector<BivariateCopula> pairs_;
};

/// Tree-1 edge i gets tau tree1_taus[i]; every deeper edge gets deep_tau.
DVineSpec spec_from_taus(int d, const std::vector<double>& tree1_taus, double deep_tau,
                         CopulaFamily family);

/// Row-major n x d matrix of values.
struct SampleMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
  std::uint64_t seed = 0;

  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::vector<double> column(std::size_t c) const;
};

/// Draws n dependent uniform vectors. Row i uses the Philox substream of
/// (seed, i), so the batch is identical for every thread count.
SampleMatrix sample(const DVineSpec& spec, std::size_t n, std::uint64_t seed, int threads = 1);

/// One row of the sampling recursion from independent uniforms w.
std::vector<double> sample_row(const DVineSpec& spec, const std::vector<double>& w);

/// Applies the marginal quantile elementwise.
SampleMatrix push_to_marginals(const SampleMatrix& batch, const MarginalModel& m);

/// Log of the pair-copula density of a point in the unit cube.
double log_density(const DVineSpec& spec, const std::vector<double>& u);

}  // namespace vsuq
