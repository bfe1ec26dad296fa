#include <doctest.h>

#include <cmath>
#include <vector>

#include "vsuq/dvine.hpp"
#include "vsuq/error.hpp"
#include "vsuq/numerics.hpp"
#include "vsuq/stats.hpp"

using namespace vsuq;

namespace {

const std::vector<double> kPlateTaus{-0.7, 0.3, -0.7, 0.3, -0.7, 0.3, -0.7};

}  // namespace

TEST_SUITE("dvine") {
  TEST_CASE("spec construction") {
    const DVineSpec s8 = spec_from_taus(8, kPlateTaus, 0.3, CopulaFamily::Frank);
    CHECK(s8.edge_count() == 28);
    CHECK(s8.pair(1, 0).kendall_tau() == doctest::Approx(-0.7).epsilon(1e-8));
    CHECK(s8.pair(1, 1).kendall_tau() == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(s8.pair(7, 0).kendall_tau() == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(spec_from_taus(4, {-0.7, 0.3, -0.7}, 0.3, CopulaFamily::Frank).edge_count() == 6);
    CHECK(spec_from_taus(2, {0.0}, 0.0, CopulaFamily::Frank).pair(1, 0).kernel() == CopulaFamily::Independence);
    CHECK_THROWS_AS(spec_from_taus(3, {0.5}, 0.0, CopulaFamily::Frank), ConfigError);
    CHECK_THROWS_AS(spec_from_taus(2, {0.5}, 0.0, CopulaFamily::FGM), RangeError);
    CHECK_THROWS(DVineSpec(1));
  }

  TEST_CASE("independence spec gives independent uniform columns") {
    const SampleMatrix s = sample(DVineSpec(4), 10000, 3);
    for (std::size_t c = 0; c < 4; ++c) {
      CHECK(stats::ks_pvalue(stats::ks_uniform_statistic(s.column(c)), s.rows) > 0.01);
      for (std::size_t k = c + 1; k < 4; ++k) CHECK(std::abs(stats::kendall_tau(s.column(c), s.column(k))) < 0.02);
    }
  }

  TEST_CASE("pair calibration and uniform marginals") {
    DVineSpec d2(2);
    d2.set_pair(1, 0, BivariateCopula::from_tau(CopulaFamily::Frank, -0.7));
    const SampleMatrix s = sample(d2, 10000, 4);
    CHECK(std::abs(stats::kendall_tau(s.column(0), s.column(1)) + 0.7) < 0.03);

    const DVineSpec s8 = spec_from_taus(8, kPlateTaus, 0.3, CopulaFamily::Frank);
    const SampleMatrix t = sample(s8, 10000, 5);
    for (int e = 0; e < 7; ++e) {
      CHECK(std::abs(stats::kendall_tau(t.column(e), t.column(e + 1)) - kPlateTaus[e]) < 0.03);
    }
    for (std::size_t c = 0; c < 8; ++c) {
      double p = stats::ks_pvalue(stats::ks_uniform_statistic(t.column(c)), t.rows);
      if (p <= 0.01) {
        const SampleMatrix again = sample(s8, 10000, 55);
        p = stats::ks_pvalue(stats::ks_uniform_statistic(again.column(c)), again.rows);
      }
      CHECK(p > 0.01);
    }
  }

  TEST_CASE("determinism across calls and thread counts") {
    const DVineSpec s5 = spec_from_taus(5, {0.4, -0.2, 0.6, 0.1}, 0.2, CopulaFamily::Frank);
    const SampleMatrix a = sample(s5, 3000, 77, 1);
    const SampleMatrix b = sample(s5, 3000, 77, 1);
    const SampleMatrix c = sample(s5, 3000, 77, 3);
    CHECK(a.data == b.data);
    CHECK(a.data == c.data);
    CHECK(a.data != sample(s5, 3000, 78).data);
  }

  TEST_CASE("sample_row inverts the conditional CDF chain") {
    // For d = 2, x2 = h^-1(w2 | x1).
    DVineSpec d2(2);
    const BivariateCopula c(CopulaFamily::Gumbel, 2.0);
    d2.set_pair(1, 0, c);
    const auto x = sample_row(d2, {0.3, 0.8});
    CHECK(x[0] == 0.3);
    CHECK(c.h(x[1], x[0]) == doctest::Approx(0.8).epsilon(1e-10));
  }

  TEST_CASE("d=3 joint density matches the hand-built pair-copula product") {
    const BivariateCopula c12(CopulaFamily::Clayton, 1.5), c23(CopulaFamily::Frank, -4.0), c13(CopulaFamily::Gauss, 0.3);
    DVineSpec spec(3);
    spec.set_pair(1, 0, c12);
    spec.set_pair(1, 1, c23);
    spec.set_pair(2, 0, c13);
    for (const auto& u : std::vector<std::vector<double>>{{0.2, 0.5, 0.9}, {0.7, 0.1, 0.4}, {0.5, 0.5, 0.5}}) {
      const double oracle = c12.density(u[0], u[1]) * c23.density(u[1], u[2]) *
                            c13.density(c12.h(u[0], u[1]), c23.h(u[2], u[1]));
      CHECK(std::exp(log_density(spec, u)) == doctest::Approx(oracle).epsilon(1e-12));
    }
  }

  TEST_CASE("d=3 histogram chi-square against the analytic density") {
    const BivariateCopula c12(CopulaFamily::Frank, 4.0), c23(CopulaFamily::Frank, -2.0), c13(CopulaFamily::Frank, 3.0);
    DVineSpec spec(3);
    spec.set_pair(1, 0, c12);
    spec.set_pair(1, 1, c23);
    spec.set_pair(2, 0, c13);
    const int bins = 5;
    const std::size_t n = 200000;
    const SampleMatrix s = sample(spec, n, 8);
    std::vector<double> counts(bins * bins * bins, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      int idx = 0;
      for (int c = 0; c < 3; ++c) idx = idx * bins + std::min(bins - 1, static_cast<int>(s(r, c) * bins));
      counts[idx] += 1;
    }
    const auto& gl = num::gauss_legendre(6);
    double chi2 = 0.0;
    const double w = 1.0 / bins;
    for (int i = 0; i < bins; ++i) {
      for (int j = 0; j < bins; ++j) {
        for (int k = 0; k < bins; ++k) {
          double p = 0.0;
          for (std::size_t a = 0; a < gl.nodes.size(); ++a) {
            for (std::size_t b = 0; b < gl.nodes.size(); ++b) {
              for (std::size_t c = 0; c < gl.nodes.size(); ++c) {
                const double u1 = (i + 0.5 * (gl.nodes[a] + 1)) * w, u2 = (j + 0.5 * (gl.nodes[b] + 1)) * w,
                             u3 = (k + 0.5 * (gl.nodes[c] + 1)) * w;
                p += gl.weights[a] * gl.weights[b] * gl.weights[c] * c12.density(u1, u2) * c23.density(u2, u3) *
                     c13.density(c12.h(u1, u2), c23.h(u3, u2));
              }
            }
          }
          const double e = p * w * w * w / 8 * n;
          const double diff = counts[(i * bins + j) * bins + k] - e;
          chi2 += diff * diff / e;
        }
      }
    }
    CHECK(chi2 / (bins * bins * bins - 1) < 1.5);
  }

  TEST_CASE("push to marginals") {
    const DVineSpec s4 = spec_from_taus(4, {-0.7, 0.3, -0.7}, 0.3, CopulaFamily::Frank);
    const SampleMatrix u = sample(s4, 10000, 9);
    const SampleMatrix x = push_to_marginals(u, MarginalModel::gauss(0.0, 0.2));
    for (std::size_t c = 0; c < 4; ++c) {
      const auto col = x.column(c);
      const double sd = std::sqrt(stats::variance(col));
      CHECK(std::abs(sd - 0.2) < 3 * 0.2 / std::sqrt(2.0 * 10000));
    }
    CHECK(stats::kendall_tau(u.column(0), u.column(1)) == stats::kendall_tau(x.column(0), x.column(1)));
    CHECK(push_to_marginals(u, MarginalModel::uniform(0, 1)).data == u.data);
  }
}
