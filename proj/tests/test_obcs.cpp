#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "vsuq/dvine.hpp"
#include "vsuq/error.hpp"
#include "vsuq/numerics.hpp"
#include "vsuq/obcs.hpp"

using namespace vsuq;

namespace {

PairedSample gauss_frank(std::size_t n, double theta, std::uint64_t seed) {
  DVineSpec spec(2);
  spec.set_pair(1, 0, BivariateCopula(CopulaFamily::Frank, theta));
  const SampleMatrix u = sample(spec, n, seed);
  PairedSample d;
  for (std::size_t r = 0; r < n; ++r) {
    d.x1.push_back(num::normal_quantile(u(r, 0)));
    d.x2.push_back(num::normal_quantile(u(r, 1)));
  }
  return d;
}

const std::vector<MarginalFamily> kMarg{MarginalFamily::Gauss, MarginalFamily::Gamma, MarginalFamily::Lognormal};
const std::vector<CopulaFamily> kCop{CopulaFamily::Clayton, CopulaFamily::Gumbel, CopulaFamily::Frank,
                                     CopulaFamily::Gauss, CopulaFamily::Joe};

}  // namespace

TEST_SUITE("obcs") {
  TEST_CASE("pool sizes") {
    PairedSample pos = gauss_frank(50, 3.0, 1);
    for (auto& x : pos.x1) x = std::exp(x);
    for (auto& x : pos.x2) x = std::exp(x);
    CHECK(build_pool(kMarg, kCop, pos).size() == 30);
    CHECK(build_pool({MarginalFamily::Gauss, MarginalFamily::Lognormal}, {CopulaFamily::Frank}, pos).size() == 2);
    std::vector<CopulaFamily> seven{CopulaFamily::Clayton, CopulaFamily::AMH, CopulaFamily::Gumbel, CopulaFamily::Frank,
                                    CopulaFamily::Gauss,   CopulaFamily::Joe, CopulaFamily::FGM};
    const CandidatePool p = build_pool(kMarg, seven, pos);
    CHECK(p.size() == 42);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(p.candidates[i].m1 != p.candidates[i].m2);
      for (std::size_t j = i + 1; j < p.size(); ++j) CHECK(p.candidates[i].name() != p.candidates[j].name());
    }
    CHECK(build_pool(kMarg, kCop, pos, true).size() == 45);
    CHECK_THROWS_AS(build_pool({MarginalFamily::Gauss}, kCop, pos), ConfigError);
    CHECK_THROWS_AS(build_pool(kMarg, {}, pos), ConfigError);
  }

  TEST_CASE("inadmissible candidates carry zero evidence") {
    const PairedSample d = gauss_frank(200, 5.0, 2);
    const CandidatePool p = build_pool(kMarg, {CopulaFamily::Frank}, d, true);
    const SelectionResult r = select(p, d, {5, 11, 1});
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!p.candidates[i].admissible) CHECK(r.weights[i] == 0.0);
    }
    CHECK(r.names[r.best] == "Gauss-Frank-Gauss");
  }

  TEST_CASE("weights normalize and match evidence") {
    const PairedSample d = gauss_frank(300, 5.0, 3);
    const CandidatePool p = build_pool({MarginalFamily::Gauss, MarginalFamily::Uniform}, kCop, d, true);
    const EvidenceOptions opt{5, 11, 1};
    const SelectionResult r = select(p, d, opt);
    CHECK(std::abs(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) - 1.0) < 1e-12);
    std::vector<double> logs;
    for (const auto& c : p.candidates) logs.push_back(candidate_evidence(c, d, p.size(), opt).log_evidence);
    const auto w = normalize_log_weights(logs);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(std::abs(w[i] - r.weights[i]) < 1e-12);
    for (double x : r.weights) CHECK(x >= 0.0);
  }

  TEST_CASE("single candidate and identical candidates") {
    const PairedSample d = gauss_frank(100, 5.0, 4);
    CandidatePool one = build_pool({MarginalFamily::Gauss, MarginalFamily::Uniform}, {CopulaFamily::Frank}, d, true);
    one.candidates.resize(1);
    CHECK(select(one, d, {5, 9, 1}).weights[0] == 1.0);
    CandidatePool two;
    two.candidates = {one.candidates[0], one.candidates[0]};
    const SelectionResult r = select(two, d, {5, 9, 1});
    CHECK(r.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.weights[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.best == 0);
    CHECK(r.tie);
  }

  TEST_CASE("evidence invariant to row permutation") {
    const PairedSample d = gauss_frank(150, 4.0, 5);
    PairedSample rev;
    for (std::size_t i = d.size(); i-- > 0;) {
      rev.x1.push_back(d.x1[i]);
      rev.x2.push_back(d.x2[i]);
    }
    const CandidatePool p = build_pool({MarginalFamily::Gauss, MarginalFamily::Uniform}, {CopulaFamily::Gumbel}, d, true);
    const auto a = candidate_evidence(p.candidates[0], d, p.size(), {5, 9, 1});
    const auto b = candidate_evidence(p.candidates[0], rev, p.size(), {5, 9, 1});
    CHECK(a.log_evidence == doctest::Approx(b.log_evidence).epsilon(1e-10));
  }

  TEST_CASE("doubling box lengths adds the Lebesgue penalty") {
    const PairedSample d = gauss_frank(300, 5.0, 6);
    const CandidatePool p = build_pool(kMarg, {CopulaFamily::Frank}, d, true);
    CandidateModel c = p.candidates[0];
    REQUIRE(c.name() == "Gauss-Frank-Gauss");
    const auto base = candidate_evidence(c, d, p.size(), {9, 21, 1});
    CandidateModel wide = c;
    auto widen = [](Interval& iv) {
      const double mid = 0.5 * (iv.lo + iv.hi), half = iv.length();
      iv = {mid - half, mid + half};
    };
    for (auto& iv : wide.box1.dims) widen(iv);
    widen(wide.theta_box);
    const auto w = candidate_evidence(wide, d, p.size(), {15, 41, 1});
    // The +-3 SE box already holds nearly all likelihood mass, so the integral barely grows.
    const double gain = w.log_evidence - (base.log_evidence - std::log(8.0));
    CHECK(gain > -1e-3);
    CHECK(gain < 0.05);
  }

  TEST_CASE("posterior means near the generating parameters") {
    const PairedSample d = gauss_frank(500, 5.0, 7);
    const CandidatePool p = build_pool({MarginalFamily::Gauss, MarginalFamily::Uniform}, {CopulaFamily::Frank}, d, true);
    const auto e = candidate_evidence(p.candidates[0], d, p.size());
    CHECK(std::abs(e.mean_beta1[0]) < 0.15);
    CHECK(e.mean_beta1[1] == doctest::Approx(1.0).epsilon(0.1));
    CHECK(e.mean_theta == doctest::Approx(5.0).epsilon(0.15));
  }

  TEST_CASE("theta boxes stay admissible") {
    const PairedSample d = gauss_frank(200, -6.0, 8);
    for (auto fam : all_copula_families()) {
      if (fam == CopulaFamily::Independence) continue;
      const Interval iv = default_theta_box(fam, d);
      CAPTURE(to_string(fam));
      CHECK(iv.lo < iv.hi);
      CHECK(admissible_interval(fam).contains(iv.lo));
      CHECK(admissible_interval(fam).contains(iv.hi));
    }
  }

  TEST_CASE("recovery on a few synthetic datasets") {
    int wins = 0;
    for (std::uint64_t rep = 0; rep < 3; ++rep) {
      const PairedSample d = gauss_frank(500, theta_from_tau(CopulaFamily::Frank, 0.5), 500 + rep);
      const SelectionResult r = select(build_pool(kMarg, kCop, d, true), d, {5, 15, 1});
      wins += r.names[r.best] == "Gauss-Frank-Gauss";
    }
    CHECK(wins == 3);
  }

  TEST_CASE("too few rows") {
    PairedSample d{{1, 2, 3}, {1, 2, 3}};
    CHECK_THROWS_AS(build_pool(kMarg, kCop, d), ConfigError);
  }
}
