#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "vsuq/case_config.hpp"
#include "vsuq/error.hpp"
#include "vsuq/io.hpp"
#include "vsuq/mcs.hpp"
#include "vsuq/numerics.hpp"
#include "vsuq/rng.hpp"
#include "vsuq/stats.hpp"

using namespace vsuq;

namespace {

CaseConfig load(const char* name) {
  return parse_case(io::read_file(std::string(VSUQ_SOURCE_DIR) + "/configs/" + name + ".json"));
}

}  // namespace

TEST_SUITE("mcs") {
  TEST_CASE("single sample at a collapsed deviation equals the nominal solve") {
    const CaseConfig cs = load("beam");
    McsConfig cfg = cs.mcs;
    cfg.samples = 1;
    cfg.deviation = MarginalModel::gauss(0.0, 1e-300);
    cfg.evaluator = EvaluatorKind::Full;
    const McsResult r = run(cfg, *cs.model, {});
    const auto nominal = monitored_displacements(*cs.model, cs.model->solve_full(std::vector<double>(4, 0.0)));
    REQUIRE(r.summary.size() == 2);
    CHECK(r.summary[0].count == 1);
    CHECK(r.summary[0].mean == doctest::Approx(nominal[0]).epsilon(1e-12));
    CHECK(r.summary[1].mean == doctest::Approx(nominal[1]).epsilon(1e-12));
    CHECK(r.summary[0].variance == 0.0);
  }

  TEST_CASE("full and reanalysis runs agree sample by sample") {
    const CaseConfig cs = load("hole_plate");
    const ReanalysisContext ctx(*cs.model);
    McsConfig cfg = cs.mcs;
    cfg.samples = 60;
    cfg.evaluator = EvaluatorKind::Full;
    const McsResult full = run(cfg, *cs.model, {});
    cfg.evaluator = EvaluatorKind::Reanalysis;
    const McsResult re = run(cfg, *cs.model, {&ctx, nullptr});
    CHECK(full.deviations.data == re.deviations.data);
    for (std::size_t i = 0; i < cfg.samples; ++i) {
      for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(re.responses(i, k) / full.responses(i, k) - 1) < 0.01);
    }
  }

  TEST_CASE("summary statistics and running mean") {
    const CaseConfig cs = load("beam");
    const ReanalysisContext ctx(*cs.model);
    McsConfig cfg = cs.mcs;
    cfg.samples = 300;
    const McsResult r = run(cfg, *cs.model, {&ctx, nullptr});
    for (std::size_t k = 0; k < 2; ++k) {
      const auto col = r.responses.column(k);
      const double mean = std::accumulate(col.begin(), col.end(), 0.0) / col.size();
      CHECK(r.summary[k].mean == mean);
      CHECK(r.running_mean[k].back() == r.summary[k].mean);
      CHECK(r.running_mean[k].size() == 300);
      CHECK(r.summary[k].variance == doctest::Approx(stats::variance(col)).epsilon(1e-12));
      CHECK(r.summary[k].bandwidth >= 0.0);
      CHECK(r.summary[k].bandwidth == r.summary[k].max - r.summary[k].min);
    }
    CHECK(r.failures == 0);
  }

  TEST_CASE("constant and normal samples") {
    const ResponseSummary c = summarize_values(std::vector<double>(50, 3.25));
    CHECK(c.variance == 0.0);
    CHECK(c.bandwidth == 0.0);
    CHECK(c.mean == 3.25);

    CounterStream rng(51, 0);
    std::vector<double> v(100000);
    for (auto& x : v) x = 2.0 + 0.5 * num::normal_quantile(rng.uniform());
    const DistributionFit f = fit_normal(v);
    CHECK(f.ok);
    CHECK(std::abs(f.mu - 2.0) < 3 * 0.5 / std::sqrt(1e5));
    CHECK(std::abs(f.sigma - 0.5) < 0.01);
    const Histogram h = histogram(v);
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) == v.size());
    CHECK(h.edges.size() == h.counts.size() + 1);
    double area = 0.0;
    for (std::size_t b = 0; b < h.density.size(); ++b) area += h.density[b] * (h.edges[b + 1] - h.edges[b]);
    CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.normal.cdf(2.0) == doctest::Approx(0.5).epsilon(0.01));

    const auto cdf = empirical_cdf({3.0, 1.0, 2.0});
    CHECK(cdf[0].first == 1.0);
    CHECK(cdf[2].second == 1.0);
  }

  TEST_CASE("lognormal fit on nonpositive data") {
    const DistributionFit f = fit_lognormal({1.0, 2.0, -0.5, 3.0});
    CHECK_FALSE(f.ok);
    CHECK_FALSE(f.error.empty());
    const Histogram h = histogram({-1.0, 0.0, 1.0, 2.0, 2.5});
    CHECK_FALSE(h.lognormal.ok);
    CHECK(h.normal.ok);
    CHECK(fit_lognormal({std::exp(1.0), std::exp(3.0)}).mu == doctest::Approx(2.0));
  }

  TEST_CASE("adjacent-ply dependence propagates to deviations") {
    const CaseConfig cs = load("hole_plate");
    McsConfig cfg = cs.mcs;
    cfg.samples = 20000;
    const SampleMatrix dev = sample_deviations(cfg);
    CHECK(std::abs(stats::kendall_tau(dev.column(0), dev.column(1)) + 0.7) < 0.03);
    CHECK(std::abs(stats::kendall_tau(dev.column(1), dev.column(2)) - 0.3) < 0.03);
    CHECK(std::sqrt(stats::variance(dev.column(4))) == doctest::Approx(0.2).epsilon(0.03));
    McsConfig deg = cfg;
    deg.degrees = true;
    deg.samples = 10;
    const SampleMatrix d2 = sample_deviations(deg);
    CHECK(d2(3, 2) == doctest::Approx(dev(3, 2) * num::kPi / 180).epsilon(1e-15));
  }

  TEST_CASE("doubling the load doubles every response") {
    const CaseConfig cs = load("beam");
    const LaminateModel twice = cs.model->with_load_scale(2.0);
    McsConfig cfg = cs.mcs;
    cfg.samples = 20;
    cfg.evaluator = EvaluatorKind::Full;
    const McsResult a = run(cfg, *cs.model, {});
    const McsResult b = run(cfg, twice, {});
    for (std::size_t i = 0; i < a.responses.data.size(); ++i) {
      CHECK(b.responses.data[i] == doctest::Approx(2 * a.responses.data[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("results do not depend on the thread count") {
    const CaseConfig cs = load("beam");
    const ReanalysisContext ctx(*cs.model);
    McsConfig cfg = cs.mcs;
    cfg.samples = 200;
    cfg.threads = 1;
    const McsResult a = run(cfg, *cs.model, {&ctx, nullptr});
    cfg.threads = 3;
    const McsResult b = run(cfg, *cs.model, {&ctx, nullptr});
    CHECK(a.deviations.data == b.deviations.data);
    CHECK(a.responses.data == b.responses.data);
    CHECK(a.running_mean == b.running_mean);
  }

  TEST_CASE("failed samples are excluded, and too many abort the run") {
    const CaseConfig cs = load("beam");
    ModelOptions opt = cs.model->options();
    opt.deviation_cap = 0.3;
    const LaminateModel capped(cs.model->mesh(), cs.model->plies(), cs.model->material(), cs.model->constraints(),
                               cs.model->loads(), opt);
    const ReanalysisContext ctx(capped);
    McsConfig cfg = cs.mcs;
    cfg.samples = 200;
    CHECK_THROWS_AS(run(cfg, capped, {&ctx, nullptr}), NumericalError);
    cfg.max_failure_fraction = 1.0;
    const McsResult r = run(cfg, capped, {&ctx, nullptr});
    CHECK(r.failures > 0);
    CHECK(r.summary[0].count == 200 - r.failures);
    for (std::size_t i = 0; i < 200; ++i) {
      if (r.failed[i]) CHECK(std::isnan(r.responses(i, 0)));
    }
  }

  TEST_CASE("configuration errors") {
    const CaseConfig cs = load("beam");
    McsConfig cfg = cs.mcs;
    cfg.samples = 0;
    CHECK_THROWS_AS(run(cfg, *cs.model, {}), ConfigError);
    cfg.samples = 5;
    cfg.evaluator = EvaluatorKind::Surrogate;
    CHECK_THROWS_AS(run(cfg, *cs.model, {}), DependencyError);
    cfg.vine = DVineSpec(3);
    CHECK_THROWS_AS(run(cfg, *cs.model, {}), ConfigError);
    CHECK(evaluator_from_string("reanalysis") == EvaluatorKind::Reanalysis);
    CHECK_THROWS_AS(evaluator_from_string("fast"), ConfigError);
  }

  TEST_CASE("evaluator comparison table") {
    const CaseConfig cs = load("beam");
    const ReanalysisContext ctx(*cs.model);
    SurrogateNet net(4, 3, 2);
    net.input_norm = Normalizer::identity(4);
    net.output_norm = Normalizer::identity(2);
    const auto rows = compare_evaluators(cs.mcs, *cs.model, {&ctx, &net}, 5);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].kind == EvaluatorKind::Full);
    CHECK(rows[0].speedup_vs_full == 1.0);
    CHECK(rows[2].kind == EvaluatorKind::Surrogate);
    for (const auto& r : rows) {
      CHECK(r.iterations == 5);
      CHECK(r.seconds_per_iteration > 0.0);
    }
  }
}
