// vsuq: command-line driver for copula selection, vine sampling, laminate
// solves, surrogate training and Monte Carlo runs.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vsuq/case_config.hpp"
#include "vsuq/error.hpp"
#include "vsuq/io.hpp"
#include "vsuq/mcs.hpp"
#include "vsuq/obcs.hpp"
#include "vsuq/reanalysis.hpp"
#include "vsuq/surrogate.hpp"

using namespace vsuq;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string out = "out";
  std::string evaluator;
  bool allow_equal = false;
};

class Timer {
 public:
  void stage(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    timings_[name] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }
  void write(const std::string& dir) const { io::write_file((fs::path(dir) / "timings.json").string(), timings_.dump(2) + "\n"); }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  ojson timings_ = ojson::object();
};

// Outputs are written through here so the manifest lists every file.
class Outputs {
 public:
  explicit Outputs(std::string dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }
  void write(const std::string& name, const std::string& content) {
    io::write_file((fs::path(dir_) / name).string(), content);
    files_.push_back(name);
  }
  void finish(const std::string& command, const std::string& config_bytes, std::uint64_t seed, const Timer& t) {
    io::write_manifest(dir_, command, io::sha256_hex(config_bytes), seed, files_);
    t.write(dir_);
  }
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::vector<std::string> files_;
};

std::string num(double x) { return io::format_double(x); }

// JSON numbers are emitted through %.17g so output bytes never depend on the library's float printer.
ojson jnum(double x) { return ojson::parse(num(x)); }

ojson jvec(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(jnum(x));
  return a;
}

std::string require_config(const Common& c) {
  if (c.config.empty()) throw ConfigError("--config is required");
  return io::read_file(c.config);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("'" + item + "' is not a number");
    }
  }
  return out;
}

ojson summary_json(const std::vector<ResponseSummary>& s) {
  static const char* names[] = {"X", "Y"};
  ojson rows = ojson::array();
  for (std::size_t k = 0; k < s.size(); ++k) {
    rows.push_back({{"Response", names[k]},
                    {"Mean", jnum(s[k].mean)},
                    {"Variance", jnum(s[k].variance)},
                    {"Bandwidth", jnum(s[k].bandwidth)},
                    {"Min", jnum(s[k].min)},
                    {"Max", jnum(s[k].max)},
                    {"Count", s[k].count}});
  }
  return rows;
}

std::string summary_csv(const std::vector<ResponseSummary>& s) {
  static const char* names[] = {"X", "Y"};
  std::string out = "Response,Mean,Variance,Bandwidth\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    out += std::string(names[k]) + "," + num(s[k].mean) + "," + num(s[k].variance) + "," + num(s[k].bandwidth) + "\n";
  }
  return out;
}

// ---- select ------------------------------------------------------------

int cmd_select(const Common& c, const std::string& data_path) {
  Timer timer;
  const PairedSample data = io::parse_paired_csv(io::read_file(data_path));
  std::vector<MarginalFamily> marginals{MarginalFamily::Gauss, MarginalFamily::Gamma, MarginalFamily::Lognormal};
  std::vector<CopulaFamily> copulas{CopulaFamily::Clayton, CopulaFamily::Gumbel, CopulaFamily::Frank,
                                    CopulaFamily::Gauss, CopulaFamily::Joe};
  EvidenceOptions opt;
  opt.threads = c.threads;
  std::string config_bytes = io::read_file(data_path);
  if (!c.config.empty()) {
    const std::string text = io::read_file(c.config);
    config_bytes += text;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
      if (j.contains("marginals")) {
        marginals.clear();
        for (const auto& m : j["marginals"]) marginals.push_back(marginal_family_from_string(m.get<std::string>()));
      }
      if (j.contains("copulas")) {
        copulas.clear();
        for (const auto& m : j["copulas"]) copulas.push_back(copula_family_from_string(m.get<std::string>()));
      }
      opt.marginal_nodes = j.value("marginal_nodes", opt.marginal_nodes);
      opt.copula_nodes = j.value("copula_nodes", opt.copula_nodes);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("pool config: ") + e.what());
    }
  }
  timer.stage("read");
  const CandidatePool pool = build_pool(marginals, copulas, data, c.allow_equal);
  const SelectionResult res = select(pool, data, opt);
  timer.stage("select");

  ojson j;
  j["pool_size"] = pool.size();
  j["equal_marginals"] = pool.equal_marginals;
  j["best"] = res.names[res.best];
  j["best_index"] = res.best;
  j["tie"] = res.tie;
  ojson cands = ojson::array();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& ev = res.evidence[i];
    ojson e{{"name", res.names[i]},
            {"weight", jnum(res.weights[i])},
            {"log_evidence", ev.log_evidence == -std::numeric_limits<double>::infinity() ? ojson(nullptr) : jnum(ev.log_evidence)},
            {"underflow", ev.underflow},
            {"posterior_mean", {{"beta1", jvec(ev.mean_beta1)}, {"beta2", jvec(ev.mean_beta2)}, {"theta", jnum(ev.mean_theta)}}}};
    if (!ev.diagnostic.empty()) e["diagnostic"] = ev.diagnostic;
    cands.push_back(e);
  }
  j["candidates"] = cands;
  Outputs out(c.out);
  out.write("selection.json", j.dump(2) + "\n");
  out.finish("select", config_bytes, 0, timer);
  std::cout << "best candidate: " << res.names[res.best] << " (weight " << num(res.weights[res.best]) << ")\n";
  return 0;
}

// ---- sample ------------------------------------------------------------

int cmd_sample(const Common& c, std::optional<long long> samples) {
  Timer timer;
  const std::string text = require_config(c);
  McsConfig cfg = parse_sampling(text);
  if (samples) {
    if (*samples < 1) throw ConfigError("--samples must be at least 1");
    cfg.samples = static_cast<std::size_t>(*samples);
  }
  if (c.seed) cfg.seed = *c.seed;
  cfg.threads = c.threads;
  const SampleMatrix u = sample(cfg.vine, cfg.samples, cfg.seed, cfg.threads);
  const SampleMatrix dev = sample_deviations(cfg);
  timer.stage("sample");
  std::vector<std::string> header;
  for (int i = 0; i < cfg.vine.dimension(); ++i) header.push_back("ply" + std::to_string(i + 1));
  Outputs out(c.out);
  out.write("samples.csv", io::matrix_csv(u, header));
  out.write("deviations.csv", io::matrix_csv(dev, header));
  out.finish("sample", text, cfg.seed, timer);
  std::cout << "wrote " << cfg.samples << " x " << cfg.vine.dimension() << " samples\n";
  return 0;
}

// ---- solve -------------------------------------------------------------

int cmd_solve(const Common& c, const std::string& deviation, bool degrees) {
  Timer timer;
  const std::string text = require_config(c);
  const auto model = parse_model(text);
  std::vector<double> eps(model->ply_count(), 0.0);
  if (!deviation.empty()) eps = parse_list(deviation);
  if (degrees) {
    for (auto& e : eps) e *= 3.14159265358979323846 / 180.0;
  }
  model->check_deviation(eps);
  const Eigen::VectorXd r = model->solve_full(eps);
  timer.stage("solve");
  std::vector<std::vector<double>> cols(8);
  for (std::size_t n = 0; n < model->mesh().node_count(); ++n) {
    cols[0].push_back(static_cast<double>(n));
    cols[1].push_back(model->mesh().nodes[n][0]);
    cols[2].push_back(model->mesh().nodes[n][1]);
    for (int d = 0; d < kDofsPerNode; ++d) cols[3 + d].push_back(r[n * kDofsPerNode + d]);
  }
  const auto mon = monitored_displacements(*model, r);
  Outputs out(c.out);
  out.write("displacement.csv", io::columns_csv({"node", "x", "y", "u", "v", "w", "theta_x", "theta_y"}, cols));
  std::string mesh_csv = "element,n1,n2,n3,n4\n";
  for (std::size_t e = 0; e < model->mesh().element_count(); ++e) {
    const auto& el = model->mesh().elements[e];
    mesh_csv += std::to_string(e) + "," + std::to_string(el[0]) + "," + std::to_string(el[1]) + "," +
                std::to_string(el[2]) + "," + std::to_string(el[3]) + "\n";
  }
  out.write("mesh.csv", mesh_csv);
  ojson j{{"deviation_rad", jvec(eps)}, {"max_abs_u", jnum(mon[0])}, {"max_abs_v", jnum(mon[1])}};
  out.write("monitored.json", j.dump(2) + "\n");
  out.finish("solve", text, 0, timer);
  std::cout << "max|u| = " << num(mon[0]) << "  max|v| = " << num(mon[1]) << "\n";
  return 0;
}

// ---- train -------------------------------------------------------------

Eigen::MatrixXd to_eigen(const SampleMatrix& m, const std::vector<bool>* failed = nullptr) {
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < m.rows; ++r) {
    if (!failed || !(*failed)[r]) keep.push_back(r);
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(m.cols));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (std::size_t c = 0; c < m.cols; ++c) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = m(keep[i], c);
  }
  return out;
}

int cmd_train(const Common& c, bool sweep) {
  Timer timer;
  const std::string text = require_config(c);
  CaseConfig cs = parse_case(text);
  if (c.seed) {
    cs.mcs.seed = *c.seed;
    cs.train.seed = *c.seed;
  }
  cs.mcs.threads = c.threads;
  cs.mcs.samples = cs.train_samples;
  cs.mcs.evaluator = EvaluatorKind::Reanalysis;
  const ReanalysisContext ctx(*cs.model, cs.mcs.basis_size);
  const McsResult labels = run(cs.mcs, *cs.model, {&ctx, nullptr});
  timer.stage("labels");
  const Eigen::MatrixXd X = to_eigen(labels.deviations, &labels.failed);
  const Eigen::MatrixXd Y = to_eigen(labels.responses, &labels.failed);
  TrainingReport rep;
  const SurrogateNet net = train(X, Y, cs.train, &rep);
  timer.stage("train");

  Outputs out(c.out);
  out.write("surrogate.json", surrogate_to_json(net, &rep.test));
  std::vector<double> epochs;
  for (std::size_t e = 0; e < rep.train_loss.size(); ++e) epochs.push_back(static_cast<double>(e));
  out.write("training.csv", io::columns_csv({"epoch", "train_loss", "validation_loss"},
                                            {epochs, rep.train_loss, rep.validation_loss}));
  ojson rj{{"seed", rep.seed},
           {"hidden", cs.train.hidden},
           {"best_epoch", rep.best_epoch},
           {"n_train", rep.n_train},
           {"n_validation", rep.n_validation},
           {"n_test", rep.n_test},
           {"test_loss", rep.test_loss.empty() ? ojson(nullptr) : jnum(rep.test_loss[0])},
           {"acc", jvec(rep.test.acc)},
           {"r2", jvec(rep.test.r2)}};
  if (sweep) {
    std::vector<double> widths, acc_x, acc_y, r2_x, r2_y;
    for (int m : cs.sweep) {
      TrainConfig tc = cs.train;
      tc.hidden = m;
      TrainingReport r;
      train(X, Y, tc, &r);
      widths.push_back(m);
      acc_x.push_back(r.test.acc[0]);
      acc_y.push_back(r.test.acc[1]);
      r2_x.push_back(r.test.r2[0]);
      r2_y.push_back(r.test.r2[1]);
    }
    out.write("sweep.csv", io::columns_csv({"hidden", "acc_x", "acc_y", "r2_x", "r2_y"}, {widths, acc_x, acc_y, r2_x, r2_y}));
    timer.stage("sweep");
  }
  out.write("training_report.json", rj.dump(2) + "\n");
  out.finish("train", text, cs.train.seed, timer);
  std::cout << "test R2 X=" << num(rep.test.r2[0]) << " Y=" << num(rep.test.r2[1]) << "  acc X=" << num(rep.test.acc[0])
            << " Y=" << num(rep.test.acc[1]) << "\n";
  return 0;
}

// ---- mcs ---------------------------------------------------------------

SurrogateNet load_surrogate(const std::string& path) {
  if (!fs::exists(path)) throw DependencyError("surrogate evaluator needs a trained network: missing " + path);
  return surrogate_from_json(io::read_file(path));
}

int cmd_mcs(const Common& c, const std::string& surrogate_path) {
  Timer timer;
  const std::string text = require_config(c);
  CaseConfig cs = parse_case(text);
  if (c.seed) cs.mcs.seed = *c.seed;
  if (!c.evaluator.empty()) cs.mcs.evaluator = evaluator_from_string(c.evaluator);
  cs.mcs.threads = c.threads;
  std::optional<ReanalysisContext> ctx;
  std::optional<SurrogateNet> net;
  if (cs.mcs.evaluator == EvaluatorKind::Reanalysis) ctx.emplace(*cs.model, cs.mcs.basis_size);
  if (cs.mcs.evaluator == EvaluatorKind::Surrogate) {
    net = load_surrogate(surrogate_path.empty() ? (fs::path(c.out) / "surrogate.json").string() : surrogate_path);
  }
  timer.stage("prepare");
  const McsResult res = run(cs.mcs, *cs.model, {ctx ? &*ctx : nullptr, net ? &*net : nullptr});
  timer.stage("mcs");

  Outputs out(c.out);
  std::vector<std::string> header;
  for (std::size_t p = 0; p < cs.model->ply_count(); ++p) header.push_back("eps" + std::to_string(p + 1));
  header.push_back("X");
  header.push_back("Y");
  header.push_back("failed");
  std::string per = "";
  for (std::size_t i = 0; i < header.size(); ++i) per += (i ? "," : "") + header[i];
  per += "\n";
  for (std::size_t r = 0; r < res.responses.rows; ++r) {
    for (std::size_t p = 0; p < res.deviations.cols; ++p) per += num(res.deviations(r, p)) + ",";
    per += num(res.responses(r, 0)) + "," + num(res.responses(r, 1)) + "," + (res.failed[r] ? "1" : "0") + "\n";
  }
  out.write("per_sample.csv", per);
  std::vector<double> idx;
  for (std::size_t i = 0; i < res.running_mean[0].size(); ++i) idx.push_back(static_cast<double>(i + 1));
  out.write("running_mean.csv", io::columns_csv({"count", "mean_X", "mean_Y"}, {idx, res.running_mean[0], res.running_mean[1]}));

  ojson fits = ojson::object();
  static const char* names[] = {"X", "Y"};
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<double> v;
    for (std::size_t r = 0; r < res.responses.rows; ++r) {
      if (!res.failed[r]) v.push_back(res.responses(r, k));
    }
    const Histogram h = histogram(v);
    std::vector<double> lo, hi, counts, dens, npdf, lpdf;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      lo.push_back(h.edges[b]);
      hi.push_back(h.edges[b + 1]);
      counts.push_back(static_cast<double>(h.counts[b]));
      dens.push_back(h.density[b]);
      const double mid = 0.5 * (h.edges[b] + h.edges[b + 1]);
      npdf.push_back(h.normal.pdf(mid));
      lpdf.push_back(h.lognormal.pdf(mid));
    }
    out.write(std::string("histogram_") + names[k] + ".csv",
              io::columns_csv({"lo", "hi", "count", "density", "normal_pdf", "lognormal_pdf"}, {lo, hi, counts, dens, npdf, lpdf}));
    std::vector<double> xs, ecdf, ncdf, lcdf;
    for (const auto& [x, p] : empirical_cdf(v)) {
      xs.push_back(x);
      ecdf.push_back(p);
      ncdf.push_back(h.normal.cdf(x));
      lcdf.push_back(h.lognormal.cdf(x));
    }
    out.write(std::string("cdf_") + names[k] + ".csv",
              io::columns_csv({"x", "empirical", "normal", "lognormal"}, {xs, ecdf, ncdf, lcdf}));
    auto fit_json = [](const DistributionFit& f) {
      ojson o{{"ok", f.ok}, {"mu", jnum(f.mu)}, {"sigma", jnum(f.sigma)}};
      if (!f.error.empty()) o["error"] = f.error;
      return o;
    };
    fits[names[k]] = {{"normal", fit_json(h.normal)}, {"lognormal", fit_json(h.lognormal)}, {"bins", h.counts.size()}};
  }
  ojson j{{"case", cs.name},
          {"evaluator", std::string(to_string(cs.mcs.evaluator))},
          {"samples", cs.mcs.samples},
          {"seed", cs.mcs.seed},
          {"failures", res.failures},
          {"summary", summary_json(res.summary)},
          {"fits", fits}};
  out.write("summary.json", j.dump(2) + "\n");
  out.write("summary.csv", summary_csv(res.summary));
  out.finish("mcs", text, cs.mcs.seed, timer);
  std::cout << summary_csv(res.summary);
  return 0;
}

// ---- compare -----------------------------------------------------------

int cmd_compare(const Common& c, const std::string& surrogate_path, int iterations) {
  Timer timer;
  const std::string text = require_config(c);
  CaseConfig cs = parse_case(text);
  if (c.seed) cs.mcs.seed = *c.seed;
  const SurrogateNet net = load_surrogate(surrogate_path.empty() ? (fs::path(c.out) / "surrogate.json").string() : surrogate_path);
  const ReanalysisContext ctx(*cs.model, cs.mcs.basis_size);
  const auto rows = compare_evaluators(cs.mcs, *cs.model, {&ctx, &net}, static_cast<std::size_t>(iterations));
  timer.stage("compare");
  // Wall times vary run to run, so this table is reported but kept out of the manifest.
  std::string csv = "evaluator,seconds_per_iteration,speedup_vs_full,iterations\n";
  for (const auto& r : rows) {
    csv += std::string(to_string(r.kind)) + "," + num(r.seconds_per_iteration) + "," + num(r.speedup_vs_full) + "," +
           std::to_string(r.iterations) + "\n";
  }
  fs::create_directories(c.out);
  io::write_file((fs::path(c.out) / "efficiency.csv").string(), csv);
  timer.write(c.out);
  std::cout << csv;
  return 0;
}

// ---- basis-study -------------------------------------------------------

int cmd_basis(const Common& c, const std::string& s_list, const std::string& deviation) {
  Timer timer;
  const std::string text = require_config(c);
  CaseConfig cs = parse_case(text);
  if (c.seed) cs.mcs.seed = *c.seed;
  std::vector<double> eps(cs.model->ply_count());
  if (!deviation.empty()) {
    eps = parse_list(deviation);
  } else {
    McsConfig one = cs.mcs;
    one.samples = 1;
    const SampleMatrix d = sample_deviations(one);
    for (std::size_t p = 0; p < eps.size(); ++p) eps[p] = d(0, p);
  }
  std::vector<int> sizes;
  for (double s : parse_list(s_list)) sizes.push_back(static_cast<int>(s));
  const ReanalysisContext ctx(*cs.model, cs.mcs.basis_size);
  const auto rows = basis_study(ctx, eps, sizes);
  timer.stage("basis_study");
  std::vector<double> s, ex, ey, en;
  for (const auto& r : rows) {
    s.push_back(r.s);
    ex.push_back(r.error_x);
    ey.push_back(r.error_y);
    en.push_back(r.error_norm);
  }
  Outputs out(c.out);
  out.write("basis_study.csv", io::columns_csv({"s", "error_x", "error_y", "error_norm"}, {s, ex, ey, en}));
  out.finish("basis-study", text, cs.mcs.seed, timer);
  std::cout << io::columns_csv({"s", "error_x", "error_y", "error_norm"}, {s, ex, ey, en});
  return 0;
}

int cmd_verify(const std::string& dir) {
  const auto bad = io::verify_manifest(dir);
  if (bad.empty()) {
    std::cout << "manifest OK\n";
    return 0;
  }
  for (const auto& f : bad) std::cerr << "checksum mismatch: " << f << "\n";
  return static_cast<int>(ExitCode::Numerical);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlated fiber-deviation uncertainty analysis for variable-stiffness laminates"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&c](CLI::App* sub) {
    sub->add_option("--config", c.config, "case or pool configuration (JSON)");
    sub->add_option("--seed", c.seed, "override the configured seed");
    sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "output directory");
  };

  std::string data_path;
  auto* sel = app.add_subcommand("select", "one-step Bayesian copula selection on paired data");
  add_common(sel);
  sel->add_option("data", data_path, "two-column CSV with a header row")->required();
  sel->add_flag("--allow-equal-marginals", c.allow_equal, "also score candidates with equal marginal families");

  std::optional<long long> samples;
  auto* smp = app.add_subcommand("sample", "D-vine sampling of ply deviations");
  add_common(smp);
  smp->add_option("--samples", samples, "number of samples (overrides config)");

  std::string deviation;
  bool degrees = false;
  auto* sol = app.add_subcommand("solve", "full finite-element solve");
  add_common(sol);
  sol->add_option("--deviation", deviation, "comma-separated per-ply deviations");
  sol->add_flag("--degrees", degrees, "deviations are given in degrees");

  bool sweep = false;
  auto* trn = app.add_subcommand("train", "label samples by reanalysis and train the surrogate");
  add_common(trn);
  trn->add_flag("--sweep", sweep, "also run the hidden-unit sweep");

  std::string surrogate_path;
  auto* mcs = app.add_subcommand("mcs", "Monte Carlo simulation");
  add_common(mcs);
  mcs->add_option("--evaluator", c.evaluator, "full, reanalysis or surrogate")
      ->check(CLI::IsMember({"full", "reanalysis", "surrogate"}));
  mcs->add_option("--surrogate", surrogate_path, "trained network (default OUT/surrogate.json)");

  int iterations = 100;
  auto* cmp = app.add_subcommand("compare", "per-iteration cost of the three evaluators");
  add_common(cmp);
  cmp->add_option("--surrogate", surrogate_path, "trained network (default OUT/surrogate.json)");
  cmp->add_option("--iterations", iterations, "timed iterations per evaluator")->check(CLI::PositiveNumber);

  std::string s_list = "1,2,3,4,6,8";
  auto* bas = app.add_subcommand("basis-study", "reanalysis error against basis size");
  add_common(bas);
  bas->add_option("--s", s_list, "comma-separated basis sizes");
  bas->add_option("--deviation", deviation, "comma-separated per-ply deviations (radians)");

  std::string verify_dir;
  auto* ver = app.add_subcommand("verify", "check output checksums against manifest.json");
  ver->add_option("dir", verify_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }

  try {
    if (*sel) return cmd_select(c, data_path);
    if (*smp) return cmd_sample(c, samples);
    if (*sol) return cmd_solve(c, deviation, degrees);
    if (*trn) return cmd_train(c, sweep);
    if (*mcs) return cmd_mcs(c, surrogate_path);
    if (*cmp) return cmd_compare(c, surrogate_path, iterations);
    if (*bas) return cmd_basis(c, s_list, deviation);
    if (*ver) return cmd_verify(verify_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Usage);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Numerical);
  }
  return 0;
}
