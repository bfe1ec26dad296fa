#include "vsuq/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "vsuq/error.hpp"
#include "vsuq/rng.hpp"

namespace vsuq {

namespace {

constexpr std::uint64_t kShuffleStream = 0x5348554646ull;
constexpr std::uint64_t kInitStream = 0x494e4954ull;

Eigen::MatrixXd map_rows(const Normalizer& n, const Eigen::MatrixXd& X) {
  Eigen::MatrixXd out(X.rows(), X.cols());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const double lo = n.lo[c], sp = n.span(c);
    out.col(c) = ((X.col(c).array() - lo) * (2.0 / sp) - 1.0).matrix();
  }
  return out;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& M, const std::vector<std::size_t>& idx, std::size_t b,
                          std::size_t e) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(e - b), M.cols());
  for (std::size_t i = b; i < e; ++i) out.row(static_cast<Eigen::Index>(i - b)) = M.row(static_cast<Eigen::Index>(idx[i]));
  return out;
}

}  // namespace

double tansig(double x) {
  // Identical to (1 - e^-x) / (1 + e^-x) without overflow for large |x|.
  return std::tanh(0.5 * x);
}

double tansig_derivative(double x) {
  const double f = tansig(x);
  return 0.5 * (1.0 - f * f);
}

Normalizer Normalizer::identity(std::size_t n) {
  Normalizer z;
  z.lo.assign(n, -1.0);
  z.hi.assign(n, 1.0);
  return z;
}

Normalizer Normalizer::fit(const Eigen::MatrixXd& rows) {
  Normalizer z;
  for (Eigen::Index c = 0; c < rows.cols(); ++c) {
    z.lo.push_back(rows.col(c).minCoeff());
    z.hi.push_back(rows.col(c).maxCoeff());
  }
  return z;
}

double Normalizer::span(std::size_t i) const {
  const double s = hi[i] - lo[i];
  return s > 0.0 ? s : 2.0;  // constant coordinate: plain shift
}

Eigen::VectorXd Normalizer::map(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = 2.0 * (x[i] - lo[i]) / span(i) - 1.0;
  return out;
}

Eigen::VectorXd Normalizer::unmap(const Eigen::VectorXd& y) const {
  Eigen::VectorXd out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = lo[i] + 0.5 * (y[i] + 1.0) * span(i);
  return out;
}

SurrogateNet::SurrogateNet(int inputs, int hidden, int outputs)
    : W1(Eigen::MatrixXd::Zero(hidden, inputs)),
      b1(Eigen::VectorXd::Zero(hidden)),
      W2(Eigen::MatrixXd::Zero(outputs, hidden)),
      b2(Eigen::VectorXd::Zero(outputs)),
      input_norm(Normalizer::identity(inputs)),
      output_norm(Normalizer::identity(outputs)) {
  if (inputs < 1 || hidden < 1 || outputs < 1) throw ConfigError("network layer sizes must be positive");
}

Eigen::VectorXd SurrogateNet::forward_normalized(const Eigen::VectorXd& xn) const {
  Eigen::VectorXd h = W1 * xn + b1;
  for (Eigen::Index j = 0; j < h.size(); ++j) h[j] = tansig(h[j]);
  return W2 * h + b2;
}

std::vector<double> SurrogateNet::forward(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != inputs()) throw ConfigError("surrogate input has wrong width");
  const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::VectorXd y = output_norm.unmap(forward_normalized(input_norm.map(xv)));
  return {y.data(), y.data() + y.size()};
}

Eigen::MatrixXd SurrogateNet::forward_batch(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd out(X.rows(), outputs());
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    out.row(r) = output_norm.unmap(forward_normalized(input_norm.map(X.row(r).transpose()))).transpose();
  }
  return out;
}

double SurrogateNet::loss(const Eigen::MatrixXd& Xn, const Eigen::MatrixXd& Yn) const {
  Eigen::MatrixXd H = (Xn * W1.transpose()).rowwise() + b1.transpose();
  H = H.unaryExpr([](double v) { return tansig(v); });
  const Eigen::MatrixXd out = (H * W2.transpose()).rowwise() + b2.transpose();
  return (out - Yn).squaredNorm() / static_cast<double>(Yn.size());
}

double SurrogateNet::loss_gradient(const Eigen::MatrixXd& Xn, const Eigen::MatrixXd& Yn, Eigen::MatrixXd& gW1,
                                   Eigen::VectorXd& gb1, Eigen::MatrixXd& gW2, Eigen::VectorXd& gb2) const {
  const Eigen::MatrixXd pre = (Xn * W1.transpose()).rowwise() + b1.transpose();
  const Eigen::MatrixXd A = pre.unaryExpr([](double v) { return tansig(v); });
  const Eigen::MatrixXd out = (A * W2.transpose()).rowwise() + b2.transpose();
  const Eigen::MatrixXd diff = out - Yn;
  const double scale = 2.0 / static_cast<double>(Yn.size());
  const Eigen::MatrixXd D = scale * diff;
  gW2 = D.transpose() * A;
  gb2 = D.colwise().sum().transpose();
  const Eigen::MatrixXd dA = D * W2;
  const Eigen::MatrixXd dH = dA.cwiseProduct(A.unaryExpr([](double f) { return 0.5 * (1.0 - f * f); }));
  gW1 = dH.transpose() * Xn;
  gb1 = dH.colwise().sum().transpose();
  return diff.squaredNorm() / static_cast<double>(Yn.size());
}

std::vector<double> SurrogateNet::parameters() const {
  std::vector<double> p;
  for (Eigen::Index i = 0; i < W1.rows(); ++i) {
    for (Eigen::Index j = 0; j < W1.cols(); ++j) p.push_back(W1(i, j));
  }
  p.insert(p.end(), b1.data(), b1.data() + b1.size());
  for (Eigen::Index i = 0; i < W2.rows(); ++i) {
    for (Eigen::Index j = 0; j < W2.cols(); ++j) p.push_back(W2(i, j));
  }
  p.insert(p.end(), b2.data(), b2.data() + b2.size());
  return p;
}

void SurrogateNet::set_parameters(const std::vector<double>& p) {
  const std::size_t want = static_cast<std::size_t>(W1.size() + b1.size() + W2.size() + b2.size());
  if (p.size() != want) throw ConfigError("parameter vector has wrong length");
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < W1.rows(); ++i) {
    for (Eigen::Index j = 0; j < W1.cols(); ++j) W1(i, j) = p[k++];
  }
  for (Eigen::Index i = 0; i < b1.size(); ++i) b1[i] = p[k++];
  for (Eigen::Index i = 0; i < W2.rows(); ++i) {
    for (Eigen::Index j = 0; j < W2.cols(); ++j) W2(i, j) = p[k++];
  }
  for (Eigen::Index i = 0; i < b2.size(); ++i) b2[i] = p[k++];
}

Metrics metrics(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& labels) {
  if (pred.rows() != labels.rows() || pred.cols() != labels.cols() || labels.rows() == 0) {
    throw ConfigError("prediction and label sets differ in shape");
  }
  Metrics m;
  for (Eigen::Index c = 0; c < labels.cols(); ++c) {
    double acc = 0.0;
    int used = 0, skipped = 0;
    const double mean = labels.col(c).mean();
    double ss_res = 0.0, ss_tot = 0.0;
    for (Eigen::Index i = 0; i < labels.rows(); ++i) {
      const double y = pred(i, c), t = labels(i, c);
      if (std::abs(t) < 1e-15) {
        ++skipped;
      } else {
        acc += 1.0 - std::abs(y - t) / t;
        ++used;
      }
      ss_res += (y - t) * (y - t);
      ss_tot += (t - mean) * (t - mean);
    }
    m.acc.push_back(used > 0 ? acc / used : 0.0);
    m.r2.push_back(ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0));
    m.excluded.push_back(skipped);
  }
  return m;
}

SurrogateNet train(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, const TrainConfig& cfg,
                   TrainingReport* report) {
  const std::size_t n = static_cast<std::size_t>(X.rows());
  if (static_cast<std::size_t>(Y.rows()) != n) throw ConfigError("inputs and labels differ in row count");
  if (n < 200) throw ConfigError("training needs at least 200 labeled samples");
  if (!(cfg.train_fraction > 0.0) || !(cfg.validation_fraction > 0.0) ||
      cfg.train_fraction + cfg.validation_fraction >= 1.0) {
    throw ConfigError("invalid train/validation fractions");
  }
  if (cfg.epochs < 1) throw ConfigError("epochs must be positive");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  CounterStream shuffle(cfg.seed, kShuffleStream);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(idx[i], idx[shuffle.below(i + 1)]);
  const std::size_t n_train = static_cast<std::size_t>(std::floor(cfg.train_fraction * n));
  const std::size_t n_val = static_cast<std::size_t>(std::floor(cfg.validation_fraction * n));

  const Eigen::MatrixXd Xtr = take_rows(X, idx, 0, n_train), Ytr = take_rows(Y, idx, 0, n_train);
  const Eigen::MatrixXd Xva = take_rows(X, idx, n_train, n_train + n_val);
  const Eigen::MatrixXd Yva = take_rows(Y, idx, n_train, n_train + n_val);
  const Eigen::MatrixXd Xte = take_rows(X, idx, n_train + n_val, n), Yte = take_rows(Y, idx, n_train + n_val, n);

  SurrogateNet net(static_cast<int>(X.cols()), cfg.hidden, static_cast<int>(Y.cols()));
  net.seed = cfg.seed;
  net.input_norm = Normalizer::fit(Xtr);
  net.output_norm = Normalizer::fit(Ytr);
  const Eigen::MatrixXd Xtn = map_rows(net.input_norm, Xtr), Ytn = map_rows(net.output_norm, Ytr);
  const Eigen::MatrixXd Xvn = map_rows(net.input_norm, Xva), Yvn = map_rows(net.output_norm, Yva);
  const Eigen::MatrixXd Xen = map_rows(net.input_norm, Xte), Yen = map_rows(net.output_norm, Yte);

  CounterStream init(cfg.seed, kInitStream);
  const double a1 = std::sqrt(6.0 / (net.inputs() + net.hidden()));
  const double a2 = std::sqrt(6.0 / (net.hidden() + net.outputs()));
  for (Eigen::Index i = 0; i < net.W1.size(); ++i) net.W1.data()[i] = a1 * (2.0 * init.uniform() - 1.0);
  for (Eigen::Index i = 0; i < net.W2.size(); ++i) net.W2.data()[i] = a2 * (2.0 * init.uniform() - 1.0);

  TrainingReport rep;
  rep.seed = cfg.seed;
  rep.n_train = n_train;
  rep.n_validation = n_val;
  rep.n_test = n - n_train - n_val;

  Eigen::MatrixXd gW1, gW2, vW1 = Eigen::MatrixXd::Zero(net.W1.rows(), net.W1.cols());
  Eigen::MatrixXd vW2 = Eigen::MatrixXd::Zero(net.W2.rows(), net.W2.cols());
  Eigen::VectorXd gb1, gb2, vb1 = Eigen::VectorXd::Zero(net.b1.size()), vb2 = Eigen::VectorXd::Zero(net.b2.size());
  SurrogateNet best = net;
  double best_val = std::numeric_limits<double>::infinity();
  double lr = cfg.learning_rate;
  for (int epoch = 0; epoch <= cfg.epochs; ++epoch) {
    const double tl = net.loss_gradient(Xtn, Ytn, gW1, gb1, gW2, gb2);
    const double vl = net.loss(Xvn, Yvn);
    if (!std::isfinite(tl) || !std::isfinite(vl)) {
      throw NumericalError("surrogate training diverged at epoch " + std::to_string(epoch) +
                           "; lower the learning rate");
    }
    rep.train_loss.push_back(tl);
    rep.validation_loss.push_back(vl);
    if (vl < best_val) {
      best_val = vl;
      best = net;
      rep.best_epoch = epoch;
    }
    if (epoch == cfg.epochs) break;
    vW1 = cfg.momentum * vW1 - lr * gW1;
    vb1 = cfg.momentum * vb1 - lr * gb1;
    vW2 = cfg.momentum * vW2 - lr * gW2;
    vb2 = cfg.momentum * vb2 - lr * gb2;
    net.W1 += vW1;
    net.b1 += vb1;
    net.W2 += vW2;
    net.b2 += vb2;
    lr *= cfg.decay;
  }
  if (Xte.rows() > 0) {
    rep.test_loss.push_back(best.loss(Xen, Yen));
    rep.test = metrics(best.forward_batch(Xte), Yte);
  }
  if (report) *report = std::move(rep);
  return best;
}

double gradient_check(const SurrogateNet& net, const Eigen::MatrixXd& Xn, const Eigen::MatrixXd& Yn,
                      double step) {
  Eigen::MatrixXd gW1, gW2;
  Eigen::VectorXd gb1, gb2;
  net.loss_gradient(Xn, Yn, gW1, gb1, gW2, gb2);
  SurrogateNet g = net;
  g.W1 = gW1;
  g.b1 = gb1;
  g.W2 = gW2;
  g.b2 = gb2;
  const std::vector<double> analytic = g.parameters();
  std::vector<double> p = net.parameters();
  SurrogateNet probe = net;
  double worst = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double keep = p[k];
    p[k] = keep + step;
    probe.set_parameters(p);
    const double up = probe.loss(Xn, Yn);
    p[k] = keep - step;
    probe.set_parameters(p);
    const double down = probe.loss(Xn, Yn);
    p[k] = keep;
    const double fd = (up - down) / (2.0 * step);
    // Scale floor keeps near-zero components from amplifying round-off.
    const double denom = std::max({std::abs(fd), std::abs(analytic[k]), 1e-4});
    worst = std::max(worst, std::abs(fd - analytic[k]) / denom);
  }
  return worst;
}

std::string surrogate_to_json(const SurrogateNet& net, const Metrics* m) {
  nlohmann::ordered_json j;
  j["format"] = "vsuq-surrogate";
  j["version"] = 1;
  j["layer_sizes"] = {net.inputs(), net.hidden(), net.outputs()};
  j["activation"] = "tansig";
  auto flat = [](const Eigen::MatrixXd& M) {
    std::vector<double> v;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      for (Eigen::Index c = 0; c < M.cols(); ++c) v.push_back(M(i, c));
    }
    return v;
  };
  j["w1"] = flat(net.W1);
  j["b1"] = std::vector<double>(net.b1.data(), net.b1.data() + net.b1.size());
  j["w2"] = flat(net.W2);
  j["b2"] = std::vector<double>(net.b2.data(), net.b2.data() + net.b2.size());
  j["input_normalizer"] = {{"lo", net.input_norm.lo}, {"hi", net.input_norm.hi}};
  j["output_normalizer"] = {{"lo", net.output_norm.lo}, {"hi", net.output_norm.hi}};
  j["seed"] = net.seed;
  if (m) j["metrics"] = {{"acc", m->acc}, {"r2", m->r2}, {"excluded", m->excluded}};
  return j.dump(2) + "\n";
}

SurrogateNet surrogate_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("surrogate file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "vsuq-surrogate") throw ParseError("not a surrogate network file");
    const auto sizes = j.at("layer_sizes").get<std::vector<int>>();
    if (sizes.size() != 3) throw ParseError("layer_sizes must have three entries");
    SurrogateNet net(sizes[0], sizes[1], sizes[2]);
    std::vector<double> p = j.at("w1").get<std::vector<double>>();
    auto append = [&p](const std::vector<double>& v) { p.insert(p.end(), v.begin(), v.end()); };
    append(j.at("b1").get<std::vector<double>>());
    append(j.at("w2").get<std::vector<double>>());
    append(j.at("b2").get<std::vector<double>>());
    net.set_parameters(p);
    net.input_norm.lo = j.at("input_normalizer").at("lo").get<std::vector<double>>();
    net.input_norm.hi = j.at("input_normalizer").at("hi").get<std::vector<double>>();
    net.output_norm.lo = j.at("output_normalizer").at("lo").get<std::vector<double>>();
    net.output_norm.hi = j.at("output_normalizer").at("hi").get<std::vector<double>>();
    if (static_cast<int>(net.input_norm.lo.size()) != sizes[0] ||
        static_cast<int>(net.output_norm.lo.size()) != sizes[2] ||
        net.input_norm.hi.size() != net.input_norm.lo.size() ||
        net.output_norm.hi.size() != net.output_norm.lo.size()) {
      throw ParseError("normalizer widths do not match layer sizes");
    }
    net.seed = j.value("seed", std::uint64_t{0});
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed surrogate file: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("malformed surrogate file: ") + e.what());
  }
}

}  // namespace vsuq
