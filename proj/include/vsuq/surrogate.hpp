#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vsuq {

/// f(x) = (1 - e^-x) / (1 + e^-x).
double tansig(double x);
double tansig_derivative(double x);

/// Per-coordinate affine map of [lo, hi] onto [-1, 1].
struct Normalizer {
  std::vector<double> lo;
  std::vector<double> hi;

  static Normalizer identity(std::size_t n);
  /// Fits lo/hi to the columns of a row-major data set.
  static Normalizer fit(const Eigen::MatrixXd& rows);
  double span(std::size_t i) const;
  Eigen::VectorXd map(const Eigen::VectorXd& x) const;
  Eigen::VectorXd unmap(const Eigen::VectorXd& y) const;
};

/// One-hidden-layer network: out = W2 f(W1 x + b1) + b2 on normalized values.
class SurrogateNet {
 public:
  SurrogateNet() = default;
  SurrogateNet(int inputs, int hidden, int outputs);

  int inputs() const { return static_cast<int>(W1.cols()); }
  int hidden() const { return static_cast<int>(W1.rows()); }
  int outputs() const { return static_cast<int>(W2.rows()); }

  /// Normalized-space evaluation.
  Eigen::VectorXd forward_normalized(const Eigen::VectorXd& xn) const;
  /// Physical-space evaluation (normalize, forward, denormalize).
  std::vector<double> forward(const std::vector<double>& x) const;
  /// Batched physical-space evaluation of the rows of X.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& X) const;

  /// Mean squared error over the rows of normalized inputs/targets.
  double loss(const Eigen::MatrixXd& Xn, const Eigen::MatrixXd& Yn) const;
  /// Loss and its gradient; gradient blocks have the shapes of W1, b1, W2, b2.
  double loss_gradient(const Eigen::MatrixXd& Xn, const Eigen::MatrixXd& Yn, Eigen::MatrixXd& gW1,
                       Eigen::VectorXd& gb1, Eigen::MatrixXd& gW2, Eigen::VectorXd& gb2) const;

  /// All weights flattened in the order W1 (row-major), b1, W2 (row-major), b2.
  std::vector<double> parameters() const;
  void set_parameters(const std::vector<double>& p);

  Eigen::MatrixXd W1;  // hidden x inputs
  Eigen::VectorXd b1;
  Eigen::MatrixXd W2;  // outputs x hidden
  Eigen::VectorXd b2;
  Normalizer input_norm;
  Normalizer output_norm;
  std::uint64_t seed = 0;
};

struct TrainConfig {
  int hidden = 34;
  int epochs = 5000;
  double learning_rate = 1.0;
  double momentum = 0.9;
  /// Learning rate multiplier applied after every epoch.
  double decay = 0.9999;
  double train_fraction = 0.70;
  double validation_fraction = 0.15;
  std::uint64_t seed = 1;
};

struct Metrics {
  /// Mean relative accuracy per output.
  std::vector<double> acc;
  /// Coefficient of determination per output.
  std::vector<double> r2;
  /// Labels with |value| < 1e-15 skipped by the accuracy sum, per output.
  std::vector<int> excluded;
};

struct TrainingReport {
  std::vector<double> train_loss;
  std::vector<double> validation_loss;
  std::vector<double> test_loss;
  int best_epoch = 0;
  Metrics test;
  std::uint64_t seed = 0;
  std::size_t n_train = 0, n_validation = 0, n_test = 0;
};

/// Mean relative accuracy and R^2 of predictions against labels (rows = samples).
Metrics metrics(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& labels);

/// Trains on rows of X (inputs) and Y (labels). Deterministic given config.seed.
SurrogateNet train(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, const TrainConfig& config,
                   TrainingReport* report = nullptr);

/// Largest relative difference between backprop and central-difference
/// gradients of the loss over every parameter.
double gradient_check(const SurrogateNet& net, const Eigen::MatrixXd& Xn, const Eigen::MatrixXd& Yn,
                      double step = 1e-6);

std::string surrogate_to_json(const SurrogateNet& net, const Metrics* metrics = nullptr);
SurrogateNet surrogate_from_json(const std::string& text);

}  // namespace vsuq
