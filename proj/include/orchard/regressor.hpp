#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orchard/parallel.hpp"

namespace orchard {

/// One tree of the yield table. Numeric fields are empty when the source
/// cell was missing.
struct TreeRecord {
  std::string id;
  std::string sector;
  std::string region;
  std::string var_group;
  std::string variety;
  std::string age_group;
  std::optional<int> f1, f2, f3, f4;
  std::optional<double> h, w, d;
  std::optional<int> cbyt_a, cbyt_b;

  /// F1 + F2 + F3. Requires the three counts.
  int target() const;
  /// Every field used for training is present.
  bool complete() const;
};

/// Reads the yield table (header ID,Sector,Region,VarG,Var,AG,F1,F2,F3,F4,
/// H,W,D,CbyT-A,CbyT-B in any order). Empty, NA and nan cells are missing.
/// Throws ParseError.
std::vector<TreeRecord> read_records_csv(std::istream& in);
void write_records_csv(std::ostream& out, std::span<const TreeRecord> records);

/// Records with every training field present.
std::vector<TreeRecord> complete_records(std::span<const TreeRecord> records);

/// Keeps a record iff (CbyT-A + CbyT-B) / (F1 + F2 + F3) >= threshold.
/// Records with a zero or missing denominator or missing counts are dropped
/// and their ids appended to `skipped` when given.
std::vector<TreeRecord> filter_by_ratio(std::span<const TreeRecord> records, double threshold,
                                        std::vector<std::string>* skipped = nullptr);

struct OneHotColumn {
  std::string name;
  std::vector<std::string> vocabulary;  // sorted
};

struct StandardizedColumn {
  std::string name;
  double mean = 0;
  double std = 1;
};

/// Feature encoding fitted on a training split: one-hot categorical columns
/// (Sector, Region, VarG, Var, AG) then standardized numeric columns
/// (H, W, D, CbyT-A, CbyT-B). F4 is not a feature.
struct PreprocessPlan {
  std::vector<OneHotColumn> categorical;
  std::vector<StandardizedColumn> numeric;

  std::size_t width() const;
  std::vector<std::string> feature_names() const;
  /// One row per record. Out-of-vocabulary values give an all-zero block and
  /// a message in `warnings` when given.
  Eigen::MatrixXd transform(std::span<const TreeRecord> records, std::vector<std::string>* warnings = nullptr) const;
};

/// Throws InvalidConfig on an empty or incomplete training set and
/// ZeroVariance naming the first constant numeric column.
PreprocessPlan fit_preprocess(std::span<const TreeRecord> train);

/// Targets F1 + F2 + F3, unscaled.
Eigen::VectorXd targets(std::span<const TreeRecord> records);

enum class Activation { Relu, Tanh, Identity };

struct Architecture {
  std::vector<int> hidden{16, 16};
  Activation activation = Activation::Relu;
  std::string name() const;  // e.g. "16-16 relu"
};

/// Fully connected network, linear single-unit output.
struct MlpModel {
  std::vector<Eigen::MatrixXd> weights;  // layer l: out x in
  std::vector<Eigen::VectorXd> biases;
  Activation activation = Activation::Relu;

  std::vector<int> layer_sizes() const;  // input, hidden..., 1
  /// One prediction per row of x.
  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

/// He-uniform (ReLU) or Glorot-uniform weights, zero biases except the output
/// bias, which starts at `output_bias`. Output-layer weights are multiplied by
/// `output_scale`.
MlpModel init_mlp(int inputs, const Architecture& arch, std::uint64_t seed, double output_bias = 0.0,
                  double output_scale = 1.0);

/// Mean squared error over the rows of x.
double mse_loss(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

struct MlpGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

/// Backpropagated gradient of mse_loss.
MlpGradients mse_gradients(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

struct TrainParams {
  double lr = 1e-3;
  double momentum = 0.9;
  int epochs = 300;
  int batch = 32;
  std::uint64_t seed = 1;
};

/// Mini-batch SGD with momentum on the MSE. Training runs on the standardized
/// target and the output layer is rescaled afterwards, so the model predicts
/// raw units and its initial state is init_mlp(..., mean(y), std(y)).
/// Deterministic under params.seed. `loss_history` receives the full-data loss
/// (raw units) after every epoch. Throws NonFiniteLoss if training diverges.
MlpModel train_mlp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Architecture& arch,
                   const TrainParams& params, std::vector<double>* loss_history = nullptr);

/// Coefficient of determination 1 - SS_res / SS_tot. Throws ZeroVariance when
/// `actual` is constant and InvalidConfig for mismatched or short input.
double r2(std::span<const double> predicted, std::span<const double> actual);

struct TTest {
  double t = 0;
  double p = 1;
  bool significant = false;
};

/// Two-sided paired Student t test on a - b. Zero spread: p = 1 when every
/// difference is zero, else p = 0.
TTest paired_t_test(std::span<const double> a, std::span<const double> b, double p_threshold = 0.05);

/// k shuffled folds of near-equal size covering 0..n-1.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, int k, std::uint64_t seed);

/// Seeded shuffle split; returns (train, test) indices.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> train_test_split(std::size_t n, double test_fraction,
                                                                                std::uint64_t seed);

struct CvScore {
  Architecture arch;
  std::vector<double> fold_r2;
  double mean_r2 = 0;
};

struct CvComparison {
  std::size_t a = 0;  // indices into CvReport::ranked
  std::size_t b = 0;
  TTest test;
};

struct CvReport {
  std::vector<CvScore> ranked;  // best mean first
  std::vector<CvComparison> comparisons;
  /// The best architecture beats every other one at p < threshold.
  bool winner_significant = false;
};

/// k-fold cross validation of each architecture on the same folds. The
/// preprocessing plan is refitted on every training split. Folds train
/// concurrently in parallel mode with per-fold seeds, so results do not
/// depend on the execution mode. Throws InvalidConfig when k < 2 or
/// k > records.size().
CvReport kfold_cv(std::span<const TreeRecord> records, std::span<const Architecture> grid, const TrainParams& params,
                  int k = 10, double p_threshold = 0.05, Execution exec = Execution::Parallel);

/// Synthetic yield table for benchmarks: per-variety and per-age yield
/// levels scaled by canopy volume, and per-side visible counts drawn as a
/// noisy fraction of the yield.
std::vector<TreeRecord> synthetic_records(std::size_t n, std::uint64_t seed, double noise = 0.1);

}  // namespace orchard
