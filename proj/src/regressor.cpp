#include "orchard/regressor.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "orchard/errors.hpp"
#include "orchard/random.hpp"

namespace orchard {

namespace {

const char* const kHeader[] = {"ID", "Sector", "Region", "VarG", "Var", "AG", "F1", "F2",
                               "F3", "F4", "H", "W", "D", "CbyT-A", "CbyT-B"};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool is_missing(const std::string& s) {
  if (s.empty()) return true;
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  return lower == "na" || lower == "nan" || lower == "null";
}

std::optional<double> parse_real(const std::string& s, std::size_t line, const char* col) {
  if (is_missing(s)) return std::nullopt;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line) + ", column " + col + ": not a number: '" + s + "'");
  }
  return v;
}

std::optional<int> parse_count(const std::string& s, std::size_t line, const char* col) {
  const auto v = parse_real(s, line, col);
  if (!v) return std::nullopt;
  if (*v < 0 || std::floor(*v) != *v) {
    throw ParseError("line " + std::to_string(line) + ", column " + col + ": not a non-negative integer: '" + s + "'");
  }
  return static_cast<int>(*v);
}

std::string fmt(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

std::string fmt(const std::optional<double>& v) {
  if (!v) return {};
  std::ostringstream os;
  os.precision(17);
  os << *v;
  return os.str();
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double activate(Activation a, double z) {
  switch (a) {
    case Activation::Relu:
      return z > 0 ? z : 0.0;
    case Activation::Tanh:
      return std::tanh(z);
    case Activation::Identity:
      break;
  }
  return z;
}

double activate_grad(Activation a, double z) {
  switch (a) {
    case Activation::Relu:
      return z > 0 ? 1.0 : 0.0;
    case Activation::Tanh: {
      const double t = std::tanh(z);
      return 1 - t * t;
    }
    case Activation::Identity:
      break;
  }
  return 1.0;
}

// Pre-activations and activations of every layer; samples are columns.
struct Forward {
  std::vector<Eigen::MatrixXd> z;
  std::vector<Eigen::MatrixXd> a;  // a[0] is the input
};

Forward forward(const MlpModel& m, const Eigen::MatrixXd& x) {
  Forward f;
  f.a.push_back(x.transpose());
  const std::size_t layers = m.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = m.weights[l] * f.a.back();
    z.colwise() += m.biases[l];
    f.z.push_back(z);
    if (l + 1 < layers) {
      f.a.push_back(z.unaryExpr([&](double v) { return activate(m.activation, v); }));
    } else {
      f.a.push_back(z);
    }
  }
  return f;
}

}  // namespace

int TreeRecord::target() const {
  if (!f1 || !f2 || !f3) throw InvalidConfig("record " + id + " lacks F1, F2 or F3");
  return *f1 + *f2 + *f3;
}

bool TreeRecord::complete() const { return f1 && f2 && f3 && h && w && d && cbyt_a && cbyt_b; }

std::vector<TreeRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty records file");
  const auto header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* name : kHeader) {
    if (!col.contains(name)) throw ParseError(std::string("missing column ") + name);
  }
  std::vector<TreeRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                       " fields, got " + std::to_string(f.size()));
    }
    auto get = [&](const char* name) -> const std::string& { return f[col.at(name)]; };
    TreeRecord r;
    r.id = get("ID");
    r.sector = get("Sector");
    r.region = get("Region");
    r.var_group = get("VarG");
    r.variety = get("Var");
    r.age_group = get("AG");
    r.f1 = parse_count(get("F1"), line_no, "F1");
    r.f2 = parse_count(get("F2"), line_no, "F2");
    r.f3 = parse_count(get("F3"), line_no, "F3");
    r.f4 = parse_count(get("F4"), line_no, "F4");
    r.h = parse_real(get("H"), line_no, "H");
    r.w = parse_real(get("W"), line_no, "W");
    r.d = parse_real(get("D"), line_no, "D");
    for (const auto* dim : {&r.h, &r.w, &r.d}) {
      if (*dim && **dim <= 0) throw ParseError("line " + std::to_string(line_no) + ": dimensions must be positive");
    }
    r.cbyt_a = parse_count(get("CbyT-A"), line_no, "CbyT-A");
    r.cbyt_b = parse_count(get("CbyT-B"), line_no, "CbyT-B");
    out.push_back(std::move(r));
  }
  return out;
}

void write_records_csv(std::ostream& out, std::span<const TreeRecord> records) {
  for (std::size_t i = 0; i < std::size(kHeader); ++i) out << (i ? "," : "") << kHeader[i];
  out << '\n';
  for (const auto& r : records) {
    out << quote(r.id) << ',' << quote(r.sector) << ',' << quote(r.region) << ',' << quote(r.var_group) << ','
        << quote(r.variety) << ',' << quote(r.age_group) << ',' << fmt(r.f1) << ',' << fmt(r.f2) << ','
        << fmt(r.f3) << ',' << fmt(r.f4) << ',' << fmt(r.h) << ',' << fmt(r.w) << ',' << fmt(r.d) << ','
        << fmt(r.cbyt_a) << ',' << fmt(r.cbyt_b) << '\n';
  }
}

std::vector<TreeRecord> complete_records(std::span<const TreeRecord> records) {
  std::vector<TreeRecord> out;
  for (const auto& r : records) {
    if (r.complete()) out.push_back(r);
  }
  return out;
}

std::vector<TreeRecord> filter_by_ratio(std::span<const TreeRecord> records, double threshold,
                                        std::vector<std::string>* skipped) {
  std::vector<TreeRecord> out;
  for (const auto& r : records) {
    if (!r.f1 || !r.f2 || !r.f3 || !r.cbyt_a || !r.cbyt_b || r.target() == 0) {
      if (skipped) skipped->push_back(r.id);
      continue;
    }
    const double ratio = static_cast<double>(*r.cbyt_a + *r.cbyt_b) / r.target();
    if (ratio >= threshold) out.push_back(r);
  }
  return out;
}

namespace {

using CategoricalField = std::string TreeRecord::*;

struct CategoricalSource {
  const char* name;
  CategoricalField field;
};

const CategoricalSource kCategorical[] = {{"Sector", &TreeRecord::sector},
                                        {"Region", &TreeRecord::region},
                                        {"VarG", &TreeRecord::var_group},
                                        {"Var", &TreeRecord::variety},
                                        {"AG", &TreeRecord::age_group}};

const char* const kNumeric[] = {"H", "W", "D", "CbyT-A", "CbyT-B"};

double numeric_value(const TreeRecord& r, std::size_t i) {
  switch (i) {
    case 0:
      return *r.h;
    case 1:
      return *r.w;
    case 2:
      return *r.d;
    case 3:
      return *r.cbyt_a;
    default:
      return *r.cbyt_b;
  }
}

}  // namespace

std::size_t PreprocessPlan::width() const {
  std::size_t n = numeric.size();
  for (const auto& c : categorical) n += c.vocabulary.size();
  return n;
}

std::vector<std::string> PreprocessPlan::feature_names() const {
  std::vector<std::string> out;
  for (const auto& c : categorical) {
    for (const auto& v : c.vocabulary) out.push_back(c.name + "=" + v);
  }
  for (const auto& n : numeric) out.push_back(n.name);
  return out;
}

Eigen::MatrixXd PreprocessPlan::transform(std::span<const TreeRecord> records,
                                          std::vector<std::string>* warnings) const {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(records.size()),
                                            static_cast<Eigen::Index>(width()));
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TreeRecord& r = records[i];
    if (!r.complete()) throw InvalidConfig("record " + r.id + " has missing fields");
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < categorical.size(); ++c) {
      const auto& vocab = categorical[c].vocabulary;
      const std::string& value = r.*(kCategorical[c].field);
      const auto it = std::lower_bound(vocab.begin(), vocab.end(), value);
      if (it != vocab.end() && *it == value) {
        x(static_cast<Eigen::Index>(i), col + (it - vocab.begin())) = 1.0;
      } else if (warnings) {
        warnings->push_back("record " + r.id + ": unseen " + categorical[c].name + " value '" + value + "'");
      }
      col += static_cast<Eigen::Index>(vocab.size());
    }
    for (std::size_t n = 0; n < numeric.size(); ++n) {
      x(static_cast<Eigen::Index>(i), col++) = (numeric_value(r, n) - numeric[n].mean) / numeric[n].std;
    }
  }
  return x;
}

PreprocessPlan fit_preprocess(std::span<const TreeRecord> train) {
  if (train.empty()) throw InvalidConfig("cannot fit preprocessing on an empty training set");
  PreprocessPlan plan;
  for (const auto& source : kCategorical) {
    std::set<std::string> vocab;
    for (const auto& r : train) vocab.insert(r.*(source.field));
    plan.categorical.push_back({source.name, {vocab.begin(), vocab.end()}});
  }
  for (std::size_t n = 0; n < std::size(kNumeric); ++n) {
    double sum = 0;
    for (const auto& r : train) {
      if (!r.complete()) throw InvalidConfig("record " + r.id + " has missing fields");
      sum += numeric_value(r, n);
    }
    const double mean = sum / static_cast<double>(train.size());
    double ss = 0;
    for (const auto& r : train) ss += (numeric_value(r, n) - mean) * (numeric_value(r, n) - mean);
    const double std = std::sqrt(ss / static_cast<double>(train.size()));
    if (!(std > 1e-12 * std::max(1.0, std::abs(mean)))) {
      throw ZeroVariance(std::string("column ") + kNumeric[n] + " is constant in the training set");
    }
    plan.numeric.push_back({kNumeric[n], mean, std});
  }
  return plan;
}

Eigen::VectorXd targets(std::span<const TreeRecord> records) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) y(static_cast<Eigen::Index>(i)) = records[i].target();
  return y;
}

std::string Architecture::name() const {
  std::string out;
  for (std::size_t i = 0; i < hidden.size(); ++i) out += (i ? "-" : "") + std::to_string(hidden[i]);
  if (out.empty()) out = "linear";
  switch (activation) {
    case Activation::Relu:
      return out + " relu";
    case Activation::Tanh:
      return out + " tanh";
    case Activation::Identity:
      break;
  }
  return out + " identity";
}

std::vector<int> MlpModel::layer_sizes() const {
  std::vector<int> out;
  if (weights.empty()) return out;
  out.push_back(static_cast<int>(weights.front().cols()));
  for (const auto& w : weights) out.push_back(static_cast<int>(w.rows()));
  return out;
}

Eigen::VectorXd MlpModel::predict(const Eigen::MatrixXd& x) const { return forward(*this, x).a.back().row(0).transpose(); }

MlpModel init_mlp(int inputs, const Architecture& arch, std::uint64_t seed, double output_bias,
                  double output_scale) {
  if (inputs < 1) throw InvalidConfig("network needs at least one input");
  for (int h : arch.hidden) {
    if (h < 1) throw InvalidConfig("hidden layer sizes must be positive");
  }
  Rng rng(seed);
  MlpModel m;
  m.activation = arch.activation;
  std::vector<int> sizes{inputs};
  sizes.insert(sizes.end(), arch.hidden.begin(), arch.hidden.end());
  sizes.push_back(1);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int in = sizes[l];
    const int out = sizes[l + 1];
    const bool relu_fed = arch.activation == Activation::Relu && l + 2 < sizes.size();
    const double limit = relu_fed ? std::sqrt(6.0 / in) : std::sqrt(6.0 / (in + out));
    Eigen::MatrixXd w(out, in);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = uniform(rng, -limit, limit);
    }
    m.weights.push_back(std::move(w));
    m.biases.push_back(Eigen::VectorXd::Zero(out));
  }
  m.weights.back() *= output_scale;
  m.biases.back()(0) = output_bias;
  return m;
}

double mse_loss(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return (model.predict(x) - y).squaredNorm() / static_cast<double>(y.size());
}

MlpGradients mse_gradients(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Forward f = forward(model, x);
  const std::size_t layers = model.weights.size();
  MlpGradients g;
  g.weights.resize(layers);
  g.biases.resize(layers);
  // dL/dz for the linear output.
  Eigen::MatrixXd delta = (f.a.back().row(0) - y.transpose()) * (2.0 / static_cast<double>(y.size()));
  for (std::size_t l = layers; l-- > 0;) {
    g.weights[l] = delta * f.a[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l == 0) break;
    const Eigen::MatrixXd back = model.weights[l].transpose() * delta;
    delta = back.cwiseProduct(f.z[l - 1].unaryExpr([&](double v) { return activate_grad(model.activation, v); }));
  }
  return g;
}

MlpModel train_mlp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Architecture& arch,
                   const TrainParams& params, std::vector<double>* loss_history) {
  if (x.rows() != y.size() || x.rows() == 0) throw InvalidConfig("features and targets must be nonempty and aligned");
  if (params.batch < 1 || params.epochs < 0 || !(params.lr > 0) || params.momentum < 0 || params.momentum >= 1) {
    throw InvalidConfig("invalid training parameters");
  }
  const double mean = y.mean();
  double scale = std::sqrt((y.array() - mean).square().mean());
  if (!(scale > 0)) scale = 1.0;
  const Eigen::VectorXd z = (y.array() - mean) / scale;
  MlpModel m = init_mlp(static_cast<int>(x.cols()), arch, params.seed);
  std::vector<Eigen::MatrixXd> vw;
  std::vector<Eigen::VectorXd> vb;
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    vw.push_back(Eigen::MatrixXd::Zero(m.weights[l].rows(), m.weights[l].cols()));
    vb.push_back(Eigen::VectorXd::Zero(m.biases[l].size()));
  }
  Rng rng(params.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(x.rows()));
  std::iota(order.begin(), order.end(), 0);
  const auto batch = static_cast<std::size_t>(params.batch);
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    shuffle(rng, order);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      Eigen::MatrixXd xb(static_cast<Eigen::Index>(end - start), x.cols());
      Eigen::VectorXd yb(static_cast<Eigen::Index>(end - start));
      for (std::size_t i = start; i < end; ++i) {
        xb.row(static_cast<Eigen::Index>(i - start)) = x.row(order[i]);
        yb(static_cast<Eigen::Index>(i - start)) = z(order[i]);
      }
      const MlpGradients g = mse_gradients(m, xb, yb);
      for (std::size_t l = 0; l < m.weights.size(); ++l) {
        vw[l] = params.momentum * vw[l] - params.lr * g.weights[l];
        vb[l] = params.momentum * vb[l] - params.lr * g.biases[l];
        m.weights[l] += vw[l];
        m.biases[l] += vb[l];
      }
    }
    const double loss = mse_loss(m, x, z) * scale * scale;
    if (!std::isfinite(loss)) {
      throw NonFiniteLoss("loss became non-finite at epoch " + std::to_string(epoch + 1) + " (lr " +
                          std::to_string(params.lr) + ", architecture " + arch.name() + ")");
    }
    if (loss_history) loss_history->push_back(loss);
  }
  m.weights.back() *= scale;
  m.biases.back() = m.biases.back() * scale;
  m.biases.back()(0) += mean;
  return m;
}

double r2(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size() || actual.size() < 2) {
    throw InvalidConfig("r2 needs two or more aligned values");
  }
  const double mean = std::accumulate(actual.begin(), actual.end(), 0.0) / static_cast<double>(actual.size());
  double ss_res = 0;
  double ss_tot = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    ss_res += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    ss_tot += (actual[i] - mean) * (actual[i] - mean);
  }
  if (ss_tot == 0) throw ZeroVariance("r2 is undefined for constant actual values");
  return 1.0 - ss_res / ss_tot;
}

TTest paired_t_test(std::span<const double> a, std::span<const double> b, double p_threshold) {
  if (a.size() != b.size() || a.size() < 2) throw InvalidConfig("paired t test needs two or more pairs");
  const auto n = static_cast<double>(a.size());
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / n;
  double ss = 0;
  for (double v : diff) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1));
  TTest out;
  // Spread below rounding noise of the mean counts as zero.
  if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
    out.t = mean == 0 ? 0.0 : std::copysign(INFINITY, mean);
    out.p = mean == 0 ? 1.0 : 0.0;
  } else {
    out.t = mean / (sd / std::sqrt(n));
    const boost::math::students_t dist(n - 1);
    out.p = 2 * boost::math::cdf(boost::math::complement(dist, std::abs(out.t)));
  }
  out.significant = out.p < p_threshold;
  return out;
}

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, int k, std::uint64_t seed) {
  if (k < 2 || static_cast<std::size_t>(k) > n) throw InvalidConfig("need 2 <= k <= number of records");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  shuffle(rng, order);
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) folds[i % folds.size()].push_back(order[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> train_test_split(std::size_t n, double test_fraction,
                                                                                std::uint64_t seed) {
  if (!(test_fraction > 0 && test_fraction < 1)) throw InvalidConfig("test fraction must lie in (0, 1)");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  shuffle(rng, order);
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

CvReport kfold_cv(std::span<const TreeRecord> records, std::span<const Architecture> grid, const TrainParams& params,
                  int k, double p_threshold, Execution exec) {
  if (grid.empty()) throw InvalidConfig("architecture grid is empty");
  const auto folds = kfold_indices(records.size(), k, params.seed);
  const std::size_t n_folds = folds.size();
  std::vector<double> scores(grid.size() * n_folds);
  for_each_index(exec, scores.size(), [&](std::size_t task) {
    const std::size_t a = task / n_folds;
    const std::size_t f = task % n_folds;
    std::vector<TreeRecord> train;
    std::vector<TreeRecord> test;
    for (std::size_t g = 0; g < n_folds; ++g) {
      for (std::size_t i : folds[g]) (g == f ? test : train).push_back(records[i]);
    }
    const PreprocessPlan plan = fit_preprocess(train);
    TrainParams p = params;
    p.seed = params.seed + 1000003ULL * (f + 1);
    const MlpModel model = train_mlp(plan.transform(train), targets(train), grid[a], p);
    const Eigen::VectorXd pred = model.predict(plan.transform(test));
    const Eigen::VectorXd actual = targets(test);
    scores[task] = r2({pred.data(), static_cast<std::size_t>(pred.size())},
                      {actual.data(), static_cast<std::size_t>(actual.size())});
  });

  CvReport report;
  for (std::size_t a = 0; a < grid.size(); ++a) {
    CvScore s;
    s.arch = grid[a];
    s.fold_r2.assign(scores.begin() + static_cast<std::ptrdiff_t>(a * n_folds),
                     scores.begin() + static_cast<std::ptrdiff_t>((a + 1) * n_folds));
    s.mean_r2 = std::accumulate(s.fold_r2.begin(), s.fold_r2.end(), 0.0) / static_cast<double>(n_folds);
    report.ranked.push_back(std::move(s));
  }
  std::stable_sort(report.ranked.begin(), report.ranked.end(),
                   [](const CvScore& x, const CvScore& y) { return x.mean_r2 > y.mean_r2; });
  report.winner_significant = report.ranked.size() > 1;
  for (std::size_t i = 0; i < report.ranked.size(); ++i) {
    for (std::size_t j = i + 1; j < report.ranked.size(); ++j) {
      const TTest t = paired_t_test(report.ranked[i].fold_r2, report.ranked[j].fold_r2, p_threshold);
      report.comparisons.push_back({i, j, t});
      if (i == 0 && !t.significant) report.winner_significant = false;
    }
  }
  return report;
}

std::vector<TreeRecord> synthetic_records(std::size_t n, std::uint64_t seed, double noise) {
  Rng rng(seed);
  const std::vector<std::pair<std::string, std::string>> varieties{
      {"Orange", "Hamlin"}, {"Orange", "Valencia"}, {"Orange", "Pera"}, {"Tangerine", "Ponkan"}};
  const std::vector<double> variety_yield{1.0, 1.25, 1.1, 0.8};
  const std::vector<std::string> ages{"A1", "A2", "A3"};
  const std::vector<double> age_yield{0.6, 1.0, 1.2};
  const std::vector<std::string> sectors{"S1", "S2", "S3"};
  const std::vector<std::string> regions{"North", "South"};
  std::vector<TreeRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    TreeRecord r;
    r.id = "T" + std::to_string(i + 1);
    const auto v = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(varieties.size()) - 1));
    const auto a = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(ages.size()) - 1));
    r.sector = sectors[static_cast<std::size_t>(uniform_int(rng, 0, 2))];
    r.region = regions[static_cast<std::size_t>(uniform_int(rng, 0, 1))];
    r.var_group = varieties[v].first;
    r.variety = varieties[v].second;
    r.age_group = ages[a];
    r.h = uniform(rng, 2.5, 4.5);
    r.w = uniform(rng, 2.0, 4.0);
    r.d = uniform(rng, 2.0, 4.0);
    const double volume = *r.h * *r.w * *r.d;
    const double yield = 25.0 * volume * variety_yield[v] * age_yield[a] * std::max(0.2, 1 + noise * normal(rng));
    const double share1 = uniform(rng, 0.5, 0.7);
    const double share2 = uniform(rng, 0.2, 1 - share1);
    r.f1 = static_cast<int>(std::lround(yield * share1));
    r.f2 = static_cast<int>(std::lround(yield * share2));
    r.f3 = std::max(0, static_cast<int>(std::lround(yield)) - *r.f1 - *r.f2);
    r.f4 = static_cast<int>(std::lround(yield * uniform(rng, 0.0, 0.1)));
    // Each side shows roughly a quarter to a third of the fruit.
    const double visible = uniform(rng, 0.25, 0.35);
    r.cbyt_a = static_cast<int>(std::lround(yield * visible * std::max(0.1, 1 + noise * normal(rng))));
    r.cbyt_b = static_cast<int>(std::lround(yield * visible * std::max(0.1, 1 + noise * normal(rng))));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace orchard
