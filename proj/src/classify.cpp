#include "disclocus/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace disclocus {

LabeledPoints LabeledPoints::from_samples(const std::vector<LabeledSample>& samples) {
  LabeledPoints out;
  if (samples.empty()) return out;
  const Eigen::Index k = samples.front().p.size();
  out.points.resize(k, static_cast<Eigen::Index>(samples.size()));
  out.labels.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].p.size() != k) throw Error(ErrorCode::DimensionMismatch, "samples of mixed dimension");
    out.points.col(static_cast<Eigen::Index>(i)) = samples[i].p;
    out.labels.push_back(samples[i].label);
  }
  return out;
}

std::vector<int> class_map_of(const std::vector<int>& labels) {
  std::vector<int> m = labels;
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return m;
}

// ---------------------------------------------------------------------------
// K-NN

KnnModel knn_fit(const LabeledPoints& data, int K) {
  if (K < 1) throw Error(ErrorCode::InvalidClasses, "K must be positive");
  if (data.size() < K) throw Error(ErrorCode::InvalidClasses, "fewer training points than K");
  if (static_cast<std::size_t>(data.size()) != data.labels.size())
    throw Error(ErrorCode::DimensionMismatch, "point and label counts differ");
  return KnnModel{data.points, data.labels, K};
}

Eigen::Index knn_nearest(const RMat& points, const RVec& q) {
  if (q.size() != points.rows()) throw Error(ErrorCode::DimensionMismatch, "query dimension");
  Eigen::Index best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const double d = (points.col(i) - q).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

int knn_predict(const KnnModel& model, const RVec& q) {
  if (model.points.cols() == 0) throw Error(ErrorCode::InvalidClasses, "empty K-NN model");
  if (q.size() != model.points.rows()) throw Error(ErrorCode::DimensionMismatch, "query dimension");
  if (model.K == 1) return model.labels[static_cast<std::size_t>(knn_nearest(model.points, q))];

  std::vector<std::pair<double, Eigen::Index>> d(static_cast<std::size_t>(model.points.cols()));
  for (Eigen::Index i = 0; i < model.points.cols(); ++i) d[i] = {(model.points.col(i) - q).squaredNorm(), i};
  const auto K = static_cast<std::size_t>(std::min<Eigen::Index>(model.K, model.points.cols()));
  std::partial_sort(d.begin(), d.begin() + K, d.end());  // pairs order ties by index
  std::map<int, int> votes;
  for (std::size_t i = 0; i < K; ++i) ++votes[model.labels[static_cast<std::size_t>(d[i].second)]];
  int best_label = 0;
  int best_votes = -1;
  for (const auto& [label, count] : votes) {
    if (count > best_votes) {
      best_votes = count;
      best_label = label;
    }
  }
  return best_label;
}

// ---------------------------------------------------------------------------
// MLP

std::string to_string(Activation a) { return a == Activation::ReLU ? "relu" : "tanh"; }

Activation parse_activation(std::string_view text) {
  if (text == "relu") return Activation::ReLU;
  if (text == "tanh") return Activation::Tanh;
  throw Error(ErrorCode::ParseError, "unknown activation '" + std::string(text) + "'");
}

std::string to_string(Optimizer o) { return o == Optimizer::Adam ? "adam" : "gd"; }

Optimizer parse_optimizer(std::string_view text) {
  if (text == "adam") return Optimizer::Adam;
  if (text == "gd") return Optimizer::GradientDescent;
  throw Error(ErrorCode::ParseError, "unknown optimizer '" + std::string(text) + "'");
}

namespace {

void activate(RMat& z, Activation a) {
  if (a == Activation::Tanh)
    z = z.array().tanh().matrix();
  else
    z = z.cwiseMax(0.0);
}

void softmax_columns(RMat& z) {
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    const double m = z.col(c).maxCoeff();
    z.col(c) = (z.col(c).array() - m).exp().matrix();
    z.col(c) /= z.col(c).sum();
  }
}

Eigen::Index argmax_lowest(const Eigen::Ref<const RVec>& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) > v(best)) best = i;
  return best;
}

struct Forward {
  std::vector<RMat> a;  // a[0] = input, a[l+1] = output of layer l (softmax at the end)
};

Forward forward(const MlpModel& m, const RMat& x) {
  Forward f;
  f.a.reserve(m.weights.size() + 1);
  f.a.push_back(x);
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    RMat z = m.weights[l] * f.a.back();
    z.colwise() += m.biases[l];
    if (l + 1 < m.weights.size())
      activate(z, m.activations[l]);
    else
      softmax_columns(z);
    f.a.push_back(std::move(z));
  }
  return f;
}

struct Gradients {
  std::vector<RMat> w;
  std::vector<RVec> b;
};

// Cross-entropy gradient averaged over the columns of x.
Gradients backward(const MlpModel& m, const Forward& f, const std::vector<int>& cls) {
  const std::size_t L = m.weights.size();
  const double inv_n = 1.0 / static_cast<double>(f.a[0].cols());
  Gradients g;
  g.w.resize(L);
  g.b.resize(L);
  RMat dz = f.a[L];
  for (Eigen::Index c = 0; c < dz.cols(); ++c) dz(cls[static_cast<std::size_t>(c)], c) -= 1.0;
  dz *= inv_n;
  for (std::size_t l = L; l-- > 0;) {
    g.w[l] = dz * f.a[l].transpose();
    g.b[l] = dz.rowwise().sum();
    if (l == 0) break;
    RMat da = m.weights[l].transpose() * dz;
    const RMat& act = f.a[l];
    if (m.activations[l - 1] == Activation::Tanh)
      dz = da.array() * (1.0 - act.array().square());
    else
      dz = da.array() * (act.array() > 0.0).cast<double>();
  }
  return g;
}

}  // namespace

MlpModel mlp_train(const LabeledPoints& data, const MlpSpec& arch, const TrainConfig& cfg) {
  const std::vector<int> cmap = class_map_of(data.labels);
  if (cmap.size() < 2) throw Error(ErrorCode::InvalidClasses, "training data needs at least two classes");
  if (static_cast<std::size_t>(data.size()) != data.labels.size())
    throw Error(ErrorCode::DimensionMismatch, "point and label counts differ");

  MlpModel m;
  m.class_map = cmap;
  m.layer_sizes.push_back(static_cast<int>(data.points.rows()));
  for (int h : arch.hidden) {
    m.layer_sizes.push_back(h);
    m.activations.push_back(arch.activation);
  }
  m.layer_sizes.push_back(static_cast<int>(cmap.size()));

  Rng rng = make_rng(cfg.seed, Stream::Train);
  for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
    const int fan_in = m.layer_sizes[l];
    const int fan_out = m.layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    RMat w(fan_out, fan_in);
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = limit * (2.0 * uniform01(rng) - 1.0);
    m.weights.push_back(std::move(w));
    m.biases.push_back(RVec::Zero(fan_out));
  }

  std::vector<int> cls(data.labels.size());
  for (std::size_t i = 0; i < cls.size(); ++i)
    cls[i] = static_cast<int>(std::lower_bound(cmap.begin(), cmap.end(), data.labels[i]) - cmap.begin());

  const std::size_t L = m.weights.size();
  std::vector<RMat> mw(L), vw(L);
  std::vector<RVec> mb(L), vb(L);
  for (std::size_t l = 0; l < L; ++l) {
    mw[l] = RMat::Zero(m.weights[l].rows(), m.weights[l].cols());
    vw[l] = mw[l];
    mb[l] = RVec::Zero(m.biases[l].size());
    vb[l] = mb[l];
  }
  long adam_t = 0;

  auto apply = [&](const Gradients& g, double lr) {
    if (cfg.optimizer == Optimizer::GradientDescent) {
      for (std::size_t l = 0; l < L; ++l) {
        m.weights[l] -= lr * g.w[l];
        m.biases[l] -= lr * g.b[l];
      }
      return;
    }
    ++adam_t;
    const double c1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(adam_t));
    const double c2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(adam_t));
    for (std::size_t l = 0; l < L; ++l) {
      mw[l] = cfg.adam_beta1 * mw[l] + (1.0 - cfg.adam_beta1) * g.w[l];
      vw[l] = cfg.adam_beta2 * vw[l] + (1.0 - cfg.adam_beta2) * g.w[l].cwiseAbs2();
      mb[l] = cfg.adam_beta1 * mb[l] + (1.0 - cfg.adam_beta1) * g.b[l];
      vb[l] = cfg.adam_beta2 * vb[l] + (1.0 - cfg.adam_beta2) * g.b[l].cwiseAbs2();
      m.weights[l].array() -= lr * (mw[l].array() / c1) / ((vw[l].array() / c2).sqrt() + cfg.adam_eps);
      m.biases[l].array() -= lr * (mb[l].array() / c1) / ((vb[l].array() / c2).sqrt() + cfg.adam_eps);
    }
  };

  const Eigen::Index n = data.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  double lr = cfg.lr_init;
  double best_loss = std::numeric_limits<double>::infinity();
  int stale = 0;

  for (long epoch = 0;; ++epoch) {
    const Forward f = forward(m, data.points);
    const RMat& prob = f.a.back();
    double loss = 0.0;
    Eigen::Index correct = 0;
    for (Eigen::Index c = 0; c < n; ++c) {
      loss -= std::log(std::max(prob(cls[static_cast<std::size_t>(c)], c), 1e-300));
      if (argmax_lowest(prob.col(c)) == cls[static_cast<std::size_t>(c)]) ++correct;
    }
    loss /= static_cast<double>(n);
    m.train_accuracy = static_cast<double>(correct) / static_cast<double>(n);
    m.epochs = epoch;
    if (correct == n) {
      m.separated = true;
      break;
    }
    if (epoch >= cfg.max_epochs) break;

    if (loss < best_loss - cfg.plateau_tol) {
      best_loss = loss;
      stale = 0;
    } else if (++stale >= cfg.plateau_epochs) {
      lr = std::max(lr * cfg.lr_decay, cfg.lr_min);
      stale = 0;
      best_loss = loss;
    }

    if (cfg.minibatch <= 0 || cfg.minibatch >= n) {
      apply(backward(m, f, cls), lr);
      continue;
    }
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < n; start += cfg.minibatch) {
      const Eigen::Index len = std::min<Eigen::Index>(cfg.minibatch, n - start);
      RMat xb(data.points.rows(), len);
      std::vector<int> cb(static_cast<std::size_t>(len));
      for (Eigen::Index j = 0; j < len; ++j) {
        const Eigen::Index src = order[static_cast<std::size_t>(start + j)];
        xb.col(j) = data.points.col(src);
        cb[static_cast<std::size_t>(j)] = cls[static_cast<std::size_t>(src)];
      }
      apply(backward(m, forward(m, xb), cb), lr);
    }
  }
  return m;
}

RMat mlp_probabilities(const MlpModel& model, const RMat& points) {
  if (points.rows() != model.layer_sizes.front()) throw Error(ErrorCode::DimensionMismatch, "input dimension");
  return forward(model, points).a.back();
}

Prediction mlp_predict(const MlpModel& model, const RVec& q) {
  const RMat prob = mlp_probabilities(model, q);
  Prediction p;
  p.probabilities = prob.col(0);
  p.label = model.class_map[static_cast<std::size_t>(argmax_lowest(p.probabilities))];
  return p;
}

// ---------------------------------------------------------------------------
// Shared surface

std::vector<int> class_map(const Classifier& model) {
  return std::visit(
      [](const auto& m) -> std::vector<int> {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, KnnModel>)
          return m.class_map();
        else
          return m.class_map;
      },
      model);
}

int predict_label(const Classifier& model, const RVec& q) {
  if (const auto* knn = std::get_if<KnnModel>(&model)) return knn_predict(*knn, q);
  return mlp_predict(std::get<MlpModel>(model), q).label;
}

std::vector<int> predict_labels(const Classifier& model, const RMat& points) {
  std::vector<int> out(static_cast<std::size_t>(points.cols()));
  if (const auto* mlp = std::get_if<MlpModel>(&model)) {
    constexpr Eigen::Index chunk = 8192;
    for (Eigen::Index s = 0; s < points.cols(); s += chunk) {
      const Eigen::Index len = std::min(chunk, points.cols() - s);
      const RMat prob = mlp_probabilities(*mlp, points.middleCols(s, len));
      for (Eigen::Index c = 0; c < len; ++c)
        out[static_cast<std::size_t>(s + c)] = mlp->class_map[static_cast<std::size_t>(argmax_lowest(prob.col(c)))];
    }
    return out;
  }
  const auto& knn = std::get<KnnModel>(model);
  for (Eigen::Index c = 0; c < points.cols(); ++c) out[static_cast<std::size_t>(c)] = knn_predict(knn, points.col(c));
  return out;
}

double evaluate_accuracy(const Classifier& model, const LabeledPoints& test) {
  if (test.size() == 0) throw Error(ErrorCode::InvalidClasses, "empty test set");
  const auto pred = predict_labels(model, test.points);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == test.labels[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

Grid decision_grid(const Classifier& model, const GridSpec& spec) {
  if (spec.resolution < 2) throw Error(ErrorCode::DimensionMismatch, "grid resolution must be at least 2");
  const Eigen::Index k = spec.box.dim();
  if (spec.axis_x < 0 || spec.axis_y < 0 || spec.axis_x >= k || spec.axis_y >= k || spec.axis_x == spec.axis_y)
    throw Error(ErrorCode::DimensionMismatch, "grid axes out of range");
  RVec base = spec.fixed.size() == k ? spec.fixed : RVec((spec.box.lo + spec.box.hi) / 2.0);

  Grid g;
  g.resolution = spec.resolution;
  g.x_lo = spec.box.lo(spec.axis_x);
  g.x_hi = spec.box.hi(spec.axis_x);
  g.y_lo = spec.box.lo(spec.axis_y);
  g.y_hi = spec.box.hi(spec.axis_y);
  g.class_map = class_map(model);

  const Eigen::Index res = spec.resolution;
  RMat pts(k, res * res);
  for (Eigen::Index r = 0; r < res; ++r) {
    for (Eigen::Index c = 0; c < res; ++c) {
      RVec p = base;
      p(spec.axis_x) = g.x_center(static_cast<int>(c));
      p(spec.axis_y) = g.y_center(static_cast<int>(r));
      pts.col(r * res + c) = p;
    }
  }
  g.labels = predict_labels(model, pts);
  return g;
}

Rgb palette_color(std::size_t rank) {
  static constexpr std::array<Rgb, 7> kPalette{{
      {215, 48, 39},
      {252, 141, 89},
      {254, 224, 144},
      {224, 243, 248},
      {145, 191, 219},
      {69, 117, 180},
      {49, 54, 149},
  }};
  return kPalette[std::min<std::size_t>(rank, kPalette.size() - 1)];
}

}  // namespace disclocus
