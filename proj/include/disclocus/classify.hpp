#ifndef DISCLOCUS_CLASSIFY_HPP
#define DISCLOCUS_CLASSIFY_HPP

#include "disclocus/discriminant.hpp"
#include "disclocus/sampler.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace disclocus {

/// Labeled points as the classifiers consume them: one column per point.
struct LabeledPoints {
  RMat points;  // k x N
  std::vector<int> labels;

  Eigen::Index size() const { return points.cols(); }
  static LabeledPoints from_samples(const std::vector<LabeledSample>& samples);
};

/// Sorted distinct labels.
std::vector<int> class_map_of(const std::vector<int>& labels);

// ---------------------------------------------------------------------------
// K nearest neighbours

struct KnnModel {
  RMat points;  // k x N
  std::vector<int> labels;
  int K = 1;

  std::vector<int> class_map() const { return class_map_of(labels); }
};

KnnModel knn_fit(const LabeledPoints& data, int K = 1);

/// Majority label among the K Euclidean-nearest points. Distance ties go to
/// the lower point index, vote ties to the smaller label.
int knn_predict(const KnnModel& model, const RVec& q);

/// Index of the nearest training point (ties to the lower index).
Eigen::Index knn_nearest(const RMat& points, const RVec& q);

// ---------------------------------------------------------------------------
// Feedforward network

enum class Activation { ReLU, Tanh };
std::string to_string(Activation a);
Activation parse_activation(std::string_view text);

enum class Optimizer { GradientDescent, Adam };
std::string to_string(Optimizer o);
Optimizer parse_optimizer(std::string_view text);

struct MlpModel {
  std::vector<int> layer_sizes;          // input, hidden..., output
  std::vector<Activation> activations;   // one per hidden layer
  std::vector<RMat> weights;             // layer l: sizes[l+1] x sizes[l]
  std::vector<RVec> biases;
  std::vector<int> class_map;
  // Training metadata, reported alongside the weights.
  double train_accuracy = 0.0;
  long epochs = 0;
  bool separated = false;
};

struct TrainConfig {
  double lr_init = 1e-2;
  double plateau_tol = 1e-6;
  int plateau_epochs = 20;
  double lr_decay = 0.5;
  double lr_min = 1e-8;
  long max_epochs = 50000;
  int minibatch = 0;  // 0 means full batch
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::Adam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
};

struct MlpSpec {
  std::vector<int> hidden;  // neurons per hidden layer
  Activation activation = Activation::Tanh;
};

/// Zero-regularization cross-entropy training; stops at 100% training
/// accuracy or max_epochs. A model that never separates the data comes back
/// with separated = false rather than as an error.
MlpModel mlp_train(const LabeledPoints& data, const MlpSpec& arch, const TrainConfig& cfg);

struct Prediction {
  int label = 0;
  RVec probabilities;
};

Prediction mlp_predict(const MlpModel& model, const RVec& q);
/// Class probabilities for every column of `points` (C x N).
RMat mlp_probabilities(const MlpModel& model, const RMat& points);

// ---------------------------------------------------------------------------
// Shared surface

using Classifier = std::variant<KnnModel, MlpModel>;

std::vector<int> class_map(const Classifier& model);
int predict_label(const Classifier& model, const RVec& q);
std::vector<int> predict_labels(const Classifier& model, const RMat& points);
double evaluate_accuracy(const Classifier& model, const LabeledPoints& test);

/// 2-D grid over axes (axis_x, axis_y) of `box`; the remaining coordinates
/// are held at `fixed` (ignored when the box is 2-D).
struct GridSpec {
  Box box;
  int axis_x = 0;
  int axis_y = 1;
  RVec fixed;
  int resolution = 512;
};

struct Grid {
  int resolution = 0;
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
  std::vector<int> labels;      // row-major; row r has y at the r-th cell center from y_lo
  std::vector<int> class_map;

  double x_center(int c) const { return x_lo + (c + 0.5) * (x_hi - x_lo) / resolution; }
  double y_center(int r) const { return y_lo + (r + 0.5) * (y_hi - y_lo) / resolution; }
  int at(int r, int c) const { return labels[static_cast<std::size_t>(r) * resolution + c]; }
};

Grid decision_grid(const Classifier& model, const GridSpec& spec);

using Rgb = std::array<std::uint8_t, 3>;
/// Color for the label at rank `rank` of the class map.
Rgb palette_color(std::size_t rank);

}  // namespace disclocus

#endif  // DISCLOCUS_CLASSIFY_HPP
