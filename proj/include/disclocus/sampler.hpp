#ifndef DISCLOCUS_SAMPLER_HPP
#define DISCLOCUS_SAMPLER_HPP

#include "disclocus/discriminant.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace disclocus {

enum class Category { Uniform, NearCenter, NearBoundary };

std::string to_string(Category c);
Category parse_category(std::string_view text);

struct LabeledSample {
  RVec p;
  int label = 0;
  Category category = Category::Uniform;
  int line_id = -1;
  std::optional<std::vector<RVec>> real_solutions;
};

struct SamplerConfig {
  Box omega;
  double alpha = 0.01;
  int n_uniform = 0;
  int n_lines = 0;
  double min_interval = 1e-4;
  std::uint64_t seed = 0;
  bool store_solutions = false;
  int max_redraws = 50;
  int jobs = 1;
  SolverSettings solver;
};

struct Dataset {
  std::string model;
  std::vector<LabeledSample> samples;
  SamplerConfig config;
  int generic_d = 0;
  std::vector<WitnessLine> lines;  // one per emitted line, indexed by line_id
};

/// Sample points along one witness line, in lambda coordinates.
struct LineOffsets {
  std::vector<double> midpoints;  // i = 0..l
  std::vector<double> forward;    // lambda_i + min(alpha, delta_i / 20),     i = 1..l
  std::vector<double> backward;   // lambda_i - min(alpha, delta_{i-1} / 20), i = 1..l
};

LineOffsets offsets(const std::vector<double>& lambdas, double lambda_enter, double lambda_exit, double alpha);

/// Default parameter box for the built-in models.
Box default_box(const ModelId& id);

/// `count` i.i.d. uniform points in omega, labeled; points whose label fails
/// are redrawn from the same stream. Job j uses stream (seed, Uniform, first + j).
std::vector<LabeledSample> sample_uniform(const ParameterizedSystem& sys, const GenericStart& start,
                                          const SamplerConfig& cfg, int count, int first = 0);

struct LineSample {
  WitnessLine line;
  std::vector<LabeledSample> samples;
};

/// One random line through omega: labels its anchor (Uniform), the interval
/// midpoints (NearCenter) and assigns interval labels to the offset points
/// (NearBoundary). An anchor that cannot be labeled is left out. Throws
/// LineDiscarded when the witness computation fails or no interval survives
/// filtering.
LineSample sample_line(const ParameterizedSystem& sys, const GenericStart& start, const CriticalSystem& crit,
                       const GenericStart& crit_start, const SamplerConfig& cfg, int line_id, int redraw = 0);
/// Same as sample_line for a given anchor and unit direction.
LineSample sample_line_through(const ParameterizedSystem& sys, const GenericStart& start, const CriticalSystem& crit,
                               const GenericStart& crit_start, const SamplerConfig& cfg, const RVec& p_star,
                               const RVec& v, int line_id, Rng& rng);

struct Starts {
  GenericStart start;
  std::optional<CriticalSystem> crit;
  std::optional<GenericStart> crit_start;
};

Starts prepare_starts(const ParameterizedSystem& sys, const SamplerConfig& cfg, bool need_critical);

Dataset generate_dataset(const ParameterizedSystem& sys, const Starts& starts, const SamplerConfig& cfg);
Dataset generate_dataset(const ParameterizedSystem& sys, const SamplerConfig& cfg);

/// Samples of the given categories.
std::vector<LabeledSample> filter(const std::vector<LabeledSample>& samples, const std::vector<Category>& keep);

}  // namespace disclocus

#endif  // DISCLOCUS_SAMPLER_HPP
