#include "disclocus/sampler.hpp"

#include "disclocus/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace disclocus {

std::string to_string(Category c) {
  switch (c) {
    case Category::Uniform: return "uniform";
    case Category::NearCenter: return "near_center";
    case Category::NearBoundary: return "near_boundary";
  }
  return "unknown";
}

Category parse_category(std::string_view text) {
  if (text == "uniform") return Category::Uniform;
  if (text == "near_center") return Category::NearCenter;
  if (text == "near_boundary") return Category::NearBoundary;
  throw Error(ErrorCode::ParseError, "unknown category '" + std::string(text) + "'");
}

LineOffsets offsets(const std::vector<double>& lambdas, double lambda_enter, double lambda_exit, double alpha) {
  std::vector<double> knots;
  knots.reserve(lambdas.size() + 2);
  knots.push_back(lambda_enter);
  knots.insert(knots.end(), lambdas.begin(), lambdas.end());
  knots.push_back(lambda_exit);

  LineOffsets out;
  const std::size_t ell = lambdas.size();
  for (std::size_t i = 0; i <= ell; ++i) {
    const double delta = knots[i + 1] - knots[i];
    out.midpoints.push_back(knots[i] + delta / 2.0);
  }
  for (std::size_t i = 1; i <= ell; ++i) {
    const double delta_fwd = knots[i + 1] - knots[i];
    const double delta_bwd = knots[i] - knots[i - 1];
    out.forward.push_back(knots[i] + std::min(alpha, delta_fwd / 20.0));
    out.backward.push_back(knots[i] - std::min(alpha, delta_bwd / 20.0));
  }
  return out;
}

Box default_box(const ModelId& id) {
  switch (id.kind) {
    case ModelKind::Kuramoto:
      if (id.oscillators == 4) return Box::cube(3, -0.75, 0.75);
      return Box::cube(id.oscillators - 1, -1.0, 1.0);
    case ModelKind::Quadratic:
    case ModelKind::Cubic:
    case ModelKind::ConjSquare: return Box::cube(2, -1.0, 1.0);
    case ModelKind::Custom: break;
  }
  throw Error(ErrorCode::ParseError, "custom models need an explicit --box");
}

namespace {

LabeledSample make_sample(const RVec& p, const LabelResult& lr, Category cat, int line_id, bool store) {
  LabeledSample s;
  s.p = p;
  s.label = lr.label;
  s.category = cat;
  s.line_id = line_id;
  if (store) s.real_solutions = lr.real_solutions;
  return s;
}

RVec random_direction(Rng& rng, Eigen::Index k) {
  for (;;) {
    RVec v(k);
    for (Eigen::Index j = 0; j < k; ++j) v(j) = gaussian(rng);
    const double norm = v.norm();
    if (norm > 1e-12) return v / norm;
  }
}

}  // namespace

std::vector<LabeledSample> sample_uniform(const ParameterizedSystem& sys, const GenericStart& start,
                                          const SamplerConfig& cfg, int count, int first) {
  std::vector<LabeledSample> out(static_cast<std::size_t>(std::max(0, count)));
  parallel_for(out.size(), cfg.jobs, [&](std::size_t j) {
    Rng rng = make_rng(cfg.seed, Stream::Uniform, first + static_cast<std::uint64_t>(j));
    for (int redraw = 0;; ++redraw) {
      const RVec p = cfg.omega.sample(rng);
      try {
        const LabelResult lr = label_point_full(sys, start, p, rng, cfg.solver);
        out[j] = make_sample(p, lr, Category::Uniform, -1, cfg.store_solutions);
        return;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LabelFailed || redraw >= cfg.max_redraws) throw;
      }
    }
  });
  return out;
}

LineSample sample_line(const ParameterizedSystem& sys, const GenericStart& start, const CriticalSystem& crit,
                       const GenericStart& crit_start, const SamplerConfig& cfg, int line_id, int redraw) {
  Rng rng = make_rng(cfg.seed, Stream::Line, line_id, redraw);
  const RVec p_star = cfg.omega.sample(rng);
  const RVec v = random_direction(rng, p_star.size());
  return sample_line_through(sys, start, crit, crit_start, cfg, p_star, v, line_id, rng);
}

LineSample sample_line_through(const ParameterizedSystem& sys, const GenericStart& start, const CriticalSystem& crit,
                               const GenericStart& crit_start, const SamplerConfig& cfg, const RVec& p_star,
                               const RVec& v, int line_id, Rng& rng) {
  LineSample out;
  // An anchor sitting on the locus has no label; the line is still usable.
  try {
    const LabelResult anchor = label_point_full(sys, start, p_star, rng, cfg.solver);
    out.samples.push_back(make_sample(p_star, anchor, Category::Uniform, -1, cfg.store_solutions));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::LabelFailed) throw;
  }
  try {
    out.line = witness_on_line(crit, crit_start, p_star, v, cfg.omega, rng, cfg.solver);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::WitnessFailed || e.code() == ErrorCode::PointOutsideBox)
      throw Error(ErrorCode::LineDiscarded, e.what());
    throw;
  }

  const WitnessLine& line = out.line;
  const LineOffsets off = offsets(line.lambdas, line.lambda_enter, line.lambda_exit, cfg.alpha);
  const std::size_t ell = line.lambdas.size();
  std::vector<double> knots{line.lambda_enter};
  knots.insert(knots.end(), line.lambdas.begin(), line.lambdas.end());
  knots.push_back(line.lambda_exit);

  auto point = [&](double lambda) -> RVec { return p_star + lambda * v; };

  // Interval labels; std::nullopt marks a dropped interval.
  std::vector<std::optional<int>> interval_label(ell + 1);
  for (std::size_t i = 0; i <= ell; ++i) {
    if (knots[i + 1] - knots[i] < cfg.min_interval) continue;
    const RVec m = point(off.midpoints[i]);
    try {
      const LabelResult lr = label_point_full(sys, start, m, rng, cfg.solver);
      interval_label[i] = lr.label;
      out.samples.push_back(make_sample(m, lr, Category::NearCenter, line_id, cfg.store_solutions));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::LabelFailed) throw;
    }
  }
  if (std::none_of(interval_label.begin(), interval_label.end(), [](const auto& l) { return l.has_value(); }))
    throw Error(ErrorCode::LineDiscarded, "no interval on line " + std::to_string(line_id) + " could be labeled");

  // Labels come from the containing interval. Solutions, when requested, are
  // kept only if the solved count agrees with that label.
  auto boundary = [&](double lambda, int label) {
    LabeledSample s;
    s.p = point(lambda);
    s.label = label;
    s.category = Category::NearBoundary;
    s.line_id = line_id;
    if (cfg.store_solutions) {
      try {
        LabelResult lr = label_point_full(sys, start, s.p, rng, cfg.solver);
        if (lr.label == label) s.real_solutions = std::move(lr.real_solutions);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LabelFailed) throw;
      }
    }
    out.samples.push_back(std::move(s));
  };
  for (std::size_t i = 1; i <= ell; ++i) {
    if (interval_label[i - 1]) boundary(off.backward[i - 1], *interval_label[i - 1]);
    if (interval_label[i]) boundary(off.forward[i - 1], *interval_label[i]);
  }
  return out;
}

Starts prepare_starts(const ParameterizedSystem& sys, const SamplerConfig& cfg, bool need_critical) {
  Starts s;
  s.start = solve_generic(sys, cfg.seed, cfg.solver);
  if (need_critical) {
    s.crit = make_critical_system(sys);
    s.crit_start = critical_generic_start(*s.crit, cfg.seed, cfg.solver);
  }
  return s;
}

Dataset generate_dataset(const ParameterizedSystem& sys, const Starts& starts, const SamplerConfig& cfg) {
  Dataset ds;
  ds.model = sys.name();
  ds.config = cfg;
  ds.generic_d = starts.start.d;
  ds.samples = sample_uniform(sys, starts.start, cfg, cfg.n_uniform);
  if (cfg.n_lines <= 0) return ds;
  if (!starts.crit || !starts.crit_start)
    throw Error(ErrorCode::GenericStartFailed, "line sampling needs a solved critical system");

  std::vector<LineSample> lines(static_cast<std::size_t>(cfg.n_lines));
  SamplerConfig line_cfg = cfg;
  line_cfg.jobs = 1;
  parallel_for(lines.size(), cfg.jobs, [&](std::size_t j) {
    for (int redraw = 0;; ++redraw) {
      try {
        lines[j] = sample_line(sys, starts.start, *starts.crit, *starts.crit_start, line_cfg, static_cast<int>(j), redraw);
        return;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LineDiscarded || redraw >= cfg.max_redraws) throw;
      }
    }
  });
  for (auto& l : lines) {
    ds.lines.push_back(std::move(l.line));
    for (auto& s : l.samples) ds.samples.push_back(std::move(s));
  }
  return ds;
}

Dataset generate_dataset(const ParameterizedSystem& sys, const SamplerConfig& cfg) {
  return generate_dataset(sys, prepare_starts(sys, cfg, cfg.n_lines > 0), cfg);
}

std::vector<LabeledSample> filter(const std::vector<LabeledSample>& samples, const std::vector<Category>& keep) {
  std::vector<LabeledSample> out;
  for (const auto& s : samples)
    if (std::find(keep.begin(), keep.end(), s.category) != keep.end()) out.push_back(s);
  return out;
}

}  // namespace disclocus
