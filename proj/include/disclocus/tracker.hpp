#ifndef DISCLOCUS_TRACKER_HPP
#define DISCLOCUS_TRACKER_HPP

#include "disclocus/numcore.hpp"

#include <functional>
#include <string>
#include <vector>

namespace disclocus {

/// H(x, t) together with its partials. t runs from 1 (start) to 0 (target).
struct HomotopySpec {
  std::function<CVec(const CVec&, double)> evaluator;
  std::function<CMat(const CVec&, double)> dx;
  std::function<CVec(const CVec&, double)> dt;
};

struct TrackSettings {
  double tol_newton = 1e-10;
  int max_newton_iters = 3;
  double h_init = 1e-2;
  double h_min = 1e-14;
  double h_max = 0.1;
  double step_growth = 2.0;
  double step_cut = 0.5;
  int successes_before_growth = 5;
  long max_steps = 100000;
  double divergence_norm = 1e10;
  // At t = 0, Newton must shrink its update below endpoint_step_tol (relative
  // to the point's scale) within endpoint_newton_iters steps. Singular
  // endpoints converge only linearly and fail this.
  double endpoint_step_tol = 1e-10;
  int endpoint_newton_iters = 4;
};

enum class PathStatus { Success, Diverged, StepSizeUnderflow, MaxSteps, SingularJacobian };

std::string to_string(PathStatus status);

struct PathResult {
  PathStatus status = PathStatus::MaxSteps;
  CVec endpoint;
  double t_reached = 1.0;
  long steps_taken = 0;
  double residual = 0.0;

  bool ok() const { return status == PathStatus::Success; }
};

/// Euler predictor on the Davidenko ODE, Newton corrector at fixed t.
PathResult track_path(const HomotopySpec& h, const CVec& start, const TrackSettings& s = {});

/// Up to `iters` Newton steps at fixed t, stopping as soon as a step would
/// increase the residual.
CVec newton_polish(const HomotopySpec& h, const CVec& x, double t, int iters);

/// Tracks every start point; results are in start order for any `jobs`.
std::vector<PathResult> track_paths(const HomotopySpec& h, const std::vector<CVec>& starts,
                                    const TrackSettings& s = {}, int jobs = 1);

}  // namespace disclocus

#endif  // DISCLOCUS_TRACKER_HPP
