#include "disclocus/tracker.hpp"

#include "disclocus/parallel.hpp"

#include <algorithm>

namespace disclocus {

std::string to_string(PathStatus status) {
  switch (status) {
    case PathStatus::Success: return "success";
    case PathStatus::Diverged: return "diverged";
    case PathStatus::StepSizeUnderflow: return "step_size_underflow";
    case PathStatus::MaxSteps: return "max_steps";
    case PathStatus::SingularJacobian: return "singular_jacobian";
  }
  return "unknown";
}

namespace {

enum class Correction { Converged, Failed, Singular };

// Newton at fixed t. Away from the target the corrector also accepts once
// the update is below tol_newton relative to the point's scale, so paths
// running off to infinity are not starved by round-off in the residual. At
// t = 0 only the absolute residual counts. A step that does not contract by
// half, or a first correction larger than a tenth of the point's scale, is a
// failure so the caller shrinks the step instead of hopping onto a
// neighbouring path.
Correction correct(const HomotopySpec& h, CVec& x, double t, const TrackSettings& s, double& residual) {
  double prev_step = 0.0;
  for (int iter = 0;; ++iter) {
    const CVec r = h.evaluator(x, t);
    residual = inf_norm(r);
    if (!std::isfinite(residual)) return Correction::Failed;
    if (residual <= s.tol_newton) return Correction::Converged;
    const double scale = std::max(1.0, inf_norm(x));
    if (iter > 0 && t > 0.0 && prev_step <= s.tol_newton * scale) return Correction::Converged;
    if (iter >= s.max_newton_iters) return Correction::Failed;
    CVec delta;
    try {
      delta = lu_solve<Complex>(h.dx(x, t), r);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SingularMatrix) return Correction::Singular;
      throw;
    }
    const double step = inf_norm(delta);
    if (iter == 0 && step > 0.1 * scale) return Correction::Failed;
    if (iter > 0 && step > 0.5 * prev_step && step > 1e-12 * scale) return Correction::Failed;
    prev_step = step;
    x -= delta;
  }
}

// True if Newton at t = 0 from x settles quadratically.
bool regular_endpoint(const HomotopySpec& h, CVec x, const TrackSettings& s) {
  const double scale = std::max(1.0, inf_norm(x));
  for (int iter = 0; iter < s.endpoint_newton_iters; ++iter) {
    const CVec r = h.evaluator(x, 0.0);
    if (inf_norm(r) == 0.0) return true;
    CVec delta;
    try {
      delta = lu_solve<Complex>(h.dx(x, 0.0), r);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SingularMatrix) return false;
      throw;
    }
    if (inf_norm(delta) <= s.endpoint_step_tol * scale) return true;
    x -= delta;
  }
  return false;
}

}  // namespace

PathResult track_path(const HomotopySpec& h, const CVec& start, const TrackSettings& s) {
  PathResult result;
  result.endpoint = start;
  result.t_reached = 1.0;

  CVec x = start;
  double t = 1.0;
  double step = std::min(s.h_init, s.h_max);
  int streak = 0;

  while (t > 0.0) {
    if (result.steps_taken >= s.max_steps) {
      result.status = PathStatus::MaxSteps;
      break;
    }
    ++result.steps_taken;

    CVec velocity;
    try {
      velocity = lu_solve<Complex>(h.dx(x, t), h.dt(x, t));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularMatrix) throw;
      result.status = PathStatus::SingularJacobian;
      break;
    }

    const double dt = std::min(step, t);
    const double t_next = dt == t ? 0.0 : t - dt;
    // dx/dt = -Hx^{-1} Ht; moving from t to t - dt.
    CVec trial = x + velocity * dt;
    double residual = 0.0;
    const Correction c = correct(h, trial, t_next, s, residual);

    if (c == Correction::Converged) {
      x = std::move(trial);
      t = t_next;
      result.residual = residual;
      if (inf_norm(x) > s.divergence_norm) {
        result.status = PathStatus::Diverged;
        break;
      }
      if (++streak >= s.successes_before_growth) {
        step = std::min(step * s.step_growth, s.h_max);
        streak = 0;
      }
      continue;
    }
    if (!std::isfinite(inf_norm(trial)) || inf_norm(trial) > s.divergence_norm) {
      result.status = PathStatus::Diverged;
      break;
    }
    streak = 0;
    step *= s.step_cut;
    if (step < s.h_min) {
      result.status = PathStatus::StepSizeUnderflow;
      break;
    }
  }

  result.endpoint = x;
  result.t_reached = t;
  if (t == 0.0 && result.status != PathStatus::Diverged)
    result.status = regular_endpoint(h, x, s) ? PathStatus::Success : PathStatus::SingularJacobian;
  return result;
}

CVec newton_polish(const HomotopySpec& h, const CVec& x, double t, int iters) {
  CVec best = x;
  double best_res = inf_norm(h.evaluator(best, t));
  for (int i = 0; i < iters && best_res > 0.0; ++i) {
    const CVec r = h.evaluator(best, t);
    const CVec candidate = best - lu_solve<Complex>(h.dx(best, t), r);
    const double res = inf_norm(h.evaluator(candidate, t));
    if (!(res <= best_res)) break;
    best = candidate;
    best_res = res;
  }
  return best;
}

std::vector<PathResult> track_paths(const HomotopySpec& h, const std::vector<CVec>& starts, const TrackSettings& s,
                                    int jobs) {
  std::vector<PathResult> out(starts.size());
  parallel_for(starts.size(), jobs, [&](std::size_t i) { out[i] = track_path(h, starts[i], s); });
  return out;
}

}  // namespace disclocus
