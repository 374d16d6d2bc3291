#ifndef DISCLOCUS_SOLVER_HPP
#define DISCLOCUS_SOLVER_HPP

#include "disclocus/polysys.hpp"
#include "disclocus/rng.hpp"
#include "disclocus/tracker.hpp"

#include <cstdint>
#include <vector>

namespace disclocus {

/// Solved generic instance f(x; p0) = 0 used as the start of every
/// parameter homotopy in the family.
struct GenericStart {
  CVec p0;
  std::vector<CVec> solutions;
  int d = 0;
  std::uint64_t seed = 0;
};

struct SolverSettings {
  TrackSettings track;
  double tol_im = 1e-6;
  double dedup_tol = 1e-8;
  double endpoint_residual = 1e-10;
  int polish_iters = 3;
  int attempts = 3;  // generic-start draws and label retries
  int jobs = 1;
};

/// gamma t / (1 + (gamma - 1) t).
Complex tau(double t, Complex gamma);
Complex tau_derivative(double t, Complex gamma);

/// H(x, t) = gamma t g(x) + (1 - t) f(x; p0) with g_i = x_i^{d_i} - 1.
HomotopySpec total_degree_homotopy(const ParameterizedSystem& sys, const CVec& p0, Complex gamma);
std::vector<CVec> total_degree_start_points(const ParameterizedSystem& sys);

/// H(x, t) = f(x; tau(t) p_start + (1 - tau(t)) p_target).
HomotopySpec parameter_homotopy_spec(const ParameterizedSystem& sys, const CVec& p_start, const CVec& p_target,
                                     Complex gamma);

GenericStart solve_generic(const ParameterizedSystem& sys, std::uint64_t seed, const SolverSettings& s = {});

/// Tracks all d start solutions to p; Success endpoints are Newton-polished.
std::vector<PathResult> parameter_homotopy(const ParameterizedSystem& sys, const GenericStart& start, const CVec& p,
                                           Complex gamma, const SolverSettings& s = {});

bool is_real(const CVec& x, double tol_im);
RVec real_part(const CVec& x);

/// Number of endpoints whose every coordinate is real to tol_im. Throws
/// CountUnreliable if any path failed or two endpoints coincide.
int count_real(const std::vector<PathResult>& results, double tol_im = 1e-6, double dedup_tol = 1e-8);

struct LabelResult {
  int label = 0;
  std::vector<RVec> real_solutions;
  int attempts_used = 0;
};

/// Real-solution count at a real parameter point. Each attempt draws a fresh
/// gamma from `rng`; throws LabelFailed after s.attempts unreliable counts.
LabelResult label_point_full(const ParameterizedSystem& sys, const GenericStart& start, const RVec& p, Rng& rng,
                             const SolverSettings& s = {});
int label_point(const ParameterizedSystem& sys, const GenericStart& start, const RVec& p, Rng& rng,
                const SolverSettings& s = {});

CVec to_complex(const RVec& v);

}  // namespace disclocus

#endif  // DISCLOCUS_SOLVER_HPP
