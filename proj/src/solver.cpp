#include "disclocus/solver.hpp"

#include <algorithm>
#include <cmath>

namespace disclocus {

namespace {

constexpr double kPi = 3.14159265358979323846;

Complex tau_denominator(double t, Complex gamma) {
  const Complex den = 1.0 + (gamma - 1.0) * t;
  if (std::abs(den) < 1e-12) throw Error(ErrorCode::DegenerateGamma, "1 + (gamma - 1) t vanishes");
  return den;
}

bool nonsingular(const ParameterizedSystem& sys, const CVec& x, const CVec& p) {
  try {
    lu_solve<Complex>(sys.jacobian_x(x, p), CVec::Ones(sys.n()));
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularMatrix) return false;
    throw;
  }
}

// Keeps polished, nonsingular, pairwise-separated endpoints of the target
// system f(x; p).
std::vector<CVec> collect_endpoints(const ParameterizedSystem& sys, const CVec& p, const std::vector<PathResult>& paths,
                                    const SolverSettings& s) {
  std::vector<CVec> out;
  for (const PathResult& r : paths) {
    if (!r.ok()) continue;
    const CVec& x = r.endpoint;
    if (!all_finite(x)) continue;
    if (inf_norm(sys.evaluate(x, p)) > s.endpoint_residual) continue;
    if (!nonsingular(sys, x, p)) continue;
    const bool duplicate = std::any_of(out.begin(), out.end(),
                                       [&](const CVec& y) { return inf_norm(CVec(x - y)) <= s.dedup_tol; });
    if (!duplicate) out.push_back(x);
  }
  return out;
}

}  // namespace

Complex tau(double t, Complex gamma) { return gamma * t / tau_denominator(t, gamma); }

Complex tau_derivative(double t, Complex gamma) {
  const Complex den = tau_denominator(t, gamma);
  return gamma / (den * den);
}

std::vector<CVec> total_degree_start_points(const ParameterizedSystem& sys) {
  const int n = sys.n();
  const auto& deg = sys.degrees();
  std::size_t total = 1;
  for (int d : deg) {
    if (d < 1) throw Error(ErrorCode::DimensionMismatch, "equation without variables has no total-degree start");
    total *= static_cast<std::size_t>(d);
  }
  std::vector<CVec> starts;
  starts.reserve(total);
  std::vector<int> idx(n, 0);
  for (std::size_t s = 0; s < total; ++s) {
    CVec x(n);
    for (int i = 0; i < n; ++i) x(i) = std::polar(1.0, 2.0 * kPi * idx[i] / deg[i]);
    starts.push_back(x);
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < deg[i]) break;
      idx[i] = 0;
    }
  }
  return starts;
}

HomotopySpec total_degree_homotopy(const ParameterizedSystem& sys, const CVec& p0, Complex gamma) {
  const auto& deg = sys.degrees();
  auto start_value = [deg](const CVec& x) {
    CVec g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = std::pow(x(i), deg[i]) - 1.0;
    return g;
  };
  HomotopySpec h;
  h.evaluator = [&sys, p0, gamma, start_value](const CVec& x, double t) -> CVec {
    return gamma * t * start_value(x) + (1.0 - t) * sys.evaluate(x, p0);
  };
  h.dx = [&sys, p0, gamma, deg](const CVec& x, double t) -> CMat {
    CMat j = (1.0 - t) * sys.jacobian_x(x, p0);
    for (Eigen::Index i = 0; i < x.size(); ++i)
      j(i, i) += gamma * t * static_cast<double>(deg[i]) * std::pow(x(i), deg[i] - 1);
    return j;
  };
  h.dt = [&sys, p0, gamma, start_value](const CVec& x, double) -> CVec {
    return gamma * start_value(x) - sys.evaluate(x, p0);
  };
  return h;
}

HomotopySpec parameter_homotopy_spec(const ParameterizedSystem& sys, const CVec& p_start, const CVec& p_target,
                                     Complex gamma) {
  const CVec dir = p_start - p_target;
  auto at = [p_target, dir, gamma](double t) -> CVec { return p_target + tau(t, gamma) * dir; };
  HomotopySpec h;
  h.evaluator = [&sys, at](const CVec& x, double t) -> CVec { return sys.evaluate(x, at(t)); };
  h.dx = [&sys, at](const CVec& x, double t) -> CMat { return sys.jacobian_x(x, at(t)); };
  h.dt = [&sys, at, dir, gamma](const CVec& x, double t) -> CVec {
    return sys.jacobian_p(x, at(t)) * dir * tau_derivative(t, gamma);
  };
  return h;
}

GenericStart solve_generic(const ParameterizedSystem& sys, std::uint64_t seed, const SolverSettings& s) {
  const auto starts = total_degree_start_points(sys);
  std::vector<GenericStart> tries;
  for (int attempt = 0; attempt < std::max(1, s.attempts); ++attempt) {
    Rng rng = make_rng(seed, Stream::GenericStart, attempt);
    GenericStart g;
    g.seed = seed;
    g.p0 = complex_gaussian_vector(rng, sys.k());
    const Complex gamma = random_gamma(rng);
    const HomotopySpec h = total_degree_homotopy(sys, g.p0, gamma);
    auto paths = track_paths(h, starts, s.track, s.jobs);
    for (auto& r : paths)
      if (r.ok()) r.endpoint = newton_polish(h, r.endpoint, 0.0, s.polish_iters);
    g.solutions = collect_endpoints(sys, g.p0, paths, s);
    g.d = static_cast<int>(g.solutions.size());
    for (const auto& prev : tries)
      if (prev.d == g.d) return prev;
    tries.push_back(std::move(g));
    if (s.attempts <= 1) return tries.front();
  }
  std::string counts;
  for (const auto& t : tries) counts += (counts.empty() ? "" : ", ") + std::to_string(t.d);
  throw Error(ErrorCode::GenericStartFailed, "root counts disagree across attempts: " + counts);
}

std::vector<PathResult> parameter_homotopy(const ParameterizedSystem& sys, const GenericStart& start, const CVec& p,
                                           Complex gamma, const SolverSettings& s) {
  if (p.size() != sys.k()) throw Error(ErrorCode::DimensionMismatch, "parameter vector length");
  const HomotopySpec h = parameter_homotopy_spec(sys, start.p0, p, gamma);
  auto paths = track_paths(h, start.solutions, s.track, s.jobs);
  for (auto& r : paths) {
    if (!r.ok()) continue;
    try {
      r.endpoint = newton_polish(h, r.endpoint, 0.0, s.polish_iters);
      r.residual = inf_norm(h.evaluator(r.endpoint, 0.0));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularMatrix) throw;
      r.status = PathStatus::SingularJacobian;
    }
  }
  return paths;
}

bool is_real(const CVec& x, double tol_im) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!(std::abs(x(i).imag()) < tol_im)) return false;
  return true;
}

RVec real_part(const CVec& x) { return x.real(); }

CVec to_complex(const RVec& v) { return v.cast<Complex>(); }

int count_real(const std::vector<PathResult>& results, double tol_im, double dedup_tol) {
  int count = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok())
      throw Error(ErrorCode::CountUnreliable, "path " + std::to_string(i) + " ended with " + to_string(results[i].status));
    for (std::size_t j = 0; j < i; ++j)
      if (inf_norm(CVec(results[i].endpoint - results[j].endpoint)) <= dedup_tol)
        throw Error(ErrorCode::CountUnreliable, "paths " + std::to_string(j) + " and " + std::to_string(i) + " merged");
    if (is_real(results[i].endpoint, tol_im)) ++count;
  }
  return count;
}

LabelResult label_point_full(const ParameterizedSystem& sys, const GenericStart& start, const RVec& p, Rng& rng,
                             const SolverSettings& s) {
  const CVec target = to_complex(p);
  for (int attempt = 1; attempt <= std::max(1, s.attempts); ++attempt) {
    const Complex gamma = random_gamma(rng);
    const auto paths = parameter_homotopy(sys, start, target, gamma, s);
    try {
      LabelResult out;
      out.label = count_real(paths, s.tol_im, s.dedup_tol);
      out.attempts_used = attempt;
      for (const auto& r : paths)
        if (is_real(r.endpoint, s.tol_im)) out.real_solutions.push_back(real_part(r.endpoint));
      return out;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CountUnreliable) throw;
    }
  }
  throw Error(ErrorCode::LabelFailed, "no reliable real-solution count after " + std::to_string(s.attempts) + " attempts");
}

int label_point(const ParameterizedSystem& sys, const GenericStart& start, const RVec& p, Rng& rng,
                const SolverSettings& s) {
  return label_point_full(sys, start, p, rng, s).label;
}

}  // namespace disclocus
