#include "disclocus/discriminant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace disclocus {

bool Box::contains(const RVec& p, double slack) const {
  if (p.size() != lo.size()) return false;
  for (Eigen::Index j = 0; j < p.size(); ++j)
    if (p(j) < lo(j) - slack || p(j) > hi(j) + slack) return false;
  return true;
}

RVec Box::sample(Rng& rng) const {
  RVec p(lo.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) p(j) = lo(j) + (hi(j) - lo(j)) * uniform01(rng);
  return p;
}

Box Box::cube(int k, double lo, double hi) { return Box{RVec::Constant(k, lo), RVec::Constant(k, hi)}; }

Formulation default_formulation(const ParameterizedSystem& base) {
  return base.n() == 1 ? Formulation::Det : Formulation::NullSpace;
}

CVec CriticalSystem::pack_parameters(const CVec& q, const CVec& u, const CVec& a) const {
  const Eigen::Index extra = formulation == Formulation::NullSpace ? base_n : 0;
  if (q.size() != base_k || u.size() != base_k || a.size() != extra)
    throw Error(ErrorCode::DimensionMismatch, "critical line parameters");
  CVec out(2 * base_k + extra);
  out << q, u, a;
  return out;
}

namespace {

constexpr double kSingularMergeTol = 1e-4;

Polynomial differentiate_x(const Polynomial& poly, int j) {
  Polynomial out;
  for (const Term& t : poly) {
    if (t.xexp[j] == 0) continue;
    Term d = t;
    d.coeff *= static_cast<double>(t.xexp[j]);
    d.xexp[j] -= 1;
    out.push_back(std::move(d));
  }
  return out;
}

// Rewrites a base polynomial in the critical variable space, replacing each
// parameter p_j by q_j + lambda u_j.
PolyBuilder substitute_line(const Polynomial& poly, int nvars, int x_offset, int lambda_var, int q_offset,
                            int u_offset, int k) {
  std::vector<PolyBuilder> line_param;
  for (int j = 0; j < k; ++j)
    line_param.push_back(PolyBuilder::variable(nvars, q_offset + j) +
                         PolyBuilder::variable(nvars, lambda_var) * PolyBuilder::variable(nvars, u_offset + j));
  PolyBuilder out(nvars);
  for (const Term& t : poly) {
    std::vector<int> e(nvars, 0);
    for (std::size_t i = 0; i < t.xexp.size(); ++i) e[x_offset + i] = t.xexp[i];
    PolyBuilder term(nvars);
    term.add_term(e, t.coeff);
    for (int j = 0; j < k; ++j)
      if (t.pexp[j] > 0) term = term * line_param[j].pow(t.pexp[j]);
    out += term;
  }
  return out;
}

}  // namespace

CriticalSystem make_critical_system(const ParameterizedSystem& base, Formulation formulation) {
  const int n = base.n();
  const int k = base.k();
  CriticalSystem crit;
  crit.formulation = formulation;
  crit.base_n = n;
  crit.base_k = k;

  std::vector<Polynomial> eqs;
  if (formulation == Formulation::Det) {
    if (n != 1) throw Error(ErrorCode::DimensionMismatch, "determinant formulation is only built for n = 1");
    // unknowns: x, lambda | parameters: q, u
    const int nx = 2;
    const int nv = nx + 2 * k;
    const int lambda = 1;
    eqs.push_back(substitute_line(base.equations()[0], nv, 0, lambda, nx, nx + k, k).split(nx));
    eqs.push_back(substitute_line(differentiate_x(base.equations()[0], 0), nv, 0, lambda, nx, nx + k, k).split(nx));
    crit.system = ParameterizedSystem(nx, 2 * k, std::move(eqs), base.name() + "-critical-det");
    return crit;
  }

  // unknowns: x (n), w (n), lambda | parameters: q (k), u (k), a (n)
  const int nx = 2 * n + 1;
  const int nv = nx + 2 * k + n;
  const int lambda = 2 * n;
  const int q_off = nx;
  const int u_off = nx + k;
  const int a_off = nx + 2 * k;
  for (int i = 0; i < n; ++i)
    eqs.push_back(substitute_line(base.equations()[i], nv, 0, lambda, q_off, u_off, k).split(nx));
  for (int i = 0; i < n; ++i) {
    PolyBuilder row(nv);
    for (int j = 0; j < n; ++j) {
      const PolyBuilder dij = substitute_line(differentiate_x(base.equations()[i], j), nv, 0, lambda, q_off, u_off, k);
      row += dij * PolyBuilder::variable(nv, n + j);
    }
    eqs.push_back(row.split(nx));
  }
  PolyBuilder patch = PolyBuilder::constant(nv, -1.0);
  for (int j = 0; j < n; ++j) patch += PolyBuilder::variable(nv, a_off + j) * PolyBuilder::variable(nv, n + j);
  eqs.push_back(patch.split(nx));
  crit.system = ParameterizedSystem(nx, 2 * k + n, std::move(eqs), base.name() + "-critical-null");
  return crit;
}

GenericStart critical_generic_start(const CriticalSystem& crit, std::uint64_t seed, const SolverSettings& s) {
  return solve_generic(crit.system, derive_seed(seed, static_cast<std::uint64_t>(Stream::CriticalStart)), s);
}

std::pair<double, double> line_box_intersection(const RVec& p_star, const RVec& v, const Box& omega) {
  if (p_star.size() != omega.dim() || v.size() != omega.dim())
    throw Error(ErrorCode::DimensionMismatch, "line and box dimensions differ");
  for (Eigen::Index j = 0; j < p_star.size(); ++j)
    if (!(p_star(j) > omega.lo(j) && p_star(j) < omega.hi(j)))
      throw Error(ErrorCode::PointOutsideBox, "anchor is not strictly inside the box");
  double enter = -std::numeric_limits<double>::infinity();
  double exit = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (v(j) == 0.0) continue;
    const double a = (omega.lo(j) - p_star(j)) / v(j);
    const double b = (omega.hi(j) - p_star(j)) / v(j);
    enter = std::max(enter, std::min(a, b));
    exit = std::min(exit, std::max(a, b));
  }
  return {enter, exit};
}

WitnessLine witness_on_line(const CriticalSystem& crit, const GenericStart& crit_start, const RVec& p_star,
                            const RVec& v, const Box& omega, Rng& rng, const SolverSettings& s) {
  WitnessLine line;
  line.p_star = p_star;
  line.v = v;
  std::tie(line.lambda_enter, line.lambda_exit) = line_box_intersection(p_star, v, omega);

  CVec patch(0);
  if (crit.formulation == Formulation::NullSpace) {
    patch.resize(crit.base_n);
    for (Eigen::Index j = 0; j < patch.size(); ++j) patch(j) = gaussian(rng);
  }
  const CVec target = crit.pack_parameters(to_complex(p_star), to_complex(v), patch);
  const int li = crit.lambda_index();
  const std::size_t total = crit_start.solutions.size();

  // Diverged paths are witness points at infinity: the real line is special
  // enough that the discriminant degree drops along it. Paths that reach t = 0
  // on a singular point are tangencies or cusps of the line with the locus.
  auto singular_end = [](const PathResult& r) {
    return r.status == PathStatus::SingularJacobian && r.t_reached == 0.0 && all_finite(r.endpoint);
  };
  auto failed = [&](const PathResult& r) { return !r.ok() && r.status != PathStatus::Diverged && !singular_end(r); };
  std::vector<PathResult> best;
  std::size_t best_failures = total + 1;
  for (int attempt = 0; attempt < std::max(1, s.attempts) && best_failures > 0; ++attempt) {
    auto paths = parameter_homotopy(crit.system, crit_start, target, random_gamma(rng), s);
    const auto failures = static_cast<std::size_t>(
        std::count_if(paths.begin(), paths.end(), failed));
    if (failures < best_failures) {
      best_failures = failures;
      best = std::move(paths);
    }
  }
  if (5 * best_failures > total)
    throw Error(ErrorCode::WitnessFailed,
                std::to_string(best_failures) + " of " + std::to_string(total) + " witness paths failed");

  std::vector<Complex> finite;
  for (const PathResult& r : best) {
    if (!r.ok()) continue;
    const Complex lam = r.endpoint(li);
    if (std::none_of(finite.begin(), finite.end(), [&](Complex o) { return std::abs(o - lam) <= s.dedup_tol; }))
      finite.push_back(lam);
  }
  // Singular endpoints are only accurate to about the square root of the
  // tracker tolerance; a cluster of them is replaced by its centroid.
  std::vector<std::pair<Complex, int>> clusters;
  for (const PathResult& r : best) {
    if (!singular_end(r)) continue;
    const Complex lam = r.endpoint(li);
    auto it = std::find_if(clusters.begin(), clusters.end(), [&](const auto& c) {
      return std::abs(c.first / static_cast<double>(c.second) - lam) <= kSingularMergeTol;
    });
    if (it == clusters.end())
      clusters.emplace_back(lam, 1);
    else {
      it->first += lam;
      ++it->second;
    }
  }
  for (const auto& [sum, count] : clusters) {
    const Complex lam = sum / static_cast<double>(count);
    if (std::none_of(finite.begin(), finite.end(), [&](Complex o) { return std::abs(o - lam) <= kSingularMergeTol; }))
      finite.push_back(lam);
  }
  line.degree_observed = static_cast<int>(finite.size());

  for (Complex lam : finite) {
    if (!(std::abs(lam.imag()) < s.tol_im)) continue;
    const double re = lam.real();
    if (!(re > line.lambda_enter && re < line.lambda_exit)) continue;
    if (std::none_of(line.lambdas.begin(), line.lambdas.end(),
                     [&](double o) { return std::abs(o - re) <= s.dedup_tol; }))
      line.lambdas.push_back(re);
  }
  std::sort(line.lambdas.begin(), line.lambdas.end());
  return line;
}

}  // namespace disclocus
